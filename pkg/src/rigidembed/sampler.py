"""Real-embedding maximization.

Standard heuristics (random starts, near-unit lengths, stochastic walks)
and the coupler-curve method: for a degree-4 vertex u with neighbours
v, w, p, c where pv, vw, cw are edges, the lengths of uv, uw, up, uc can
be resampled without changing the coupler curve of c, parametrized by two
bounded angles (phi, theta) on the sphere around w.  Tree and linear
search iterate the sampling over subgraphs; DBSCAN picks representatives
among equal-count candidates.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .graphs import SPACE, RigidGraph, geometry_dim, norm_edge
from .poly import PolySystem
from .systems import LengthAssignment, SphereSystemShape
from .solve import (
    SolutionSet,
    count_real,
    monodromy_solve,
    parameter_homotopy,
    seed_realization,
)
from .track import TrackOptions


@dataclass(frozen=True)
class CouplerSubgraph:
    """Vertices (u,v,w,p,c): deg(u)=4 with neighbours {v,w,p,c}; pv,vw,cw edges."""

    u: int
    v: int
    w: int
    p: int
    c: int
    relaxed: bool = False

    def as_tuple(self):
        return (self.u, self.v, self.w, self.p, self.c)


@dataclass
class SamplerCandidate:
    phi: float
    theta: float
    lengths: LengthAssignment
    real_count: int


@dataclass
class SearchConfig:
    coarse: tuple[int, int] = (20, 20)
    refine: tuple[int, int] = (5, 5)
    refine_radius: int = 1  # in coarse cells
    eps: float | None = None  # default: 2 coarse-cell diagonals
    min_pts: int = 3
    target: int | None = None
    max_iterations: int = 50
    seed: int = 0
    relax_degree_four: bool = False
    batches: int = 2
    subgraphs: list[CouplerSubgraph] | None = None
    known_complex: int | None = None
    track_options: TrackOptions | None = None
    # denser (coarse, refine, refine_radius) levels retried when a search
    # node yields no improvement at the base resolution
    escalation: tuple = ()

    def __post_init__(self):
        if min(self.coarse) < 2 or min(self.refine) < 2:
            raise ValueError("grid sizes must be at least 2")
        if self.eps is not None and not self.eps > 0:
            raise ValueError("cluster epsilon must be positive")

    def at_level(self, level: int) -> "SearchConfig":
        if level == 0:
            return self
        coarse, refine, radius = self.escalation[level - 1]
        return replace(
            self, coarse=tuple(coarse), refine=tuple(refine), refine_radius=radius
        )

    def cell(self) -> tuple[float, float]:
        return (math.pi / (self.coarse[0] + 1), math.pi / (self.coarse[1] + 1))

    def epsilon(self) -> float:
        if self.eps is not None:
            return self.eps
        dphi, dtheta = self.cell()
        return 2.0 * math.hypot(dphi, dtheta)


def find_coupler_subgraphs(
    G: RigidGraph, relax_degree_four: bool = False
) -> list[CouplerSubgraph]:
    """All (u,v,w,p,c) tuples suitable for coupler-curve sampling."""
    if G.geometry != SPACE:
        raise ValueError("coupler-curve sampling is defined for space geometry")
    out = []
    for u in range(1, G.n + 1):
        nb = sorted(G.neighbors(u))
        if len(nb) < 4 or (len(nb) > 4 and not relax_degree_four):
            continue
        relaxed = len(nb) > 4
        for four in itertools.combinations(nb, 4) if relaxed else [tuple(nb)]:
            for v, w, p, c in itertools.permutations(four):
                if (
                    norm_edge(p, v) in G.edges
                    and norm_edge(v, w) in G.edges
                    and norm_edge(c, w) in G.edges
                ):
                    # (u,v,w,p,c) and (u,w,v,c,p) satisfy the same pattern
                    # and span one subgraph; keep the v > w representative
                    if v > w:
                        out.append(CouplerSubgraph(u, v, w, p, c, relaxed))
    return out


# ---------------------------------------------------------------------------
# the Lemma 3.2 length family and angle parametrization


def _frame(lengths: LengthAssignment, sg: CouplerSubgraph):
    """Planar placement of the triangle vuw and the p-circle data.

    v = origin, u on the positive y-axis, w in the xy-plane with x_w >= 0.
    Returns (t0, x_w, y_w, y_p, z_p) where t0 is the current u ordinate.
    """
    u, v, w, p = sg.u, sg.v, sg.w, sg.p
    luv = lengths[(u, v)]
    lvw = lengths[(v, w)]
    luw = lengths[(u, w)]
    lvp = lengths[(v, p)]
    lup = lengths[(u, p)]
    y_w = (lvw**2 + luv**2 - luw**2) / (2 * luv)
    xw2 = lvw**2 - y_w**2
    if xw2 <= 0:
        raise ValueError("triangle uvw is degenerate for these lengths")
    x_w = math.sqrt(xw2)
    y_p = (lvp**2 + luv**2 - lup**2) / (2 * luv)
    zp2 = lvp**2 - y_p**2
    if zp2 <= 0:
        raise ValueError("triangle uvp is degenerate for these lengths")
    z_p = math.sqrt(zp2)
    return luv, x_w, y_w, y_p, z_p


def lambda_family(
    lengths: LengthAssignment, sg: CouplerSubgraph, t: float
) -> LengthAssignment:
    """Shift u to ordinate t, keeping the coupler curve of c unchanged."""
    if not t > 0:
        raise ValueError("family parameter t must be positive")
    _, x_w, y_w, y_p, z_p = _frame(lengths, sg)
    vals = dict(lengths.values)
    vals[norm_edge(sg.u, sg.v)] = t
    vals[norm_edge(sg.u, sg.w)] = math.hypot(x_w, y_w - t)
    vals[norm_edge(sg.u, sg.p)] = math.hypot(y_p - t, z_p)
    return LengthAssignment(vals, lengths.geometry)


def lengths_from_angles(
    lengths: LengthAssignment, sg: CouplerSubgraph, phi: float, theta: float
) -> LengthAssignment | None:
    """Lengths whose intersection circle on the sphere around w is (phi, theta).

    phi is the angle at w between its altitude onto the uv-axis and wu;
    theta the angle at w between wu and wc.  Returns None when u would
    leave the positive axis (t <= 0).
    """
    if not (-math.pi / 2 < phi < math.pi / 2) or not (0 < theta < math.pi):
        raise ValueError("angles out of range")
    _, x_w, y_w, _, _ = _frame(lengths, sg)
    t = y_w + x_w * math.tan(phi)
    if t <= 0:
        return None
    out = lambda_family(lengths, sg, t)
    luw = x_w / math.cos(phi)
    lcw = lengths[(sg.c, sg.w)]
    luc2 = luw**2 + lcw**2 - 2 * luw * lcw * math.cos(theta)
    if luc2 <= 0:
        return None
    vals = dict(out.values)
    vals[norm_edge(sg.u, sg.c)] = math.sqrt(luc2)
    return LengthAssignment(vals, lengths.geometry)


# ---------------------------------------------------------------------------
# sampling


def _grid_angles(cfg: SearchConfig) -> tuple[np.ndarray, np.ndarray]:
    nphi, ntheta = cfg.coarse
    phis = np.linspace(-math.pi / 2, math.pi / 2, nphi + 2)[1:-1]
    thetas = np.linspace(0.0, math.pi, ntheta + 2)[1:-1]
    return phis, thetas


def _count_at(
    lengths: LengthAssignment, carry: SolutionSet, generic: SolutionSet, seed: int,
    opts: TrackOptions | None,
) -> tuple[int, SolutionSet]:
    """Real count at target lengths, tracking from the carried set."""
    tgt = parameter_homotopy(carry, lengths, seed=seed, opts=opts)
    if len(tgt) < len(generic):
        # refresh from the generic set when paths were lost
        tgt2 = parameter_homotopy(generic, lengths, seed=seed + 1, opts=opts)
        if len(tgt2) > len(tgt):
            tgt = tgt2
    n, _ = count_real(tgt)
    return n, tgt


def _sample_block(
    lengths0, sg, pairs, generic, seed, opts
) -> list[SamplerCandidate]:
    """Serpentine evaluation of a list of (phi, theta) pairs."""
    out = []
    carry = generic
    for k, (phi, theta) in enumerate(pairs):
        lam = lengths_from_angles(lengths0, sg, phi, theta)
        if lam is None:
            continue
        try:
            n, solset = _count_at(lam, carry, generic, seed + k, opts)
        except ValueError:
            continue  # degenerate pinned simplex at these lengths
        if len(solset) > 0:
            carry = solset
        out.append(SamplerCandidate(phi, theta, lam, n))
    return out


def sample_subgraph(
    lengths0: LengthAssignment,
    sg: CouplerSubgraph,
    cfg: SearchConfig,
    generic_set: SolutionSet,
) -> list[SamplerCandidate]:
    """Two-phase (phi, theta) sampling; returns candidates at the maximum."""
    phis, thetas = _grid_angles(cfg)
    rows = []
    for r, theta in enumerate(thetas):
        prow = phis if r % 2 == 0 else phis[::-1]
        rows.append([(phi, theta) for phi in prow])
    nb = max(1, min(cfg.batches, len(rows)))
    blocks = np.array_split(np.arange(len(rows)), nb)
    tasks = [
        [pair for r in block for pair in rows[r]] for block in blocks if len(block)
    ]
    opts = cfg.track_options
    if nb > 1:
        with ThreadPoolExecutor(max_workers=nb) as ex:
            results = list(
                ex.map(
                    lambda ib: _sample_block(
                        lengths0, sg, ib[1], generic_set, cfg.seed + 10_000 * ib[0], opts
                    ),
                    enumerate(tasks),
                )
            )
    else:
        results = [_sample_block(lengths0, sg, tasks[0], generic_set, cfg.seed, opts)]
    cands = [c for block in results for c in block]
    if not cands:
        return []

    best = max(c.real_count for c in cands)
    peaks = [c for c in cands if c.real_count == best]

    # phase 2: refine around each coarse peak
    dphi, dtheta = cfg.cell()
    seen = set()
    refine_pairs = []
    for c in peaks:
        for phi in np.linspace(
            c.phi - cfg.refine_radius * dphi, c.phi + cfg.refine_radius * dphi,
            cfg.refine[0],
        ):
            for theta in np.linspace(
                c.theta - cfg.refine_radius * dtheta,
                c.theta + cfg.refine_radius * dtheta,
                cfg.refine[1],
            ):
                if not (-math.pi / 2 < phi < math.pi / 2 and 0 < theta < math.pi):
                    continue
                key = (round(phi, 12), round(theta, 12))
                if key not in seen:
                    seen.add(key)
                    refine_pairs.append((phi, theta))
    fine = _sample_block(
        lengths0, sg, refine_pairs, generic_set, cfg.seed + 77_000, opts
    )
    cands += fine
    best = max(c.real_count for c in cands)
    out = []
    taken = set()
    for c in sorted(
        (c for c in cands if c.real_count == best), key=lambda c: (c.phi, c.theta)
    ):
        key = (round(c.phi, 12), round(c.theta, 12))
        if key not in taken:
            taken.add(key)
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# DBSCAN clustering of candidates


def dbscan(points: np.ndarray, eps: float, min_pts: int) -> np.ndarray:
    """Labels: >= 0 cluster id, -1 noise."""
    n = len(points)
    labels = np.full(n, -2)  # -2 unvisited
    D = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    neighborhoods = [np.flatnonzero(D[i] <= eps) for i in range(n)]
    cluster = -1
    for i in range(n):
        if labels[i] != -2:
            continue
        if len(neighborhoods[i]) < min_pts:
            labels[i] = -1
            continue
        cluster += 1
        labels[i] = cluster
        queue = list(neighborhoods[i])
        qi = 0
        while qi < len(queue):
            j = queue[qi]
            qi += 1
            if labels[j] == -1:
                labels[j] = cluster
            if labels[j] != -2:
                continue
            labels[j] = cluster
            if len(neighborhoods[j]) >= min_pts:
                queue.extend(neighborhoods[j])
    labels[labels == -2] = -1
    return labels


def cluster_candidates(
    cands: list[SamplerCandidate],
    eps: float,
    min_pts: int,
    *,
    lengths0: LengthAssignment | None = None,
    sg: CouplerSubgraph | None = None,
    generic_set: SolutionSet | None = None,
    seed: int = 0,
) -> list[SamplerCandidate]:
    """One representative per (phi, theta) cluster.

    The gravity-center representative is re-derived and re-counted when the
    inputs allow it; if it scores lower, the member nearest the center is
    returned instead.
    """
    if len(cands) <= 1:
        return list(cands)
    pts = np.array([(c.phi, c.theta) for c in cands])
    labels = dbscan(pts, eps, min_pts)
    reps = []
    for cl in sorted(set(labels)):
        members = [c for c, l in zip(cands, labels) if l == cl]
        if cl == -1:
            reps.extend(members)
            continue
        center = np.mean([[c.phi, c.theta] for c in members], axis=0)
        nearest = min(
            members, key=lambda c: np.hypot(c.phi - center[0], c.theta - center[1])
        )
        rep = nearest
        if lengths0 is not None and sg is not None and generic_set is not None:
            lam = lengths_from_angles(lengths0, sg, float(center[0]), float(center[1]))
            if lam is not None:
                try:
                    n, _ = _count_at(lam, generic_set, generic_set, seed, None)
                except ValueError:
                    n = -1
                if n >= nearest.real_count:
                    rep = SamplerCandidate(float(center[0]), float(center[1]), lam, n)
        reps.append(rep)
    reps.sort(key=lambda c: (c.phi, c.theta))
    return reps


# ---------------------------------------------------------------------------
# search drivers


@dataclass
class SearchTraceNode:
    subgraph: tuple[int, ...]
    lengths: LengthAssignment
    real_count: int
    depth: int = 0


def _generic_set_for(G: RigidGraph, cfg: SearchConfig, seed: int) -> SolutionSet:
    return monodromy_solve(G, seed=seed, known_count=cfg.known_complex)


def _real_count_of(G, lengths, cfg, seed) -> tuple[int, SolutionSet]:
    ss = _generic_set_for(G, cfg, seed)
    tgt = parameter_homotopy(ss, lengths, seed=seed, opts=cfg.track_options)
    n, _ = count_real(tgt)
    return n, ss


def linear_search(
    G: RigidGraph,
    lengths0: LengthAssignment,
    subgraphs: list[CouplerSubgraph],
    cfg: SearchConfig,
):
    """Cycle through the subgraphs, feeding representatives forward."""
    if not subgraphs:
        raise ValueError("linear search needs at least one subgraph")
    n0, generic = _real_count_of(G, lengths0, cfg, cfg.seed)
    trace = [SearchTraceNode((), lengths0, n0)]
    best = (n0, lengths0)
    if cfg.target is not None and n0 >= cfg.target:
        return best[1], trace

    # depth-first over cluster branches, cycling subgraph index;
    # a full no-gain cycle escalates the grid before giving up
    stack = [(lengths0, n0, 0, 0, 0, 0)]
    iterations = 0
    while stack and iterations < cfg.max_iterations:
        lam, count, k, no_gain, depth, level = stack.pop()
        if no_gain >= len(subgraphs):
            if level < len(cfg.escalation):
                stack.append((lam, count, k, 0, depth, level + 1))
            continue
        iterations += 1
        lcfg = cfg.at_level(level)
        sg = subgraphs[k % len(subgraphs)]
        try:
            cands = sample_subgraph(lam, sg, lcfg, generic)
        except ValueError:
            cands = []
        reps = cluster_candidates(
            cands, lcfg.epsilon(), lcfg.min_pts,
            lengths0=lam, sg=sg, generic_set=generic, seed=cfg.seed,
        )
        gained = False
        for rep in reversed(reps):
            trace.append(
                SearchTraceNode(sg.as_tuple(), rep.lengths, rep.real_count, depth + 1)
            )
            if rep.real_count > best[0]:
                best = (rep.real_count, rep.lengths)
            if cfg.target is not None and rep.real_count >= cfg.target:
                return rep.lengths, trace
            if rep.real_count > count:
                gained = True
                stack.append((rep.lengths, rep.real_count, k + 1, 0, depth + 1, 0))
        if not gained:
            stack.append((lam, count, k + 1, no_gain + 1, depth, level))
    return best[1], trace


def tree_search(
    G: RigidGraph,
    lengths0: LengthAssignment,
    cfg: SearchConfig,
):
    """Sample every suitable subgraph at each node; recurse on increments."""
    subgraphs = cfg.subgraphs or find_coupler_subgraphs(
        G, cfg.relax_degree_four
    )
    if not subgraphs:
        raise ValueError("graph has no coupler subgraphs")
    n0, generic = _real_count_of(G, lengths0, cfg, cfg.seed)
    trace = [SearchTraceNode((), lengths0, n0)]
    best = (n0, lengths0)
    if cfg.target is not None and n0 >= cfg.target:
        return best[1], trace

    stack = [(lengths0, n0, 0, 0)]
    expansions = 0
    while stack and expansions < cfg.max_iterations:
        lam, count, depth, level = stack.pop()
        expansions += 1
        lcfg = cfg.at_level(level)
        children = []
        for sg in subgraphs:
            try:
                cands = sample_subgraph(lam, sg, lcfg, generic)
            except ValueError:
                continue
            reps = cluster_candidates(
                cands, lcfg.epsilon(), lcfg.min_pts,
                lengths0=lam, sg=sg, generic_set=generic, seed=cfg.seed,
            )
            for rep in reps:
                trace.append(
                    SearchTraceNode(sg.as_tuple(), rep.lengths, rep.real_count, depth + 1)
                )
                if rep.real_count > best[0]:
                    best = (rep.real_count, rep.lengths)
                if cfg.target is not None and rep.real_count >= cfg.target:
                    return rep.lengths, trace
                if rep.real_count > count:
                    children.append((rep.lengths, rep.real_count, depth + 1, 0))
        if not children and level < len(cfg.escalation):
            # stalled node: retry at the next grid resolution
            stack.append((lam, count, depth, level + 1))
        # depth-first: strongest child expanded first
        children.sort(key=lambda ch: ch[1])
        stack.extend(children)
    return best[1], trace


# ---------------------------------------------------------------------------
# heuristic starting lengths and stochastic walk


def _triangle_slack(G: RigidGraph, lengths: LengthAssignment) -> float:
    """Smallest normalized CM sign-condition slack over edge-only cliques."""
    combinations = itertools.combinations
    lam2 = lengths.squared()
    d = geometry_dim(G.geometry)
    worst = math.inf
    sizes = [3] if d == 2 else [3, 4]
    for size in sizes:
        for T in combinations(range(1, G.n + 1), size):
            pairs = [norm_edge(a, b) for a, b in combinations(T, 2)]
            if not all(p in lam2 for p in pairs):
                continue
            m = len(T)
            M = np.ones((m + 1, m + 1))
            M[0, 0] = 0.0
            sq = np.zeros((m, m))
            for a in range(m):
                for b in range(a + 1, m):
                    sq[a, b] = sq[b, a] = lam2[norm_edge(T[a], T[b])]
            M[1:, 1:] = sq
            scale = max(1.0, float(np.max(sq))) ** (size - 1)
            worst = min(worst, ((-1) ** size) * np.linalg.det(M) / scale)
    return worst


def heuristic_starts(
    G: RigidGraph,
    strategy: str = "random",
    seed: int = 0,
    count: int = 1,
    source_lengths: LengthAssignment | None = None,
    vertex_map: dict[int, int] | None = None,
) -> list[LengthAssignment]:
    """Starting length assignments for maximization."""
    rng = np.random.default_rng((seed, 0x73746172))
    edges = G.sorted_edges()
    out: list[LengthAssignment] = []
    if strategy == "random":
        for _ in range(count):
            out.append(
                LengthAssignment(
                    {e: rng.uniform(0.5, 2.0) for e in edges}, G.geometry
                )
            )
    elif strategy == "near-unit":
        for _ in range(count):
            out.append(
                LengthAssignment(
                    {e: 1.0 + rng.uniform(1e-5, 5e-4) for e in edges}, G.geometry
                )
            )
    elif strategy == "degenerate-perturb":
        for _ in range(count):
            lam = LengthAssignment({e: 1.0 for e in edges}, G.geometry)
            slack = _triangle_slack(G, lam)
            for _ in range(300):
                cand = lam.perturbed(rng, 0.02)
                s = _triangle_slack(G, cand)
                if s > slack:
                    lam, slack = cand, s
            out.append(lam.perturbed(rng, 1e-3))
    elif strategy == "glue-perturb":
        if source_lengths is None or vertex_map is None:
            raise ValueError("glue-perturb needs source_lengths and vertex_map")
        vals = {}
        for i, j in edges:
            si, sj = vertex_map.get(i, i), vertex_map.get(j, j)
            key = norm_edge(si, sj)
            if si == sj or key not in source_lengths.values:
                raise ValueError(f"vertex map does not cover edge {(i, j)}")
            vals[(i, j)] = source_lengths[key]
        base = LengthAssignment(vals, G.geometry)
        for _ in range(count):
            out.append(base.perturbed(rng, 1e-3))
    elif strategy == "forward-induced":
        for k in range(count):
            out.append(seed_realization(G, seed=seed + k).lengths)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return out


def _walk_score(solset: SolutionSet, tau_im: float = 1e-8):
    n, _ = count_real(solset)
    penalty = 0.0
    if len(solset):
        im = np.abs(np.asarray(solset.points).imag)
        mx = im.max(axis=-1)
        near = mx < 0.1
        if near.any():
            penalty = float(np.sum(np.maximum(0.0, im[near] - tau_im)))
    return (n, -penalty)


def stochastic_walk(
    G: RigidGraph,
    lengths0: LengthAssignment,
    steps: int = 200,
    seed: int = 0,
    *,
    known_complex: int | None = None,
    step_rel: float = 1e-3,
    anneal_every: int = 50,
    anneal_factor: float = 0.9,
) -> LengthAssignment:
    """Greedy random walk on lengths scored by (realCount, -imaginary mass)."""
    if steps <= 0:
        return lengths0
    rng = np.random.default_rng((seed, 0x77616C6B))
    generic = monodromy_solve(G, seed=seed, known_count=known_complex)
    cur_set = parameter_homotopy(generic, lengths0, seed=seed)
    cur_score = _walk_score(cur_set)
    best = (cur_score, lengths0)
    cur = lengths0
    rel = step_rel
    stale = 0
    for _ in range(steps):
        cand = cur.perturbed(rng, rel)
        try:
            cand_set = parameter_homotopy(generic, cand, seed=seed)
        except ValueError:
            continue
        score = _walk_score(cand_set)
        if score > cur_score:
            cur, cur_score, cur_set = cand, score, cand_set
            stale = 0
            if score > best[0]:
                best = (score, cand)
        else:
            stale += 1
            if stale and stale % anneal_every == 0:
                rel *= anneal_factor
    return best[1]


# ---------------------------------------------------------------------------
# coupler-curve tracing


@dataclass
class CurveComponent:
    points: np.ndarray  # (m, 3) coordinates of c
    closed: bool
    truncated: bool = False


def _curve_system(G: RigidGraph, lengths: LengthAssignment, sg: CouplerSubgraph):
    """The uc-removed system with the triangle (v,u,w) pinned."""
    shape = SphereSystemShape(G, pinned=(sg.v, sg.u, sg.w))
    lam2 = lengths.squared()
    F = shape.instantiate(lam2)
    uc = norm_edge(sg.u, sg.c)
    k = len(shape.free) + shape.eq_edges.index(uc)
    H = PolySystem(
        [p for i, p in enumerate(F.polys) if i != k], list(F.var_names)
    )
    return shape, H


def _tangent(J: np.ndarray, prev: np.ndarray | None) -> np.ndarray:
    _, _, vt = np.linalg.svd(J)
    t = vt[-1]
    if prev is not None and t @ prev < 0:
        t = -t
    return t


def trace_coupler_curve(
    G: RigidGraph,
    lengths: LengthAssignment,
    sg: CouplerSubgraph,
    steps: int = 2000,
    seeds: int = 8,
    step_size: float = 0.02,
    seed: int = 0,
) -> list[CurveComponent]:
    """Pseudo-arclength tracing of the coupler curve of c.

    The polyline holds the coordinates of c; components are traced from
    real solutions found at several random radii of the removed edge.
    """
    shape, H = _curve_system(G, lengths, sg)
    rng = np.random.default_rng((seed, 0x63757276))
    # seed points: real embeddings at random lengths of the removed edge
    generic = monodromy_solve(G, seed=seed, pinned=(sg.v, sg.u, sg.w))
    uc = norm_edge(sg.u, sg.c)
    seed_vecs: list[np.ndarray] = []
    base = lengths[uc]
    # the real embeddings at the base lengths lie on the curve and cover
    # every component that meets the sphere of the removed edge
    try:
        tgt = parameter_homotopy(generic, lengths, seed=seed)
        _, reals = count_real(tgt)
        seed_vecs.extend(r.coordinates.real for r in reals)
    except ValueError:
        pass
    for _ in range(seeds):
        vals = dict(lengths.values)
        vals[uc] = base * rng.uniform(0.5, 1.6)
        try:
            tgt = parameter_homotopy(
                generic, LengthAssignment(vals, lengths.geometry), seed=seed
            )
        except ValueError:
            continue
        _, reals = count_real(tgt)
        seed_vecs.extend(r.coordinates.real for r in reals)

    cidx = shape._coord_at[sg.c]
    comps: list[CurveComponent] = []
    traced: list[np.ndarray] = []  # full-space polylines, for seed dedup

    def project(x):
        return x[cidx : cidx + 3].real.copy()

    def covered(x):
        for arr in traced:
            if np.min(np.max(np.abs(arr - x[None, :]), axis=1)) < 2 * step_size:
                return True
        return False

    def newton(x, t):
        for _ in range(8):
            r = H.eval(x[None, :].astype(complex))[0].real
            J = H.jacobian(x[None, :].astype(complex))[0].real
            A = np.vstack([J, t[None, :]])
            b = np.concatenate([-r, [0.0]])
            try:
                dx = np.linalg.solve(A, b)
            except np.linalg.LinAlgError:
                return None
            x = x + dx
            if np.max(np.abs(dx)) < 1e-12:
                break
        if np.max(np.abs(H.eval(x[None, :].astype(complex))[0])) > 1e-8:
            return None
        return x

    def trace_dir(x0, sign, budget):
        pts = []
        x = x0.copy()
        t0 = _tangent(H.jacobian(x[None, :].astype(complex))[0].real, None)
        t = sign * t0
        h = step_size
        closed = False
        truncated = False
        for it in range(budget):
            J = H.jacobian(x[None, :].astype(complex))[0].real
            try:
                t = _tangent(J, t)
            except np.linalg.LinAlgError:
                truncated = True
                break
            xn = newton(x + h * t, t)
            if xn is None:
                h *= 0.5
                if h < 1e-8:
                    truncated = True
                    break
                continue
            x = xn
            pts.append(x.copy())
            if h < step_size:
                h = min(step_size, h * 1.5)
            if it > 5 and np.linalg.norm(x - x0) < 1.5 * h:
                closed = True
                break
        return pts, closed, truncated

    for x0 in seed_vecs:
        if steps == 0:
            comps.append(CurveComponent(project(x0)[None, :], closed=False))
            continue
        if covered(x0):
            continue
        try:
            fwd, closed, trunc_f = trace_dir(x0, +1.0, steps)
        except np.linalg.LinAlgError:
            comps.append(CurveComponent(project(x0)[None, :], False, True))
            continue
        pts = [x0.copy()] + fwd
        trunc_b = False
        if not closed and steps > len(fwd):
            # open arc: continue in the other direction from the seed
            bwd, closed_b, trunc_b = trace_dir(x0, -1.0, steps - len(fwd))
            pts = list(reversed(bwd)) + pts
            closed = closed or closed_b
        arr = np.array(pts)
        traced.append(arr)
        comps.append(
            CurveComponent(
                np.array([project(p) for p in pts]), closed, trunc_f or trunc_b
            )
        )
    return comps


def curve_to_csv(components: list[CurveComponent]) -> str:
    lines = ["x,y,z,component"]
    for k, comp in enumerate(components):
        for x, y, z in comp.points:
            lines.append(f"{x:.17g},{y:.17g},{z:.17g},{k}")
    return "\n".join(lines) + "\n"


def sphere_intersections(
    comp_points: np.ndarray, center: np.ndarray, radius: float,
    closed: bool = False,
) -> int:
    """Sign changes of the sphere clearance along a polyline.

    Closed components are counted cyclically (the wrap-around segment
    carries a crossing too).
    """
    g = np.linalg.norm(comp_points - center[None, :], axis=1) - radius
    s = np.sign(g)
    s = s[s != 0]
    if len(s) < 2:
        return 0
    if closed:
        return int(np.sum(s != np.roll(s, 1)))
    return int(np.sum(s[1:] != s[:-1]))
