"""Cayley–Menger determinantal subsystems and their side conditions.

The bordered squared-distance matrix of n points has rank d+2 exactly
when the distances embed in R^d; vanishing of the order-(d+3) bordered
minors gives polynomial equations in unknown squared distances.  Choosing
n-(d+1) unknowns whose graph extension is globally rigid yields square
subsystems whose solutions are the embeddings.  On the sphere the matrix
is augmented by a center row/column and rewritten in cosines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graphs import (
    PLANE,
    SPHERE,
    RigidGraph,
    geometry_dim,
    is_globally_rigid_generic,
    norm_edge,
)
from .poly import Poly, PolySystem, poly_add, poly_mul
from .systems import LengthAssignment

Edge = tuple[int, int]

TAU_INEQ = 1e-8


def missing_edges(G: RigidGraph) -> list[Edge]:
    """Non-edges of G in lexicographic order."""
    return G.non_edges()


# ---------------------------------------------------------------------------
# polynomial determinants


def _const(nvars: int, c: complex) -> Poly:
    return Poly.from_terms(nvars, {(0,) * nvars: c})


def _var(nvars: int, i: int) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return Poly.from_terms(nvars, {tuple(e): 1.0})


def det_poly(M: list[list[Poly]]) -> Poly:
    """Determinant of a matrix of polynomials (Laplace with column-set memo)."""
    m = len(M)
    nvars = M[0][0].nvars
    memo: dict[tuple[int, ...], Poly] = {(): _const(nvars, 1.0)}

    def rec(cols: tuple[int, ...]) -> Poly:
        if cols in memo:
            return memo[cols]
        row = m - len(cols)
        acc = _const(nvars, 0.0)
        for k, c in enumerate(cols):
            rest = cols[:k] + cols[k + 1 :]
            term = poly_mul(M[row][c], rec(rest))
            if k % 2:
                term = Poly(nvars, term.exps, -term.coeffs)
            acc = poly_add(acc, term)
        memo[cols] = acc
        return acc

    return rec(tuple(range(m)))


def substitute_affine(p: Poly, a: np.ndarray, b: np.ndarray) -> Poly:
    """Substitute x_i -> a_i + b_i * y_i into p."""
    nv = p.nvars
    out: dict[tuple[int, ...], complex] = {}
    for exp, c in zip(p.exps, p.coeffs):
        terms = {(0,) * nv: c}
        for i, ei in enumerate(exp):
            for _ in range(int(ei)):
                new: dict[tuple[int, ...], complex] = {}
                for e2, c2 in terms.items():
                    new[e2] = new.get(e2, 0) + c2 * a[i]
                    e3 = list(e2)
                    e3[i] += 1
                    e3 = tuple(e3)
                    new[e3] = new.get(e3, 0) + c2 * b[i]
                terms = new
        for e2, c2 in terms.items():
            out[e2] = out.get(e2, 0) + c2
    return Poly.from_terms(nv, out)


# ---------------------------------------------------------------------------
# subsystem search


@dataclass(frozen=True)
class CMSubsystem:
    """A square determinantal subsystem of the Cayley–Menger variety."""

    graph: RigidGraph
    missing: tuple[Edge, ...]
    chosen: tuple[Edge, ...]  # the subsystem's variables, size n-(d+1)
    minors: tuple[tuple[int, ...], ...]  # vertex subsets, one per equation

    @property
    def geometry(self) -> str:
        return self.graph.geometry

    @property
    def nvars(self) -> int:
        return len(self.chosen)


def _entry_poly(i: int, j: int, lam2, chosen_index, nvars: int) -> Poly:
    """Matrix entry: known squared length, variable, or center distance."""
    e = norm_edge(i, j)
    if e in chosen_index:
        return _var(nvars, chosen_index[e])
    return _const(nvars, lam2[e])


def _bordered_matrix(
    pts: tuple[int, ...], lam2, chosen_index, nvars: int, center: bool
) -> list[list[Poly]]:
    """Bordered CM matrix on a vertex subset, optionally center-augmented.

    Index 0 is the all-ones border; vertex 0 stands for the sphere center
    (squared chord 1 to every vertex).
    """
    labels = list(pts) + ([0] if center else [])
    m = len(labels) + 1
    one = _const(nvars, 1.0)
    zero = _const(nvars, 0.0)
    M = [[zero] * m for _ in range(m)]
    for k in range(1, m):
        M[0][k] = one
        M[k][0] = one
    for a in range(len(labels)):
        for b in range(a + 1, len(labels)):
            u, v = labels[a], labels[b]
            if u == 0 or v == 0:
                p = one
            else:
                p = _entry_poly(u, v, lam2, chosen_index, nvars)
            M[a + 1][b + 1] = p
            M[b + 1][a + 1] = p
    return M


def _minor_candidates(G: RigidGraph, chosen: tuple[Edge, ...]) -> list[tuple[int, ...]]:
    """Vertex subsets whose bordered minor involves only knowns and chosen."""
    allowed = set(G.edges) | set(chosen)
    if G.geometry == SPHERE:
        size = 4  # border + center + 4 vertices gives the order-6 minor
    else:
        size = geometry_dim(G.geometry) + 2
    out = []
    for T in combinations(range(1, G.n + 1), size):
        pairs = [norm_edge(a, b) for a, b in combinations(T, 2)]
        if all(p in allowed for p in pairs) and any(p in chosen for p in pairs):
            out.append(T)
    return out


def _minor_equations(
    sub: CMSubsystem, lam2: dict[Edge, complex]
) -> list[Poly]:
    nvars = sub.nvars
    chosen_index = {e: k for k, e in enumerate(sub.chosen)}
    center = sub.geometry == SPHERE
    eqs = []
    for T in sub.minors:
        M = _bordered_matrix(T, lam2, chosen_index, nvars, center)
        eqs.append(det_poly(M))
    return eqs


def _jacobian_nonsingular(eqs: list[Poly], rng, trials: int = 3) -> bool:
    nvars = eqs[0].nvars
    for _ in range(trials):
        x = rng.uniform(0.5, 2.0, nvars).astype(complex)
        J = np.array([[p.diff(i).eval(x) for i in range(nvars)] for p in eqs])
        s = np.linalg.svd(J, compute_uv=False)
        if s[0] > 0 and s[-1] / s[0] > 1e-8:
            return True
    return False


def find_cm_square_subsystems(
    G: RigidGraph, d: int | None = None, seed: int = 0
) -> list[CMSubsystem]:
    """All square CM subsystems in n-(d+1) variables, in deterministic order.

    A variable subset qualifies when its graph extension is globally rigid,
    the eligible bordered minors are exactly as many as the variables, and
    their Jacobian at a random point is nonsingular.
    """
    if d is None:
        d = geometry_dim(G.geometry)
    nonedges = missing_edges(G)
    k = G.n - (d + 1)
    rng = np.random.default_rng(seed)
    out = []
    for chosen in combinations(nonedges, k):
        if k == 0:
            out.append(CMSubsystem(G, tuple(nonedges), chosen, ()))
            continue
        cand = _minor_candidates(G, chosen)
        if len(cand) != k:
            continue
        ext = RigidGraph.from_edges(
            G.name + "+cm", G.geometry, sorted(G.edges | set(chosen)), n=G.n
        )
        if not is_globally_rigid_generic(ext, d):
            continue
        sub = CMSubsystem(G, tuple(nonedges), chosen, tuple(cand))
        # generic lengths for the independence test
        lam2 = {e: rng.uniform(0.8, 1.6) ** 2 for e in G.edges}
        eqs = _minor_equations(sub, lam2)
        if _jacobian_nonsingular(eqs, rng):
            out.append(sub)
    return out


# ---------------------------------------------------------------------------
# instantiation with side conditions


@dataclass
class SideCondition:
    """Polynomial inequality poly(x) >= 0 on real solutions."""

    label: str
    poly: Poly


@dataclass
class CMSystem:
    """Instantiated square subsystem plus its semi-algebraic conditions."""

    subsystem: CMSubsystem
    lengths: LengthAssignment
    system: PolySystem
    side_conditions: list[SideCondition] = field(default_factory=list)

    @property
    def var_names(self) -> list[str]:
        return self.system.var_names


def _euclidean_conditions(
    G: RigidGraph, chosen: tuple[Edge, ...], lam2, d: int
) -> list[SideCondition]:
    nvars = len(chosen)
    chosen_index = {e: k for k, e in enumerate(chosen)}
    allowed = set(G.edges) | set(chosen)
    conds = [
        SideCondition(f"positivity x({i},{j})", _var(nvars, k))
        for k, (i, j) in enumerate(chosen)
    ]
    sizes = [3] if d == 2 else [3, 4]
    for size in sizes:
        kind = "triangular" if size == 3 else "tetrangular"
        for T in combinations(range(1, G.n + 1), size):
            pairs = [norm_edge(a, b) for a, b in combinations(T, 2)]
            if not all(p in allowed for p in pairs):
                continue
            M = _bordered_matrix(T, lam2, chosen_index, nvars, center=False)
            det = det_poly(M)
            sign = (-1) ** size
            poly = Poly(nvars, det.exps, sign * det.coeffs)
            conds.append(SideCondition(f"{kind} {T}", poly))
    return conds


def _sphere_conditions(
    G: RigidGraph, chosen: tuple[Edge, ...]
) -> list[SideCondition]:
    """-1 <= y <= 1 and spherical triangle positivity, in cosine variables."""
    nvars = len(chosen)
    conds = []
    for k, (i, j) in enumerate(chosen):
        y = _var(nvars, k)
        conds.append(
            SideCondition(f"y({i},{j}) >= -1", poly_add(y, _const(nvars, 1.0)))
        )
        conds.append(
            SideCondition(
                f"y({i},{j}) <= 1",
                poly_add(Poly(nvars, y.exps, -y.coeffs), _const(nvars, 1.0)),
            )
        )
    # cosine entries as linear polynomials; knowns filled at instantiation
    return conds


def _sphere_triangle_conditions(
    G: RigidGraph, chosen: tuple[Edge, ...], cos_known: dict[Edge, float]
) -> list[SideCondition]:
    nvars = len(chosen)
    chosen_index = {e: k for k, e in enumerate(chosen)}
    allowed = set(G.edges) | set(chosen)

    def cos_poly(i, j):
        e = norm_edge(i, j)
        if e in chosen_index:
            return _var(nvars, chosen_index[e])
        return _const(nvars, cos_known[e])

    conds = []
    for T in combinations(range(1, G.n + 1), 3):
        pairs = [norm_edge(a, b) for a, b in combinations(T, 2)]
        if not all(p in allowed for p in pairs):
            continue
        i, j, k = T
        cij, cik, cjk = cos_poly(i, j), cos_poly(i, k), cos_poly(j, k)
        # 2*cij*cik*cjk - cij^2 - cik^2 - cjk^2 + 1 >= 0
        p = poly_mul(poly_mul(cij, cik), cjk)
        p = Poly(nvars, p.exps, 2.0 * p.coeffs)
        for c in (cij, cik, cjk):
            sq = poly_mul(c, c)
            p = poly_add(p, Poly(nvars, sq.exps, -sq.coeffs))
        p = poly_add(p, _const(nvars, 1.0))
        conds.append(SideCondition(f"spherical triangle {T}", p))
    return conds


def instantiate_cm(sub: CMSubsystem, lam2: dict[Edge, complex]) -> PolySystem:
    """Square polynomial system of the subsystem's minors at squared lengths.

    Euclidean systems are in squared-distance variables x; the spherical
    system is rewritten in cosine variables y via x = 2 - 2y.
    """
    eqs = _minor_equations(sub, lam2)
    nvars = sub.nvars
    if sub.geometry == SPHERE:
        a = np.full(nvars, 2.0)
        b = np.full(nvars, -2.0)
        eqs = [substitute_affine(p, a, b) for p in eqs]
        names = [f"y({i},{j})" for i, j in sub.chosen]
    else:
        names = [f"x({i},{j})" for i, j in sub.chosen]
    return PolySystem(eqs, names)


@dataclass(frozen=True)
class CMSystemShape:
    """Re-instantiation handle for homotopies between length assignments."""

    sub: CMSubsystem

    def instantiate(self, lam2: dict[Edge, complex]) -> PolySystem:
        return instantiate_cm(self.sub, lam2)


def build_cm_system(sub: CMSubsystem, lengths: LengthAssignment) -> CMSystem:
    """Instantiate the subsystem at the given lengths, with side conditions."""
    G = sub.graph
    lengths.check_graph(G)
    lam2 = {e: complex(v) for e, v in lengths.squared().items()}
    system = instantiate_cm(sub, lam2)
    if sub.geometry == SPHERE:
        cos_known = {e: 1.0 - lam2[e].real / 2.0 for e in G.edges}
        conds = _sphere_conditions(G, sub.chosen)
        conds += _sphere_triangle_conditions(G, sub.chosen, cos_known)
    else:
        conds = _euclidean_conditions(G, sub.chosen, lam2, geometry_dim(sub.geometry))
    return CMSystem(sub, lengths, system, conds)


# ---------------------------------------------------------------------------
# side-condition checking


@dataclass
class SideConditionReport:
    """Evaluation of the inequalities at one real solution."""

    slacks: dict[str, float]
    tau: float = TAU_INEQ

    @property
    def violations(self) -> dict[str, float]:
        return {k: v for k, v in self.slacks.items() if v < -self.tau}

    @property
    def near_violations(self) -> dict[str, float]:
        return {k: v for k, v in self.slacks.items() if -self.tau <= v < 0}

    @property
    def ok(self) -> bool:
        """Satisfied within tolerance (slack >= -tau)."""
        return not self.violations

    @property
    def ok_strict(self) -> bool:
        """Satisfied without tolerance (slack >= 0)."""
        return not self.violations and not self.near_violations


def check_side_conditions(
    solution: np.ndarray, conditions: list[SideCondition], tau: float = TAU_INEQ
) -> SideConditionReport:
    x = np.real_if_close(np.asarray(solution)).real.astype(complex)
    slacks = {c.label: float(c.poly.eval(x).real) for c in conditions}
    return SideConditionReport(slacks, tau)


# ---------------------------------------------------------------------------
# side conditions on sphere-system solutions


def _cm_det(sq: np.ndarray) -> float:
    m = sq.shape[0]
    M = np.ones((m + 1, m + 1))
    M[0, 0] = 0.0
    M[1:, 1:] = sq
    return float(np.linalg.det(M))


def embedding_side_report(
    G: RigidGraph,
    lengths: LengthAssignment,
    points: np.ndarray,
    tau: float = TAU_INEQ,
) -> SideConditionReport:
    """Cayley–Menger sign conditions for a near-real configuration.

    Squared distances are taken from the length assignment on edges and
    induced from the (real parts of the) coordinates on non-edges, so a
    spurious solution shows up as a sign-condition violation.
    """
    pts = np.asarray(points).real
    n = G.n
    lam2 = lengths.squared()
    sq = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            e = (i, j)
            if e in lam2:
                v = lam2[e]
            else:
                v = float(np.sum((pts[i - 1] - pts[j - 1]) ** 2))
            sq[i - 1, j - 1] = sq[j - 1, i - 1] = v
    d = geometry_dim(G.geometry)
    slacks = {}
    sizes = [3] if d == 2 else [3, 4]
    # normalize slack by the matrix scale so the tolerance is comparable
    scale = max(1.0, float(np.max(sq)))
    for size in sizes:
        kind = "triangular" if size == 3 else "tetrangular"
        for T in combinations(range(1, n + 1), size):
            idx = [t - 1 for t in T]
            det = _cm_det(sq[np.ix_(idx, idx)])
            slacks[f"{kind} {T}"] = ((-1) ** size) * det / scale**(size - 1)
    return SideConditionReport(slacks, tau)
