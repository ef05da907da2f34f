"""Rigid graphs, Henneberg constructions and global-rigidity utilities.

Vertices are labeled 1..n.  Edges are unordered pairs stored as sorted
tuples.  The geometry tag selects the embedding target: the plane and the
unit sphere both use d=2 edge counts, space uses d=3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

PLANE = "plane"
SPACE = "space"
SPHERE = "sphere"
GEOMETRIES = (PLANE, SPACE, SPHERE)


def geometry_dim(geometry: str) -> int:
    """Counting dimension d of a geometry (sphere uses Laman counts)."""
    if geometry == SPACE:
        return 3
    if geometry in (PLANE, SPHERE):
        return 2
    raise ValueError(f"unknown geometry {geometry!r}")


def ambient_dim(geometry: str) -> int:
    """Number of coordinates per vertex."""
    return 2 if geometry == PLANE else 3


def norm_edge(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise ValueError(f"loop edge ({i},{j})")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class RigidGraph:
    """Labeled simple graph with a target geometry."""

    name: str
    geometry: str
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.geometry not in GEOMETRIES:
            raise ValueError(f"unknown geometry {self.geometry!r}")
        for i, j in self.edges:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")

    @staticmethod
    def from_edges(name, geometry, edges, n=None):
        edges = frozenset(norm_edge(i, j) for i, j in edges)
        if n is None:
            n = max(max(e) for e in edges)
        return RigidGraph(name, geometry, n, edges)

    @property
    def dim(self) -> int:
        return geometry_dim(self.geometry)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(1, self.n + 1)]

    def neighbors(self, v: int) -> set[int]:
        return {j for i, j in self.edges if i == v} | {
            i for i, j in self.edges if j == v
        }

    def non_edges(self) -> list[tuple[int, int]]:
        return [
            e
            for e in itertools.combinations(range(1, self.n + 1), 2)
            if e not in self.edges
        ]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def with_geometry(self, geometry: str) -> "RigidGraph":
        return replace(self, geometry=geometry)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "geometry": self.geometry,
            "n": self.n,
            "edges": [list(e) for e in self.sorted_edges()],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "RigidGraph":
        return RigidGraph.from_edges(
            d["name"], d["geometry"], [tuple(e) for e in d["edges"]], n=d["n"]
        )


@dataclass(frozen=True)
class HennebergMove:
    """Vertex addition (H1) or edge split (H2)."""

    kind: str  # "H1" | "H2"
    attach: tuple[int, ...]
    removed_edge: tuple[int, int] | None = None

    def __post_init__(self):
        if self.kind not in ("H1", "H2"):
            raise ValueError(f"unknown Henneberg kind {self.kind!r}")
        if len(set(self.attach)) != len(self.attach):
            raise ValueError("attach vertices must be distinct")
        if self.kind == "H2" and self.removed_edge is None:
            raise ValueError("H2 requires a removed edge")


def maxwell_check(G: RigidGraph, d: int) -> bool:
    """Edge-count test: |E| = d n - d(d+1)/2 with no over-counted subgraph.

    Exhaustive over vertex subsets; bitmask loop is fine for n <= 10.
    """
    if d not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {d}")
    dof = d * (d + 1) // 2
    if len(G.edges) != d * G.n - dof:
        return False
    edge_masks = [(1 << (i - 1)) | (1 << (j - 1)) for i, j in G.edges]
    for subset in range(1, 1 << G.n):
        k = subset.bit_count()
        if k < d:
            continue
        inside = sum(1 for m in edge_masks if m & subset == m)
        if inside > d * k - dof:
            return False
    return True


def apply_henneberg(G: RigidGraph, move: HennebergMove, d: int) -> RigidGraph:
    """Apply a Henneberg move, adding vertex n+1."""
    if d not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {d}")
    want = d if move.kind == "H1" else d + 1
    if len(move.attach) != want:
        raise ValueError(
            f"{move.kind} needs {want} attach vertices, got {len(move.attach)}"
        )
    if any(not 1 <= v <= G.n for v in move.attach):
        raise ValueError("attach vertex not in base graph")
    new = G.n + 1
    edges = set(G.edges)
    if move.kind == "H2":
        removed = norm_edge(*move.removed_edge)
        if removed not in edges:
            raise ValueError(f"removed edge {removed} not in graph")
        if not set(removed) <= set(move.attach):
            raise ValueError("removed edge must join two attach vertices")
        edges.discard(removed)
    edges.update(norm_edge(v, new) for v in move.attach)
    return RigidGraph(G.name, G.geometry, new, frozenset(edges))


# ---------------------------------------------------------------------------
# Canonical labeling


def _refine_colors(n, adj_sets, colors):
    """1-WL refinement to a stable coloring; colors are dense ints."""
    while True:
        sigs = []
        for v in range(n):
            nb = sorted(colors[u] for u in adj_sets[v])
            sigs.append((colors[v], tuple(nb)))
        order = sorted(set(sigs))
        new = [order.index(s) for s in sigs]
        if new == colors:
            return colors
        colors = new


def _adj_sets(G: RigidGraph):
    adj = [set() for _ in range(G.n)]
    for i, j in G.edges:
        adj[i - 1].add(j - 1)
        adj[j - 1].add(i - 1)
    return adj


def canonical_form(G: RigidGraph) -> str:
    """Canonical label: equal iff isomorphic (ignoring geometry and name).

    Minimizes the adjacency bit string over vertex orderings consistent
    with the stable WL coloring, individualizing one vertex of the first
    non-singleton cell at each level.  Exhaustive but pruned; fine for the
    desk-scale graphs here (n <= 10).
    """
    n = G.n
    adj = _adj_sets(G)
    colors = _refine_colors(n, adj, [0] * n)

    best: list[int] | None = None  # best adjacency row bits, per placed vertex

    def rows_for(order):
        pos = {v: k for k, v in enumerate(order)}
        out = []
        for k, v in enumerate(order):
            bits = 0
            for u in adj[v]:
                if u in pos and pos[u] < k:
                    bits |= 1 << pos[u]
            out.append(bits)
        return out

    def search(order, cols):
        nonlocal best
        k = len(order)
        if best is not None:
            partial = rows_for(order)
            if partial > best[:k]:
                return
        if k == n:
            cand = rows_for(order)
            if best is None or cand < best:
                best = cand
            return
        # first cell (smallest color) among unplaced vertices
        placed = set(order)
        rest = [v for v in range(n) if v not in placed]
        cmin = min(cols[v] for v in rest)
        cell = [v for v in rest if cols[v] == cmin]
        for v in cell:
            new_cols = list(cols)
            new_cols[v] = -1 - k  # individualize below all existing colors
            new_cols = _refine_colors(n, adj, _dense(new_cols))
            search(order + [v], new_cols)

    def _dense(cols):
        order = sorted(set(cols))
        return [order.index(c) for c in cols]

    search([], colors)
    assert best is not None
    # rebuild the canonical edge list from the row bits
    edges = []
    for k, bits in enumerate(best):
        for j in range(k):
            if bits >> j & 1:
                edges.append((j + 1, k + 1))
    return f"n={n};" + ",".join(f"{i}-{j}" for i, j in sorted(edges))


# ---------------------------------------------------------------------------
# Enumeration


def classify_last_move(G: RigidGraph, d: int | None = None) -> str:
    """'H1-last' iff some vertex has degree d, else 'H2-last'."""
    if d is None:
        d = G.dim
    degs = G.degrees()
    if min(degs) < d:
        raise ValueError("graph is not minimally rigid (degree below d)")
    return "H1-last" if min(degs) == d else "H2-last"


def _henneberg_children(G: RigidGraph, d: int):
    verts = range(1, G.n + 1)
    for attach in itertools.combinations(verts, d):
        yield apply_henneberg(G, HennebergMove("H1", attach), d)
    for removed in G.sorted_edges():
        others = [v for v in verts if v not in removed]
        for extra in itertools.combinations(others, d - 1):
            attach = tuple(removed) + extra
            yield apply_henneberg(G, HennebergMove("H2", attach, removed), d)


def _base_graph(d: int, geometry: str) -> RigidGraph:
    return RigidGraph.from_edges("triangle", geometry, [(1, 2), (2, 3), (1, 3)])


def enumerate_minimally_rigid(n: int, d: int, geometry: str | None = None):
    """All minimally rigid graphs on n vertices, one per isomorphism class.

    Henneberg (H1, H2) expansion from the triangle with canonical-form
    deduplication; for d=3 the result is additionally filtered by the
    Maxwell count, which is complete for n < 12 (H3 moves excluded).
    """
    if d not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {d}")
    hi = 10 if d == 2 else 8
    if not 3 <= n <= hi:
        raise ValueError(f"n={n} out of supported range [3,{hi}] for d={d}")
    if geometry is None:
        geometry = PLANE if d == 2 else SPACE
    level = {canonical_form(_base_graph(d, geometry)): _base_graph(d, geometry)}
    for _ in range(3, n):
        nxt: dict[str, RigidGraph] = {}
        for G in level.values():
            for child in _henneberg_children(G, d):
                if not maxwell_check(child, d):
                    continue
                key = canonical_form(child)
                if key not in nxt:
                    nxt[key] = child
        level = nxt
    out = [level[k] for k in sorted(level)]
    return [
        replace(g, name=f"mr{d}_{n}_{idx}") for idx, g in enumerate(out)
    ]


# ---------------------------------------------------------------------------
# Global rigidity (randomized numeric test)


def _rigidity_matrix(G: RigidGraph, p: np.ndarray, d: int) -> np.ndarray:
    R = np.zeros((len(G.edges), d * G.n))
    for row, (i, j) in enumerate(G.sorted_edges()):
        diff = p[i - 1] - p[j - 1]
        R[row, d * (i - 1) : d * i] = diff
        R[row, d * (j - 1) : d * j] = -diff
    return R


_RANK_TOL = 1e-9


def _num_rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > _RANK_TOL * s[0]))


def is_globally_rigid_generic(G: RigidGraph, d: int, seed: int = 0) -> bool:
    """Randomized global-rigidity test (one-sided: no false positives).

    Samples a generic configuration, requires full rigidity-matrix rank and
    a generic equilibrium stress matrix of rank n-d-1.
    """
    if d not in (2, 3):
        raise ValueError(f"dimension must be 2 or 3, got {d}")
    n = G.n
    if n <= d + 1:
        # complete graphs are the only globally rigid ones at this size
        return len(G.edges) == n * (n - 1) // 2
    rng = np.random.default_rng(seed)
    target = d * n - d * (d + 1) // 2
    for _ in range(5):
        p = rng.standard_normal((n, d))
        R = _rigidity_matrix(G, p, d)
        if _num_rank(R) != target:
            continue
        # equilibrium stresses: left null space of R
        u, s, _ = np.linalg.svd(R, full_matrices=True)
        null_dim = len(G.edges) - target
        if null_dim <= 0:
            return False
        basis = u[:, target:]
        w = basis @ rng.standard_normal(null_dim)
        omega = np.zeros((n, n))
        for row, (i, j) in enumerate(G.sorted_edges()):
            omega[i - 1, j - 1] = -w[row]
            omega[j - 1, i - 1] = -w[row]
        np.fill_diagonal(omega, -omega.sum(axis=1))
        return _num_rank(omega) == n - d - 1
    return False


def extend_to_globally_rigid(G: RigidGraph, d: int) -> RigidGraph:
    """Smallest deterministic edge extension passing the global-rigidity test.

    Adds exactly n-(d+1) non-edges; tries 3 independent seeds per candidate.
    """
    k = G.n - (d + 1)
    if k == 0:
        return G
    non = G.non_edges()
    for combo in itertools.combinations(non, k):
        H = RigidGraph(
            G.name + "+", G.geometry, G.n, G.edges | frozenset(combo)
        )
        if any(is_globally_rigid_generic(H, d, seed=s) for s in (0, 1, 2)):
            return H
    raise RuntimeError(
        f"no globally rigid extension with {k} edges found for {G.name}"
    )
