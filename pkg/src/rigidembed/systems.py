"""Edge-length assignments and the sphere/magnitude equation systems.

The algebraic system fixes a d-simplex (edge in the plane and on the
sphere, triangle in space) and carries one squared-norm variable per free
vertex, which keeps the system quadratic and well suited for continuation.
Sphere geometry lives on the unit sphere; lengths are Euclidean chords.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graphs import PLANE, SPACE, SPHERE, RigidGraph, ambient_dim, norm_edge
from .poly import Poly, PolySystem

Edge = tuple[int, int]


@dataclass
class LengthAssignment:
    """Positive length per edge; chord lengths (< 2) on the unit sphere."""

    values: dict[Edge, float]
    geometry: str

    def __post_init__(self):
        self.values = {norm_edge(*e): float(v) for e, v in self.values.items()}
        for e, v in self.values.items():
            if not v > 0:
                raise ValueError(f"length of edge {e} must be positive, got {v}")
            if self.geometry == SPHERE and not v < 2:
                raise ValueError(f"chord length of edge {e} must be < 2, got {v}")

    def __getitem__(self, e: Edge) -> float:
        return self.values[norm_edge(*e)]

    def edges(self) -> frozenset[Edge]:
        return frozenset(self.values)

    def squared(self) -> dict[Edge, float]:
        return {e: v * v for e, v in self.values.items()}

    def check_graph(self, G: RigidGraph):
        if self.edges() != G.edges:
            missing = G.edges - self.edges()
            extra = self.edges() - G.edges
            raise ValueError(
                f"lengths do not match edge set (missing {sorted(missing)}, "
                f"extra {sorted(extra)})"
            )

    def scaled(self, s: float) -> "LengthAssignment":
        return LengthAssignment({e: s * v for e, v in self.values.items()}, self.geometry)

    def perturbed(self, rng, rel: float) -> "LengthAssignment":
        vals = {
            e: v * (1.0 + rel * rng.uniform(-1.0, 1.0))
            for e, v in self.values.items()
        }
        return LengthAssignment(vals, self.geometry)

    def to_json_dict(self, graph_name: str = "") -> dict:
        return {
            "graph": graph_name,
            "geometry": self.geometry,
            "lengths": {f"{i}-{j}": v for (i, j), v in sorted(self.values.items())},
        }

    @staticmethod
    def from_json_dict(d: dict) -> "LengthAssignment":
        vals = {}
        for key, v in d["lengths"].items():
            i, j = key.split("-")
            vals[norm_edge(int(i), int(j))] = float(v)
        return LengthAssignment(vals, d["geometry"])

    @staticmethod
    def from_points(G: RigidGraph, points: np.ndarray) -> "LengthAssignment":
        """Lengths induced by a configuration, rows indexed by vertex-1."""
        vals = {}
        for i, j in G.sorted_edges():
            vals[(i, j)] = float(np.linalg.norm(points[i - 1] - points[j - 1]))
        return LengthAssignment(vals, G.geometry)


def lengths_from_file(path) -> LengthAssignment:
    with open(path) as fh:
        return LengthAssignment.from_json_dict(json.load(fh))


# ---------------------------------------------------------------------------


def default_pinned(G: RigidGraph) -> tuple[int, ...]:
    """Deterministic pinned simplex: lexicographically first edge/triangle."""
    edges = G.sorted_edges()
    if G.geometry in (PLANE, SPHERE):
        return edges[0]
    for i, j in edges:
        common = sorted(G.neighbors(i) & G.neighbors(j))
        for k in common:
            return (i, j, k)
    raise ValueError(f"{G.name}: no triangle available for pinning in space")


class SphereSystemShape:
    """Re-instantiable sphere/magnitude system for one graph and pinning."""

    def __init__(self, G: RigidGraph, pinned: tuple[int, ...] | None = None):
        self.G = G
        self.geometry = G.geometry
        self.amb = ambient_dim(G.geometry)
        if pinned is None:
            pinned = default_pinned(G)
        pinned = tuple(pinned)
        self._check_pinned(G, pinned)
        self.pinned = pinned
        self.free = [v for v in range(1, G.n + 1) if v not in pinned]
        self.with_magnitudes = self.geometry in (PLANE, SPACE)
        coord_names = "xyz"[: self.amb]
        self.var_names: list[str] = []
        self._coord_at: dict[int, int] = {}
        for u in self.free:
            self._coord_at[u] = len(self.var_names)
            self.var_names.extend(f"{c}{u}" for c in coord_names)
        self._mag_at: dict[int, int] = {}
        if self.with_magnitudes:
            for u in self.free:
                self._mag_at[u] = len(self.var_names)
                self.var_names.append(f"s{u}")
        self.nvars = len(self.var_names)
        self.eq_edges = [
            e for e in G.sorted_edges() if not set(e) <= set(pinned)
        ]
        neq = len(self.free) + len(self.eq_edges)
        if neq != self.nvars:
            raise ValueError(
                f"{G.name}: sphere system is not square "
                f"({neq} equations, {self.nvars} variables); "
                "graph/pinning mismatch"
            )

    @staticmethod
    def _check_pinned(G, pinned):
        need = 3 if G.geometry == SPACE else 2
        if len(pinned) != need or len(set(pinned)) != need:
            raise ValueError(f"pinned simplex must have {need} distinct vertices")
        pairs = [norm_edge(a, b) for a, b in zip(pinned, pinned[1:])]
        if G.geometry == SPACE:
            pairs.append(norm_edge(pinned[0], pinned[2]))
        for e in pairs:
            if e not in G.edges:
                raise ValueError(f"pinned simplex edge {e} not in graph")

    # -- pinned data ------------------------------------------------------

    def pinned_coords(self, lam2: dict[Edge, complex]):
        """Coordinates and magnitudes of the pinned vertices."""
        sqrt = np.lib.scimath.sqrt
        coords: dict[int, np.ndarray] = {}
        mags: dict[int, complex] = {}
        if self.geometry == PLANE:
            a, b = self.pinned
            lab2 = lam2[norm_edge(a, b)]
            coords[a] = np.array([0.0, 0.0], dtype=complex)
            coords[b] = np.array([0.0, sqrt(lab2)], dtype=complex)
            mags[a], mags[b] = 0.0, lab2
        elif self.geometry == SPACE:
            a, b, c = self.pinned
            lab2 = lam2[norm_edge(a, b)]
            lac2 = lam2[norm_edge(a, c)]
            lbc2 = lam2[norm_edge(b, c)]
            lab = sqrt(lab2)
            yc = (lac2 + lab2 - lbc2) / (2 * lab)
            xc2 = lac2 - yc * yc
            if all(abs(complex(v).imag) == 0 for v in (lab2, lac2, lbc2)):
                if not complex(xc2).real > 1e-14 * abs(complex(lac2)):
                    raise ValueError(
                        "pinned triangle is (nearly) degenerate for these lengths"
                    )
            xc = sqrt(xc2)
            coords[a] = np.zeros(3, dtype=complex)
            coords[b] = np.array([0.0, lab, 0.0], dtype=complex)
            coords[c] = np.array([xc, yc, 0.0], dtype=complex)
            mags[a], mags[b], mags[c] = 0.0, lab2, lac2
        else:  # sphere
            a, b = self.pinned
            lab2 = lam2[norm_edge(a, b)]
            cth = 1.0 - lab2 / 2.0
            sth = sqrt(1.0 - cth * cth)
            coords[a] = np.array([0.0, 0.0, 1.0], dtype=complex)
            coords[b] = np.array([0.0, sth, cth], dtype=complex)
            mags[a] = mags[b] = 1.0
        return coords, mags

    # -- polynomial construction -----------------------------------------

    def _coord_var(self, u: int, axis: int) -> int:
        return self._coord_at[u] + axis

    def instantiate(self, lam2: dict[Edge, complex]) -> PolySystem:
        nv = self.nvars
        coords, mags = self.pinned_coords(lam2)
        zero = (0,) * nv

        def unit(i):
            e = [0] * nv
            e[i] = 1
            return tuple(e)

        def sq(i):
            e = [0] * nv
            e[i] = 2
            return tuple(e)

        polys = []
        # magnitude / unit-norm equation per free vertex
        for u in self.free:
            terms: dict[tuple, complex] = {}
            for ax in range(self.amb):
                terms[sq(self._coord_var(u, ax))] = 1.0
            if self.with_magnitudes:
                terms[unit(self._mag_at[u])] = -1.0
            else:
                terms[zero] = -1.0
            polys.append(Poly.from_terms(nv, terms))
        # edge equations
        for i, j in self.eq_edges:
            terms = {zero: -lam2[(i, j)]}

            def add(key, c):
                terms[key] = terms.get(key, 0) + c

            for u in (i, j):
                if u in self._mag_at:
                    add(unit(self._mag_at[u]), 1.0)
                else:
                    add(zero, complex(mags.get(u, 1.0)))
            # -2 <X_i, X_j>
            for ax in range(self.amb):
                iv = self._coord_at.get(i)
                jv = self._coord_at.get(j)
                if iv is not None and jv is not None:
                    e = [0] * nv
                    e[iv + ax] += 1
                    e[jv + ax] += 1
                    add(tuple(e), -2.0)
                elif iv is not None:
                    add(unit(iv + ax), -2.0 * coords[j][ax])
                elif jv is not None:
                    add(unit(jv + ax), -2.0 * coords[i][ax])
                else:
                    add(zero, -2.0 * coords[i][ax] * coords[j][ax])
            polys.append(Poly.from_terms(nv, terms))
        return PolySystem(polys, list(self.var_names))

    # -- configurations ---------------------------------------------------

    def align_config(self, points: np.ndarray) -> np.ndarray:
        """Rigidly move a configuration into the pinning frame."""
        points = np.asarray(points, dtype=float)
        if self.geometry == PLANE:
            a, b = self.pinned
            d = points[b - 1] - points[a - 1]
            e2 = d / np.linalg.norm(d)
            e1 = np.array([e2[1], -e2[0]])
            basis = np.stack([e1, e2], axis=1)
            return (points - points[a - 1]) @ basis
        if self.geometry == SPACE:
            a, b, c = self.pinned
            d = points[b - 1] - points[a - 1]
            e2 = d / np.linalg.norm(d)
            g = points[c - 1] - points[a - 1]
            g = g - (g @ e2) * e2
            if np.linalg.norm(g) < 1e-12:
                raise ValueError("pinned triangle degenerate in configuration")
            e1 = g / np.linalg.norm(g)
            e3 = np.cross(e1, e2)
            basis = np.stack([e1, e2, e3], axis=1)
            return (points - points[a - 1]) @ basis
        # sphere: rotate only
        a, b = self.pinned
        e3 = points[a - 1] / np.linalg.norm(points[a - 1])
        g = points[b - 1] - (points[b - 1] @ e3) * e3
        if np.linalg.norm(g) < 1e-12:
            raise ValueError("pinned pair (nearly) antipodal or coincident")
        e2 = g / np.linalg.norm(g)
        e1 = np.cross(e2, e3)
        basis = np.stack([e1, e2, e3], axis=1)
        return points @ basis

    def config_to_vector(self, points: np.ndarray) -> np.ndarray:
        """Variable vector of an aligned configuration."""
        x = np.zeros(self.nvars, dtype=complex)
        for u in self.free:
            at = self._coord_at[u]
            x[at : at + self.amb] = points[u - 1]
            if self.with_magnitudes:
                x[self._mag_at[u]] = points[u - 1] @ points[u - 1]
        return x

    def vector_to_points(self, x: np.ndarray, lam2: dict[Edge, complex]):
        """(n, amb) coordinate array (complex) for a solution vector."""
        coords, _ = self.pinned_coords(lam2)
        pts = np.zeros((self.G.n, self.amb), dtype=complex)
        for v, xy in coords.items():
            pts[v - 1] = xy
        for u in self.free:
            at = self._coord_at[u]
            pts[u - 1] = x[at : at + self.amb]
        return pts


def build_sphere_system(
    G: RigidGraph,
    lengths: LengthAssignment | None = None,
    pinned: tuple[int, ...] | None = None,
):
    """Shape plus (optionally) its instantiation at given lengths.

    Returns the shape when no lengths are given, else (shape, system).
    """
    shape = SphereSystemShape(G, pinned)
    if lengths is None:
        return shape
    lengths.check_graph(G)
    if lengths.geometry != G.geometry:
        raise ValueError(
            f"length geometry {lengths.geometry!r} != graph geometry {G.geometry!r}"
        )
    return shape, shape.instantiate(lengths.squared())
