"""Solution sets: seeding, monodromy population, parameter homotopy,
real/complex classification.

A generic solution set is grown by monodromy loops in length-parameter
space from one forward-constructed seed realization, then transported to
target lengths by a gamma-trick parameter homotopy.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graphs import RigidGraph, SPHERE, ambient_dim
from .poly import PolySystem
from .systems import LengthAssignment, SphereSystemShape
from .track import (
    COMPLEX,
    DIVERGED,
    REAL,
    SINGULAR,
    Homotopy,
    TrackOptions,
    newton_polish,
    random_gamma,
    track,
)

TAU_SEP = 1e-8
TAU_IM = 1e-8


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RIGID_EMBED_THREADS", "1")))
    except ValueError:
        return 1


def tracked(H, starts, opts=None):
    """track() with optional chunk parallelism via RIGID_EMBED_THREADS."""
    k = _threads()
    n = len(starts)
    if k <= 1 or n < 2 * k:
        return track(H, starts, opts)
    chunks = np.array_split(np.arange(n), k)
    with ThreadPoolExecutor(max_workers=k) as ex:
        parts = list(ex.map(lambda c: track(H, starts[c], opts), chunks))
    xs = np.concatenate([p[0] for p in parts])
    st = np.concatenate([p[1] for p in parts])
    rs = np.concatenate([p[2] for p in parts])
    return xs, st, rs


@dataclass
class Solution:
    coordinates: np.ndarray
    residual: float
    newton_contraction: float = np.nan
    classification: str = COMPLEX


@dataclass
class SolutionSet:
    """Deduplicated solutions of one system instantiation."""

    shape: object  # SphereSystemShape or CMSubsystemShape
    lengths: LengthAssignment
    lam2: dict
    system: PolySystem
    points: np.ndarray  # (N, nvars) complex
    residuals: np.ndarray
    completeness: dict = field(default_factory=dict)
    singular: list = field(default_factory=list)
    n_diverged: int = 0

    def __len__(self):
        return len(self.points)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def incomplete(self) -> bool:
        return self.n_diverged > 0

    def solutions(self, tau_im: float = TAU_IM) -> list[Solution]:
        out = []
        for x, r in zip(self.points, self.residuals):
            cls = REAL if np.max(np.abs(x.imag)) <= tau_im else COMPLEX
            out.append(Solution(x, float(r), classification=cls))
        return out


def _sep_scale(x: np.ndarray) -> float:
    """Separation is relative for large solutions, absolute near the origin."""
    return max(1.0, float(np.max(np.abs(x))))


def dedupe_indices(points: np.ndarray, tau: float = TAU_SEP) -> list[int]:
    """Indices of greedy max-norm representatives."""
    kept: list[int] = []
    for k, x in enumerate(points):
        if kept and np.min(
            np.max(np.abs(points[kept] - x), axis=-1)
        ) <= tau * _sep_scale(x):
            continue
        kept.append(k)
    return kept


def dedupe(points: np.ndarray, tau: float = TAU_SEP) -> np.ndarray:
    """Greedy max-norm deduplication."""
    if len(points) == 0:
        return points
    return points[dedupe_indices(points, tau)]


def merge_into(base: np.ndarray, new: np.ndarray, tau: float = TAU_SEP) -> np.ndarray:
    out = list(base)
    for x in new:
        if out:
            arr = np.asarray(out)
            if np.min(np.max(np.abs(arr - x), axis=-1)) <= tau * _sep_scale(x):
                continue
        out.append(x)
    return np.asarray(out)


def conjugate_closure(points: np.ndarray, tau: float = TAU_SEP) -> np.ndarray:
    return merge_into(points, np.conj(points), tau)


# ---------------------------------------------------------------------------


@dataclass
class SeedRealization:
    lengths: LengthAssignment
    solution: Solution
    shape: SphereSystemShape
    points: np.ndarray  # the real configuration, aligned


def seed_realization(
    G: RigidGraph,
    geometry: str | None = None,
    seed: int = 0,
    pinned: tuple[int, ...] | None = None,
) -> SeedRealization:
    """Random configuration with induced lengths; exact-by-construction root."""
    if geometry is not None and geometry != G.geometry:
        G = G.with_geometry(geometry)
    rng = np.random.default_rng(seed)
    shape = SphereSystemShape(G, pinned)
    amb = ambient_dim(G.geometry)
    for _ in range(20):
        pts = rng.standard_normal((G.n, amb))
        if G.geometry == SPHERE:
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        try:
            aligned = shape.align_config(pts)
        except ValueError:
            continue
        lengths = LengthAssignment.from_points(G, aligned)
        x0 = shape.config_to_vector(aligned)
        system = shape.instantiate(lengths.squared())
        res = float(system.residual(x0[None, :])[0])
        if res < 1e-12:
            sol = Solution(x0, res, classification=REAL)
            return SeedRealization(lengths, sol, shape, aligned)
    raise RuntimeError("could not sample a non-degenerate seed configuration")


def _random_lam2(lam2: dict, rng, spread: float = 0.5) -> dict:
    out = {}
    for e, v in lam2.items():
        f = np.exp(spread * (rng.standard_normal() + 1j * rng.standard_normal()))
        out[e] = v * f
    return out


def _monodromy_core(
    F0,
    start,
    make_system,
    rng,
    *,
    known_count=None,
    stable_rounds=12,
    max_loops=200,
    opts=None,
):
    """Random triangle loops in parameter space until the set stabilizes.

    make_system(spread) instantiates the system at random complex lengths
    near the base point.  Returns (points, residuals, evidence dict).
    """
    opts = opts or TrackOptions()
    sols = conjugate_closure(np.atleast_2d(start))
    stable = 0
    loops = 0
    for loops in range(1, max_loops + 1):
        # loop diversity: vary how far the random lengths stray per loop
        spread = rng.uniform(0.3, 1.2)
        systems = [make_system(spread), make_system(spread), F0]
        xs = sols
        prev = F0
        for Fk in systems:
            H = Homotopy(prev, Fk, random_gamma(rng))
            xs, status, _ = tracked(H, xs, opts)
            xs = xs[status == "Finished"]
            prev = Fk
        before = len(sols)
        sols = merge_into(sols, xs)
        sols = conjugate_closure(sols)
        if len(sols) == before:
            stable += 1
        else:
            stable = 0
        if known_count is not None and len(sols) >= known_count:
            # confirm against near-duplicates before stopping early
            polished, _, _ = newton_polish(F0, sols, iters=8, tol=1e-13)
            sols = dedupe(polished)
            if len(sols) >= known_count:
                break
        if stable >= stable_rounds:
            break

    sols, res, _ = newton_polish(F0, sols, iters=8, tol=1e-13)
    keep = dedupe_indices(sols)
    sols, res = sols[keep], res[keep]
    evidence = {
        "loops": loops,
        "stable_rounds": stable,
        "matched_known_count": known_count is not None and len(sols) == known_count,
    }
    if known_count is not None and len(sols) < known_count:
        evidence["lower_bound_only"] = True
    return sols, res, evidence


def monodromy_solve(
    G: RigidGraph,
    geometry: str | None = None,
    *,
    seed: int = 0,
    known_count: int | None = None,
    stable_rounds: int = 12,
    max_loops: int = 200,
    pinned: tuple[int, ...] | None = None,
    opts: TrackOptions | None = None,
) -> SolutionSet:
    """Populate the generic solution set by random loops in length space."""
    seed_rl = seed_realization(G, geometry, seed, pinned)
    shape = seed_rl.shape
    rng = np.random.default_rng((seed, 0x6D6F6E6F))
    lam20 = seed_rl.lengths.squared()
    F0 = shape.instantiate(lam20)

    def make_system(spread):
        return shape.instantiate(_random_lam2(lam20, rng, spread))

    sols, res, evidence = _monodromy_core(
        F0,
        seed_rl.solution.coordinates,
        make_system,
        rng,
        known_count=known_count,
        stable_rounds=stable_rounds,
        max_loops=max_loops,
        opts=opts,
    )
    return SolutionSet(
        shape, seed_rl.lengths, lam20, F0, sols, res, completeness=evidence
    )


def cm_seed_realization(sub, seed: int = 0):
    """Random configuration inducing a root of the CM subsystem.

    Returns (lengths, x0): x0 holds the chosen squared distances (cosines
    on the sphere) of a random configuration of the base graph.
    """
    G = sub.graph
    rng = np.random.default_rng((seed, 0x636D7364))
    amb = ambient_dim(G.geometry)
    from .cayley import instantiate_cm

    for _ in range(20):
        pts = rng.standard_normal((G.n, amb))
        if G.geometry == SPHERE:
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        lengths = LengthAssignment.from_points(G, pts)
        if G.geometry == SPHERE:
            x0 = np.array(
                [pts[i - 1] @ pts[j - 1] for i, j in sub.chosen], dtype=complex
            )
        else:
            x0 = np.array(
                [np.sum((pts[i - 1] - pts[j - 1]) ** 2) for i, j in sub.chosen],
                dtype=complex,
            )
        system = instantiate_cm(sub, lengths.squared())
        scale = max(1.0, float(np.max(np.abs(x0)))) ** max(
            p.total_degree() for p in system.polys
        )
        if float(system.residual(x0[None, :])[0]) < 1e-10 * scale:
            return lengths, x0
    raise RuntimeError("could not sample a non-degenerate CM seed configuration")


def cm_monodromy_solve(
    sub,
    *,
    seed: int = 0,
    known_count: int | None = None,
    stable_rounds: int = 12,
    max_loops: int = 200,
    opts: TrackOptions | None = None,
) -> SolutionSet:
    """Monodromy population of a Cayley–Menger subsystem's solution set."""
    from .cayley import CMSystemShape

    lengths, x0 = cm_seed_realization(sub, seed)
    shape = CMSystemShape(sub)
    rng = np.random.default_rng((seed, 0x6D6F6E6F))
    lam20 = {e: complex(v) for e, v in lengths.squared().items()}
    F0 = shape.instantiate(lam20)

    def make_system(spread):
        return shape.instantiate(_random_lam2(lam20, rng, spread))

    sols, res, evidence = _monodromy_core(
        F0,
        x0,
        make_system,
        rng,
        known_count=known_count,
        stable_rounds=stable_rounds,
        max_loops=max_loops,
        opts=opts,
    )
    return SolutionSet(shape, lengths, lam20, F0, sols, res, completeness=evidence)


def parameter_homotopy(
    solset: SolutionSet,
    target: LengthAssignment,
    *,
    seed: int = 0,
    opts: TrackOptions | None = None,
    tau_sep: float = TAU_SEP,
) -> SolutionSet:
    """Track every solution to the target lengths."""
    rng = np.random.default_rng((seed, 0x70617468))
    lam2b = {e: complex(v) for e, v in target.squared().items()}
    return _homotopy_to(solset, target, lam2b, rng, opts, tau_sep)


def _homotopy_to(solset, target_lengths, lam2b, rng, opts=None, tau_sep=TAU_SEP):
    shape = solset.shape
    B = shape.instantiate(lam2b)
    H = Homotopy(solset.system, B, random_gamma(rng))
    xs, status, res = tracked(H, solset.points, opts)
    fin = status == "Finished"
    pts = dedupe(xs[fin], tau_sep)
    # re-associate residuals after dedup
    _, rr, _ = newton_polish(B, pts, iters=3, tol=1e-13)
    singular = [Solution(x, np.inf, classification=SINGULAR) for x in xs[status == SINGULAR]]
    out = SolutionSet(
        shape,
        target_lengths,
        lam2b,
        B,
        pts,
        rr,
        completeness=dict(solset.completeness, transported=True),
        singular=singular,
        n_diverged=int(np.sum(status == DIVERGED)),
    )
    return out


# ---------------------------------------------------------------------------
# Real classification


def _mpmath_polish(system: PolySystem, x: np.ndarray, digits: int = 40, iters: int = 8):
    """High-precision Newton for classification-ambiguous solutions."""
    import mpmath as mp

    with mp.workdps(digits):
        xv = mp.matrix([mp.mpc(complex(v)) for v in x])
        n = system.nvars
        for _ in range(iters):
            F = mp.matrix(system.neq, 1)
            J = mp.matrix(system.neq, n)
            for k, p in enumerate(system.polys):
                acc = mp.mpc(0)
                for e, c in zip(p.exps, p.coeffs):
                    m = mp.mpc(complex(c))
                    for i, ei in enumerate(e):
                        if ei:
                            m *= xv[i] ** int(ei)
                    acc += m
                F[k] = acc
            for k, row in enumerate(system._jac_struct()):
                for i, d in row:
                    acc = mp.mpc(0)
                    for e, c in zip(d.exps, d.coeffs):
                        m = mp.mpc(complex(c))
                        for ii, ei in enumerate(e):
                            if ei:
                                m *= xv[ii] ** int(ei)
                        acc += m
                    J[k, i] = acc
            try:
                dx = mp.lu_solve(J, -F)
            except ZeroDivisionError:
                break
            xv = xv + dx
            if max(abs(v) for v in dx) < mp.mpf(10) ** (-digits + 5):
                break
        return np.array([complex(v) for v in xv])


def count_real(
    solset: SolutionSet,
    tau_im: float = TAU_IM,
    *,
    extended_window: tuple[float, float] = (1e-10, 1e-6),
) -> tuple[int, list[Solution]]:
    """Classify solutions as real by post-refinement imaginary magnitude.

    Solutions whose largest imaginary part falls inside the ambiguous
    window are re-polished in extended precision before classification.
    """
    if len(solset) == 0:
        return 0, []
    pts = np.array(solset.points)
    im = np.max(np.abs(pts.imag), axis=-1)
    lo, hi = extended_window
    ambiguous = np.flatnonzero((im >= lo) & (im <= hi))
    for k in ambiguous:
        pts[k] = _mpmath_polish(solset.system, pts[k])
    im = np.max(np.abs(pts.imag), axis=-1)
    reals = []
    for k in np.flatnonzero(im <= tau_im):
        reals.append(
            Solution(
                pts[k],
                float(solset.residuals[k]),
                classification=REAL,
            )
        )
    return len(reals), reals
