"""Predictor-corrector path tracking for square polynomial systems.

The homotopy between two instantiations of the same system shape is the
convex combination H(x,t) = (1-t)*gamma*F_A(x) + t*F_B(x) with a random
unit-circle gamma.  All paths of a batch are tracked in lockstep with
per-path adaptive steps; linear algebra is batched through numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import Poly, PolySystem

REAL = "Real"
COMPLEX = "Complex"
SINGULAR = "Singular"
DIVERGED = "Diverged"


@dataclass
class TrackOptions:
    initial_step: float = 0.05
    min_step: float = 1e-12
    max_step: float = 0.25
    shrink: float = 0.5
    grow: float = 1.25
    grow_after: int = 4
    newton_iters: int = 3
    corrector_tol: float = 1e-8
    blowup: float = 1e8
    max_steps: int = 2000
    polish_iters: int = 10
    polish_tol: float = 1e-12


def _merge_support(pa: Poly, pb: Poly) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Union support with aligned coefficient vectors."""
    ta, tb = pa.terms(), pb.terms()
    keys = sorted(set(ta) | set(tb))
    exps = np.array(keys, dtype=int).reshape(len(keys), pa.nvars)
    ca = np.array([ta.get(k, 0) for k in keys], dtype=complex)
    cb = np.array([tb.get(k, 0) for k in keys], dtype=complex)
    return exps, ca, cb


class Homotopy:
    """(1-t)*gamma*A + t*B between two systems with shared variables."""

    def __init__(self, A: PolySystem, B: PolySystem, gamma: complex):
        if A.nvars != B.nvars or A.neq != B.neq:
            raise ValueError("homotopy endpoints have mismatched shapes")
        self.nvars = A.nvars
        self.neq = A.neq
        self.gamma = gamma
        self.B = B
        self._eqs = []  # per equation: (exps, gamma*cA, cB) and jac rows
        for pa, pb in zip(A.polys, B.polys):
            exps, ca, cb = _merge_support(pa, pb)
            ca = gamma * ca
            jac = []
            for i in range(self.nvars):
                mask = exps[:, i] > 0
                if not mask.any():
                    continue
                de = exps[mask].copy()
                fac = de[:, i].astype(complex)
                de[:, i] -= 1
                jac.append((i, de, fac * ca[mask], fac * cb[mask]))
            self._eqs.append((exps, ca, cb, jac))

    def _combine(self, t):
        """Coefficient interpolation weights; t shape (N,)."""
        return (1 - t), t

    def eval(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        wa, wb = self._combine(t)
        out = np.empty(x.shape[:-1] + (self.neq,), dtype=complex)
        for k, (exps, ca, cb, _) in enumerate(self._eqs):
            mono = np.prod(x[..., None, :] ** exps, axis=-1)
            out[..., k] = wa * (mono @ ca) + wb * (mono @ cb)
        return out

    def eval_dt(self, x: np.ndarray) -> np.ndarray:
        """dH/dt = B - gamma*A (constant in t)."""
        out = np.empty(x.shape[:-1] + (self.neq,), dtype=complex)
        for k, (exps, ca, cb, _) in enumerate(self._eqs):
            mono = np.prod(x[..., None, :] ** exps, axis=-1)
            out[..., k] = mono @ (cb - ca)
        return out

    def jacobian(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        wa, wb = self._combine(t)
        J = np.zeros(x.shape[:-1] + (self.neq, self.nvars), dtype=complex)
        for k, (_, _, _, jac) in enumerate(self._eqs):
            for i, de, ja, jb in jac:
                mono = np.prod(x[..., None, :] ** de, axis=-1)
                J[..., k, i] = wa * (mono @ ja) + wb * (mono @ jb)
        return J


def _solve_batch(J: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched linear solve; returns (solution, ok mask)."""
    n = J.shape[0]
    ok = np.ones(n, dtype=bool)
    try:
        sol = np.linalg.solve(J, rhs[..., None])[..., 0]
        bad = ~np.isfinite(sol).all(axis=-1)
        if bad.any():
            ok[bad] = False
            sol[bad] = 0.0
        return sol, ok
    except np.linalg.LinAlgError:
        pass
    sol = np.zeros_like(rhs)
    for k in range(n):
        try:
            sol[k] = np.linalg.solve(J[k], rhs[k])
            if not np.isfinite(sol[k]).all():
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            ok[k] = False
            sol[k] = 0.0
    return sol, ok


def newton_polish(
    F: PolySystem, x: np.ndarray, iters: int = 10, tol: float = 1e-12
):
    """Batched Newton refinement on a square system.

    Returns (refined x, residual, last step size).
    """
    x = np.array(x, dtype=complex)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[None, :]
    last = np.full(x.shape[0], np.inf)
    for _ in range(iters):
        r = F.eval(x)
        res = np.max(np.abs(r), axis=-1)
        active = res > tol
        if not active.any():
            break
        J = F.jacobian(x[active])
        dx, ok = _solve_batch(J, -r[active])
        step = np.max(np.abs(dx), axis=-1)
        idx = np.flatnonzero(active)
        # drop paths whose Newton step blows up
        accept = ok & np.isfinite(step)
        x[idx[accept]] += dx[accept]
        last[idx[accept]] = step[accept]
    res = np.max(np.abs(F.eval(x)), axis=-1)
    if squeeze:
        return x[0], float(res[0]), float(last[0])
    return x, res, last


def track(
    H: Homotopy, starts: np.ndarray, opts: TrackOptions | None = None
):
    """Track a batch of start solutions from t=0 to t=1.

    Returns (endpoints, status, residuals): status is one of the
    classification strings; endpoints of non-finished paths are the last
    iterate.
    """
    opts = opts or TrackOptions()
    x = np.array(starts, dtype=complex)
    if x.ndim == 1:
        x = x[None, :]
    N = x.shape[0]
    t = np.zeros(N)
    h = np.full(N, opts.initial_step)
    streak = np.zeros(N, dtype=int)
    status = np.array(["Tracking"] * N, dtype=object)

    for _ in range(opts.max_steps):
        live = status == "Tracking"
        if not live.any():
            break
        idx = np.flatnonzero(live)
        xt, tt, ht = x[idx], t[idx], np.minimum(h[idx], 1.0 - t[idx])

        # Euler predictor
        J = H.jacobian(xt, tt)
        dxdt, ok = _solve_batch(J, -H.eval_dt(xt))
        xp = xt + ht[:, None] * dxdt
        tp = tt + ht

        # Newton corrector at t + h
        good = ok.copy()
        for _ in range(opts.newton_iters):
            r = H.eval(xp, tp)
            Jc = H.jacobian(xp, tp)
            dx, okc = _solve_batch(Jc, -r)
            good &= okc
            xp = xp + dx
        res = np.max(np.abs(H.eval(xp, tp)), axis=-1)
        # residuals of quadratic equations scale with the square of the
        # solution norm; judge convergence relative to that scale
        scale = np.maximum(1.0, np.max(np.abs(xp), axis=-1)) ** 2
        good &= np.isfinite(res) & (res < opts.corrector_tol * scale)

        # accept / reject
        acc = idx[good]
        x[acc] = xp[good]
        t[acc] = tp[good]
        streak[acc] += 1
        grown = acc[streak[acc] >= opts.grow_after]
        h[grown] = np.minimum(h[grown] * opts.grow, opts.max_step)
        streak[grown] = 0

        rej = idx[~good]
        h[rej] *= opts.shrink
        streak[rej] = 0
        status[rej[h[rej] < opts.min_step]] = SINGULAR

        if acc.size:
            big = acc[np.max(np.abs(x[acc]), axis=-1) > opts.blowup]
            status[big] = DIVERGED
        status[np.flatnonzero((status == "Tracking") & (t >= 1.0 - 1e-14))] = "Done"

    status[status == "Tracking"] = DIVERGED  # max steps exceeded

    done = status == "Done"
    residuals = np.full(N, np.inf)
    if done.any():
        xe, res, _ = newton_polish(
            H.B, x[done], iters=opts.polish_iters, tol=opts.polish_tol
        )
        x[done] = xe
        residuals[done] = res
        scale = np.maximum(1.0, np.max(np.abs(xe), axis=-1)) ** 2
        bad = res > opts.corrector_tol * scale
        sub = np.flatnonzero(done)
        status[sub[bad]] = SINGULAR
        status[sub[~bad]] = "Finished"
    return x, status, residuals


def random_gamma(rng) -> complex:
    ang = rng.uniform(0, 2 * np.pi)
    return complex(np.cos(ang), np.sin(ang))
