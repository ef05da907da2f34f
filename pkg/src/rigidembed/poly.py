"""Sparse multivariate polynomials with batched numpy evaluation.

A polynomial is a fixed monomial support (exponent matrix) plus a complex
coefficient vector.  Systems keep the support fixed across re-instantiation
at new edge lengths, so homotopies between two instantiations reduce to
coefficient interpolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Poly:
    """coeffs[k] * prod_i x_i**exps[k,i], exps shape (m, nvars)."""

    nvars: int
    exps: np.ndarray  # (m, nvars) int
    coeffs: np.ndarray  # (m,) complex

    @staticmethod
    def from_terms(nvars: int, terms: dict[tuple[int, ...], complex]) -> "Poly":
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return Poly(nvars, np.zeros((1, nvars), dtype=int), np.zeros(1, complex))
        keys = sorted(terms)
        exps = np.array(keys, dtype=int).reshape(len(keys), nvars)
        coeffs = np.array([terms[k] for k in keys], dtype=complex)
        return Poly(nvars, exps, coeffs)

    def terms(self) -> dict[tuple[int, ...], complex]:
        return {tuple(e): c for e, c in zip(self.exps, self.coeffs)}

    def eval(self, x: np.ndarray) -> np.ndarray:
        """x shape (..., nvars) -> (...,)."""
        x = np.asarray(x)
        mono = np.prod(x[..., None, :] ** self.exps, axis=-1)
        return mono @ self.coeffs

    def diff(self, i: int) -> "Poly":
        mask = self.exps[:, i] > 0
        if not mask.any():
            return Poly.from_terms(self.nvars, {})
        exps = self.exps[mask].copy()
        coeffs = self.coeffs[mask] * exps[:, i]
        exps[:, i] -= 1
        return Poly(self.nvars, exps, coeffs)

    def total_degree(self) -> int:
        nz = np.abs(self.coeffs) > 0
        if not nz.any():
            return 0
        return int(self.exps[nz].sum(axis=1).max())

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs.imag) <= tol))


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: dict[tuple[int, ...], complex] = {}
    for ea, ca in zip(a.exps, a.coeffs):
        for eb, cb in zip(b.exps, b.coeffs):
            key = tuple(ea + eb)
            out[key] = out.get(key, 0) + ca * cb
    return Poly.from_terms(a.nvars, out)


def poly_add(a: Poly, b: Poly) -> Poly:
    out = a.terms()
    for e, c in b.terms().items():
        out[e] = out.get(e, 0) + c
    return Poly.from_terms(a.nvars, out)


class PolySystem:
    """A square-or-not list of polynomials over shared variables.

    Precomputes the sparse Jacobian structure once; evaluation is batched
    over a leading axis of points.
    """

    def __init__(self, polys: list[Poly], var_names: list[str] | None = None):
        if not polys:
            raise ValueError("empty system")
        self.polys = polys
        self.nvars = polys[0].nvars
        self.neq = len(polys)
        self.var_names = var_names or [f"x{i}" for i in range(self.nvars)]
        self._jac: list[list[tuple[int, Poly]]] | None = None

    def _jac_struct(self):
        if self._jac is None:
            self._jac = []
            for p in self.polys:
                row = []
                for i in range(self.nvars):
                    d = p.diff(i)
                    if np.any(d.coeffs != 0):
                        row.append((i, d))
                self._jac.append(row)
        return self._jac

    def eval(self, x: np.ndarray) -> np.ndarray:
        """x (..., nvars) -> (..., neq)."""
        x = np.asarray(x)
        out = np.empty(x.shape[:-1] + (self.neq,), dtype=complex)
        for k, p in enumerate(self.polys):
            out[..., k] = p.eval(x)
        return out

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """x (..., nvars) -> (..., neq, nvars)."""
        x = np.asarray(x)
        J = np.zeros(x.shape[:-1] + (self.neq, self.nvars), dtype=complex)
        for k, row in enumerate(self._jac_struct()):
            for i, d in row:
                J[..., k, i] = d.eval(x)
        return J

    def residual(self, x: np.ndarray) -> np.ndarray:
        """Max-norm of the system evaluation, batched."""
        return np.max(np.abs(self.eval(x)), axis=-1)

    def is_square(self) -> bool:
        return self.neq == self.nvars

    def as_text(self, digits: int = 17) -> str:
        """Human-readable dump, degrevlex monomial order per equation."""
        lines = []
        for p in self.polys:
            idx = sorted(
                range(len(p.coeffs)),
                key=lambda k: (
                    -p.exps[k].sum(),
                    tuple(p.exps[k][::-1]),
                ),
            )
            parts = []
            for k in idx:
                c = p.coeffs[k]
                if c == 0:
                    continue
                mono = "*".join(
                    f"{self.var_names[i]}^{e}" if e > 1 else self.var_names[i]
                    for i, e in enumerate(p.exps[k])
                    if e > 0
                )
                cs = (
                    f"{c.real:+.{digits}g}"
                    if abs(c.imag) == 0
                    else f"+({c.real:.{digits}g}{c.imag:+.{digits}g}i)"
                )
                parts.append(cs + ("*" + mono if mono else ""))
            lines.append(" ".join(parts) if parts else "0")
        return "\n".join(lines)
