"""Path tracking: gamma-trick homotopies, Newton polish, statuses."""

import numpy as np
import pytest

from rigidembed.poly import Poly, PolySystem
from rigidembed.track import (
    DIVERGED,
    Homotopy,
    TrackOptions,
    newton_polish,
    random_gamma,
    track,
)


def univariate(coeffs: dict[int, complex]) -> PolySystem:
    return PolySystem([Poly.from_terms(1, {(k,): c for k, c in coeffs.items()})], ["x"])


def two_var(*terms_list) -> PolySystem:
    return PolySystem([Poly.from_terms(2, t) for t in terms_list], ["x", "y"])


def test_track_scaled_quadratic():
    A = univariate({2: 1.0, 0: -1.0})  # x^2 = 1
    B = univariate({2: 1.0, 0: -4.0})  # x^2 = 4
    H = Homotopy(A, B, random_gamma(np.random.default_rng(0)))
    starts = np.array([[1.0 + 0j], [-1.0 + 0j]])
    ends, status, res = track(H, starts)
    assert list(status) == ["Finished", "Finished"]
    assert sorted(np.round(ends[:, 0].real, 8)) == [-2.0, 2.0]
    assert np.all(res < 1e-8)


def test_track_full_bezout_system():
    # x^2 + y^2 = 5, x y = 2 has the four real solutions
    # (1,2),(2,1),(-1,-2),(-2,-1); start from the product system
    A = two_var({(2, 0): 1.0, (0, 0): -1.0}, {(0, 2): 1.0, (0, 0): -4.0})
    B = two_var(
        {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -5.0},
        {(1, 1): 1.0, (0, 0): -2.0},
    )
    starts = np.array([[sx, sy] for sx in (1, -1) for sy in (2, -2)], dtype=complex)
    H = Homotopy(A, B, random_gamma(np.random.default_rng(1)))
    ends, status, res = track(H, starts)
    assert all(s == "Finished" for s in status)
    got = sorted((round(e[0].real, 6), round(e[1].real, 6)) for e in ends)
    assert got == [(-2.0, -1.0), (-1.0, -2.0), (1.0, 2.0), (2.0, 1.0)]
    assert np.max(np.abs(ends.imag)) < 1e-8


def test_track_degree_drop_lands_on_root():
    # target x = 1 has a single root; every non-diverged path must end there
    A = univariate({2: 1.0, 0: -1.0})
    B = univariate({1: 1.0, 0: -1.0})
    H = Homotopy(A, B, random_gamma(np.random.default_rng(2)))
    ends, status, _ = track(H, np.array([[1.0 + 0j], [-1.0 + 0j]]))
    finished = ends[status == "Finished"]
    assert len(finished) >= 1
    assert np.all(np.abs(finished[:, 0] - 1.0) < 1e-8)


def test_newton_polish_recovers_roots():
    B = two_var(
        {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -5.0},
        {(1, 1): 1.0, (0, 0): -2.0},
    )
    rng = np.random.default_rng(3)
    exact = np.array([[1.0, 2.0], [-2.0, -1.0]], dtype=complex)
    noisy = exact + 1e-3 * (rng.standard_normal((2, 2)))
    polished, res, _ = newton_polish(B, noisy)
    assert np.max(np.abs(polished - exact)) < 1e-10
    assert np.max(res) < 1e-12


def test_random_gamma_unit_and_deterministic():
    g1 = random_gamma(np.random.default_rng(42))
    g2 = random_gamma(np.random.default_rng(42))
    assert g1 == g2
    assert abs(abs(g1) - 1.0) < 1e-14


def test_track_options_defaults():
    opts = TrackOptions()
    assert opts.newton_iters <= 3
    assert 0 < opts.min_step < opts.initial_step <= opts.max_step


def test_scale_relative_acceptance():
    # solutions of norm ~1e4: quadratic residual scale makes these accepted
    A = univariate({2: 1.0, 0: -1.0})
    B = univariate({2: 1.0, 0: -1e8})
    H = Homotopy(A, B, random_gamma(np.random.default_rng(4)))
    ends, status, _ = track(H, np.array([[1.0 + 0j], [-1.0 + 0j]]))
    assert all(s == "Finished" for s in status)
    assert sorted(np.round(ends[:, 0].real, 4)) == [-1e4, 1e4]
