"""Length assignments and the sphere/magnitude systems."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rigidembed.graphs import PLANE, SPACE, SPHERE, enumerate_minimally_rigid
from rigidembed.solve import seed_realization
from rigidembed.systems import (
    LengthAssignment,
    SphereSystemShape,
    build_sphere_system,
    default_pinned,
)


def test_length_assignment_normalizes_keys():
    lam = LengthAssignment({(2, 1): 1.5}, PLANE)
    assert lam[(1, 2)] == 1.5
    assert lam[(2, 1)] == 1.5


def test_length_assignment_rejects_nonpositive():
    with pytest.raises(ValueError):
        LengthAssignment({(1, 2): 0.0}, PLANE)


def test_sphere_chord_bound():
    with pytest.raises(ValueError):
        LengthAssignment({(1, 2): 2.0}, SPHERE)
    LengthAssignment({(1, 2): 1.9}, SPHERE)  # fine


def test_json_roundtrip():
    lam = LengthAssignment({(1, 2): 1.25, (2, 3): 0.5}, SPACE)
    lam2 = LengthAssignment.from_json_dict(lam.to_json_dict("g"))
    assert lam2.values == lam.values and lam2.geometry == SPACE


def test_scaled_and_perturbed():
    lam = LengthAssignment({(1, 2): 2.0}, PLANE)
    assert lam.scaled(0.5)[(1, 2)] == 1.0
    rng = np.random.default_rng(0)
    assert abs(lam.perturbed(rng, 1e-3)[(1, 2)] - 2.0) < 2e-3 + 1e-12


# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n,d", [(n, d) for d in (2, 3) for n in range(4, 8)])
def test_squareness_on_enumerated_graphs(n, d):
    # criterion: the sphere system is square for every minimally rigid graph
    for G in enumerate_minimally_rigid(n, d):
        shape = SphereSystemShape(G)
        assert shape.nvars == len(shape.free) + len(shape.eq_edges)


def test_seed_realization_residuals():
    # criterion: forward-constructed roots are exact to 1e-12 over 100 seeds
    graphs = enumerate_minimally_rigid(5, 2) + enumerate_minimally_rigid(5, 3)
    k = 0
    for seed in range(100):
        G = graphs[seed % len(graphs)]
        sr = seed_realization(G, seed=seed)
        assert sr.solution.residual < 1e-12
        k += 1
    assert k == 100


def test_seed_realization_sphere():
    G = enumerate_minimally_rigid(5, 2, geometry=SPHERE)[0]
    sr = seed_realization(G, seed=3)
    assert sr.solution.residual < 1e-12
    assert np.allclose(np.linalg.norm(sr.points, axis=1), 1.0)


def test_pinned_coords_satisfy_lengths(g48, g48_published):
    lam = g48_published["G_48_max48"].lengths
    shape = SphereSystemShape(g48.graph)
    coords, mags = shape.pinned_coords(lam.squared())
    a, b, c = shape.pinned
    for i, j in [(a, b), (a, c), (b, c)]:
        d = np.linalg.norm((coords[i] - coords[j]).real)
        assert abs(d - lam[(i, j)]) < 1e-12
    assert coords[c][0].real >= 0  # in-plane sign convention


def test_config_vector_roundtrip(g48):
    sr = seed_realization(g48.graph, seed=5)
    shape = sr.shape
    x = shape.config_to_vector(sr.points)
    pts = shape.vector_to_points(x, sr.lengths.squared())
    assert np.max(np.abs(pts.real - sr.points)) < 1e-10


@given(st.integers(0, 1000))
@settings(max_examples=15, deadline=None)
def test_align_config_preserves_lengths(seed):
    rng = np.random.default_rng(seed)
    G = enumerate_minimally_rigid(5, 3)[0]
    pts = rng.standard_normal((G.n, 3))
    shape = SphereSystemShape(G)
    try:
        aligned = shape.align_config(pts)
    except ValueError:
        return  # degenerate pinned triangle
    for i, j in G.sorted_edges():
        d0 = np.linalg.norm(pts[i - 1] - pts[j - 1])
        d1 = np.linalg.norm(aligned[i - 1] - aligned[j - 1])
        assert abs(d0 - d1) < 1e-9


def test_build_sphere_system_checks_lengths(g48):
    bad = LengthAssignment({(1, 2): 1.0}, SPACE)
    with pytest.raises(ValueError):
        build_sphere_system(g48.graph, bad)


def test_default_pinned_is_simplex(g48):
    pinned = default_pinned(g48.graph)
    assert len(pinned) == 3
    shape = SphereSystemShape(g48.graph, pinned)
    assert shape.pinned == pinned


def test_system_is_quadratic(g48, g48_published):
    _, F = build_sphere_system(g48.graph, g48_published["G_48_max48"].lengths)
    assert max(p.total_degree() for p in F.polys) == 2
