"""Cayley–Menger subsystems, determinants, and side conditions."""

import numpy as np
import pytest

from rigidembed.catalog import get_entry, get_published
from rigidembed.cayley import (
    build_cm_system,
    check_side_conditions,
    det_poly,
    embedding_side_report,
    find_cm_square_subsystems,
    instantiate_cm,
    missing_edges,
    substitute_affine,
)
from rigidembed.poly import Poly
from rigidembed.solve import cm_monodromy_solve, count_real, parameter_homotopy
from rigidembed.systems import LengthAssignment


def random_poly_matrix(rng, m, nvars, nterms=3):
    out = []
    for _ in range(m):
        row = []
        for _ in range(m):
            terms = {
                tuple(rng.integers(0, 2, nvars)): complex(rng.standard_normal())
                for _ in range(nterms)
            }
            row.append(Poly.from_terms(nvars, terms))
        out.append(row)
    return out


@pytest.mark.parametrize("m", [2, 3, 4])
def test_det_poly_matches_numpy(m):
    rng = np.random.default_rng(m)
    M = random_poly_matrix(rng, m, nvars=2)
    x = rng.standard_normal(2).astype(complex)
    sym = det_poly(M).eval(x)
    num = np.linalg.det(np.array([[p.eval(x) for p in row] for row in M]))
    assert abs(sym - num) < 1e-9 * max(1.0, abs(num))


def test_substitute_affine():
    # p(x) = x0^2 + x1;  x -> (1 - 2y0, 3 + y1)
    p = Poly.from_terms(2, {(2, 0): 1.0, (0, 1): 1.0})
    q = substitute_affine(p, np.array([1.0, 3.0]), np.array([-2.0, 1.0]))
    y = np.array([0.5, 2.0], dtype=complex)
    assert abs(q.eval(y) - ((1 - 2 * 0.5) ** 2 + (3 + 2.0))) < 1e-12


def test_missing_edges_counts():
    g48 = get_entry("G_48").graph
    # n=7 space graph: 21 pairs, 15 edges
    assert len(missing_edges(g48)) == 6


def test_subsystem_counts():
    assert len(find_cm_square_subsystems(get_entry("G_48").graph)) == 5
    assert len(find_cm_square_subsystems(get_entry("L_24").graph)) == 6
    assert len(find_cm_square_subsystems(get_entry("L_24_S2").graph)) == 6


def test_subsystems_are_square():
    for sub in find_cm_square_subsystems(get_entry("G_48").graph):
        assert len(sub.chosen) == 7 - 4
        assert len(sub.minors) == len(sub.chosen)
        lam2 = {e: 1.0 + 0.01 * i for i, e in enumerate(sub.graph.edges)}
        sys = instantiate_cm(sub, lam2)
        assert len(sys.polys) == sys.nvars == len(sub.chosen)


def test_cm_count_is_half_sphere_count():
    # distance-space solutions identify mirror pairs: 48 / 2 = 24
    e = get_entry("G_48")
    sub = find_cm_square_subsystems(e.graph)[0]
    lam = get_published("G_48", "G_48_max48").lengths
    gen = cm_monodromy_solve(sub, seed=0, known_count=24)
    assert len(gen) == 24
    tgt = parameter_homotopy(gen, lam, seed=0)
    n_real, _ = count_real(tgt)
    assert n_real == 24


def test_side_conditions_accept_true_solutions():
    e = get_entry("L_24")
    sub = find_cm_square_subsystems(e.graph)[0]
    lam = LengthAssignment(
        {edge: 1.0 + 0.05 * i for i, edge in enumerate(sorted(e.graph.edges))},
        "plane",
    )
    cm = build_cm_system(sub, lam)
    gen = cm_monodromy_solve(sub, seed=1)
    tgt = parameter_homotopy(gen, lam, seed=1)
    n_real, reals = count_real(tgt)
    assert n_real >= 1
    ok = 0
    for r in reals:
        rep = check_side_conditions(r.coordinates, cm.side_conditions)
        ok += rep.ok
    assert ok >= 1  # at least one genuine planar embedding


def test_side_conditions_reject_garbage():
    e = get_entry("L_24")
    sub = find_cm_square_subsystems(e.graph)[0]
    lam = LengthAssignment(
        {edge: 1.0 for edge in sorted(e.graph.edges)}, "plane"
    )
    cm = build_cm_system(sub, lam)
    # wildly negative squared distances violate positivity
    rep = check_side_conditions(np.array([-5.0, -5.0, -5.0]), cm.side_conditions)
    assert not rep.ok
    assert any("positivity" in k for k in rep.violations)


def test_embedding_side_report_on_real_embedding(g48, g48_generic, g48_published):
    pub = g48_published["G_48_max48"]
    tgt = parameter_homotopy(g48_generic, pub.lengths, seed=0)
    _, reals = count_real(tgt)
    pts = tgt.shape.vector_to_points(reals[0].coordinates, pub.lengths.squared())
    rep = embedding_side_report(g48.graph, pub.lengths, pts)
    assert rep.ok


def test_sphere_cm_uses_cosine_variables():
    e = get_entry("L_24_S2")
    sub = find_cm_square_subsystems(e.graph)[0]
    lam = get_published("L_24_S2", "L_24_S2_32").lengths
    cm = build_cm_system(sub, lam)
    assert all(v.startswith("y(") for v in cm.var_names)
    labels = [c.label for c in cm.side_conditions]
    assert any(">= -1" in s for s in labels)
    assert any("spherical triangle" in s for s in labels)
