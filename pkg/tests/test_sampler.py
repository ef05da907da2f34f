"""Coupler subgraphs, the length family, DBSCAN, and search plumbing."""

import math

import numpy as np
import pytest

from rigidembed.graphs import SPACE, RigidGraph, enumerate_minimally_rigid
from rigidembed.sampler import (
    CouplerSubgraph,
    SearchConfig,
    curve_to_csv,
    CurveComponent,
    dbscan,
    find_coupler_subgraphs,
    heuristic_starts,
    lambda_family,
    lengths_from_angles,
    sphere_intersections,
    stochastic_walk,
)
from rigidembed.systems import LengthAssignment


# -- subgraph discovery ------------------------------------------------------


def test_g48_has_twenty_coupler_subgraphs(g48):
    subs = find_coupler_subgraphs(g48.graph)
    assert len(subs) == 20
    tuples = {s.as_tuple() for s in subs}
    # representatives from the worked example (canonical: v > w)
    for t in [(2, 3, 1, 7, 6), (5, 6, 1, 7, 4), (4, 3, 1, 7, 5), (3, 2, 1, 7, 4)]:
        assert t in tuples


def test_canonical_representative_halving(g48):
    subs = find_coupler_subgraphs(g48.graph)
    tuples = {s.as_tuple() for s in subs}
    for u, v, w, p, c in tuples:
        assert v > w
        assert (u, w, v, c, p) not in tuples  # the swapped twin is excluded


def test_k4_has_no_coupler_subgraph():
    # every vertex has degree 3 < 4
    G = enumerate_minimally_rigid(4, 3)[0]
    assert find_coupler_subgraphs(G) == []


def test_five_vertex_graph_subgraphs_are_valid():
    G = enumerate_minimally_rigid(5, 3)[0]  # K5 minus an edge
    for s in find_coupler_subgraphs(G):
        assert len({s.u, s.v, s.w, s.p, s.c}) == 5
        edges = G.edges
        for e in [(s.p, s.v), (s.v, s.w), (s.c, s.w)]:
            assert tuple(sorted(e)) in edges


def test_plane_graph_rejected():
    G = enumerate_minimally_rigid(6, 2)[0]
    with pytest.raises(ValueError):
        find_coupler_subgraphs(G)


# -- the two-angle length family ---------------------------------------------


@pytest.fixture
def sg():
    return CouplerSubgraph(2, 3, 1, 7, 6)


def test_family_identity(g48, g48_published, sg):
    # t equal to the current uv length reproduces the input lengths
    lam = g48_published["G_48_start28"].lengths
    out = lambda_family(lam, sg, lam[(sg.u, sg.v)])
    for e, v in lam.values.items():
        assert abs(out[e] - v) < 1e-12


def test_family_triangle_consistency(g48, g48_published, sg):
    # resampled lengths keep w and p at fixed positions relative to v
    lam = g48_published["G_48_start28"].lengths
    for t in (0.7, 1.3, 2.9):
        out = lambda_family(lam, sg, t)
        assert out[(sg.u, sg.v)] == t
        # the altitude foot of w on the uv-axis is invariant:
        # lvw^2 - y_w^2 is preserved by construction
        y_w = (out[(sg.v, sg.w)] ** 2 + t**2 - out[(sg.u, sg.w)] ** 2) / (2 * t)
        y_w0 = (
            lam[(sg.v, sg.w)] ** 2
            + lam[(sg.u, sg.v)] ** 2
            - lam[(sg.u, sg.w)] ** 2
        ) / (2 * lam[(sg.u, sg.v)])
        assert abs(y_w - y_w0) < 1e-10


def test_family_rejects_nonpositive_t(g48, g48_published, sg):
    lam = g48_published["G_48_start28"].lengths
    with pytest.raises(ValueError):
        lambda_family(lam, sg, 0.0)


def test_angles_roundtrip(g48, g48_published, sg):
    lam = g48_published["G_48_start28"].lengths
    for phi, theta in [(0.3, 1.1), (-0.5, 2.0), (1.2, 0.4)]:
        out = lengths_from_angles(lam, sg, phi, theta)
        if out is None:
            continue
        # recover the angles from the produced lengths
        luv0 = lam[(sg.u, sg.v)]
        y_w0 = (
            lam[(sg.v, sg.w)] ** 2 + luv0**2 - lam[(sg.u, sg.w)] ** 2
        ) / (2 * luv0)
        x_w0 = math.sqrt(lam[(sg.v, sg.w)] ** 2 - y_w0**2)
        t = out[(sg.u, sg.v)]
        assert abs(math.atan2(t - y_w0, x_w0) - phi) < 1e-10
        luw, lcw, luc = out[(sg.u, sg.w)], out[(sg.c, sg.w)], out[(sg.u, sg.c)]
        cos_theta = (luw**2 + lcw**2 - luc**2) / (2 * luw * lcw)
        assert abs(math.acos(cos_theta) - theta) < 1e-10


def test_angles_out_of_range(g48, g48_published, sg):
    lam = g48_published["G_48_start28"].lengths
    with pytest.raises(ValueError):
        lengths_from_angles(lam, sg, 2.0, 1.0)
    with pytest.raises(ValueError):
        lengths_from_angles(lam, sg, 0.0, -1.0)


def test_angles_none_when_u_leaves_axis(g48, g48_published, sg):
    lam = g48_published["G_48_start28"].lengths
    # phi near -pi/2 drives t = y_w + x_w tan(phi) negative
    assert lengths_from_angles(lam, sg, -1.5707, 1.0) is None


# -- DBSCAN -------------------------------------------------------------------


def test_dbscan_hand_oracle():
    # two tight clusters of four and a far-away noise point
    pts = np.array(
        [
            [0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [0.1, 0.1],
            [5.0, 5.0], [5.1, 5.0], [5.0, 5.1], [5.1, 5.1],
            [10.0, 0.0],
        ]
    )
    labels = dbscan(pts, eps=0.25, min_pts=3)
    assert labels[8] == -1  # noise
    assert len({labels[i] for i in range(4)}) == 1
    assert len({labels[i] for i in range(4, 8)}) == 1
    assert labels[0] != labels[4]
    assert set(labels[:8]) == {0, 1}


def test_dbscan_min_pts_controls_noise():
    pts = np.array([[0.0, 0.0], [0.1, 0.0]])
    assert list(dbscan(pts, eps=0.25, min_pts=3)) == [-1, -1]
    assert list(dbscan(pts, eps=0.25, min_pts=2)) == [0, 0]


def test_dbscan_chaining():
    # a line of points each within eps of the next forms one cluster
    pts = np.array([[float(i), 0.0] for i in range(10)])
    labels = dbscan(pts, eps=1.1, min_pts=2)
    assert set(labels) == {0}


# -- search configuration -----------------------------------------------------


def test_search_config_cell_and_eps():
    cfg = SearchConfig(coarse=(20, 20))
    dphi, dtheta = cfg.cell()
    assert abs(dphi - math.pi / 21) < 1e-12
    assert abs(cfg.epsilon() - 2 * math.hypot(dphi, dtheta)) < 1e-12
    assert SearchConfig(eps=0.5).epsilon() == 0.5
    with pytest.raises(ValueError):
        SearchConfig(coarse=(1, 5))
    with pytest.raises(ValueError):
        SearchConfig(eps=-1.0)


def test_search_config_escalation_levels():
    cfg = SearchConfig(coarse=(12, 12), escalation=(((32, 32), (7, 7), 2),))
    lvl = cfg.at_level(1)
    assert lvl.coarse == (32, 32) and lvl.refine == (7, 7)
    assert lvl.refine_radius == 2
    assert cfg.at_level(0) is cfg


# -- heuristic starts and the stochastic walk ---------------------------------


@pytest.mark.parametrize(
    "strategy", ["random", "near-unit", "degenerate-perturb", "forward-induced"]
)
def test_heuristic_starts_valid_and_deterministic(g48, strategy):
    a = heuristic_starts(g48.graph, strategy, seed=3, count=2)
    b = heuristic_starts(g48.graph, strategy, seed=3, count=2)
    assert len(a) == 2
    for lam1, lam2 in zip(a, b):
        assert lam1.values == lam2.values
        lam1.check_graph(g48.graph)
        assert all(v > 0 for v in lam1.values.values())


def test_near_unit_is_near_unit(g48):
    (lam,) = heuristic_starts(g48.graph, "near-unit", seed=0, count=1)
    assert all(abs(v - 1.0) < 1e-3 for v in lam.values.values())


def test_walk_zero_steps_is_identity(g48, g48_published):
    lam = g48_published["G_48_start28"].lengths
    out = stochastic_walk(g48.graph, lam, steps=0, seed=0, known_complex=48)
    assert out.values == lam.values


# -- curve CSV and sphere intersections ---------------------------------------


def test_curve_to_csv_format():
    comp = CurveComponent(
        points=np.array([[0.0, 1.0, 2.0], [3.0, 4.0, 5.0]]), closed=True
    )
    csv = curve_to_csv([comp])
    lines = csv.strip().splitlines()
    assert lines[0] == "x,y,z,component"
    assert lines[1].startswith("0") and lines[1].endswith(",0")
    assert len(lines) == 3


def test_sphere_intersections_circle():
    # unit circle in the z=0 plane against a sphere centered on the x-axis
    t = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    circle = np.c_[np.cos(t), np.sin(t), np.zeros_like(t)]
    # sphere center (1,0,0) radius 1: crossings at t = ±pi/3
    assert sphere_intersections(circle, np.array([1.0, 0, 0]), 1.0, closed=True) == 2
    # radius large enough to contain the whole circle: no crossing
    assert sphere_intersections(circle, np.array([0.0, 0, 0]), 3.0, closed=True) == 0


def test_sphere_intersections_open_polyline():
    seg = np.array([[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    assert sphere_intersections(seg, np.array([0.0, 0, 0]), 1.0) == 1
