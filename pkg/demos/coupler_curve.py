"""Trace the coupler curve that drives the G_48 maximization.

Removing the edge uc from the framework leaves a one-dimensional motion;
the trajectory of vertex c (the coupler curve) lives on the sphere of
radius lambda_cw around w.  Counting its intersections with the sphere
of radius lambda_uc around u predicts how many embeddings a new uc
length will realize: the published adjustment moves the count 28 -> 32.
"""

import numpy as np

from rigidembed.catalog import get_entry, get_published
from rigidembed.sampler import (
    CouplerSubgraph,
    _curve_system,
    sphere_intersections,
    trace_coupler_curve,
)

entry = get_entry("G_48")
base = get_published("G_48", "G_48_start28").lengths
adjusted = get_published("G_48", "G_48_adj32").lengths
sg = CouplerSubgraph(2, 3, 1, 7, 6)

print(f"tracing the coupler curve of c={sg.c} (edge u{sg.u}-c{sg.c} removed) ...")
components = trace_coupler_curve(entry.graph, base, sg, steps=6000, seeds=0, seed=0)
closed = sum(c.closed for c in components)
print(f"  {len(components)} components ({closed} closed), "
      f"{sum(len(c.points) for c in components)} points")

shape, _ = _curve_system(entry.graph, base, sg)


def intersections(lengths):
    lam2 = {k: complex(v * v) for k, v in lengths.values.items()}
    coords, _ = shape.pinned_coords(lam2)
    center = coords[sg.u].real
    radius = lengths[(sg.u, sg.c)]
    return sum(
        sphere_intersections(c.points, center, radius, c.closed)
        for c in components
    )


print(f"\nintersections with the u-sphere at the base uc length:     "
      f"{intersections(base)}  (28 real embeddings)")
print(f"intersections with the u-sphere at the adjusted uc length: "
      f"{intersections(adjusted)}  (32 real embeddings)")

out = "coupler_curve.csv"
from rigidembed.sampler import curve_to_csv

with open(out, "w") as fh:
    fh.write(curve_to_csv(components))
print(f"\ncurve written to {out}")
