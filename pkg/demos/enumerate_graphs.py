"""Enumerate minimally rigid graphs and classify their last Henneberg move.

Graphs with a degree-d vertex (H1-last) have trivially doubled embedding
counts; the interesting maximizers are H2-last.  In 3-space with 7
vertices there are 26 graphs, 6 of them H2-last -- G_48 among them.
"""

from rigidembed.graphs import classify_last_move, enumerate_minimally_rigid

for d, rng in ((2, range(3, 8)), (3, range(4, 8))):
    print(f"dimension {d}:")
    for n in rng:
        graphs = enumerate_minimally_rigid(n, d)
        tally = {"H1-last": 0, "H2-last": 0}
        for G in graphs:
            tally[classify_last_move(G, d)] += 1
        print(f"  n = {n}: {len(graphs):3d} graphs "
              f"({tally['H1-last']} H1-last, {tally['H2-last']} H2-last)")
    print()
