"""The exact tree-weighted distribution over balanced 2-partitions.

Enumerating all balanced connected 2-partitions of the 4x4 grid (there are
exactly 70) and weighting each by its spanning-tree score gives the target
distribution in closed form — every probability is an exact rational. The
table below shows the strong anti-correlation between a plan's cut size
(discrete perimeter) and its probability.
"""

from collections import defaultdict
from fractions import Fraction

from treescore import make_grid, spanning_tree_distribution


def main():
    g = make_grid(4, 4)
    table = spanning_tree_distribution(g, 2)
    print(f"balanced connected 2-partitions of the 4x4 grid: {len(table.entries)}")
    print(f"graph spanning trees: {table.graph_trees}, total score: {table.total_score}")
    print(f"normalizer beta = {table.beta}\n")

    ranked = sorted(table.entries, key=lambda e: e.probability, reverse=True)
    print("most likely plans:")
    for e in ranked[:3]:
        print(f"  cut {e.cut_size:2d}  score {e.score:5d}  Pr = {e.probability}")
    print("least likely plans:")
    for e in ranked[-3:]:
        print(f"  cut {e.cut_size:2d}  score {e.score:5d}  Pr = {e.probability}")

    by_cut = defaultdict(Fraction)
    for e in table.entries:
        by_cut[e.cut_size] += e.probability
    print("\ntotal probability by cut size:")
    for cut in sorted(by_cut):
        share = by_cut[cut]
        print(f"  cut {cut:2d}: {float(share):7.4f}  ({share})")

    assert sum(e.probability for e in table.entries) == 1
    print("\nprobabilities sum to 1 exactly.")


if __name__ == "__main__":
    main()
