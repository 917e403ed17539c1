"""Draw one uniform spanning tree by iterating effective resistances.

Each round picks the lowest-numbered remaining edge, computes its effective
resistance r (= the probability a uniform spanning tree contains it), then
contracts it with probability r or deletes it otherwise. Multiplying the
per-step probabilities of the realized decisions gives exactly
1 / (number of spanning trees), which is the uniformity certificate: every
complete run, whatever its decisions, has the same probability.
"""

from collections import Counter

from treescore import (
    count_spanning_trees,
    make_grid,
    sample_tree_resistance,
    sample_tree_wilson,
)


def main():
    g = make_grid(3, 3)
    total = count_spanning_trees(g).value
    print(f"3x3 grid: {total} spanning trees\n")

    trace = sample_tree_resistance(g, seed=7)
    print("step  edge  resistance      decision     prob of decision")
    for s in trace.steps:
        forced = "  (forced)" if s.forced else ""
        print(
            f"{s.index:4d}  {s.edge:4d}  {str(s.resistance):>12}  "
            f"{s.action:>10}  {str(s.probability):>12}{forced}"
        )
    print(f"\nsampled tree: edges {sorted(trace.tree)}")
    prod = trace.p_product()
    print(f"product of step probabilities = {prod}  (1/{total} expected)")
    assert prod == 1 / total or prod.denominator == total

    print("\n2000 quick draws vs the loop-erased-walk oracle (2x2 grid, 4 trees):")
    h = make_grid(2, 2)
    mine = Counter(frozenset(sample_tree_resistance(h, seed=i).tree) for i in range(2000))
    oracle = Counter(sample_tree_wilson(h, seed=i) for i in range(2000))
    for tree in sorted(mine, key=sorted):
        print(f"  tree {sorted(tree)}: resistance sampler {mine[tree]:4d}, oracle {oracle[tree]:4d}")


if __name__ == "__main__":
    main()
