"""Why the degree bounds matter: two families where the guarantees flip.

Family 1 glues long 2xN ladders onto a high-degree outer face. A plan with
only 3 cut edges ends up *less* likely than one with 2N cut edges — the
compact-beats-stringy guarantee fails once a face degree is unbounded. The
two scores share an astronomically large common factor, so the comparison is
done on the cancelled ratio.

Family 2 chains triangles through a single hub vertex of unbounded degree.
The effective resistance of the next candidate edge decays like 2/(i+2), so
decision probabilities are not bounded below by any constant and the
prefix-product envelope argument collapses. The decay claim is verified
step by step, exactly in the early range and in guarded floats beyond.
"""

from treescore import (
    count_spanning_trees,
    floor_pow_4_3,
    grid_tree_number,
    make_grid,
    ratio_bound_threshold,
    resistance_fixed_point,
    unbounded_degree_log_bounds,
    unbounded_degree_resistances,
    unbounded_face_scores,
)


def main():
    print("2xN ladder tree counts, recurrence A(n) = 4A(n-1) - A(n-2):")
    for n in range(1, 9):
        counted = count_spanning_trees(make_grid(n, 2)).value
        print(f"  n = {n}: recurrence {grid_tree_number(n):6d}, matrix-tree {counted:6d}")

    print("\nFamily 1 — unbounded face degree (even n):")
    print("   n   cuts(few vs many)   score ratio few/many   <= 1/(n-1)?")
    for n in (2, 4, 6, 10, 20):
        fam = unbounded_face_scores(n)
        print(
            f"  {n:2d}   {fam.cut_size1} vs {fam.cut_size2:2d}            "
            f"{str(fam.score_ratio):>18}   {fam.ratio_bound_ok}"
        )
    print("  The few-cut plan is crushed despite its tiny perimeter.")

    print("\nFamily 2 — unbounded vertex degree, n = 100:")
    n = 100
    chain = unbounded_degree_resistances(n, 2 * floor_pow_4_3(n))
    print(f"  iterations checked: {len(chain.values) - 1}, bound holds: {chain.holds}")
    for i in (1, 2, 5, 10, 50, 200, 928):
        bound = 2 / (min(i, 5) + 2)
        print(f"  r_{i:<4d} = {chain.values[i]:.6f}   <= 2/(min(i,5)+2) = {bound:.6f}")
    print(f"  limit value: {resistance_fixed_point(n):.6f} (fixed point of the recurrence)")

    lb = unbounded_degree_log_bounds(n)
    print(
        f"\n  Plans compared: {lb.cut_size1} cut edges vs {lb.cut_size2}. The closed-form"
    )
    print(
        f"  log2 bound on share(few)/share(many) is {lb.log2_ratio_upper:+.1f} at "
        f"n = {n} — still slack —"
    )
    thr = ratio_bound_threshold()
    big = unbounded_degree_log_bounds(10**6)
    print(
        f"  but it decreases like -2n, turns negative at n = {thr}, and is"
    )
    print(
        f"  {big.log2_ratio_upper:+.0f} by n = 10^6. With an unbounded vertex degree "
        "the few-cut plan"
    )
    print("  eventually loses: the bounded-degree hypothesis is necessary.")


if __name__ == "__main__":
    main()
