"""Seeded sweeps of the entropy, lattice and sumset inequalities; prints the tightest slack seen."""

import argparse
import random

from projent.entropy import (
    box_certificate,
    check_box_certificate,
    random_distribution,
    verify_gen2,
    verify_madiman_tetali,
    verify_shearer,
)
from projent.families import SetFamily, all_subsets_of_size
from projent.sumsets import (
    marking_algorithm,
    random_integer_instance,
    verify_additive_cover,
    verify_sumset_cover,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    worst = {"shearer": 1e9, "mt-lower": 1e9, "mt-upper": 1e9, "gen2": 1e9, "box": 1e9}
    for _ in range(args.trials):
        n = rng.randint(2, 5)
        d = random_distribution(rng, n)
        cover = all_subsets_of_size(n, rng.randint(1, n))
        k = sum(1 for a in cover.members if a & 1)
        worst["shearer"] = min(worst["shearer"], verify_shearer(d, cover, k).slack)
        lo, up = verify_madiman_tetali(d, cover, k)
        worst["mt-lower"] = min(worst["mt-lower"], lo.slack)
        worst["mt-upper"] = min(worst["mt-upper"], up.slack)
        fam = SetFamily(n, tuple(rng.randrange(1, 1 << n) for _ in range(rng.randint(1, 6))))
        worst["gen2"] = min(worst["gen2"], verify_gen2(d, fam).slack)
        for _, l, u in check_box_certificate(d, box_certificate(d)):
            worst["box"] = min(worst["box"], l.slack, u.slack)
    print("entropy, minimum slack in bits")
    for name, v in worst.items():
        print(f"    {name:9s} {v: .3e}")

    ratios, gaps, marks_tight = [], [], 0
    for _ in range(args.trials):
        n = rng.randint(2, 4)
        inst = random_integer_instance(rng, n, 4, 0, 20)
        cover = all_subsets_of_size(n, n - 1)
        k = n - 1
        r = verify_sumset_cover(inst, cover, k)
        ratios.append(r.rhs / r.lhs)
        add = verify_additive_cover(inst, cover, k)
        gaps.append(add.lhs - add.rhs)
        w = marking_algorithm(inst, cover, k)
        top, mid, bottom = w.chain()
        marks_tight += mid == bottom
    print("sumsets over Z")
    print(f"    cover ratio rhs/lhs   min {min(ratios):.4f}")
    print(f"    additive cover gap    min {min(gaps)}")
    print(f"    marking chain tight   {marks_tight}/{args.trials}")


if __name__ == "__main__":
    main()
