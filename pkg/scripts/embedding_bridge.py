"""How often the lexicographic embedding of A+C meets the projection bounds one might expect.

For random integer A, B_1..B_k and C inside B_1+...+B_k, build S' (lexicographically
least decompositions of A+C in B_1 x ... x B_k x A) and record whether
|S'_[k]| <= |C| and |S'_{i,k+1}| <= |A+B_i|. The inequality itself is checked by
direct counting in every trial.
"""

import argparse
import random
from itertools import product

from projent.sumsets import verify_gymr


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    head_fail = pair_fail = ineq_fail = 0
    example = None
    for _ in range(args.trials):
        k = rng.randint(1, 3)
        a = [rng.randint(0, 20) for _ in range(rng.randint(1, 5))]
        bs = [[rng.randint(0, 20) for _ in range(rng.randint(1, 5))] for _ in range(k)]
        total = sorted({sum(t) for t in product(*bs)})
        c = rng.sample(total, rng.randint(1, min(5, len(total))))
        r = verify_gymr(a, bs, c)
        if not r.bridge["head_within_C"]:
            head_fail += 1
            example = example or (a, bs, c, r.bridge)
        pair_fail += not r.bridge["pairs_within_A_plus_B"]
        ineq_fail += not r.holds
    print(f"trials {args.trials}")
    print(f"    |S'_[k]| > |C|           {head_fail}")
    print(f"    |S'_(i,k+1)| > |A+B_i|   {pair_fail}")
    print(f"    inequality violated      {ineq_fail}")
    if example:
        print(f"    e.g. A={example[0]} B={example[1]} C={example[2]}: {example[3]}")


if __name__ == "__main__":
    main()
