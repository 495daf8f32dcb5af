"""Exhaustive box-conjecture search over the bundled catalog; writes per-run summaries as JSON."""

import argparse
import json
import time

from projent.groups import load_catalog
from projent.search import SearchConfig, run_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--set-size-max", type=int, default=3)
    ap.add_argument("--out", default="search_summary.json")
    args = ap.parse_args()

    catalog = load_catalog()
    results = {}
    for which in ("6.1", "6.2"):
        cfg = SearchConfig(which, catalog, n=args.n, set_size_max=args.set_size_max)
        start = time.perf_counter()
        records = list(run_search(cfg))
        summary = records[-1]
        summary["seconds"] = round(time.perf_counter() - start, 1)
        summary["first_infeasible"] = [r["instance"] for r in records[:-1] if not r["feasible"]][:5]
        results[which] = summary
        print(f"{which}: {summary['instances']} instances, {summary['infeasible']} infeasible, "
              f"{summary['seconds']} s")
        for name, counts in sorted(summary["by_group"].items()):
            if counts["infeasible"]:
                print(f"    {name:10s} {counts['infeasible']:5d} infeasible")
    with open(args.out, "w") as fh:
        json.dump(results, fh, indent=2, sort_keys=True)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
