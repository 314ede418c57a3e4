"""Empirical density table: how close the nearest torsion-type tuple is as q_max grows.

    python scripts/density_experiment.py --g 1 --grid 9 --qmax 10 50 250 --out density.json
"""

import argparse
import json
import logging

from hyperdensity.torsion import density_scan


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--qmax", type=int, nargs="+", default=[10, 50, 250])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--degenerate", action="store_true")
    p.add_argument("--out")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    runs = {}
    for q in args.qmax:
        rep = density_scan(args.g, args.grid, q, degenerate=args.degenerate, workers=args.workers)
        runs[q] = rep
        logging.info(
            "q_max=%4d  success %5.1f%%  max distance %.3e  max residual %.1e",
            q, 100 * rep["success_rate"], rep["max_distance"], rep["max_residual"],
        )

    print(f"\n{'a0':>44} " + " ".join(f"{'q<=' + str(q):>11}" for q in args.qmax))
    for k, pt in enumerate(runs[args.qmax[0]]["points"]):
        row = []
        for q in args.qmax:
            rec = runs[q]["points"][k]
            row.append(f"{rec['distance']:11.3e}" if rec["ok"] else f"{rec['error']['code']:>11}")
        a0 = ", ".join(f"{x:+.4f}" for x in pt["a0"])
        print(f"{a0:>44} " + " ".join(row))

    if args.out:
        with open(args.out, "w") as fh:
            json.dump({str(q): r for q, r in runs.items()}, fh, indent=1)


if __name__ == "__main__":
    main()
