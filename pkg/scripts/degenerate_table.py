"""Closed forms on the degenerate locus vs. the general contour engine.

    python scripts/degenerate_table.py --g 2
"""

import argparse
import itertools

import numpy as np

from hyperdensity.config import embed_degenerate
from hyperdensity.degenerate import closed_form
from hyperdensity.periods import Basis, reduced_vector

GRID = (-0.9, -0.5, 0.0, 0.3, 0.5, 0.8)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--g", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-12)
    args = p.parse_args()

    print(f"{'b':>28}  {'u (closed)':>40}  {'dev M':>9} {'dev v':>9} {'dev u':>9}")
    for b in itertools.combinations(GRID, args.g):
        cf = closed_form(b)
        cfg = embed_degenerate(b)
        pf = reduced_vector(cfg, args.tol, basis=Basis.partial_fraction(b))
        u = reduced_vector(cfg, args.tol).u
        dm = np.max(np.abs(pf.M - cf.M))
        dv = np.max(np.abs(pf.v - cf.v))
        du = np.max(np.abs(u - cf.u))
        print(f"{str(b):>28}  {np.array2string(cf.u, precision=10):>40}  {dm:9.1e} {dv:9.1e} {du:9.1e}")


if __name__ == "__main__":
    main()
