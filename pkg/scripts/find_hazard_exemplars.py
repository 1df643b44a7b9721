"""Map the hazard-shape regions of the ENH family over (alpha, beta).

The scale lambda does not change the shape, so it is fixed at 1. Prints the
label counts, one representative per shape (the draw closest to the centre
of its region in log coordinates), and optionally writes the whole
(alpha, beta, shape) table as CSV for plotting.

Usage::

    python scripts/find_hazard_exemplars.py [--n 60] [--csv shapes.csv]
"""

import argparse
import collections
import csv
import sys

import numpy as np

from enhorder.dist import ENHParams, classify_hazard_shape


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=60, help="grid points per axis")
    ap.add_argument("--lo", type=float, default=0.1)
    ap.add_argument("--hi", type=float, default=10.0)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args(argv)

    axis = np.geomspace(args.lo, args.hi, args.n)
    rows = []
    for a in axis:
        for b in axis:
            rows.append((float(a), float(b), classify_hazard_shape(ENHParams(a, 1.0, b)).value))

    counts = collections.Counter(r[2] for r in rows)
    for shape, c in sorted(counts.items()):
        pts = np.log([(a, b) for a, b, s in rows if s == shape])
        centre = pts.mean(axis=0)
        a, b = np.exp(pts[np.argmin(((pts - centre) ** 2).sum(axis=1))])
        print(f"{shape:12s} {c:6d} cells   exemplar enh:{a:.3g},1,{b:.3g}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "beta", "shape"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
