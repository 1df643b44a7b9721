"""Write the standard plot-data CSVs into one directory.

Produces hazard curves for the four shape exemplars, survival curves for a
parallel-system pair ordered by beta sums, and Lorenz curves for two
parallel systems that differ only in the inner shape. Plot them with any
tool; nothing here depends on a plotting library.

Usage::

    python scripts/export_plot_data.py [--outdir plotdata]
"""

import argparse
import pathlib
import sys

from enhorder.cli import main as cli

JOBS = {
    "hazard_curves.csv": ["hazard-curves"],
    "ordering_curves.csv": ["ordering-curves", "max(enh:1.5,1,0.3;enh:1.5,1,0.4)", "max(enh:1.5,1,0.6;enh:1.5,1,0.9)"],
    "lorenz_curves.csv": ["lorenz-curves", "max(enh:0.8,1,0.7;enh:0.8,1,1.2)", "max(enh:2.4,1,0.9;enh:2.4,1,1.0)"],
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="plotdata")
    ap.add_argument("--grid-points", type=int, default=256)
    args = ap.parse_args(argv)

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, job in JOBS.items():
        code = cli(["plotdata", *job, "--grid-points", str(args.grid_points), "--out", str(outdir / name)])
        if code:
            return code
        print(outdir / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
