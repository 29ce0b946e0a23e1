#!/usr/bin/env python3
"""Average cost evaluations per step versus mode count and CFL (advection SVF, n=6).

Writes ``evalcount.csv`` and prints a least-squares line per CFL value.
The M=31 runs dominate: expect 10-15 minutes on one core.
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from vqivp.cli import main as cli


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/evalcount")
    ap.add_argument("-n", default="6")
    ap.add_argument("--m-list", nargs="+", default=["2", "3", "4", "5"])
    ap.add_argument("--cfl-list", nargs="+", default=["0.25", "0.5", "1.0"])
    args = ap.parse_args(argv)
    rc = cli(["evalcount", "--equation", "advection", "--method", "svf", "-n", args.n,
              "--m-list", *args.m_list, "--cfl-list", *args.cfl_list, "-o", args.out, "-v"])
    if rc:
        return rc
    with open(Path(args.out) / "evalcount.csv", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    for cfl in sorted({r["cfl"] for r in rows}, key=float):
        sel = [r for r in rows if r["cfl"] == cfl]
        M = np.array([float(r["M"]) for r in sel])
        y = np.array([float(r["avg_evals_per_step"]) for r in sel])
        if len(M) > 1:
            slope, icpt = np.polyfit(M, y, 1)
            print(f"cfl {float(cfl):g}: evals/step ~ {slope:.1f} M + {icpt:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
