#!/usr/bin/env python3
"""Convergence studies for all three equations, classical and SVF.

Writes one ``convergence.csv`` per (equation, method) under ``--out`` and
prints the window-averaged factors. Expect about 10 minutes on one core.
"""

import argparse
import sys
from pathlib import Path

from vqivp.cli import main as cli

RUNS = [
    ("advection", "classical", ["3", "4", "5", "6"]),
    ("advection", "svf", ["3", "4", "5", "6"]),
    ("wave", "classical", ["4", "5", "6"]),
    ("wave", "svf", ["4", "5", "6"]),
    ("burgers", "classical", ["4", "5", "6"]),
    ("burgers", "svf", ["4", "5", "6"]),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/convergence")
    ap.add_argument("--only", choices=["advection", "wave", "burgers"])
    args = ap.parse_args(argv)
    status = 0
    for eq, method, ns in RUNS:
        if args.only and eq != args.only:
            continue
        out = Path(args.out) / f"{eq}_{method}"
        print(f"== {eq} / {method}")
        rc = cli(["converge", "--equation", eq, "--method", method, "--n-list", *ns, "-o", str(out)])
        status = status or rc
    return status


if __name__ == "__main__":
    sys.exit(main())
