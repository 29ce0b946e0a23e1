#!/usr/bin/env python3
"""SEF versus SVF L1 error over time for advection (n=5, M=3).

Shows the short window of consistency of the shot-noise runs. Writes
``sef_window.csv`` with one error column per seed.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from vqivp import EngineMode, Problem, build_domain, evolve_vqa, exact_advection, l1_norm
from vqivp.cli import write_csv


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", default="results/sef")
    ap.add_argument("--shots", type=float, default=1e8)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("-n", type=int, default=5)
    args = ap.parse_args(argv)

    p = Problem.advection()
    d = build_domain(args.n, 0.0, 1.0, 0.5, 1.0)

    def errors(traj):
        return np.array([l1_norm(s["u"] - exact_advection(p, d.x, t), d.dx)
                         for t, s in zip(traj.times, traj.snapshots)])

    cols = {"svf": errors(evolve_vqa(p, d, 3))}
    for seed in args.seeds:
        cols[f"sef_seed{seed}"] = errors(evolve_vqa(p, d, 3, EngineMode.sef(int(args.shots), seed)))
        print(f"seed {seed}: final L1 {cols[f'sef_seed{seed}'][-1]:.4g} (svf {cols['svf'][-1]:.4g})")
    times = [d.time(k) for k in range(d.n_steps + 1)]
    write_csv(Path(args.out) / "sef_window.csv", ["t", *cols],
              ([t] + [float(c[k]) for c in cols.values()] for k, t in enumerate(times)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
