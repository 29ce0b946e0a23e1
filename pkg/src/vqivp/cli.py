"""Batch command-line front end.

Subcommands::

    vqivp run        one evolution -> snapshots.csv, stats.csv
    vqivp converge   resolution hierarchy -> convergence.csv
    vqivp evalcount  cost evaluations per step vs M and CFL -> evalcount.csv
    vqivp heatmap    snapshots.csv -> gnuplot "x t value" blocks

Settings come from ``--config FILE`` (``key = value`` lines, ``#`` comments)
and are overridden by command-line flags. ``VQIVP_RNG_SEED`` overrides the
seed from either source. Exit codes: 0 success, 2 configuration error,
3 numerical abort.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import analysis
from .ansatz import ModeOverflowError, default_modes
from .classical import InstabilityError, SolverError
from .engine import EngineMode
from .evolution import StepError, evolve
from .grid import ConfigurationError, build_domain
from .optimizer import OptimizerAbort, SimplexOptions
from .problems import EQUATIONS, Problem, Trajectory

log = logging.getLogger("vqivp")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
METHODS = ("classical", "svf", "sef")
MODE_CAPS = {"advection": 3, "wave": 7, "burgers": 7}
SEED_ENV = "VQIVP_RNG_SEED"


@dataclass
class RunConfig:
    equation: str = "advection"
    method: str = "classical"
    n_qubits: int = 5
    modes: Optional[int] = None
    cfl: float = 0.5
    t_final: float = 1.0
    x_min: float = 0.0
    x_max: float = 1.0
    v: float = 1.0
    nu: float = 0.0125
    x0: float = 0.5
    sigma: float = 0.15
    shots: Optional[int] = None
    rng_seed: int = 0
    output: str = "."
    stride: int = 1
    max_evals: Optional[int] = None
    f_tol: float = 1e-9
    x_tol: float = 1e-8
    init_step: float = 0.05
    n_list: List[int] = field(default_factory=lambda: [3, 4, 5, 6])
    m_list: List[int] = field(default_factory=lambda: [2, 3, 4, 5])
    cfl_list: List[float] = field(default_factory=lambda: [0.25, 0.5, 1.0])
    reference: str = "auto"

    def problem(self) -> Problem:
        return Problem(self.equation, v=self.v, nu=self.nu, x0=self.x0, sigma=self.sigma)

    def modes_for(self, n_qubits: int) -> int:
        if self.modes is not None:
            return self.modes
        return default_modes(n_qubits, MODE_CAPS[self.equation])

    def engine_mode(self) -> EngineMode:
        if self.method == "sef":
            return EngineMode.sef(self.shots, self.rng_seed)
        return EngineMode.svf()

    def simplex(self) -> SimplexOptions:
        return SimplexOptions(f_tol=self.f_tol, x_tol=self.x_tol, max_evals=self.max_evals,
                              init_step=self.init_step)

    def domain(self, n_qubits: Optional[int] = None, cfl: Optional[float] = None):
        return build_domain(self.n_qubits if n_qubits is None else n_qubits, self.x_min, self.x_max,
                            self.cfl if cfl is None else cfl, self.t_final)

    def validate(self, n_values: Sequence[int] = (), cfl_values: Sequence[float] = ()) -> None:
        if self.equation not in EQUATIONS:
            raise ConfigurationError(f"equation must be one of {EQUATIONS}")
        if self.method not in METHODS:
            raise ConfigurationError(f"method must be one of {METHODS}")
        if self.method == "sef" and (self.shots is None or self.shots < 1):
            raise ConfigurationError("sef runs need shots >= 1")
        if self.stride < 1:
            raise ConfigurationError("stride must be >= 1")
        if self.reference not in ("auto", "exact", "bandlimited"):
            raise ConfigurationError("reference must be auto, exact or bandlimited")
        try:
            self.problem()
            self.simplex()
        except ValueError as err:
            raise ConfigurationError(str(err)) from err
        for n in n_values or [self.n_qubits]:
            for cfl in cfl_values or [self.cfl]:
                d = self.domain(n, cfl)
                if self.method != "classical":
                    M = self.modes_for(n)
                    if M < 0 or 2 * M + 1 > d.N:
                        raise ModeOverflowError(f"2M+1 = {2 * M + 1} modes exceed N = {d.N}")


# -- config parsing ----------------------------------------------------------

_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_LIST_TYPES = {"n_list": int, "m_list": int, "cfl_list": float}
_SCALAR_TYPES = {
    "n_qubits": int, "modes": int, "shots": int, "rng_seed": int, "stride": int, "max_evals": int,
    "cfl": float, "t_final": float, "x_min": float, "x_max": float, "v": float, "nu": float,
    "x0": float, "sigma": float, "f_tol": float, "x_tol": float, "init_step": float,
}


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key in _LIST_TYPES:
        return [_LIST_TYPES[key](_num(tok)) for tok in raw.replace(",", " ").split()]
    if key in _SCALAR_TYPES:
        if raw.lower() in ("", "none"):
            return None
        return _SCALAR_TYPES[key](_num(raw)) if _SCALAR_TYPES[key] is int else float(raw)
    return raw


def _num(tok: str):
    """Accept ``1e8`` for integer settings such as shots."""
    val = float(tok)
    return int(val) if val.is_integer() else val


def read_config_file(path: str) -> Dict[str, object]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise ConfigurationError(f"{path}:{lineno}: unknown setting {key!r}")
        try:
            out[key] = _convert(key, val)
        except ValueError as err:
            raise ConfigurationError(f"{path}:{lineno}: bad value for {key}: {val!r}") from err
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values: Dict[str, object] = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for name in _FIELDS:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    seed = os.environ.get(SEED_ENV)
    if seed:
        try:
            values["rng_seed"] = int(seed)
        except ValueError as err:
            raise ConfigurationError(f"{SEED_ENV} must be an integer") from err
    return RunConfig(**values)


# -- CSV output --------------------------------------------------------------

def fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if v != v else f"{v:.17g}"
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_snapshots(traj: Trajectory, path: Path) -> None:
    x = traj.domain.x

    def rows():
        for step, t, snap in zip(traj.steps, traj.times, traj.snapshots):
            for name in traj.field_names:
                vals = snap[name]
                for i in range(traj.domain.N):
                    yield step, float(t), i, float(x[i]), name, float(vals[i])

    write_csv(path, ["step", "t", "i", "x", "field", "value"], rows())


def write_stats(traj: Trajectory, path: Path) -> None:
    write_csv(path, ["step", "t", "minimizations", "cost_evals", "best_cost", "wall_ms"],
              ((s.step, float(s.t), s.minimizations, s.cost_evals, float(s.best_cost), float(s.wall_ms))
               for s in traj.stats))


# -- commands ----------------------------------------------------------------

def _run_one(cfg: RunConfig, n_qubits: int, cfl: Optional[float] = None) -> Trajectory:
    d = cfg.domain(n_qubits, cfl)
    M = None if cfg.method == "classical" else cfg.modes_for(n_qubits)
    log.info("%s/%s n=%d N=%d M=%s cfl=%g steps=%d", cfg.equation, cfg.method, n_qubits, d.N, M,
             d.cfl, d.n_steps)
    return evolve(cfg.problem(), d, cfg.method, M, cfg.engine_mode(), cfg.simplex(), stride=cfg.stride)


def cmd_run(cfg: RunConfig) -> int:
    cfg.validate()
    traj = _run_one(cfg, cfg.n_qubits)
    out = Path(cfg.output)
    write_snapshots(traj, out / "snapshots.csv")
    write_stats(traj, out / "stats.csv")
    return EXIT_OK


def _reference(cfg: RunConfig, traj: Trajectory, n: int):
    problem = cfg.problem()
    ref = cfg.reference
    if ref == "auto":
        ref = "bandlimited" if (cfg.equation == "advection" and cfg.method != "classical") else "exact"
    if ref == "bandlimited":
        if cfg.equation != "advection":
            raise ConfigurationError("band-limited reference is only available for advection")
        M = cfg.modes_for(n)
        return lambda x, t: analysis.exact_advection_bandlimited(problem, traj.domain, M, t)
    return analysis.exact_fn(problem, traj.domain)


def cmd_converge(cfg: RunConfig) -> int:
    ns = sorted(cfg.n_list)
    self_conv = cfg.equation == "burgers"
    if len(ns) < (3 if self_conv else 2):
        raise ConfigurationError("convergence needs >= 2 resolutions (self-convergence >= 3)")
    if any(b != a + 1 for a, b in zip(ns, ns[1:])):
        raise ConfigurationError("resolutions must be consecutive")
    cfg.validate(n_values=ns)
    trajs = {n: _run_one(cfg, n) for n in ns}
    fname = cfg.problem().observable
    if self_conv:
        rep = analysis.self_convergence_factors(trajs, fname)
        header = ["t"]
        cols = []
        for a in sorted(rep.num):
            header += [f"num_n{a}", f"den_n{a}", f"sc_{a}_{a + 1}_{a + 2}"]
            cols += [rep.num[a], rep.den[a], rep.ratios[(a, a + 1, a + 2)]]
    else:
        refs = {n: _reference(cfg, trajs[n], n) for n in ns}
        rep = analysis.convergence_factors(trajs, refs, fname)
        header = ["t"] + [f"l1_n{n}" for n in ns] + [f"ratio_{a}_{b}" for a, b in zip(ns, ns[1:])]
        cols = [rep.errors[n] for n in ns] + [rep.ratios[(a, b)] for a, b in zip(ns, ns[1:])]
    rows = ([float(t)] + [float(c[k]) for c in cols] for k, t in enumerate(rep.times))
    write_csv(Path(cfg.output) / "convergence.csv", header, rows)
    for line in rep.summary():
        print(line)
    return EXIT_OK


def cmd_evalcount(cfg: RunConfig) -> int:
    if cfg.method == "classical":
        raise ConfigurationError("evalcount needs a variational method (svf or sef)")
    if not cfg.m_list or not cfg.cfl_list:
        raise ConfigurationError("m_list and cfl_list must be non-empty")
    if any(m < 0 for m in cfg.m_list):
        raise ConfigurationError("m values must be >= 0")
    rows = []
    for m in cfg.m_list:
        M = 2**m - 1
        sub = dataclasses.replace(cfg, modes=M)
        sub.validate(cfl_values=cfg.cfl_list)
        for cfl in cfg.cfl_list:
            traj = _run_one(sub, cfg.n_qubits, cfl)
            rows.append((m, M, float(cfl), float(traj.avg_evals_per_step)))
            log.info("m=%d M=%d cfl=%g avg evals/step %.1f", m, M, cfl, rows[-1][-1])
    write_csv(Path(cfg.output) / "evalcount.csv", ["m", "M", "cfl", "avg_evals_per_step"], rows)
    return EXIT_OK


def cmd_heatmap(snapshots: str, field_name: str, out: str) -> int:
    """Write ``x t value`` blocks (one per time level) for ``splot ... with pm3d``."""
    blocks: Dict[float, List[tuple]] = {}
    with open(snapshots, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            if row["field"] != field_name:
                continue
            blocks.setdefault(float(row["t"]), []).append((float(row["x"]), float(row["value"])))
    if not blocks:
        raise ConfigurationError(f"no rows for field {field_name!r} in {snapshots}")
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# x t value\n")
        for t in sorted(blocks):
            for x, val in sorted(blocks[t]):
                fh.write(f"{fmt(x)} {fmt(t)} {fmt(val)}\n")
            fh.write("\n")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--equation", choices=EQUATIONS)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("-n", "--n-qubits", dest="n_qubits", type=int)
    p.add_argument("-M", "--modes", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--x-min", dest="x_min", type=float)
    p.add_argument("--x-max", dest="x_max", type=float)
    p.add_argument("--v", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--x0", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("-T", "--shots", type=lambda s: int(_num(s)))
    p.add_argument("--rng-seed", dest="rng_seed", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--stride", type=int)
    p.add_argument("--max-evals", dest="max_evals", type=int)
    p.add_argument("--f-tol", dest="f_tol", type=float)
    p.add_argument("--x-tol", dest="x_tol", type=float)
    p.add_argument("--init-step", dest="init_step", type=float)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="vqivp", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common], help="run one evolution")
    conv = sub.add_parser("converge", parents=[common], help="run a resolution hierarchy")
    conv.add_argument("--n-list", dest="n_list", type=int, nargs="+")
    conv.add_argument("--reference", choices=("auto", "exact", "bandlimited"))
    ev = sub.add_parser("evalcount", parents=[common], help="cost evaluations per step vs M, CFL")
    ev.add_argument("--m-list", dest="m_list", type=int, nargs="+")
    ev.add_argument("--cfl-list", dest="cfl_list", type=float, nargs="+")
    hm = sub.add_parser("heatmap", help="gnuplot space-time layout from snapshots.csv")
    hm.add_argument("snapshots")
    hm.add_argument("--field", default="u")
    hm.add_argument("-o", "--output", default="heatmap.dat")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        if args.command == "heatmap":
            return cmd_heatmap(args.snapshots, args.field, args.output)
        cfg = build_config(args)
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "converge":
            return cmd_converge(cfg)
        return cmd_evalcount(cfg)
    except (ConfigurationError, ModeOverflowError, ValueError, OSError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (StepError, InstabilityError, SolverError, OptimizerAbort, ArithmeticError) as err:
        print(f"numerical abort: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
