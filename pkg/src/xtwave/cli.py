"""Batch driver: solve, convergence, stability and inf-sup runs from configs.

Configs are flat `key = value` text files with a strict schema; unknown keys
are errors.  Each run writes `results.csv` (fixed column schema), a
plotter-agnostic `curves.dat` with two-column log-log series, and an echo of
the resolved config.  Exit codes: 0 success, 2 config error, 3 solver
failure.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import expressions
from .analysis import eoc, error_report, estimate_infsup
from .errors import ConfigError, SingularSystemError, XTWaveError
from .problems import by_name
from .splines import make_uniform_space
from .system import ProblemSpec, assemble, dump_solution, solve

CSV_HEADER = (
    "level,h_x,h_t,p,regularity,dofs,err_Veh,eoc_Veh,err_U_L2,eoc_U_L2,"
    "err_V_L2,eoc_V_L2,err_cgradU,eoc_cgradU,gamma_h,lower_bound,solve_seconds"
)

MODES = ("solve", "convergence", "stability", "infsup")

# key -> (type tag, required) ; expression keys are only required inline
_SCHEMA = {
    "mode": ("mode", False),
    "problem": ("str", True),
    "degree": ("int", True),
    "regularity": ("regularity", True),
    "levels": ("levels", True),
    "quad_points": ("int", False),
    "seed": ("int", False),
    "threads": ("int", False),
    "out": ("str", False),
    "omega": ("pair", False),
    "T": ("float", False),
    "c0": ("float", False),
    "c2": ("expr", False),
    "F": ("expr", False),
    "U0": ("expr", False),
    "V0": ("expr", False),
}

_INLINE_KEYS = ("omega", "T", "c2", "F", "U0", "V0")


@dataclass(frozen=True)
class RunConfig:
    """Validated run description; one sweep of refinement levels."""

    mode: str
    problem: str
    degree: int
    regularity: str  # "maximal", "c1" or a decimal string
    levels: tuple  # of (n_elems_x, n_elems_t)
    quad_points: int = None
    seed: int = 0
    threads: int = None
    out: str = None
    omega: tuple = None
    T: float = None
    c0: float = None
    inline: tuple = ()  # sorted (key, expression string) pairs

    def regularity_order(self):
        if self.regularity == "maximal":
            return self.degree - 1
        if self.regularity == "c1":
            return 1
        return int(self.regularity)


def _parse_value(key, raw):
    tag = _SCHEMA[key][0]
    try:
        if tag == "int":
            return int(raw)
        if tag == "float":
            return float(raw)
        if tag == "pair":
            a, b = (float(s) for s in raw.split(","))
            return (a, b)
        if tag == "levels":
            pairs = []
            for item in raw.replace(",", " ").split():
                nx, nt = item.lower().split("x")
                pairs.append((int(nx), int(nt)))
            if not pairs:
                raise ValueError("empty list")
            return tuple(pairs)
        if tag == "mode":
            if raw not in MODES:
                raise ValueError(f"must be one of {MODES}")
            return raw
        if tag == "regularity":
            if raw in ("maximal", "c1"):
                return raw
            return str(int(raw))
        return raw
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from exc


def parse_config(text, mode=None):
    """Parse flat `key = value` text into a RunConfig; strict schema."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw)

    if mode is not None:
        if "mode" in values and values["mode"] != mode:
            raise ConfigError(f"config mode {values['mode']!r} conflicts with subcommand {mode!r}")
        values["mode"] = mode
    if "mode" not in values:
        raise ConfigError("mode is not set (use a subcommand or a `mode =` line)")

    for key, (_, required) in _SCHEMA.items():
        if required and key not in values:
            raise ConfigError(f"missing required key {key!r}")

    inline = {}
    if values["problem"] == "inline":
        for key in _INLINE_KEYS:
            if key not in values:
                raise ConfigError(f"inline problems require key {key!r}")
        for key in ("c2", "F", "U0", "V0"):
            inline[key] = values.pop(key)
    else:
        for key in ("c2", "F", "U0", "V0", "omega", "T", "c0"):
            if key in values:
                raise ConfigError(f"key {key!r} is only valid for problem = inline")

    config = RunConfig(
        mode=values["mode"],
        problem=values["problem"],
        degree=values["degree"],
        regularity=values["regularity"],
        levels=values["levels"],
        quad_points=values.get("quad_points"),
        seed=values.get("seed", 0),
        threads=values.get("threads"),
        out=values.get("out"),
        omega=values.get("omega"),
        T=values.get("T"),
        c0=values.get("c0"),
        inline=tuple(sorted(inline.items())),
    )
    validate_config(config)
    return config


def serialize_config(config):
    """Inverse of parse_config up to formatting."""
    lines = [
        f"mode = {config.mode}",
        f"problem = {config.problem}",
        f"degree = {config.degree}",
        f"regularity = {config.regularity}",
        "levels = " + " ".join(f"{nx}x{nt}" for nx, nt in config.levels),
        f"seed = {config.seed}",
    ]
    if config.quad_points is not None:
        lines.append(f"quad_points = {config.quad_points}")
    if config.threads is not None:
        lines.append(f"threads = {config.threads}")
    if config.out is not None:
        lines.append(f"out = {config.out}")
    if config.problem == "inline":
        lines.append(f"omega = {config.omega[0]:.17g},{config.omega[1]:.17g}")
        lines.append(f"T = {config.T:.17g}")
        if config.c0 is not None:
            lines.append(f"c0 = {config.c0:.17g}")
        for key, expr in config.inline:
            lines.append(f"{key} = {expr}")
    return "\n".join(lines) + "\n"


def validate_config(config):
    if not config.levels:
        raise ConfigError("levels must be non-empty")
    if config.degree < 1:
        raise ConfigError("degree must be at least 1")
    r = config.regularity_order()
    if not 0 <= r <= config.degree - 1:
        raise ConfigError(
            f"regularity {r} incompatible with degree {config.degree}"
        )
    if any(nx < 1 or nt < 1 for nx, nt in config.levels):
        raise ConfigError("element counts must be positive")
    if config.mode == "convergence":
        for (nx0, nt0), (nx1, nt1) in zip(config.levels, config.levels[1:]):
            if nx1 != 2 * nx0 or nt1 != 2 * nt0:
                raise ConfigError("convergence mode requires halving h in both directions")
    if config.mode == "stability":
        nts = {nt for _, nt in config.levels}
        if len(nts) > 1:
            raise ConfigError("stability mode requires a fixed temporal mesh")
    if config.problem == "inline" and config.T is not None and config.T <= 0:
        raise ConfigError("T must be positive")


def _inline_problem(config):
    data = dict(config.inline)
    c2e = expressions.parse_expression(data["c2"], ("x",))
    Fe = expressions.parse_expression(data["F"], ("x", "t"))
    U0e = expressions.parse_expression(data["U0"], ("x",))
    V0e = expressions.parse_expression(data["V0"], ("x",))
    c2 = expressions.lambdify(c2e, ("x",))
    c0 = config.c0
    if c0 is None:
        xs = np.linspace(config.omega[0], config.omega[1], 2001)
        c2_min = float(np.min(c2(xs)))
        if c2_min <= 0:
            raise ConfigError("c2 must be positive on the domain")
        c0 = float(np.sqrt(c2_min))
    div_flux = expressions.diff(c2e * expressions.diff(U0e, "x"), "x")
    return ProblemSpec(
        omega=config.omega,
        T=config.T,
        c2=c2,
        c0=c0,
        F=expressions.lambdify(Fe, ("x", "t")),
        U0=expressions.lambdify(U0e, ("x",)),
        dU0=expressions.lambdify(expressions.diff(U0e, "x"), ("x",)),
        V0=expressions.lambdify(V0e, ("x",)),
        dV0=expressions.lambdify(expressions.diff(V0e, "x"), ("x",)),
        div_c2_grad_U0=expressions.lambdify(div_flux, ("x",)),
        name="inline",
    )


def build_problem(config):
    if config.problem == "inline":
        return _inline_problem(config)
    try:
        return by_name(config.problem).spec
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc


def _spaces(config, problem, nx, nt):
    r = config.regularity_order()
    space_x = make_uniform_space(problem.omega, nx, config.degree, r, "zero-both")
    space_t = make_uniform_space((0.0, problem.T), nt, config.degree, r, "zero-left")
    return space_x, space_t


@dataclass
class LevelResult:
    level: int
    h_x: float
    h_t: float
    dofs: int
    report: object = None
    gamma_h: float = None
    lower_bound: float = None
    solve_seconds: float = 0.0
    solution: object = None


def _run_level(config, problem, level, nx, nt):
    space_x, space_t = _spaces(config, problem, nx, nt)
    result = LevelResult(
        level=level,
        h_x=problem.length / nx,
        h_t=problem.T / nt,
        dofs=2 * space_x.dim * space_t.dim,
    )
    if config.mode == "infsup":
        est = estimate_infsup(problem, space_x, space_t, config.quad_points)
        result.gamma_h = est.gamma_h
        result.lower_bound = est.lower_bound
        return result
    system = assemble(problem, space_x, space_t, config.quad_points)
    solution = solve(system)
    result.solve_seconds = solution.solve_seconds
    result.solution = solution
    if problem.exact is not None:
        result.report = error_report(solution, problem, config.quad_points)
    return result


def _fmt(value):
    return "" if value is None else f"{value:.12e}"


def _csv_rows(config, results):
    r = config.regularity_order()
    err_cols = ("err_Veh", "err_U_L2", "err_V_L2", "err_cgradU_L2e")
    series = {name: [None] * len(results) for name in err_cols}
    for i, res in enumerate(results):
        if res.report is not None:
            rep = res.report
            series["err_Veh"][i] = rep.err_Veh
            series["err_U_L2"][i] = rep.err_U_L2
            series["err_V_L2"][i] = rep.err_V_L2
            series["err_cgradU_L2e"][i] = rep.err_cgradU_L2e

    with_eoc = config.mode == "convergence"
    rows = []
    for i, res in enumerate(results):
        cells = [
            str(res.level),
            _fmt(res.h_x),
            _fmt(res.h_t),
            str(config.degree),
            str(r),
            str(res.dofs),
        ]
        for name in err_cols:
            cells.append(_fmt(series[name][i]))
            rate = None
            if with_eoc and i > 0 and series[name][i] is not None:
                rate = float(eoc([series[name][i - 1], series[name][i]])[0])
            cells.append(_fmt(rate))
        cells.append(_fmt(res.gamma_h))
        cells.append(_fmt(res.lower_bound))
        cells.append(_fmt(res.solve_seconds if config.mode != "infsup" else None))
        rows.append(",".join(cells))
    return rows


def _curves(config, results):
    """Two-column (h, value) series per plotted quantity."""
    blocks = []
    if config.mode == "infsup":
        lines = [f"# curve gamma_h vs h_x ({config.problem}, p={config.degree})"]
        for res in results:
            lines.append(f"{res.h_x:.12e} {res.gamma_h:.12e}")
        blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"
    names = (
        ("err_Veh", lambda rep: rep.err_Veh),
        ("err_U_L2", lambda rep: rep.err_U_L2),
        ("err_V_L2", lambda rep: rep.err_V_L2),
        ("err_cgradU", lambda rep: rep.err_cgradU_L2e),
    )
    for name, pick in names:
        pts = [(res.h_x, pick(res.report)) for res in results if res.report is not None]
        if not pts:
            continue
        lines = [f"# curve {name} vs h_x ({config.problem}, p={config.degree})"]
        lines.extend(f"{h:.12e} {v:.12e}" for h, v in pts)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def run(config):
    """Execute a run; returns the exit code and writes artifacts to out."""
    out = config.out or "."
    os.makedirs(out, exist_ok=True)
    try:
        problem = build_problem(config)
        workers = config.threads or int(os.environ.get("XTWAVE_THREADS", "1"))
        workers = max(1, min(workers, len(config.levels)))
        jobs = [(i, nx, nt) for i, (nx, nt) in enumerate(config.levels)]
        if workers == 1:
            results = [_run_level(config, problem, *job) for job in jobs]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_run_level, config, problem, *job) for job in jobs]
                results = [f.result() for f in futures]
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SingularSystemError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3

    with open(os.path.join(out, "results.csv"), "w") as f:
        f.write(CSV_HEADER + "\n")
        for row in _csv_rows(config, results):
            f.write(row + "\n")
    curves = _curves(config, results)
    if curves:
        with open(os.path.join(out, "curves.dat"), "w") as f:
            f.write(curves)
    with open(os.path.join(out, "config.txt"), "w") as f:
        f.write(serialize_config(config))
    if config.mode == "solve":
        for res in results:
            if res.solution is not None:
                dump_solution(res.solution, os.path.join(out, f"solution_L{res.level}.txt"))
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(prog="xtwave", description=__doc__)
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config) as f:
            text = f.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text, mode=args.mode)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        config = replace(config, **overrides)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
