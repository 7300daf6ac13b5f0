"""Command line front end.

Configuration is an INI file with the sections ``problem``, ``layout``,
``stepper``, ``oracle``, ``output`` and (for ``converge``) ``converge``.
An archetype ``name`` in ``problem`` or ``layout`` expands to the full
inline description; explicit keys override it. ``--print-config`` shows
the expanded file.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from pathlib import Path

import numpy as np

from patchshock import files
from patchshock.analysis import convergence_study, max_error, smooth_problem
from patchshock.dynamics import SimulationBlowup, StepperConfig, simulate, uniform_output_times
from patchshock.mesh import Double, Patch, PatchLayout, Standard, archetype_layout
from patchshock.model import ArchetypeId, Diffusivity, InitialCondition, ProblemSpec, make_archetype
from patchshock.oracle import (
    ColeHopfOracle,
    FineGridConfig,
    OracleBlowup,
    OracleError,
    QuadratureConfig,
    brute_force_solve,
)

logger = logging.getLogger("patchshock")

EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

SECTIONS = ("problem", "layout", "stepper", "oracle", "output", "converge")

_DESCRIPTIONS = {
    ArchetypeId.M1: "eps = 0.001, tanh initial shock",
    ArchetypeId.M2: "eps = 0.001, -sin x forming a shock near t = 1.2",
    ArchetypeId.M3: "eps = 0.001 + 0.05|u|, tanh initial shock",
    ArchetypeId.M4: "eps = 0.001 + 0.05|u|, -sin x forming a shock",
}


class ConfigError(ValueError):
    pass


# {{{ config

DEFAULTS = {
    "stepper": {"dt": "", "safety": "0.5", "outputs": "61", "blowup_bound": "10"},
    "oracle": {
        "name": "quadrature",
        "tol_window": "5",
        "opt_samples": "2001",
        "quad_rel_tol": "1e-10",
        "points": "1600",
        "dt": "",
        "samples": "50",
    },
    "output": {"dir": "out", "micro": "false"},
    "converge": {"gamma": "1", "eps": "0.1", "t_final": "0.5", "intervals": "24 32 48 64"},
}


def _num(value: float) -> str:
    # full precision: an expanded config must rebuild the same geometry
    return repr(float(value))


def problem_section(problem: ProblemSpec) -> dict[str, str]:
    ic = problem.initial_condition
    return {
        "x_lo": _num(problem.x_lo),
        "x_hi": _num(problem.x_hi),
        "eps1": _num(problem.diffusivity.eps1),
        "eps2": _num(problem.diffusivity.eps2),
        "ic": ic.kind,
        "ic_width": _num(ic.width),
        "ic_amplitude": _num(ic.amplitude),
        "bc_left": _num(problem.left_value(0.0)),
        "bc_right": _num(problem.right_value(0.0)),
        "t_final": _num(problem.final_time),
    }


def layout_section(layout: PatchLayout) -> dict[str, str]:
    rows = []
    for p in layout.patches:
        kind = "standard"
        if isinstance(p.kind, Double):
            kind = f"double {p.kind.left_offset} {p.kind.right_offset}"
        rows.append(f"{_num(p.centre)}, {_num(2 * p.half_width)}, {p.points}, {kind}")
    return {"gamma": str(layout.gamma), "patches": "\n" + "\n".join(rows)}


def _get(section: configparser.SectionProxy, key: str, cast=float, default=None):
    raw = section.get(key, fallback=None)
    if raw is None or raw.strip() == "":
        if default is None:
            raise ConfigError(f"[{section.name}] missing key '{key}'")
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section.name}] bad value for '{key}': {raw!r}") from exc


def _archetype(name: str, section: str) -> ArchetypeId:
    try:
        return ArchetypeId.parse(name)
    except ValueError as exc:
        raise ConfigError(f"[{section}] name: {exc}") from None


def load_config(path: str | None, args: argparse.Namespace) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if path is not None:
        try:
            with open(path) as f:
                cfg.read_file(f)
        except FileNotFoundError:
            raise ConfigError(f"config file {path} not found") from None
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from None
    for name in SECTIONS:
        if not cfg.has_section(name):
            cfg.add_section(name)

    for name, values in DEFAULTS.items():
        for key, value in values.items():
            cfg[name].setdefault(key, value)

    if getattr(args, "problem", None):
        cfg["problem"]["name"] = args.problem
    if getattr(args, "layout", None):
        cfg["layout"]["name"] = args.layout
    if getattr(args, "oracle", None):
        cfg["oracle"]["name"] = args.oracle
    if getattr(args, "out", None):
        cfg["output"]["dir"] = args.out

    # archetype names expand to inline specs; explicit keys win
    problem = cfg["problem"]
    if problem.get("name"):
        aid = _archetype(problem["name"], "problem")
        for key, value in problem_section(make_archetype(aid)).items():
            problem.setdefault(key, value)
        if not cfg["layout"].get("name") and "patches" not in cfg["layout"]:
            cfg["layout"]["name"] = aid.value
    layout = cfg["layout"]
    if layout.get("name"):
        aid = _archetype(layout["name"], "layout")
        for key, value in layout_section(archetype_layout(aid)).items():
            layout.setdefault(key, value)
    return cfg


def build_problem(cfg: configparser.ConfigParser) -> ProblemSpec:
    s = cfg["problem"]
    try:
        ic = InitialCondition(
            _get(s, "ic", str),
            amplitude=_get(s, "ic_amplitude", default=1.0),
            width=_get(s, "ic_width", default=1.0e-3),
        )
        return ProblemSpec(
            x_lo=_get(s, "x_lo"),
            x_hi=_get(s, "x_hi"),
            initial_condition=ic,
            diffusivity=Diffusivity(_get(s, "eps1"), _get(s, "eps2", default=0.0)),
            final_time=_get(s, "t_final", default=3.0),
            boundary_left=_get(s, "bc_left", default=0.0),
            boundary_right=_get(s, "bc_right", default=0.0),
            name=s.get("name", "custom"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"[problem] {exc}") from None


def _parse_kind(text: str, lineno: int) -> Standard | Double:
    words = text.split()
    if words and words[0] == "standard" and len(words) == 1:
        return Standard()
    if words and words[0] == "double" and len(words) in (1, 3):
        return Double(*(int(w) for w in words[1:]))
    raise ConfigError(f"[layout] patches line {lineno}: unknown patch kind {text!r}")


def build_layout(cfg: configparser.ConfigParser, problem: ProblemSpec) -> PatchLayout:
    s = cfg["layout"]
    gamma = _get(s, "gamma", int)
    lines = [ln.strip() for ln in _get(s, "patches", str).splitlines() if ln.strip()]
    patches = []
    for lineno, line in enumerate(lines, 1):
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 4:
            raise ConfigError(
                f"[layout] patches line {lineno}: expected 'centre, width, points, kind'"
            )
        try:
            centre, width, points = float(fields[0]), float(fields[1]), int(fields[2])
            patches.append(Patch.from_width(centre, width, points, _parse_kind(fields[3], lineno)))
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"[layout] patches line {lineno}: {exc}") from None
    try:
        return PatchLayout(
            tuple(patches), gamma, problem.x_lo, problem.x_hi, name=s.get("name", "custom")
        )
    except ValueError as exc:
        raise ConfigError(f"[layout] {exc}") from None


def build_stepper(cfg: configparser.ConfigParser, problem: ProblemSpec) -> StepperConfig:
    s = cfg["stepper"]
    dt = s.get("dt", "").strip()
    outputs = _get(s, "outputs", int, default=61)
    try:
        return StepperConfig(
            dt=float(dt) if dt else None,
            safety=_get(s, "safety", default=0.5),
            output_times=uniform_output_times(problem.final_time, outputs),
            blowup_bound=_get(s, "blowup_bound", default=10.0),
        )
    except ValueError as exc:
        raise ConfigError(f"[stepper] {exc}") from None


def build_oracle(cfg: configparser.ConfigParser, problem: ProblemSpec, times):
    s = cfg["oracle"]
    name = s.get("name", "quadrature").strip()
    if name == "quadrature":
        try:
            return ColeHopfOracle(
                problem,
                QuadratureConfig(
                    tol_window=_get(s, "tol_window", default=5.0),
                    opt_samples=_get(s, "opt_samples", int, default=2001),
                    quad_rel_tol=_get(s, "quad_rel_tol", default=1.0e-10),
                ),
            )
        except OracleError as exc:
            raise ConfigError(f"[oracle] quadrature refused: {exc}") from None
    if name == "brute":
        dt = s.get("dt", "").strip()
        grid = FineGridConfig(
            points=_get(s, "points", int, default=1600),
            dt=float(dt) if dt else None,
            snapshot_times=tuple(times),
        )
        try:
            return brute_force_solve(problem, grid)
        except OracleBlowup:
            raise
        except ValueError as exc:
            raise ConfigError(f"[oracle] {exc}") from None
    raise ConfigError(f"[oracle] name: unknown oracle {name!r}; expected quadrature or brute")


def _out_dir(cfg: configparser.ConfigParser) -> Path:
    out = Path(cfg["output"].get("dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str) -> None:
    with open(path, "w", newline="\n") as f:
        f.write(text)
    print(f"wrote {path}")


# }}}


# {{{ commands


def cmd_run(cfg: configparser.ConfigParser) -> int:
    problem = build_problem(cfg)
    layout = build_layout(cfg, problem)
    trajectory = simulate(problem, layout, build_stepper(cfg, problem))

    out = _out_dir(cfg)
    _write(out / "macro.csv", files.trajectory_csv(trajectory))
    if cfg["output"].getboolean("micro", fallback=False):
        _write(out / "micro.csv", files.micro_csv(trajectory))
    return 0


def cmd_compare(cfg: configparser.ConfigParser) -> int:
    problem = build_problem(cfg)
    layout = build_layout(cfg, problem)
    stepper = build_stepper(cfg, problem)
    oracle = build_oracle(cfg, problem, stepper.output_times)

    trajectory = simulate(problem, layout, stepper)
    # report on the values as written so a re-read file reproduces it
    trajectory.times = files.quantize(trajectory.times)
    trajectory.positions = files.quantize(trajectory.positions)
    trajectory.macro = files.quantize(trajectory.macro)
    report = max_error(trajectory, oracle)

    out = _out_dir(cfg)
    _write(out / "macro.csv", files.trajectory_csv(trajectory))
    _write(out / "report.txt", f"problem: {problem.name}\noracle: {oracle.name}\n" + report.to_text())
    _write(out / "errors.csv", report.to_csv())
    print(report.to_text(), end="")
    return 0


def cmd_converge(cfg: configparser.ConfigParser) -> int:
    s = cfg["converge"]
    problem = smooth_problem(_get(s, "eps", default=0.1), _get(s, "t_final", default=0.5))
    gamma = _get(s, "gamma", int, default=1)
    intervals = [int(w) for w in s.get("intervals", "24 32 48 64").split()]
    if len(intervals) < 3:
        raise ConfigError(
            f"[converge] intervals: a slope fit needs at least 3 spacings, got {len(intervals)}"
        )
    H_list = [problem.length / m for m in intervals]
    try:
        report = convergence_study(problem, gamma, H_list)
    except ValueError as exc:
        raise ConfigError(f"[converge] {exc}") from None

    out = _out_dir(cfg)
    _write(out / "converge.txt", report.to_text())
    print(report.to_text(), end="")
    return 0


def cmd_oracle(cfg: configparser.ConfigParser) -> int:
    problem = build_problem(cfg)
    stepper = build_stepper(cfg, problem)
    oracle = build_oracle(cfg, problem, stepper.output_times)
    count = _get(cfg["oracle"], "samples", int, default=50)
    x = problem.x_lo + problem.length * np.arange(1, count + 1) / (count + 1)
    values = np.array([oracle(x, t) for t in stepper.output_times])

    out = _out_dir(cfg)
    _write(out / f"oracle-{oracle.name}.csv", files.samples_csv(x, np.array(stepper.output_times), values))
    return 0


def cmd_list(cfg: configparser.ConfigParser) -> int:
    for aid in ArchetypeId:
        layout = archetype_layout(aid)
        print(
            f"{aid.value}: {_DESCRIPTIONS[aid]}; {len(layout.patches)} patches, "
            f"gamma = {layout.gamma}"
        )
    return 0


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "converge": cmd_converge,
    "oracle": cmd_oracle,
    "list": cmd_list,
}


# }}}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patchshock", description="Patch dynamics with a double patch for shocks."
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", metavar="PATH", help="INI configuration file")
    parser.add_argument("--problem", metavar="NAME", help="archetype problem M1..M4")
    parser.add_argument("--layout", metavar="NAME", help="archetype layout M1..M4")
    parser.add_argument("--oracle", choices=("quadrature", "brute"))
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument(
        "--print-config", action="store_true", help="print the expanded configuration and exit"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        cfg = load_config(args.config, args)
        if args.print_config:
            cfg.write(sys.stdout)
            return 0
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"patchshock: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationBlowup, OracleBlowup, OracleError) as exc:
        print(f"patchshock: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
