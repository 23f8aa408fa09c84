"""Command-line interface: run trajectories, reference curves and scans,
writing CSV.

Numbers are written with Python's shortest round-trip representation, so
re-reading a CSV reproduces every value bit for bit.  Exit status: 0 on
success, 2 for usage errors, 3 for I/O errors, 4 for physics-layer errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, fields

from .errors import CavityTangleError
from .model import (InitialStateSpec, W_ALPHA, homogeneous_params,
                    quasi_homogeneous_params)
from .scan import cp_trajectory, density_scan, red_curve

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PHYSICS = 4

_EPILOG = """\
exit status: 0 success, 2 usage error, 3 I/O error, 4 physics error.

a config file holds flat `key=value` lines (# starts a comment); keys match
the long option names.  explicit flags override file values.  the
CAVITY_TANGLE_THREADS environment variable caps scan worker parallelism.
"""


@dataclass
class RunConfig:
    command: str
    model: str = "homogeneous"
    kappa: float = 0.0
    ising: float = 0.0
    family: str = "psi"
    alpha: float = W_ALPHA
    n: int = 1
    t_max: float = 20.0
    t_steps: int = 401
    j_min: float = 0.0
    j_max: float = 2.0
    j_steps: int = 201
    layers: str = "purity"
    seed: int = 0
    out: str = ""

    def __post_init__(self):
        for name in ("kappa", "ising", "alpha", "t_max", "j_min", "j_max"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.t_steps < 2 or self.j_steps < 2:
            raise ValueError("step counts must be >= 2")
        if not self.out:
            raise ValueError("an output path is required (--out)")


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CHOICES = {"model": ("homogeneous", "quasi_homogeneous"),
            "family": ("phi", "psi")}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-tangle",
        description="entanglement dynamics of three atoms in a cavity",
        epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_common(p, with_scan: bool, with_state: bool):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--t-max", dest="t_max", type=float)
        p.add_argument("--t-steps", dest="t_steps", type=int)
        p.add_argument("--seed", type=int)
        if with_state:
            p.add_argument("--model", choices=_CHOICES["model"])
            p.add_argument("--kappa", type=float)
            p.add_argument("--ising", type=float)
            p.add_argument("--family", choices=_CHOICES["family"])
            p.add_argument("--alpha", type=float)
        p.add_argument("--n", type=int)
        if with_scan:
            p.add_argument("--j-min", dest="j_min", type=float)
            p.add_argument("--j-max", dest="j_max", type=float)
            p.add_argument("--j-steps", dest="j_steps", type=int)
            p.add_argument("--layers",
                           help="comma-separated: purity[,concurrence]")

    add_common(sub.add_parser(
        "trajectory", help="CP trajectory of one configuration"),
        with_scan=False, with_state=True)
    add_common(sub.add_parser(
        "redcurve", help="non-interacting W-state reference curve"),
        with_scan=False, with_state=False)
    add_common(sub.add_parser(
        "scan", help="(J, t) density scan at fixed dipole coupling"),
        with_scan=True, with_state=True)
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    if key in _CHOICES and raw not in _CHOICES[key]:
        raise ValueError(f"{key} must be one of {_CHOICES[key]}, got {raw!r}")
    return raw


def parse_config(argv) -> RunConfig:
    """Resolve defaults, config-file values and flags (in rising precedence)
    into a RunConfig.  Raises ValueError on malformed or unknown entries."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        parser.error("a command is required (trajectory, redcurve or scan)")
    merged: dict = {"command": ns.command}
    if getattr(ns, "config", None):
        for key, raw in _read_config_file(ns.config).items():
            if key == "command" or key not in _FIELD_TYPES:
                raise ValueError(f"unknown config key {key!r}")
            merged[key] = _coerce(key, raw)
    for key in _FIELD_TYPES:
        flag_value = getattr(ns, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    return RunConfig(**merged)


def _fmt(x) -> str:
    return repr(float(x))


def _write_trajectory(path: str, points) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,purity,concurrence\n")
        for pt in points:
            fh.write(f"{_fmt(pt.t)},{_fmt(pt.purity)},{_fmt(pt.concurrence)}\n")


def _write_scan(path: str, grid) -> None:
    with_conc = grid.concurrence is not None
    header = "J,t,purity,concurrence" if with_conc else "J,t,purity"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for a, j in enumerate(grid.j_values):
            for k, t in enumerate(grid.t_values):
                row = f"{_fmt(j)},{_fmt(t)},{_fmt(grid.purity[a, k])}"
                if with_conc:
                    row += f",{_fmt(grid.concurrence[a, k])}"
                fh.write(row + "\n")


def _workers_from_env() -> int | None:
    raw = os.environ.get("CAVITY_TANGLE_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"CAVITY_TANGLE_THREADS must be an integer, got {raw!r}")


def run(config: RunConfig) -> None:
    """Execute one command and write its CSV file."""
    if config.command == "trajectory":
        builder = (homogeneous_params if config.model == "homogeneous"
                   else quasi_homogeneous_params)
        params = builder(config.kappa, config.ising)
        spec = InitialStateSpec(config.family, config.alpha, config.n)
        points = cp_trajectory(params, spec, config.t_max, config.t_steps)
        _write_trajectory(config.out, points)
    elif config.command == "redcurve":
        points = red_curve(config.n, config.t_max, config.t_steps)
        _write_trajectory(config.out, points)
    elif config.command == "scan":
        layers = tuple(part.strip() for part in config.layers.split(",") if part.strip())
        spec = InitialStateSpec(config.family, config.alpha, config.n)
        grid = density_scan(config.kappa, config.model,
                            (config.j_min, config.j_max, config.j_steps),
                            (config.t_max, config.t_steps), spec,
                            layers=layers, workers=_workers_from_env())
        _write_scan(config.out, grid)
    else:
        raise ValueError(f"unknown command {config.command!r}")


def main(argv=None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"cavity-tangle: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        run(config)
    except CavityTangleError as exc:
        print(f"cavity-tangle: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"cavity-tangle: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
