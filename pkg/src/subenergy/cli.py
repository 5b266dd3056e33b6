"""Command-line surface.

Every command emits CSV (default) or JSON.  JSON artifacts are a single
object with "config", "results", and "provenance" keys; feeding such a file
back through --config reproduces the run byte for byte.  Floats are printed
with 17 significant digits so parsed values round-trip exactly.

Exit codes: 0 success, 1 validation error, 2 numerical tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__, bath, oscillator, qubit, verify
from .errors import DomainError, ToleranceError

__all__ = ["RunConfig", "run", "main", "build_parser"]

OUTPUT_DIR_ENV = "SUBENERGY_OUTPUT_DIR"

_COMMANDS = ("qubit-dist", "qubit-crossover", "osc-cumulants", "osc-probs",
             "osc-purity", "ohmic-trajectory", "oracle-verify", "verify-all")

# parameter name -> (parser type, default); None default means required
_COMMAND_PARAMS: dict[str, dict[str, tuple[type, object]]] = {
    "qubit-dist": {"epsilon": (float, None), "delta": (float, None),
                   "hbar": (float, 1.0), "sx": (float, 0.0),
                   "sy": (float, 0.0), "sz": (float, 0.0)},
    "qubit-crossover": {"gap": (float, None), "alpha": (float, None),
                        "cutoff-ratio": (float, None), "k": (float, 1.0)},
    "osc-cumulants": {"x": (float, None), "y": (float, None),
                      "hbar-omega": (float, 1.0)},
    "osc-probs": {"x": (float, None), "y": (float, None),
                  "hbar-omega": (float, 1.0), "nmax": (int, -1)},
    "osc-purity": {"x": (float, None), "y": (float, None)},
    "ohmic-trajectory": {"alpha-max": (float, 0.9), "steps": (int, 10),
                         "cutoff": (float, bath.DEFAULT_CUTOFF_RATIO),
                         "nmax": (int, 3)},
    "oracle-verify": {"seed": (int, 20247)},
    "verify-all": {"seed": (int, 20247)},
}


@dataclass(frozen=True)
class RunConfig:
    """A fully resolved command invocation."""

    command: str
    parameters: dict
    output_format: str = "csv"
    output_path: str | None = None
    tolerance_overrides: dict = field(default_factory=dict)
    only: tuple[str, ...] = ()

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise DomainError(f"unknown command {self.command!r}; valid commands: "
                              + ", ".join(_COMMANDS))
        if self.output_format not in ("csv", "json"):
            raise DomainError("output format must be 'csv' or 'json'")
        schema = _COMMAND_PARAMS[self.command]
        unknown = sorted(set(self.parameters) - set(schema))
        if unknown:
            raise DomainError(
                f"unknown parameter(s) {', '.join(unknown)} for {self.command}; "
                f"valid keys: {', '.join(sorted(schema))}")
        resolved = {}
        for key, (kind, default) in schema.items():
            if key in self.parameters:
                try:
                    resolved[key] = kind(self.parameters[key])
                except (TypeError, ValueError) as exc:
                    raise DomainError(
                        f"parameter {key!r} must be a {kind.__name__}: "
                        f"{self.parameters[key]!r}") from exc
            elif default is None:
                raise DomainError(f"{self.command} requires parameter {key!r}")
            else:
                resolved[key] = default
        object.__setattr__(self, "parameters", resolved)


def _format_float(value: float) -> str:
    return format(float(value), ".17g")


def _jsonify(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {_jsonify(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{_jsonify(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            return json.dumps(str(float(obj)))  # JSON has no inf/nan literals
        return _format_float(obj)
    return json.dumps(obj)


def _csv_text(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    def cell(v) -> str:
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, (float, np.floating)):
            return _format_float(v)
        return str(v)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell(v) for v in row])
    return buffer.getvalue()


def _provenance() -> dict:
    return {"package": "subenergy", "version": __version__,
            "units": {"hbar_default": 1.0, "log_convention": "natural"}}


def _config_dict(config: RunConfig) -> dict:
    out = {"command": config.command, "parameters": dict(config.parameters),
           "format": config.output_format}
    if config.tolerance_overrides:
        out["tolerance"] = dict(config.tolerance_overrides)
    if config.only:
        out["only"] = list(config.only)
    return out


def _emit(config: RunConfig, columns: Sequence[str],
          rows: Sequence[Sequence]) -> str:
    if config.output_format == "csv":
        return _csv_text(columns, rows)
    results = {"columns": list(columns),
               "rows": [list(row) for row in rows]}
    doc = {"config": _config_dict(config), "results": results,
           "provenance": _provenance()}
    return _jsonify(doc) + "\n"


# ---------------------------------------------------------------------------
# command implementations

def _run_qubit_dist(params: Mapping) -> tuple[list[str], list[list]]:
    qp = qubit.QubitParams(epsilon=params["epsilon"], delta=params["delta"],
                           hbar=params["hbar"])
    b = qubit.BlochVector(x=params["sx"], y=params["sy"], z=params["sz"])
    mean = qubit.mean_energy(qp, b)
    dist = qubit.energy_distribution(qp, mean)
    cols = ["omega", "mean_energy", "energy_minus", "energy_plus",
            "p_down", "p_up", "purity"]
    row = [qp.omega, mean, dist.energy_minus, dist.energy_plus,
           dist.p_down, dist.p_up, qubit.bloch_purity(b)]
    return cols, [row]


def _run_qubit_crossover(params: Mapping) -> tuple[list[str], list[list]]:
    query = qubit.ThermalCrossoverQuery(
        gap=params["gap"], alpha=params["alpha"],
        cutoff_ratio=params["cutoff-ratio"], boltzmann_k=params["k"])
    # routed through the op so the perturbative-validity warning surfaces
    p_weak = qubit.weak_coupling_p_up(query.alpha, 1.0, query.cutoff_ratio)
    t_star = qubit.crossover_temperature(query)
    p_thermal = qubit.thermal_occupation(query.gap, t_star, query.boltzmann_k)
    cols = ["gap", "alpha", "cutoff_ratio", "k", "p_up_weak", "t_star",
            "p_thermal_at_t_star"]
    return cols, [[query.gap, query.alpha, query.cutoff_ratio,
                   query.boltzmann_k, p_weak, t_star, p_thermal]]


def _run_osc_cumulants(params: Mapping) -> tuple[list[str], list[list]]:
    shape = oscillator.shape_from_xy(params["x"], params["y"],
                                     hbar_omega=params["hbar-omega"])
    kappas = oscillator.cumulants_closed_form(shape)
    cols = ["x", "y", "mean_energy", "uncertainty_product",
            "kappa1", "kappa2", "kappa3", "kappa4"]
    return cols, [[shape.x, shape.y, shape.E, shape.A, *kappas]]


def _run_osc_probs(params: Mapping) -> tuple[list[str], list[list]]:
    shape = oscillator.shape_from_xy(params["x"], params["y"],
                                     hbar_omega=params["hbar-omega"])
    n_max = params["nmax"]
    if n_max < -1:
        raise DomainError("nmax must be non-negative (omit it for automatic "
                          "truncation)")
    if n_max == -1:
        n_max = oscillator.truncation_for_tolerance(shape, 1e-10)
    dist = oscillator.fock_probabilities(shape, n_max)
    rows = [[int(n), float(p)] for n, p in enumerate(dist.probs)]
    return ["n", "rho_nn"], rows


def _run_osc_purity(params: Mapping) -> tuple[list[str], list[list]]:
    shape = oscillator.shape_from_xy(params["x"], params["y"])
    return (["x", "y", "uncertainty_product", "purity"],
            [[shape.x, shape.y, shape.A, oscillator.shape_purity(shape)]])


def _run_ohmic_trajectory(params: Mapping) -> tuple[list[str], list[list]]:
    steps = params["steps"]
    if steps < 1:
        raise DomainError("steps must be at least 1")
    alphas = np.linspace(0.0, params["alpha-max"], steps)
    grid = [bath.OhmicBathParams(alpha=float(a), cutoff_ratio=params["cutoff"])
            for a in alphas]
    rows = bath.ohmic_trajectory(grid, n_max=params["nmax"])
    cols = ["alpha", "x", "y", "purity"] + [f"rho_{n}{n}" for n in
                                            range(params["nmax"] + 1)]
    table = [[r.alpha, r.x, r.y, r.purity, *map(float, r.probs)] for r in rows]
    return cols, table


def _run_verify(config: RunConfig, oracle_only: bool) -> tuple[list[str], list[list], bool]:
    only = list(config.only)
    if oracle_only and not only:
        only = list(verify.ORACLE_CHECKS)
    try:
        results = verify.run_checks(only=only or None,
                                    tolerance_overrides=config.tolerance_overrides,
                                    seed=config.parameters["seed"])
    except KeyError as exc:
        raise DomainError(str(exc.args[0])) from exc
    cols = ["check", "passed", "max_error", "tolerance", "detail"]
    rows = [[r.name, r.passed, r.max_error, r.tolerance, r.detail]
            for r in results]
    all_passed = all(r.passed for r in results)
    return cols, rows, all_passed


def run(config: RunConfig) -> tuple[int, str]:
    """Execute a resolved configuration; returns (exit_code, artifact text)."""
    failed_tolerance = False
    if config.command == "qubit-dist":
        cols, rows = _run_qubit_dist(config.parameters)
    elif config.command == "qubit-crossover":
        cols, rows = _run_qubit_crossover(config.parameters)
    elif config.command == "osc-cumulants":
        cols, rows = _run_osc_cumulants(config.parameters)
    elif config.command == "osc-probs":
        cols, rows = _run_osc_probs(config.parameters)
    elif config.command == "osc-purity":
        cols, rows = _run_osc_purity(config.parameters)
    elif config.command == "ohmic-trajectory":
        cols, rows = _run_ohmic_trajectory(config.parameters)
    else:
        cols, rows, all_passed = _run_verify(
            config, oracle_only=config.command == "oracle-verify")
        failed_tolerance = not all_passed
    text = _emit(config, cols, rows)
    return (2 if failed_tolerance else 0), text


# ---------------------------------------------------------------------------
# argument and config-file handling

class _UsageError(SystemExit):
    def __init__(self, code: int, message: str):
        super().__init__(code)
        self.message = message


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; 2 is reserved
        self.print_usage(sys.stderr)
        raise _UsageError(1, f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subenergy",
                     description="Ground-state sub-system energy statistics "
                                 "for a qubit and a harmonic oscillator.")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, schema in _COMMAND_PARAMS.items():
        p = sub.add_parser(command)
        for key, (kind, default) in schema.items():
            if default is None:
                note = " (required)"
            elif key == "nmax" and default == -1:
                note = " (default: automatic tail-controlled truncation)"
            else:
                note = f" (default {default})"
            p.add_argument(f"--{key}", type=str, default=None,
                           help=kind.__name__ + note)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--output", default=None,
                       help="output file; relative paths resolve under "
                            f"${OUTPUT_DIR_ENV} when it is set")
        p.add_argument("--config", default=None,
                       help="flat key = value file or a JSON artifact to re-run; "
                            "explicit flags win")
        if command in ("oracle-verify", "verify-all"):
            p.add_argument("--only", action="append", default=None,
                           help="restrict to checks with this name prefix "
                                "(repeatable)")
            p.add_argument("--tolerance", action="append", default=None,
                           metavar="NAME=VALUE",
                           help="override a check tolerance (prefix match, "
                                "repeatable)")
    return parser


def _load_config_file(path: str, command: str) -> dict:
    text = Path(path).read_text()
    stripped = text.lstrip()
    values: dict[str, str] = {}
    extras: dict[str, object] = {}
    if stripped.startswith("{"):
        doc = json.loads(text)
        conf = doc.get("config", doc)
        if conf.get("command") not in (None, command):
            raise DomainError(
                f"config file is for command {conf.get('command')!r}, "
                f"not {command!r}")
        for key, value in conf.get("parameters", {}).items():
            values[key] = repr(value) if isinstance(value, float) else str(value)
        if "format" in conf:
            extras["format"] = conf["format"]
        if "tolerance" in conf:
            extras["tolerance"] = {k: float(v) for k, v in conf["tolerance"].items()}
        if "only" in conf:
            extras["only"] = list(conf["only"])
        return {"values": values, **extras}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "format":
            extras["format"] = value
        elif key == "only":
            extras.setdefault("only", []).append(value)
        elif key.startswith("tolerance."):
            extras.setdefault("tolerance", {})[key.split(".", 1)[1]] = float(value)
        else:
            values[key] = value
    return {"values": values, **extras}


def _parse_tolerances(pairs: Sequence[str] | None) -> dict[str, float]:
    overrides: dict[str, float] = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep:
            raise DomainError(f"--tolerance expects NAME=VALUE, got {pair!r}")
        overrides[name.strip()] = float(value)
    return overrides


def config_from_argv(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    command = ns.command
    schema = _COMMAND_PARAMS[command]

    file_values: dict = {}
    file_extras: dict = {}
    if ns.config:
        loaded = _load_config_file(ns.config, command)
        file_values = loaded.pop("values")
        file_extras = loaded

    unknown = sorted(set(file_values) - set(schema))
    if unknown:
        raise DomainError(
            f"unknown key(s) {', '.join(unknown)} in config file; valid keys: "
            f"{', '.join(sorted(schema))}")

    parameters = dict(file_values)
    for key in schema:
        flag_value = getattr(ns, key.replace("-", "_"))
        if flag_value is not None:
            parameters[key] = flag_value

    output_format = ns.format or file_extras.get("format") or "csv"
    overrides = dict(file_extras.get("tolerance", {}))
    overrides.update(_parse_tolerances(getattr(ns, "tolerance", None)))
    only = list(file_extras.get("only", []))
    for entry in getattr(ns, "only", None) or ():
        if entry not in only:
            only.append(entry)

    return RunConfig(command=command, parameters=parameters,
                     output_format=output_format, output_path=ns.output,
                     tolerance_overrides=overrides, only=tuple(only))


def _resolve_output_path(path: str) -> Path:
    out = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not out.is_absolute():
        out = Path(base) / out
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = config_from_argv(argv)
        code, text = run(config)
    except _UsageError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except ToleranceError as exc:
        print(f"subenergy: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        # DomainError and malformed inputs are validation failures
        print(f"subenergy: {exc}", file=sys.stderr)
        return 1
    if config.output_path:
        destination = _resolve_output_path(config.output_path)
        destination.parent.mkdir(parents=True, exist_ok=True)
        with open(destination, "w", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
