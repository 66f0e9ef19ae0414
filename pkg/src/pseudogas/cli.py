"""Command-line front end.

Every subcommand produces one table (CSV by default) on stdout or ``--out``.
Parameters may come from a flat ``key = value`` config file (``--config``);
flags on the command line override it.  Exit codes: 0 success, 1 I/O
failure, 2 invalid input, 3 numerical non-convergence, 4 budget exceeded.

    pseudogas polymer --eta 0.01 --j 2
    pseudogas sweep --op polymer --axis eta --log --from 1e-4 --to 1e-2 --points 9 --j 3
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import lattice as lat
from .core import GasSpec, Statistics, reduced_from_physical
from .errors import (
    DomainError,
    EnumerationTooLarge,
    LatticeTooLarge,
    NoConvergence,
    OutOfSemiclassicalRange,
    PseudogasError,
)
from .pseudochem import (
    MomentumSplit,
    PairSpinContext,
    pair_fraction_at_dp,
    solve_dimer_fraction,
    solve_polymer_fraction,
)
from .statmech import pressure_first_order, pressure_ratio_exact, solve_fugacity
from .table import SweepResult, emit_table

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_NUMERIC, EXIT_BUDGET = 0, 1, 2, 3, 4
REQUIRED = object()


class ConfigError(DomainError):
    pass


def _bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _stats(text):
    return Statistics.parse(text)


# --- operations: params dict -> ordered columns -------------------------------


def _op_props(p):
    spec = GasSpec(p["N"], p["V"], p["T"], p["m"], p["spin2"], p["stats"])
    red = reduced_from_physical(spec)
    cols = {
        "eta": red.eta,
        "eta_sp": red.eta_sp,
        "g_a": red.g_A,
        "lambda_thermal": red.lambda_thermal,
        "z0": red.Z0,
    }
    try:
        cols["x2"] = solve_dimer_fraction(red.eta).fraction_xj
    except OutOfSemiclassicalRange:
        cols["x2"] = math.nan
    try:
        fug = solve_fugacity(red.eta_sp, red.statistics)
    except OutOfSemiclassicalRange:
        fug = None
    cols["z"] = fug.z if fug else math.nan
    if p["mu"]:
        cols["mu"] = fug.chemical_potential(spec.temperature_T) if fug else math.nan
    return cols


def _op_fugacity(p):
    fug = solve_fugacity(p["eta_sp"], p["stats"], p["tol"])
    return {"z": fug.z, "residual": fug.residual}


def _op_pressure(p):
    eta_sp = p["eta"] / p["ga"]
    fug = solve_fugacity(eta_sp, p["stats"])
    exact = pressure_ratio_exact(fug.z, p["stats"])
    first = pressure_first_order(p["eta"], p["ga"], p["stats"])
    return {"eta_sp": eta_sp, "z": fug.z, "ratio": exact, "ratio_first_order": first, "remainder": exact - first}


def _op_polymer(p):
    state = solve_polymer_fraction(p["eta"], p["j"])
    j = state.polymer_order_j
    return {"j": j, "x_j": state.fraction_xj, "leading": j**1.5 * p["eta"] ** (j - 1), "residual": state.residual}


def _op_spinpair(p):
    ctx = PairSpinContext(p["ga"], p["stats"])
    x2 = solve_dimer_fraction(p["eta"]).fraction_xj
    split = MomentumSplit.from_reduced_energy(p["dp"])
    frac = pair_fraction_at_dp(x2, split, ctx)
    return {
        "g_plus": ctx.g_plus,
        "g_minus": ctx.g_minus,
        "x2": x2,
        "pair_fraction": frac,
        "suppression": frac / x2 if x2 > 0 else math.nan,
    }


def _op_lattice(p):
    lattice = lat.build_lattice(p["L"], p["m"], p["T"], p["n_max"], p["convention"])
    z1 = lattice.z1()
    cols = {
        "modes": lattice.mode_count,
        "z1": z1,
        "z0_continuum": lattice.continuum_partition(),
        "eta_eff": p["N"] / z1,
    }
    method, j = p["method"], p["j"]
    if method == "recursion":
        cols["z_n"] = lat.canonical_partition_recursion(lattice, p["N"], p["stats"]).Z_N
    elif method == "exact":
        res = lat.enumerate_exact(lattice, p["N"], p["stats"])
        cols["z_n"] = res.Z_N
        cols["fraction_j"] = res.multiplet_fractions.get(j, 0.0)
    elif method == "sample":
        if p["stats"] is not Statistics.BOLTZMANN:
            raise ConfigError("method=sample requires --stats boltzmann")
        s = lat.sample_boltzmann_coincidences(lattice, p["N"], p["trials"], p["seed"], multiplicity=j)
        cols["fraction_j"] = s.pair_fraction_mean
        cols["stderr"] = s.pair_fraction_stderr
        cols["expected"] = lat.coincidence_expectation(lattice, p["N"], j)
    else:
        raise ConfigError(f"unknown lattice method {method!r}")
    return cols


@dataclass(frozen=True)
class OpSpec:
    func: object
    axis: str
    params: dict = field(default_factory=dict)


OPS = {
    "props": OpSpec(
        _op_props,
        "T",
        {
            "N": (float, REQUIRED),
            "V": (float, REQUIRED),
            "T": (float, REQUIRED),
            "m": (float, REQUIRED),
            "spin2": (_int, 0),
            "stats": (_stats, Statistics.BOLTZMANN),
            "mu": (_bool, False),
        },
    ),
    "fugacity": OpSpec(_op_fugacity, "eta_sp", {"eta_sp": (float, REQUIRED), "stats": (_stats, REQUIRED), "tol": (float, 1e-14)}),
    "pressure": OpSpec(_op_pressure, "eta", {"eta": (float, REQUIRED), "ga": (_int, 1), "stats": (_stats, REQUIRED)}),
    "polymer": OpSpec(_op_polymer, "eta", {"eta": (float, REQUIRED), "j": (_int, 2)}),
    "spinpair": OpSpec(
        _op_spinpair,
        "dp",
        {"ga": (_int, REQUIRED), "stats": (_stats, REQUIRED), "eta": (float, REQUIRED), "dp": (float, 0.0)},
    ),
    "lattice": OpSpec(
        _op_lattice,
        "L",
        {
            "L": (float, REQUIRED),
            "m": (float, REQUIRED),
            "T": (float, REQUIRED),
            "n_max": (_int, REQUIRED),
            "convention": (str, "h_over_L"),
            "N": (_int, 2),
            "stats": (_stats, Statistics.BOSE),
            "method": (str, "exact"),
            "trials": (_int, 100_000),
            "j": (_int, 2),
        },
    ),
}

GLOBAL_KEYS = {"format": (str, "csv"), "precision": (_int, 12), "seed": (_int, 0), "out": (str, None)}
SWEEP_KEYS = {
    "op": (str, REQUIRED),
    "axis": (str, None),
    "from": (float, REQUIRED),
    "to": (float, REQUIRED),
    "points": (_int, REQUIRED),
    "log": (_bool, False),
}
BOOL_FLAGS = {"mu", "log"}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    parameters: dict
    output_format: str = "csv"
    output_precision: int = 12
    seed: int = 0
    out: str | None = None


def read_config_file(path) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            values[key.replace("-", "_")] = value
    return values


def _convert(schema, raw, context):
    out = {}
    for key, value in raw.items():
        if key not in schema:
            raise ConfigError(f"unknown parameter {key!r} for {context}")
        conv = schema[key][0]
        try:
            out[key] = conv(value) if value is not None else None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from None
    return out


def _fill_defaults(schema, values, context, skip=()):
    for key, (_, default) in schema.items():
        if key in values or key in skip:
            continue
        if default is REQUIRED:
            raise ConfigError(f"missing required parameter {key!r} for {context}")
        values[key] = default
    return values


def build_config(subcommand: str, cli_values: dict, file_values: dict | None = None) -> RunConfig:
    """Merge config-file and command-line values into a validated RunConfig."""
    merged = dict(file_values or {})
    merged.update(cli_values)
    if subcommand == "sweep":
        op = merged.get("op")
        if op not in OPS:
            raise ConfigError(f"sweep needs --op in {sorted(OPS)}, got {op!r}")
        schema = {**GLOBAL_KEYS, **SWEEP_KEYS, **OPS[op].params}
    elif subcommand in OPS:
        schema = {**GLOBAL_KEYS, **OPS[subcommand].params}
    else:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    values = _convert(schema, merged, subcommand)
    if subcommand == "sweep":
        spec = OPS[values["op"]]
        axis = values.get("axis") or spec.axis
        values["axis"] = axis
        if axis not in spec.params or spec.params[axis][0] not in (float, _int):
            raise ConfigError(f"axis {axis!r} is not a numeric parameter of {values['op']}")
        _fill_defaults(schema, values, subcommand, skip=(axis,))
        if values["points"] < 0:
            raise ConfigError("points must be >= 0")
        if values["log"] and not (values["from"] > 0 and values["to"] > 0):
            raise ConfigError("log sweeps need positive bounds")
    else:
        _fill_defaults(schema, values, subcommand)
    fmt = values.pop("format")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    precision = values.pop("precision")
    if not 1 <= precision <= 17:
        raise ConfigError(f"precision must lie in [1, 17], got {precision}")
    seed = values.pop("seed")
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    out = values.pop("out")
    return RunConfig(subcommand, values, fmt, precision, seed, out)


def _threads():
    try:
        return max(1, int(os.environ.get("PSEUDOGAS_THREADS", "1")))
    except ValueError:
        return 1


def sweep_grid(start, stop, points, log=False):
    if points == 0:
        return []
    if log:
        return np.geomspace(start, stop, points).tolist()
    return np.linspace(start, stop, points).tolist()


def execute(config: RunConfig) -> SweepResult:
    """Evaluate a configuration into a table; rows follow the input grid order."""
    params = dict(config.parameters)
    if config.subcommand != "sweep":
        spec = OPS[config.subcommand]
        params["seed"] = config.seed
        cols = spec.func(params)
        return SweepResult(spec.axis, [params[spec.axis]], {k: [v] for k, v in cols.items()})

    spec = OPS[params["op"]]
    axis = params["axis"]
    grid = sweep_grid(params["from"], params["to"], params["points"], params["log"])
    if spec.params[axis][0] is _int:
        grid = [int(round(v)) for v in grid]
    base = {k: v for k, v in params.items() if k not in SWEEP_KEYS}
    base["seed"] = config.seed

    def point(value):
        return spec.func({**base, axis: value})

    if _threads() > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            rows = list(pool.map(point, grid))
    else:
        rows = [point(v) for v in grid]
    if rows:
        names = list(rows[0])
    else:
        # empty grid: take the header from a probe at the lower bound
        try:
            names = list(spec.func({**base, axis: params["from"]}))
        except (PseudogasError, ValueError):
            names = []
    columns = {name: [row.get(name, math.nan) for row in rows] for name in names}
    return SweepResult(axis, grid, columns)


def run(config: RunConfig, stdout=None) -> int:
    """Execute ``config`` and write its table; returns the process exit code."""
    stdout = stdout if stdout is not None else sys.stdout.buffer
    try:
        result = execute(config)
        payload = emit_table(result, config.output_format, config.output_precision)
    except (EnumerationTooLarge, LatticeTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (PseudogasError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if config.out:
            with open(config.out, "wb") as fh:
                fh.write(payload)
        else:
            stdout.write(payload)
            stdout.flush()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _add_flag(parser, key):
    flag = "--" + key.replace("_", "-")
    if key in BOOL_FLAGS:
        parser.add_argument(flag, dest=key, action="store_const", const=True, default=argparse.SUPPRESS)
    else:
        parser.add_argument(flag, dest=key, default=argparse.SUPPRESS, metavar=key.upper())


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudogas", description="Semi-classical quantum gas tables.", allow_abbrev=False
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    all_op_keys = {}
    for name, spec in OPS.items():
        p = sub.add_parser(name, allow_abbrev=False)
        for key in {**GLOBAL_KEYS, **spec.params}:
            _add_flag(p, key)
        p.add_argument("--config", default=None)
        all_op_keys.update(spec.params)
    p = sub.add_parser("sweep", allow_abbrev=False)
    for key in {**GLOBAL_KEYS, **SWEEP_KEYS, **all_op_keys}:
        _add_flag(p, key)
    p.add_argument("--config", default=None)
    return parser


def parse_args(argv=None) -> RunConfig:
    ns = vars(make_parser().parse_args(argv))
    subcommand = ns.pop("subcommand")
    config_path = ns.pop("config", None)
    file_values = read_config_file(config_path) if config_path else {}
    return build_config(subcommand, ns, file_values)


def main(argv=None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PseudogasError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
