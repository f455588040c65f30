"""Command-line front end.

    gravidec rates    --scenario moon [--set key=value ...]
    gravidec simulate --scenario moon --seed 7 --output stats.csv
    gravidec sweep    --scenario lab_spheres --sweep m_total:1:1e6:61:log
    gravidec spectrum --set chh=1e-34 --omega 5.3e-6
    gravidec catalog

Exit codes: 0 success, 2 usage or configuration error, 3 a simulation
missed its acceptance thresholds.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from .background import (
    PowerLaw,
    chh_to_temperature,
    graviton_number,
    load_tabulated_spectrum,
)
from .noise import synthesize, write_realization_csv
from .orbit import TwoBodyOrbit
from .quantities import CODATA_2018, catalog, catalog_get
from .rates import FOOTNOTES, TouchingSpheres, build_report
from .simulation import flat_band_config, run_ensemble

EXIT_OK, EXIT_USAGE, EXIT_THRESHOLD = 0, 2, 3

COMMANDS = ("rates", "simulate", "sweep", "spectrum", "catalog")
FORMATS = ("csv", "json", "table")

SCENARIO_KEYS = ("m_a", "m_b", "rho", "r", "T_em", "chh", "a", "m_total", "density")
SIM_KEYS = ("ensemble", "periods", "samples_per_period", "half_width_bins", "delta_x", "checkpoints", "workers")
CONFIG_KEYS = ("scenario", "format", "output", "seed", "sweep", "omega", "spectrum_file")

ALLOWED_SET_KEYS = {
    "rates": SCENARIO_KEYS,
    "sweep": SCENARIO_KEYS,
    "simulate": SCENARIO_KEYS + SIM_KEYS,
    "spectrum": SCENARIO_KEYS,
    "catalog": (),
}

# simulate acceptance thresholds
DIFFUSION_RATIO_RANGE = (0.9, 1.1)
DEPHASING_TOLERANCE = 0.05
GAUSSIAN_SIGMAS = 3.0

DEFAULT_DENSITY = 8000.0
DEFAULT_SEED = 2026


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Number formatting


def fmt(value) -> str:
    """17 significant digits, scientific; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.16e}"


def _json_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        inner = ", ".join(f"{_json_value(str(k))}: {_json_value(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in value) + "]"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return f"{value:.16e}"


def to_json(obj) -> str:
    """JSON with every float printed to 17 significant digits."""
    return _json_value(obj) + "\n"


def to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    header = list(rows[0])
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(fmt(row[k])) for k in header))
    return "\n".join(lines) + "\n"


def _csv_cell(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def to_table(rows: list[dict], notes=()) -> str:
    """Fixed-precision text table; one row per record, or key/value lines for a single record."""
    def short(v):
        if v is None:
            return "-"
        if isinstance(v, str):
            return v
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            return str(v)
        return f"{float(v):.4e}"

    out = io.StringIO()
    if len(rows) == 1:
        width = max(len(k) for k in rows[0])
        for k, v in rows[0].items():
            out.write(f"{k:<{width}}  {short(v)}\n")
    elif rows:
        header = list(rows[0])
        cells = [[short(r[k]) for k in header] for r in rows]
        widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
        out.write("  ".join(h.rjust(w) for h, w in zip(header, widths)) + "\n")
        for c in cells:
            out.write("  ".join(x.rjust(w) for x, w in zip(c, widths)) + "\n")
    for note in notes:
        out.write(f"note: {note}\n")
    return out.getvalue()


def render(rows: list[dict], fmt_name: str, notes=(), json_obj=None) -> str:
    if fmt_name == "csv":
        return to_csv(rows)
    if fmt_name == "json":
        if json_obj is None:
            json_obj = rows[0] if len(rows) == 1 else rows
        return to_json(json_obj)
    return to_table(rows, notes)


# ---------------------------------------------------------------------------
# Scenario resolution


def _parse_float(key, text):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise UsageError(f"{key}: expected a number, got {text!r}") from None


@dataclass(frozen=True)
class Scenario:
    name: str
    m_a: float
    m_b: float
    rho: float
    r: float
    T_em: float
    chh: float
    Omega: float

    @property
    def m(self):
        return self.m_a * self.m_b / (self.m_a + self.m_b)

    def orbit(self) -> TwoBodyOrbit:
        return TwoBodyOrbit(self.m_a, self.m_b, self.rho, self.Omega, 0.0, CODATA_2018)

    def report(self):
        return build_report(self.name, self.m, self.rho, self.Omega, self.r, self.T_em, self.chh, CODATA_2018)


def resolve_scenario(name: str, overrides: dict) -> Scenario:
    preset = catalog_get(name)
    values = {
        "m_a": preset.m_a,
        "m_b": preset.m_b,
        "rho": preset.rho,
        "r": preset.r,
        "T_em": preset.T_em,
        "chh": preset.chh_at_2omega,
    }
    nums = {k: _parse_float(k, v) for k, v in overrides.items() if k in SCENARIO_KEYS}
    if "m_total" in nums:
        spheres = TouchingSpheres(nums["m_total"], nums.get("density", DEFAULT_DENSITY))
        if not (spheres.m_total > 0 and spheres.density > 0):
            raise UsageError("m_total and density must be positive")
        values.update(m_a=spheres.m_total / 2, m_b=spheres.m_total / 2, rho=spheres.rho, r=spheres.radius)
    elif "density" in nums:
        raise UsageError("density only applies together with m_total (touching spheres)")
    for key in ("m_a", "m_b", "rho", "r", "T_em", "chh"):
        if key in nums:
            values[key] = nums[key]
    for key, value in values.items():
        if not (math.isfinite(value) and (value > 0 or (key == "chh" and value == 0))):
            raise UsageError(f"{key} must be positive, got {value!r}")
    if "a" in nums:
        if not nums["a"] >= 0:
            raise UsageError(f"a must be >= 0, got {nums['a']!r}")
        omega = math.sqrt(nums["a"] / values["rho"])
    else:
        omega = math.sqrt(CODATA_2018.G * (values["m_a"] + values["m_b"]) / values["rho"] ** 3)
    return Scenario(name=name, Omega=omega, **values)


# ---------------------------------------------------------------------------
# Commands


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario: str = "moon"
    overrides: tuple = ()
    output: str | None = None
    format: str | None = None
    seed: int = DEFAULT_SEED
    sweep: str | None = None
    omegas: tuple = ()
    spectrum_file: str | None = None
    dump_realization: str | None = None

    @property
    def settings(self) -> dict:
        return dict(self.overrides)


def report_row(report) -> dict:
    return report.as_dict()


def cmd_rates(config: RunConfig):
    report = resolve_scenario(config.scenario, config.settings).report()
    row = report_row(report)
    fmt_name = config.format or "table"
    obj = dict(row, footnotes=list(FOOTNOTES))
    return render([row], fmt_name, FOOTNOTES, json_obj=obj), EXIT_OK


@dataclass(frozen=True)
class SweepAxis:
    param: str
    lo: float
    hi: float
    count: int
    log: bool

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        parts = text.split(":")
        if len(parts) != 5:
            raise UsageError(f"--sweep expects param:min:max:count:log|lin, got {text!r}")
        param, lo, hi, count, scale = parts
        if param not in SCENARIO_KEYS:
            raise UsageError(f"cannot sweep {param!r}; choose from {', '.join(SCENARIO_KEYS)}")
        if scale not in ("log", "lin"):
            raise UsageError(f"sweep scale must be 'log' or 'lin', got {scale!r}")
        try:
            count = int(count)
        except ValueError:
            raise UsageError(f"sweep count must be an integer, got {count!r}") from None
        axis = cls(param, _parse_float("min", lo), _parse_float("max", hi), count, scale == "log")
        if axis.count < 1:
            raise UsageError("sweep count must be >= 1")
        if axis.count > 1 and axis.lo == axis.hi:
            raise UsageError(f"degenerate sweep range: min = max = {axis.lo:g} with {axis.count} points")
        if axis.log and not (axis.lo > 0 and axis.hi > 0):
            raise UsageError("log sweep needs positive bounds")
        return axis

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        if self.log:
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


def cmd_sweep(config: RunConfig):
    if not config.sweep:
        raise UsageError("sweep needs --sweep param:min:max:count:log|lin")
    axis = SweepAxis.parse(config.sweep)
    rows = []
    base = config.settings
    for value in axis.values():
        overrides = dict(base)
        overrides[axis.param] = repr(float(value))
        row = {"axis": axis.param, "value": float(value)}
        row.update(report_row(resolve_scenario(config.scenario, overrides).report()))
        rows.append(row)
    return render(rows, config.format or "csv", json_obj=rows), EXIT_OK


def cmd_spectrum(config: RunConfig):
    scenario = resolve_scenario(config.scenario, config.settings)
    if config.spectrum_file:
        spectrum = load_tabulated_spectrum(config.spectrum_file)
    else:
        spectrum = PowerLaw(scenario.chh, 1.0, 0.0)
    omegas = sorted(_parse_float("omega", w) for w in config.omegas) or [2.0 * scenario.Omega]
    rows = []
    for w in omegas:
        if not w > 0:
            raise UsageError(f"omega must be positive, got {w!r}")
        chh = float(spectrum.evaluate(w))
        rows.append(
            {
                "omega": w,
                "f": w / (2.0 * math.pi),
                "chh": chh,
                "T_gr": chh_to_temperature(chh, CODATA_2018),
                "n_gr": graviton_number(chh, w, CODATA_2018),
            }
        )
    return render(rows, config.format or "table", json_obj=rows), EXIT_OK


def cmd_catalog(config: RunConfig):
    rows = [
        {
            "name": p.name,
            "m_a": p.m_a,
            "m_b": p.m_b,
            "rho": p.rho,
            "r": p.r,
            "T_em": p.T_em,
            "chh_at_2omega": p.chh_at_2omega,
            "source": p.source,
        }
        for p in sorted(catalog().values(), key=lambda p: p.name)
    ]
    return render(rows, config.format or "table", json_obj=rows), EXIT_OK


def _int_setting(settings, key, default):
    if key not in settings:
        return default
    try:
        return int(settings[key])
    except ValueError:
        raise UsageError(f"{key}: expected an integer, got {settings[key]!r}") from None


def cmd_simulate(config: RunConfig):
    settings = config.settings
    scenario = resolve_scenario(config.scenario, settings)
    orbit = scenario.orbit()
    if orbit.Omega == 0:
        raise UsageError("simulate needs a bound orbit (a > 0)")
    try:
        sim = flat_band_config(
            orbit,
            scenario.chh,
            ensemble_size=_int_setting(settings, "ensemble", 1000),
            seed=config.seed,
            periods=_int_setting(settings, "periods", 1024),
            samples_per_period=_int_setting(settings, "samples_per_period", 16),
            half_width_bins=_int_setting(settings, "half_width_bins", 32),
            delta_x=_parse_float("delta_x", settings["delta_x"]) if "delta_x" in settings else None,
        )
        if "checkpoints" in settings:
            sim = replace(sim, checkpoints=_int_setting(settings, "checkpoints", 64))
    except ValueError as exc:
        raise UsageError(f"invalid simulation grid: {exc}") from None
    if config.dump_realization:
        write_realization_csv(synthesize(sim.spectrum, sim.grid, (sim.seed, 0)), config.dump_realization)
    stats = run_ensemble(sim, workers=_int_setting(settings, "workers", 1))

    ratio = stats.diffusion_ratio
    deviation = stats.dephasing_deviation()
    sigmas = float(np.max(np.abs(stats.gaussian_identity_sigmas())))
    passed = scenario.chh == 0 or (
        DIFFUSION_RATIO_RANGE[0] <= ratio <= DIFFUSION_RATIO_RANGE[1]
        and deviation < DEPHASING_TOLERANCE
        and sigmas <= GAUSSIAN_SIGMAS
    )
    summary = {
        "ensemble_size": stats.ensemble_size,
        "seed": config.seed,
        "D_fit": stats.D_fit,
        "D_fit_stderr": stats.D_fit_stderr,
        "D_analytic": stats.D_analytic,
        "D_ratio": ratio,
        "r_squared": stats.r_squared,
        "delta_x": stats.delta_x,
        "dephasing_max_rel_dev": deviation,
        "gaussian_identity_max_sigma": sigmas,
        "passed": passed,
    }
    line = (
        f"D_fit/D_analytic = {ratio:.4f} +/- {stats.D_fit_stderr / stats.D_analytic if stats.D_analytic else math.nan:.4f}; "
        f"max dephasing deviation = {deviation:.4f}; gaussian identity max = {sigmas:.2f} sigma; "
        f"{'PASS' if passed else 'FAIL'}"
    )
    fmt_name = config.format or "csv"
    if fmt_name == "csv":
        text = stats.to_csv()
    elif fmt_name == "json":
        columns = {
            "t": stats.times.tolist(),
            "p_var": stats.p_var.tolist(),
            "p_var_stderr": stats.p_var_stderr.tolist(),
            "dephasing_re": stats.dephasing.real.tolist(),
            "dephasing_im": stats.dephasing.imag.tolist(),
            "dephasing_stderr": stats.dephasing_stderr.tolist(),
            "analytic_2Dt": stats.analytic_2Dt().tolist(),
            "analytic_dephasing": stats.analytic_dephasing().tolist(),
        }
        text = to_json({"summary": summary, "statistics": columns})
    else:
        text = to_table([summary])
    return text, (EXIT_OK if passed else EXIT_THRESHOLD), line


HANDLERS = {
    "rates": cmd_rates,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "catalog": cmd_catalog,
}


# ---------------------------------------------------------------------------
# Argument and config-file parsing


def _parse_set(items, command) -> list[tuple[str, str]]:
    allowed = ALLOWED_SET_KEYS[command]
    pairs = []
    for item in items:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key not in allowed:
            raise UsageError(
                f"unknown parameter {key!r} for {command}; recognised: {', '.join(allowed) or '(none)'}"
            )
        pairs.append((key, value))
    return pairs


def read_config_file(path, command) -> dict:
    """Flat ``key = value`` file with one section per command (plus an optional [common])."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    merged = {}
    for section in ("common", command):
        if parser.has_section(section):
            merged.update(parser.items(section))
    return merged


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gravidec", description="Gravitational-wave decoherence of circular orbits")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value file with a section per command")
        p.add_argument("--scenario", help="preset name (default: moon)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a parameter")
        p.add_argument("--output", help="write to this file instead of stdout")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--seed", type=int)
        if name == "sweep":
            p.add_argument("--sweep", help="param:min:max:count:log|lin")
        if name == "spectrum":
            p.add_argument("--omega", action="append", default=[], help="angular frequency [rad/s]; repeatable")
            p.add_argument("--spectrum-file", help="tabulated spectrum: 'omega, chh' per line")
        if name == "simulate":
            p.add_argument("--dump-realization", help="write the first h(t) realisation as CSV")
    return parser


def make_run_config(args) -> RunConfig:
    command = args.command
    file_settings = read_config_file(args.config, command) if args.config else {}
    overrides = dict(_parse_set([f"{k}={v}" for k, v in file_settings.items() if k not in CONFIG_KEYS], command))
    overrides.update(_parse_set(args.set, command))

    def pick(flag, key, default=None):
        return flag if flag is not None else file_settings.get(key, default)

    fmt_name = pick(args.format, "format")
    if fmt_name is not None and fmt_name not in FORMATS:
        raise UsageError(f"format must be one of {FORMATS}, got {fmt_name!r}")
    seed = pick(args.seed, "seed", DEFAULT_SEED)
    try:
        seed = int(seed)
    except ValueError:
        raise UsageError(f"seed must be an integer, got {seed!r}") from None
    if seed < 0:
        raise UsageError("seed must be non-negative")
    omegas = tuple(getattr(args, "omega", []) or ())
    if not omegas and "omega" in file_settings:
        omegas = tuple(file_settings["omega"].split(","))
    return RunConfig(
        command=command,
        scenario=pick(args.scenario, "scenario", "moon"),
        overrides=tuple(sorted(overrides.items())),
        output=pick(args.output, "output"),
        format=fmt_name,
        seed=seed,
        sweep=pick(getattr(args, "sweep", None), "sweep"),
        omegas=omegas,
        spectrum_file=pick(getattr(args, "spectrum_file", None), "spectrum_file"),
        dump_realization=getattr(args, "dump_realization", None),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_run_config(args)
        result = HANDLERS[config.command](config)
    except (UsageError, ValueError, LookupError, OSError) as exc:
        print(f"gravidec {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text, code = result[0], result[1]
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if len(result) > 2:
        print(result[2], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
