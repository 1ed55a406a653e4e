"""Batch front-end: config parsing, runs, sweeps, and machine-readable output.

Configs are flat ``key=value`` files (UTF-8, ``#`` comments); every key is
also a command-line flag that overrides the file.  Exit codes: 0 success,
2 config/parse errors, 3 validation failure, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .estimator import DegenerateWeights, EstimatorResult, gfk_expectation, ground_energy
from .model import COUPLING_MODES, ModelConfig, resolve_e0
from .observables import PAIR_MODES, mean_x_sq, pair_distance_sq, pair_distances, pair_histogram
from .regularization import GridNotConverged, check_regularization
from .sampler import INCREMENT_KINDS, INIT_MODES, NonFiniteWalker, SamplerConfig, generate_trajectories
from .theory import (
    pair_variance_prediction,
    quarter_period_map,
    soliton_size,
    validity_conditions,
    vrel_variance,
    zero_point_rel_fluct,
)
from .units import (
    PhysicalParams,
    axial_omega,
    collapse_threshold,
    coupling_si,
    g_tilde_for_omega,
    lithium7_defaults,
    quarter_period_seconds,
    radial_length,
)

THREADS_ENV_VAR = "GFKMC_THREADS"
CSV_SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

OBSERVABLES = ("pair_distance_sq", "mean_x_sq", "pair_histogram")

# Default sweep rows: (g_tilde, sigma_tilde) pairs of the N = 100 benchmark.
DEFAULT_SWEEP_ROWS = (
    (0.5, 0.016),
    (0.55, 0.015),
    (0.61, 0.015),
    (0.78, 0.012),
    (0.83, 0.01),
    (0.85, 0.01),
)


class ParseError(ValueError):
    """Malformed configuration text."""


class RangeError(ValueError):
    """Well-formed configuration with out-of-range values."""


@dataclass(frozen=True)
class RunSpec:
    """Everything one `run` needs; the flat-config surface mirrors this."""

    model: ModelConfig
    sampler: SamplerConfig
    observables: tuple = ("pair_distance_sq",)
    n_trajectories: int = 50
    output_path: str | None = None
    output_format: str = "csv"
    threads: int = 0
    endpoint_only: bool = False
    pair_mode: str = "all_pairs"
    hist_bin_width: float = 0.1
    hist_r_max: float = 5.0

    def __post_init__(self):
        if self.n_trajectories < 2:
            raise RangeError("npi must be >= 2")
        if self.output_format not in ("csv", "json"):
            raise RangeError("format must be csv or json")
        if self.pair_mode not in PAIR_MODES:
            raise RangeError(f"pair_mode must be one of {PAIR_MODES}")
        for name in self.observables:
            if name not in OBSERVABLES:
                raise RangeError(f"unknown observable {name!r}; known: {OBSERVABLES}")
        if self.threads < 0:
            raise RangeError("threads must be >= 0")
        if self.hist_bin_width <= 0 or self.hist_r_max <= 0:
            raise RangeError("hist_bin_width and hist_r_max must be > 0")


# Flat-config keys: name -> (parser, description).  Short keys follow the
# conventional notation: N, scale, npi, g_tilde, sigma_tilde, t.
def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_e0(text: str):
    if text.strip().lower() == "auto":
        return None
    return float(text)


CONFIG_KEYS = {
    "N": (int, "number of bosons"),
    "g_tilde": (float, "post-quench dimensionless coupling"),
    "sigma_tilde": (float, "width of the Gaussian-regularized contact term"),
    "quench_divisor": (float, "pre-quench coupling is g_tilde / quench_divisor"),
    "trap": (_parse_bool, "include the harmonic trap"),
    "b": (float, "trial-function width parameter"),
    "e0": (_parse_e0, "trial reference energy, or 'auto' for a pilot estimate"),
    "coupling_mode": (str, f"one of {COUPLING_MODES}"),
    "scale": (int, "sqrt(steps per unit imaginary time)"),
    "t": (float, "total imaginary time"),
    "increment_kind": (str, f"one of {INCREMENT_KINDS}"),
    "init_mode": (str, f"one of {INIT_MODES}"),
    "seed": (int, "master seed for the per-trajectory streams"),
    "sample_stride": (int, "steps between recorded samples (0 = auto)"),
    "measure_start": (float, "start of the measurement window (-1 = auto t/2)"),
    "npi": (int, "number of trajectories"),
    "observables": (str, f"comma list from {OBSERVABLES}"),
    "pair_mode": (str, f"one of {PAIR_MODES}"),
    "endpoint_only": (_parse_bool, "estimate from the final time only"),
    "hist_bin_width": (float, "pair-histogram bin width"),
    "hist_r_max": (float, "pair-histogram range"),
    "output": (str, "output file path"),
    "format": (str, "csv or json"),
    "threads": (int, "worker threads (0 = auto)"),
}

_DEFAULTS = {
    "N": 100,
    "g_tilde": 0.5,
    "sigma_tilde": 0.016,
    "quench_divisor": 4.0,
    "trap": True,
    "b": 0.5,
    "e0": None,
    "coupling_mode": "pre_quench",
    "scale": 30,
    "t": 10.0,
    "increment_kind": "binomial",
    "init_mode": "origin",
    "seed": 1,
    "sample_stride": 0,
    "measure_start": -1.0,
    "npi": 50,
    "observables": "pair_distance_sq",
    "pair_mode": "all_pairs",
    "endpoint_only": False,
    "hist_bin_width": 0.1,
    "hist_r_max": 5.0,
    "output": None,
    "format": "csv",
    "threads": 0,
}


def parse_config(text: str) -> RunSpec:
    """Parse flat key=value configuration text into a RunSpec."""
    values = parse_config_dict(text)
    return build_spec(values)


def parse_config_dict(text: str) -> dict:
    """Parse the key=value grammar, returning raw values with defaults."""
    values = dict(_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in CONFIG_KEYS:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        parser = CONFIG_KEYS[key][0]
        try:
            values[key] = parser(val)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: bad value for {key}: {exc}") from None
    return values


def build_spec(values: dict) -> RunSpec:
    """Assemble and validate a RunSpec from raw config values."""
    try:
        model = ModelConfig(
            n_particles=values["N"],
            g_tilde=values["g_tilde"],
            sigma_tilde=values["sigma_tilde"],
            quench_divisor=values["quench_divisor"],
            trap_enabled=values["trap"],
            trial_b=values["b"],
            e0=values["e0"],
            coupling_mode=values["coupling_mode"],
        )
        sampler = SamplerConfig(
            scale=values["scale"],
            t_total=values["t"],
            increment_kind=values["increment_kind"],
            init_mode=values["init_mode"],
            master_seed=values["seed"],
            sample_stride=values["sample_stride"] or None,
            measure_start=None if values["measure_start"] < 0 else values["measure_start"],
        )
        observables = tuple(s.strip() for s in values["observables"].split(",") if s.strip())
        return RunSpec(
            model=model,
            sampler=sampler,
            observables=observables,
            n_trajectories=values["npi"],
            output_path=values["output"],
            output_format=values["format"],
            threads=values["threads"],
            endpoint_only=values["endpoint_only"],
            pair_mode=values["pair_mode"],
            hist_bin_width=values["hist_bin_width"],
            hist_r_max=values["hist_r_max"],
        )
    except RangeError:
        raise
    except ValueError as exc:
        raise RangeError(str(exc)) from None


def spec_to_values(spec: RunSpec) -> dict:
    """Flat-config echo of a spec; parsing it back reproduces the run."""
    sampler = spec.sampler
    model = spec.model
    return {
        "N": model.n_particles,
        "g_tilde": model.g_tilde,
        "sigma_tilde": model.sigma_tilde,
        "quench_divisor": model.quench_divisor,
        "trap": model.trap_enabled,
        "b": model.trial_b,
        "e0": "auto" if model.e0 is None else repr(model.e0),
        "coupling_mode": model.coupling_mode,
        "scale": sampler.scale,
        "t": sampler.t_total,
        "increment_kind": sampler.increment_kind,
        "init_mode": sampler.init_mode,
        "seed": sampler.master_seed,
        "sample_stride": sampler.sample_stride or 0,
        "measure_start": -1.0 if sampler.measure_start is None else sampler.measure_start,
        "npi": spec.n_trajectories,
        "observables": ",".join(spec.observables),
        "pair_mode": spec.pair_mode,
        "endpoint_only": spec.endpoint_only,
        "hist_bin_width": spec.hist_bin_width,
        "hist_r_max": spec.hist_r_max,
        "output": spec.output_path,
        "format": spec.output_format,
        "threads": spec.threads,
    }


def _resolve_threads(threads: int) -> int:
    if threads > 0:
        return threads
    env = os.environ.get(THREADS_ENV_VAR, "").strip()
    if env:
        try:
            n = int(env)
            if n > 0:
                return n
        except ValueError:
            pass
    return min(os.cpu_count() or 1, 8)


@dataclass
class RunResult:
    spec: RunSpec
    resolved_e0: float
    window: tuple[float, float]
    results: dict = field(default_factory=dict)   # name -> EstimatorResult
    histogram: tuple | None = None                # (centers, mass)
    wall_clock: float = 0.0


def _observable_fn(name: str, pair_mode: str):
    if name == "pair_distance_sq":
        return lambda x: pair_distance_sq(x, mode=pair_mode)
    if name == "mean_x_sq":
        return mean_x_sq
    raise RangeError(f"unknown observable {name!r}")


def execute_run(spec: RunSpec, progress=None) -> RunResult:
    """Generate trajectories and estimate every requested observable."""
    t_start = time.monotonic()
    threads = _resolve_threads(spec.threads)
    model = resolve_e0(spec.model, spec.sampler.master_seed)
    trajectories = generate_trajectories(model, spec.sampler, spec.n_trajectories,
                                         threads=threads, progress=progress)
    t_end = float(trajectories.times[-1])
    if spec.endpoint_only:
        window = (t_end, t_end)
    else:
        window = (spec.sampler.measure_start_time, t_end)

    out = RunResult(spec=spec, resolved_e0=model.e0, window=window)
    for name in spec.observables:
        if name == "pair_histogram":
            mask = (trajectories.times >= window[0] - 1e-12) & (trajectories.times <= window[1] + 1e-12)
            # weights repeated per pair within each sampled configuration
            pos = trajectories.positions[:, mask, :]
            act = trajectories.actions[:, mask]
            w = np.exp(-(act - act.min()))
            n_pairs = model.n_particles * (model.n_particles - 1) // 2
            dists = pair_distances(pos)
            weights = np.repeat(w.ravel(), n_pairs)
            out.histogram = pair_histogram(dists, spec.hist_bin_width, spec.hist_r_max, weights)
        else:
            out.results[name] = gfk_expectation(trajectories, _observable_fn(name, spec.pair_mode), window)
    fit_window = (spec.sampler.measure_start_time, t_end)
    out.results["ground_energy"] = ground_energy(trajectories, fit_window)
    out.wall_clock = time.monotonic() - t_start
    return out


_RESULT_COLUMNS = [
    "schema_version", "version", "row_kind", "observable", "mean", "std_error",
    "n_trajectories", "effective_sample_size", "window_start", "window_end",
    "weight_dispersion", "bin_center", "mass",
]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv_quote(field_text: str) -> str:
    if any(c in field_text for c in ',"\n\r'):
        return '"' + field_text.replace('"', '""') + '"'
    return field_text


def render_run_csv(run: RunResult) -> str:
    """Self-describing CSV: config echo columns plus one row per result."""
    echo = spec_to_values(run.spec)
    echo["e0"] = repr(run.resolved_e0)
    config_cols = list(echo.keys())
    header = _RESULT_COLUMNS + [f"config_{k}" for k in config_cols]
    config_fields = [_fmt(echo[k]) for k in config_cols]

    def row(kind, observable, res: EstimatorResult | None, bin_center=None, mass=None):
        if res is None:
            fields = [str(CSV_SCHEMA_VERSION), f"gfkmc-{__version__}", kind, observable,
                      "", "", "", "", "", "", "", _fmt(bin_center), _fmt(mass)]
        else:
            fields = [str(CSV_SCHEMA_VERSION), f"gfkmc-{__version__}", kind, observable,
                      _fmt(res.mean), _fmt(res.std_error), _fmt(res.n_trajectories),
                      _fmt(res.effective_sample_size), _fmt(res.window[0]), _fmt(res.window[1]),
                      _fmt(res.weight_dispersion), "", ""]
        return ",".join(_csv_quote(f) for f in fields + config_fields)

    lines = [",".join(_csv_quote(h) for h in header)]
    for name in sorted(run.results):
        lines.append(row("result", name, run.results[name]))
    if run.histogram is not None:
        centers, mass = run.histogram
        for c, m in zip(centers, mass):
            lines.append(row("histogram", "pair_histogram", None, c, m))
    return "\n".join(lines) + "\n"


def render_run_json(run: RunResult) -> str:
    echo = spec_to_values(run.spec)
    echo["e0"] = repr(run.resolved_e0)
    payload = {
        "schema_version": CSV_SCHEMA_VERSION,
        "version": f"gfkmc-{__version__}",
        "config": {k: echo[k] for k in sorted(echo)},
        "results": {
            name: {
                "mean": res.mean,
                "std_error": res.std_error,
                "n_trajectories": res.n_trajectories,
                "effective_sample_size": res.effective_sample_size,
                "window": list(res.window),
                "weight_dispersion": res.weight_dispersion,
            }
            for name, res in sorted(run.results.items())
        },
    }
    if run.histogram is not None:
        centers, mass = run.histogram
        payload["histogram"] = {
            "bin_center": [float(c) for c in centers],
            "mass": [float(m) for m in mass],
        }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write_output(run: RunResult) -> None:
    if run.spec.output_path is None:
        return
    text = render_run_csv(run) if run.spec.output_format == "csv" else render_run_json(run)
    with open(run.spec.output_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _summary_line(run: RunResult) -> str:
    spec = run.spec
    parts = [
        f"gfkmc run N={spec.model.n_particles}",
        f"g_tilde={spec.model.g_tilde:g}",
        f"mode={spec.model.coupling_mode}",
        f"npi={spec.n_trajectories}",
    ]
    for name, res in sorted(run.results.items()):
        parts.append(f"{name}={res.mean:.6g}+-{res.std_error:.3g}")
    parts.append(f"wall={run.wall_clock:.1f}s")
    if spec.output_path:
        parts.append(f"out={spec.output_path}")
    return " ".join(parts)


def _progress_printer():
    state = {"last": 0.0}

    def progress(done, total):
        now = time.monotonic()
        if now - state["last"] >= 2.0 or done == total:
            state["last"] = now
            print(f"  progress: step {done}/{total}", file=sys.stderr, flush=True)

    return progress


def _validate_spec(spec: RunSpec, force: bool) -> bool:
    """Regularization guard; True when the run may proceed."""
    g_eff = spec.model.g_sampled
    if g_eff == 0.0:
        return True
    report = check_regularization(g_eff, spec.model.sigma_tilde)
    if not report.ok and not force:
        print(
            f"regularization check failed for g_eff={g_eff:g}, "
            f"sigma_tilde={spec.model.sigma_tilde:g}: count={report.count:.3f}, "
            f"E_bound={report.bound_energy_estimate:.4g}, V0={report.v0:.4g}; "
            "rerun with --force to override",
            file=sys.stderr,
        )
        return False
    return True


def command_run(spec: RunSpec, force: bool = False) -> int:
    if not _validate_spec(spec, force):
        return EXIT_VALIDATION
    try:
        run = execute_run(spec, progress=_progress_printer())
    except (DegenerateWeights, NonFiniteWalker) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_output(run)
    print(_summary_line(run))
    return EXIT_OK


SWEEP_COLUMNS = [
    "g_tilde", "sigma_tilde", "coupling_mode", "g_sampled", "estimate", "std_error",
    "theory", "ratio_a", "ratio_b", "regularization_ok", "wkb_count", "error",
]


def table_sweep(rows, base: RunSpec, progress=False) -> list[dict]:
    """One run per (g_tilde, sigma_tilde) row; failures recorded in-row."""
    if not rows:
        raise RangeError("sweep needs at least one row")
    out = []
    for g_tilde, sigma_tilde in rows:
        model = replace(base.model, g_tilde=g_tilde, sigma_tilde=sigma_tilde)
        spec = replace(base, model=model)
        record = {
            "g_tilde": g_tilde,
            "sigma_tilde": sigma_tilde,
            "coupling_mode": model.coupling_mode,
            "g_sampled": model.g_sampled,
            "estimate": None,
            "std_error": None,
            "theory": pair_variance_prediction(g_tilde, model.n_particles),
            "ratio_a": None,
            "ratio_b": None,
            "regularization_ok": None,
            "wkb_count": None,
            "error": "",
        }
        cond = validity_conditions(g_tilde, model.n_particles)
        record["ratio_a"] = cond.ratio_a
        record["ratio_b"] = cond.ratio_b
        try:
            report = check_regularization(model.g_sampled, sigma_tilde)
            record["regularization_ok"] = report.ok
            record["wkb_count"] = report.count
        except (ValueError, GridNotConverged) as exc:
            record["error"] = f"regularization: {exc}"
        try:
            run = execute_run(spec, progress=_progress_printer() if progress else None)
            res = run.results["pair_distance_sq"]
            record["estimate"] = res.mean
            record["std_error"] = res.std_error
        except (DegenerateWeights, NonFiniteWalker, ValueError) as exc:
            record["error"] = (record["error"] + "; " if record["error"] else "") + str(exc)
        out.append(record)
    return out


def render_sweep_csv(records: list[dict]) -> str:
    lines = [",".join(SWEEP_COLUMNS)]
    for rec in records:
        lines.append(",".join(_csv_quote(_fmt(rec[c])) for c in SWEEP_COLUMNS))
    return "\n".join(lines) + "\n"


def command_sweep(rows, base: RunSpec, output: str | None) -> int:
    base = replace(base, observables=("pair_distance_sq",), output_path=None)
    records = table_sweep(rows, base, progress=True)
    text = render_sweep_csv(records)
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"gfkmc sweep: {len(records)} rows -> {output}")
    else:
        sys.stdout.write(text)
    failures = [r for r in records if r["error"]]
    return EXIT_NUMERICAL if failures else EXIT_OK


def command_theory(g_tilde: float, n_particles: int) -> int:
    vrel = vrel_variance(g_tilde, n_particles)
    cond = validity_conditions(g_tilde, n_particles)
    print(f"vrel_variance           = {vrel:.6g}")
    print(f"xrel_variance (T/4)     = {quarter_period_map(vrel):.6g}")
    print(f"pair_variance (T/4)     = {pair_variance_prediction(g_tilde, n_particles):.6g}")
    print(f"zero_point_rel_fluct    = {zero_point_rel_fluct(n_particles):.6g}")
    print(f"soliton_size N/4        = {soliton_size(n_particles / 4.0, g_tilde):.6g}")
    print(f"soliton_size 3N/4       = {soliton_size(3.0 * n_particles / 4.0, g_tilde):.6g}")
    print(f"validity lhs 1/(gN)^2   = {cond.lhs:.6g}")
    print(f"condition (a) bound     = {cond.bound_a:.6g}  ratio = {cond.ratio_a:.4g}")
    print(f"condition (b) bound     = {cond.bound_b:.6g}  ratio = {cond.ratio_b:.4g}")
    return EXIT_OK


def command_units(mass_u: float, a_sc_a0: float, radial_hz: float,
                  g_tilde: float | None, omega: float | None) -> int:
    params = PhysicalParams(atomic_mass=mass_u, scattering_length=a_sc_a0,
                            radial_trap_freq=radial_hz)
    g = coupling_si(params)
    if g_tilde is None and omega is None:
        raise RangeError("units needs --g-tilde or --omega")
    if g_tilde is None:
        g_tilde = g_tilde_for_omega(g, params.mass_kg, omega)
    w = axial_omega(g, params.mass_kg, g_tilde)
    a_r = radial_length(params)
    print(f"coupling g              = {g:.6g} J m")
    print(f"dimensionless g_tilde   = {g_tilde:.6g}")
    print(f"axial omega             = {w:.6g} rad/s ({w / (2 * np.pi):.6g} Hz)")
    print(f"quarter period T/4      = {quarter_period_seconds(w):.6g} s")
    print(f"radial length a_r       = {a_r:.6g} m")
    print(f"collapse threshold N_c  = {collapse_threshold(a_r, params.scattering_length_m):.6g}")
    return EXIT_OK


def command_validate(spec: RunSpec) -> int:
    model = spec.model
    ok_all = True
    for label, g_eff in (("pre_quench", model.g_pre_quench), ("post_quench", model.g_tilde)):
        if g_eff == 0.0:
            print(f"{label}: g_eff = 0, nothing to validate")
            continue
        try:
            report = check_regularization(g_eff, model.sigma_tilde)
        except GridNotConverged as exc:
            print(f"{label}: grid not converged: {exc}")
            if label == model.coupling_mode:
                ok_all = False
            continue
        print(
            f"{label}: g_eff={g_eff:g} V0={report.v0:.4g} count={report.count:.4f} "
            f"E_bound={report.bound_energy_estimate:.6g} ok={report.ok}"
        )
        if label == model.coupling_mode and not report.ok:
            ok_all = False
    return EXIT_OK if ok_all else EXIT_VALIDATION


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="flat key=value config file")
    for key, (_, help_text) in CONFIG_KEYS.items():
        parser.add_argument(f"--{key}", dest=f"cfg_{key}", metavar="V", help=help_text)


def _spec_from_args(args) -> RunSpec:
    values = dict(_DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read config: {exc}") from None
        values.update(parse_config_dict(text))
    for key, (parser_fn, _) in CONFIG_KEYS.items():
        raw = getattr(args, f"cfg_{key}", None)
        if raw is not None:
            try:
                values[key] = parser_fn(raw)
            except ValueError as exc:
                raise ParseError(f"bad value for --{key}: {exc}") from None
    return build_spec(values)


def _parse_rows(text: str):
    rows = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            g, s = part.split(":")
            rows.append((float(g), float(s)))
        except ValueError:
            raise ParseError(f"bad sweep row {part!r}; expected g_tilde:sigma_tilde") from None
    return rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfkmc",
        description="Feynman-Kac random-walk estimates for attractive 1D trapped bosons",
    )
    parser.add_argument("--version", action="version", version=f"gfkmc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one simulation")
    _add_config_flags(p_run)
    p_run.add_argument("--force", action="store_true", help="run even if the regularization check fails")

    p_sweep = sub.add_parser("sweep", help="run a (g_tilde, sigma_tilde) sweep")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--rows", metavar="g:s,g:s,...",
                         help="sweep rows; default is the six benchmark rows")
    p_sweep.add_argument("--sweep-output", metavar="FILE", help="sweep CSV path (default stdout)")

    p_theory = sub.add_parser("theory", help="print the closed-form predictions")
    p_theory.add_argument("--g-tilde", type=float, required=True)
    p_theory.add_argument("--N", type=int, default=100)

    p_units = sub.add_parser("units", help="convert to SI experimental parameters")
    p_units.add_argument("--mass", type=float, default=lithium7_defaults().atomic_mass,
                         help="atomic mass in u")
    p_units.add_argument("--a-sc", type=float, default=lithium7_defaults().scattering_length,
                         help="scattering length in Bohr radii (signed)")
    p_units.add_argument("--radial-freq", type=float, default=lithium7_defaults().radial_trap_freq,
                         help="radial trap frequency in Hz")
    p_units.add_argument("--g-tilde", type=float, help="dimensionless coupling")
    p_units.add_argument("--omega", type=float, help="axial trap angular frequency in rad/s")

    p_val = sub.add_parser("validate", help="check the Gaussian regularization")
    _add_config_flags(p_val)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return command_run(_spec_from_args(args), force=args.force)
        if args.command == "sweep":
            spec = _spec_from_args(args)
            rows = _parse_rows(args.rows) if args.rows else list(DEFAULT_SWEEP_ROWS)
            return command_sweep(rows, spec, args.sweep_output)
        if args.command == "theory":
            return command_theory(args.g_tilde, args.N)
        if args.command == "units":
            return command_units(args.mass, args.a_sc, args.radial_freq,
                                 args.g_tilde, args.omega)
        if args.command == "validate":
            return command_validate(_spec_from_args(args))
        parser.error(f"unknown command {args.command!r}")
    except (ParseError, RangeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GridNotConverged as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (DegenerateWeights, NonFiniteWalker) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
