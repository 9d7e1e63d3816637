"""Command-line driver with seeded, reproducible runs and CSV output.

Subcommands:

* ``phase``        one-shot fringe/phase report for a setup
* ``sweep``        phase-curve, probability-curve, or snr curves as CSV
* ``fringe``       synthesized fringe scan + fit, or a phase-shift curve
* ``mc-validate``  Monte Carlo versus analytic noise-model checks

Angles accept a ``deg`` or ``rad`` suffix; bare numbers are radians.  A flat
key=value config file can pre-set any option of the invoked subcommand;
explicit flags win.  The default seed comes from the GEOPHASE_SEED
environment variable.  Identical seeded invocations produce byte-identical
output files (floats are printed with 17 significant digits, files are
written atomically).

Exit codes: 0 success, 1 runtime failure (including failed validation
checks), 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass

import numpy as np

from .counting import NoiseModel, direct_trials, gp_trials, predicted_ratio_variance
from .errors import GeophaseError, SmallAngleViolation
from .fringes import fit_sinusoid, phase_shift_curve, synthesize_scan
from .nphoton import nphoton_postselect, nulling_offset
from .phases import closed_form_one_photon
from .polarization import SetupConfig
from .snr import snr_sweep

DEFAULT_SEED = 12345
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one CLI run; sufficient to reproduce it."""

    command: str
    params: dict
    rng_seed: int
    output_path: str | None
    output_format: str

    def as_lines(self) -> list[str]:
        lines = [f"command = {self.command}", f"seed = {self.rng_seed}",
                 f"format = {self.output_format}"]
        for key in sorted(self.params):
            lines.append(f"{key} = {self.params[key]}")
        return lines


def parse_angle(text: str) -> float:
    """Angle with optional deg/rad suffix; bare values are radians."""
    t = text.strip().lower()
    if t.endswith("deg"):
        return math.radians(float(t[:-3]))
    if t.endswith("rad"):
        return float(t[:-3])
    return float(t)


def _angle_list(text: str) -> list[float]:
    return [parse_angle(part) for part in text.split(",") if part.strip()]


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".geophase-")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(run: RunConfig, header: list[str], rows: list[tuple], trailer: dict | None = None) -> None:
    if run.output_format == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        if trailer:
            lines.append("#fit: " + " ".join(f"{k}={_fmt(v)}" for k, v in trailer.items()))
    else:  # json-lines
        lines = [
            json.dumps(dict(zip(header, row)), separators=(",", ":"), allow_nan=True)
            for row in rows
        ]
        if trailer:
            lines.append(json.dumps({"fit": trailer}, separators=(",", ":"), allow_nan=True))
    text = "\n".join(lines) + "\n"
    if run.output_path is None:
        sys.stdout.write(text)
    else:
        _atomic_write(run.output_path, text)


def _emit_text(run: RunConfig, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if run.output_path is None:
        sys.stdout.write(text)
    else:
        _atomic_write(run.output_path, text)


def _load_config(path: str) -> dict:
    mapping = {}
    with open(path) as handle:
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, value = line.split("=", 1)
            mapping[key.strip().replace("-", "_")] = value.strip()
    return mapping


def _resolve(args, cfg: dict, name: str, conv, default=None, required: bool = False):
    """Flag value if given, else config-file value, else default."""
    value = getattr(args, name.replace("-", "_"))
    if value is None:
        raw = cfg.get(name.replace("-", "_"))
        if raw is not None:
            value = conv(raw)
    if value is None:
        value = default
    if value is None and required:
        raise ValueError(f"missing required option --{name}")
    return value


def _resolve_seed(args, cfg: dict) -> int:
    if args.seed is not None:
        return args.seed
    if "seed" in cfg:
        return int(cfg["seed"])
    env = os.environ.get("GEOPHASE_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def _flag(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in ("1", "true", "yes", "on")


def _as_list(value) -> list:
    """Scalar options given via the single-value flag become one-element lists."""
    return value if isinstance(value, list) else [value]


# ---------------------------------------------------------------------------
# Subcommands.


def _phase_row(theta1: float, theta2: float, n: int) -> tuple:
    one = closed_form_one_photon(theta1, theta2)
    rep = nphoton_postselect(SetupConfig(theta1, theta2, n))
    return (
        theta1,
        theta2,
        n,
        n * one.geometric,
        rep.phase,
        rep.phase_m,
        rep.success_probability,
    )


_PHASE_HEADER = ["theta1", "theta2", "n", "gamma", "phi_f", "phi_m", "p_success"]


def cmd_phase(args, cfg: dict, run: RunConfig) -> int:
    theta1 = _resolve(args, cfg, "theta1", parse_angle, required=True)
    theta2 = _resolve(args, cfg, "theta2", parse_angle, required=True)
    n = _resolve(args, cfg, "n", int, default=1)
    _emit(run, _PHASE_HEADER, [_phase_row(theta1, theta2, n)])
    return 0


def cmd_sweep(args, cfg: dict, run: RunConfig) -> int:
    kind = _resolve(args, cfg, "kind", str, required=True)
    if kind in ("phase-curve", "probability-curve"):
        start = _resolve(args, cfg, "theta1-start", parse_angle, default=-math.pi / 2)
        stop = _resolve(args, cfg, "theta1-stop", parse_angle, default=math.pi / 2)
        points = _resolve(args, cfg, "theta1-points", int, default=181)
        theta2s = _as_list(_resolve(args, cfg, "theta2", _angle_list, required=True))
        ns = _as_list(_resolve(args, cfg, "n", _int_list, default=[1]))
        grid = np.linspace(start, stop, points)
        rows = [
            _phase_row(float(t1), t2, n)
            for n in ns
            for t2 in theta2s
            for t1 in grid
        ]
        _emit(run, _PHASE_HEADER, rows)
        return 0
    if kind == "snr":
        m_start = _resolve(args, cfg, "m-start", float, default=1e2)
        m_stop = _resolve(args, cfg, "m-stop", float, default=1e12)
        m_points = _resolve(args, cfg, "m-points", int, default=101)
        schemes = _resolve(args, cfg, "schemes", _str_list, default=["direct", "geometric"])
        theta1 = _resolve(args, cfg, "theta1", parse_angle, default=math.pi / 180)
        theta2s = _as_list(_resolve(args, cfg, "theta2", _angle_list, default=[math.pi / 20]))
        ns = _as_list(_resolve(args, cfg, "n", _int_list, default=[1, 2]))
        eta = _resolve(args, cfg, "eta", float, default=1.0)
        tau = _resolve(args, cfg, "tau", float, default=1.0)
        xi2 = _resolve(args, cfg, "xi2", float, default=2.5e-5)
        visibility = _resolve(args, cfg, "visibility", float, default=1.0)
        model = NoiseModel(
            mean_rate=0.0,
            technical_power=xi2,
            integration_time=tau,
            detection_efficiency=eta,
            rng_seed=run.rng_seed,
        )
        m_values = np.geomspace(m_start, m_stop, m_points)
        rows = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SmallAngleViolation)
            for scheme in schemes:
                if scheme == "direct":
                    sweep = snr_sweep("direct", SetupConfig(theta1, math.pi / 4), m_values, model)
                    rows += [(p.scheme, 1, math.nan, p.total_photon_rate, p.snr) for p in sweep.points]
                elif scheme == "geometric":
                    for n in ns:
                        for t2 in theta2s:
                            config = SetupConfig(theta1, t2, n, chi=nulling_offset(n))
                            sweep = snr_sweep("geometric", config, m_values, model, visibility)
                            rows += [
                                (p.scheme, n, t2, p.total_photon_rate, p.snr)
                                for p in sweep.points
                            ]
                else:
                    raise ValueError(f"unknown scheme {scheme!r}")
        _emit(run, ["scheme", "n", "theta2", "m_total", "snr"], rows)
        return 0
    raise ValueError(f"unknown sweep kind {kind!r}")


def cmd_fringe(args, cfg: dict, run: RunConfig) -> int:
    mode = _resolve(args, cfg, "mode", str, default="scan")
    theta2 = _resolve(args, cfg, "theta2", parse_angle, required=True)
    n = _resolve(args, cfg, "n", int, default=2)
    visibility_factor = _resolve(args, cfg, "visibility-factor", float, default=1.0)
    rate = _resolve(args, cfg, "rate", float, default=1e4)
    eta = _resolve(args, cfg, "eta", float, default=1.0)
    tau = _resolve(args, cfg, "tau", float, default=1.0)
    xi2 = _resolve(args, cfg, "xi2", float, default=0.0)
    points = _resolve(args, cfg, "points", int, default=64)
    model = NoiseModel(
        mean_rate=rate,
        technical_power=xi2,
        integration_time=tau,
        detection_efficiency=eta,
        rng_seed=run.rng_seed,
    )
    if mode == "scan":
        theta1 = _resolve(args, cfg, "theta1", parse_angle, required=True)
        chi_start = _resolve(args, cfg, "chi-start", parse_angle, default=0.0)
        chi_span = _resolve(args, cfg, "chi-span", parse_angle, default=2 * _TWO_PI)
        chi_units = _resolve(args, cfg, "chi-units", str, default="rad")
        wavelength = _resolve(args, cfg, "wavelength-nm", float, default=820.0)
        config = SetupConfig(theta1, theta2, n)
        scan = synthesize_scan(config, model, points, visibility_factor,
                               chi_start=chi_start, chi_span=chi_span)
        fit = fit_sinusoid(scan, period_hint=_TWO_PI / n)
        trailer = {
            "amplitude": fit.amplitude,
            "offset": fit.offset,
            "phase": fit.phase,
            "period": fit.period,
            "visibility": fit.visibility,
            "residual_rms": fit.residual_rms,
            "phase_stderr": fit.phase_stderr,
        }
        if chi_units == "nm":
            header = ["chi", "counts", "mirror_nm"]
            rows = [
                (c, y, c * wavelength / _TWO_PI)
                for c, y in zip(scan.chi_values, scan.counts)
            ]
        elif chi_units == "rad":
            header = ["chi", "counts"]
            rows = list(zip(scan.chi_values, scan.counts))
        else:
            raise ValueError(f"unknown chi-units {chi_units!r}")
        _emit(run, header, rows, trailer)
        return 0
    if mode == "shift-curve":
        grid_points = _resolve(args, cfg, "theta1-points", int, default=181)
        normalize = not _flag(_resolve(args, cfg, "no-normalize-flux", _flag, default=False))
        grid = np.linspace(-math.pi / 2, math.pi / 2, grid_points)
        curve = phase_shift_curve(
            theta2, grid, n, model,
            visibility_factor=visibility_factor,
            points_per_scan=points,
            normalize_flux=normalize,
        )
        rows = [
            (t1, d, t, s, bool(f))
            for t1, d, t, s, f in zip(
                curve.theta1, curve.displacement, curve.theory,
                curve.phase_stderr, curve.flagged,
            )
        ]
        _emit(run, ["theta1", "displacement", "theory", "phase_stderr", "flagged"], rows)
        return 0
    raise ValueError(f"unknown fringe mode {mode!r}")


def _mc_checks(seed: int, trials: int, negative_control: bool):
    """Variance and mean checks for both schemes in both noise regimes."""
    theta20 = math.pi / 20
    fudge = 3.0 if negative_control else 1.0
    checks = []

    def variance_check(name, stats, model, mean_plus, mean_minus):
        # The negative control inflates the predicted technical power, which
        # must be caught as a mismatch by the comparison below.
        predicting = NoiseModel(
            mean_rate=model.mean_rate,
            technical_power=model.technical_power * fudge,
            integration_time=model.integration_time,
            detection_efficiency=model.detection_efficiency,
            rng_seed=model.rng_seed,
        )
        expected = predicted_ratio_variance(mean_plus, mean_minus, predicting)
        rel = abs(stats.variance - expected) / expected
        checks.append((name, stats.variance, expected, rel, rel <= 0.10))

    def mean_check(name, stats, expected):
        se = math.sqrt(stats.variance / stats.n_values.size)
        dev = abs(stats.mean - expected)
        checks.append((name, stats.mean, expected, dev / (4 * se), dev <= 4 * se))

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmallAngleViolation)
        # Direct scheme, shot-noise dominated.
        model = NoiseModel(1e4, 0.0, 1.0, 1.0, seed)
        stats = direct_trials(0.0, model, trials)
        variance_check("direct-shot-variance", stats, model, 5e3, 5e3)
        # Direct scheme, technical-noise dominated.
        model = NoiseModel(1e8, 2.5e-5, 1.0, 1.0, seed + 1)
        stats = direct_trials(0.0, model, trials)
        variance_check("direct-technical-variance", stats, model, 5e7, 5e7)
        # Geometric scheme (N = 2), shot-noise dominated.
        config = SetupConfig(0.0, theta20, 2, chi=nulling_offset(2))
        p_zero = math.sin(theta20) ** 4
        model = NoiseModel(1e7, 0.0, 1.0, 1.0, seed + 2)
        stats = gp_trials(config, model, trials)
        half = 0.5 * 1e7 * p_zero
        variance_check("geometric-shot-variance", stats, model, half, half)
        # Geometric scheme (N = 2), technical-noise dominated.
        model = NoiseModel(1e12, 2.5e-5, 1.0, 1.0, seed + 3)
        stats = gp_trials(config, model, trials)
        half = 0.5 * 1e12 * p_zero
        variance_check("geometric-technical-variance", stats, model, half, half)
        # Mean convergence of both schemes.
        model = NoiseModel(1e6, 0.0, 1.0, 1.0, seed + 4)
        stats = direct_trials(math.pi / 180, model, trials)
        mean_check("direct-mean", stats, math.sin(2 * math.pi / 180))
        config = SetupConfig(math.pi / 1800, theta20, 2, chi=nulling_offset(2))
        model = NoiseModel(1e7, 0.0, 1.0, 1.0, seed + 5)
        stats = gp_trials(config, model, trials)
        expected = math.sin(4 * math.atan(math.tan(math.pi / 1800) / math.tan(theta20)))
        mean_check("geometric-mean", stats, expected)
    return checks


def cmd_mc_validate(args, cfg: dict, run: RunConfig) -> int:
    trials = _resolve(args, cfg, "trials", int, default=100000)
    negative = _flag(_resolve(args, cfg, "negative-control", _flag, default=False))
    min_trials = 10000
    checks = _mc_checks(run.rng_seed, trials, negative)
    lines = []
    failed = False
    for name, observed, expected, metric, ok in checks:
        if trials < min_trials:
            status = "INSUFFICIENT"
        elif ok:
            status = "PASS"
        else:
            status = "FAIL"
            failed = True
        lines.append(
            f"{status} {name}: observed={_fmt(observed)} expected={_fmt(expected)} "
            f"metric={_fmt(metric)}"
        )
    if trials < min_trials:
        lines.append(
            f"note: {trials} trials < {min_trials}; statistics insufficient for the "
            "stated tolerances, no check was failed"
        )
    _emit_text(run, lines)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# Parser and entry point.


def _add_common(sub):
    sub.add_argument("--theta1", type=parse_angle, default=None,
                     help="input polarizer offset from vertical (e.g. 5deg, 0.1rad)")
    sub.add_argument("--theta2", type=parse_angle, default=None,
                     help="output analyzer angle from horizontal")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geophase",
        description="Geometric-phase interferometry toolkit",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: GEOPHASE_SEED env var or 12345)")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json-lines"], default="csv")
    parser.add_argument("--config", default=None,
                        help="flat key=value config file; flags override it")
    parser.add_argument("--dump-config", default=None,
                        help="write the resolved run configuration to this path")
    commands = parser.add_subparsers(dest="command", required=True)

    phase = commands.add_parser("phase", help="phase/probability report for one setup")
    _add_common(phase)
    phase.add_argument("--n", type=int, default=None, help="photon number (default 1)")

    sweep = commands.add_parser("sweep", help="parameter sweeps as CSV")
    sweep.add_argument("--kind", choices=["phase-curve", "probability-curve", "snr"],
                       default=None, required=False)
    sweep.add_argument("--theta1", type=parse_angle, default=None,
                       help="fixed polarizer offset for the snr sweep")
    sweep.add_argument("--theta1-start", type=parse_angle, default=None)
    sweep.add_argument("--theta1-stop", type=parse_angle, default=None)
    sweep.add_argument("--theta1-points", type=int, default=None)
    sweep.add_argument("--theta2", type=_angle_list, default=None,
                       help="comma-separated analyzer angles")
    sweep.add_argument("--n", type=_int_list, default=None,
                       help="comma-separated photon numbers")
    sweep.add_argument("--schemes", type=_str_list, default=None,
                       help="snr sweep schemes: direct,geometric")
    sweep.add_argument("--m-start", type=float, default=None)
    sweep.add_argument("--m-stop", type=float, default=None)
    sweep.add_argument("--m-points", type=int, default=None)
    sweep.add_argument("--eta", type=float, default=None)
    sweep.add_argument("--tau", type=float, default=None)
    sweep.add_argument("--xi2", type=float, default=None,
                       help="technical noise power spectrum (seconds)")
    sweep.add_argument("--visibility", type=float, default=None)

    fringe = commands.add_parser("fringe", help="fringe scan + fit, or shift curve")
    fringe.add_argument("--mode", choices=["scan", "shift-curve"], default=None)
    _add_common(fringe)
    fringe.add_argument("--n", type=int, default=None)
    fringe.add_argument("--points", type=int, default=None,
                        help="samples per scan (default 64)")
    fringe.add_argument("--theta1-points", type=int, default=None,
                        help="shift-curve grid size (default 181)")
    fringe.add_argument("--visibility-factor", type=float, default=None)
    fringe.add_argument("--rate", type=float, default=None,
                        help="incident flux per unit time")
    fringe.add_argument("--eta", type=float, default=None)
    fringe.add_argument("--tau", type=float, default=None)
    fringe.add_argument("--xi2", type=float, default=None)
    fringe.add_argument("--chi-start", type=parse_angle, default=None)
    fringe.add_argument("--chi-span", type=parse_angle, default=None)
    fringe.add_argument("--chi-units", choices=["rad", "nm"], default=None)
    fringe.add_argument("--wavelength-nm", type=float, default=None)
    fringe.add_argument("--no-normalize-flux", action="store_const", const=True,
                        default=None, help="keep the incident flux fixed across the grid")

    mc = commands.add_parser("mc-validate", help="Monte Carlo vs analytic checks")
    mc.add_argument("--trials", type=int, default=None)
    mc.add_argument("--negative-control", action="store_const", const=True, default=None,
                    help="deliberately misconfigure the predicted technical noise")
    return parser


_DISPATCH = {
    "phase": cmd_phase,
    "sweep": cmd_sweep,
    "fringe": cmd_fringe,
    "mc-validate": cmd_mc_validate,
}


def _collect_params(args) -> dict:
    skip = {"command", "seed", "out", "format", "config", "dump_config"}
    params = {}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        if isinstance(value, list):
            params[key] = ",".join(str(v) for v in value)
        else:
            params[key] = str(value)
    return params


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config) if args.config else {}
        run = RunConfig(
            command=args.command,
            params=_collect_params(args),
            rng_seed=_resolve_seed(args, cfg),
            output_path=args.out,
            output_format=args.format,
        )
        if args.dump_config:
            _atomic_write(args.dump_config, "\n".join(run.as_lines()) + "\n")
        return _DISPATCH[args.command](args, cfg, run)
    except (ValueError, KeyError) as exc:
        print(f"geophase: error: {exc}", file=sys.stderr)
        return 2
    except GeophaseError as exc:
        print(f"geophase: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"geophase: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
