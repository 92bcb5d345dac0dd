"""Command-line driver.

Every command writes CSV files and updates ``manifest.json`` in the output
directory.  Exit codes: 0 success, 1 usage or I/O problem, 2 numerical
failure (including ``--check`` breaches).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import asymptotics as asym
from . import profiles as prof
from . import spectral
from .sim_field import SimConfig, SimulationError, TimeSeries, run
from .sim_volterra import RenewalConfig, solve_renewal

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

MANIFEST = "manifest.json"
REPORT_INPUTS = ("a_series.csv", "frame.csv", "sigma.csv", "fit.csv")

DEFAULTS = {
    "profile": "sech",
    "omega": 2.0,
    "a0": 1.0,
    "t_final": 200.0,
    "dt": None,
    "out": ".",
    "frames": "-40:10",
    "window": None,
    "energy_tol": 1e-7,
    "check": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key, value):
    if value is None:
        return None
    if key in ("omega", "a0", "t_final", "dt", "energy_tol"):
        return float(value)
    if key == "check":
        return value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes", "on")
    return str(value)


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < command-line flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            opts.update(read_config(args.config))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            opts[key] = val
    try:
        opts = {k: _coerce(k, v) for k, v in opts.items()}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if opts["omega"] <= 0:
        raise UsageError("--omega must be positive")
    if opts["t_final"] <= 0:
        raise UsageError("--t-final must be positive")
    try:
        opts["profile_obj"] = prof.from_name(opts["profile"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return opts


def _parse_range(text, name):
    try:
        lo, hi = (float(s) for s in str(text).split(":"))
    except ValueError:
        raise UsageError(f"{name} must look like lo:hi, got {text!r}") from None
    if not lo < hi:
        raise UsageError(f"{name} needs lo < hi")
    return lo, hi


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_csv(path: Path) -> dict:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = [h.split(" ")[0] for h in rows[0]]
    cols = list(zip(*rows[1:])) if len(rows) > 1 else [() for _ in header]
    out = {}
    for name, col in zip(header, cols):
        try:
            out[name] = np.array([float(v) for v in col])
        except ValueError:
            out[name] = list(col)
    return out


def update_manifest(out_dir: Path, command: str, entry: dict) -> None:
    path = out_dir / MANIFEST
    data = {"code_version": __version__, "runs": {}}
    if path.exists():
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError:
            pass
    data["code_version"] = __version__
    data.setdefault("runs", {})[command] = entry
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def load_manifest(out_dir: Path) -> dict:
    path = out_dir / MANIFEST
    if not path.exists():
        return {}
    return json.loads(path.read_text())


def _entry(command, opts, **extra):
    e = {
        "command": command,
        "profile": opts["profile"],
        "omega": opts["omega"],
        "a0": opts["a0"],
        "t_final": opts["t_final"],
        "dt": opts.get("dt_used", opts["dt"]),
        "dx": opts.get("dx_used"),
        "seeds": None,
        "output_dir": str(opts["out"]),
        "code_version": __version__,
    }
    e.update(extra)
    return e


def _out_dir(opts) -> Path:
    out = Path(opts["out"])
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory: {exc}") from None
    return out


def cmd_theta(opts) -> int:
    p, w = opts["profile_obj"], opts["omega"]
    t0 = time.perf_counter()
    res = spectral.find_theta(p, w)
    det = spectral.deterioration_time(res.theta)
    out = _out_dir(opts)
    print(f"profile            {p.name}")
    print(f"omega              {w:.17g}")
    print(f"theta (pole)       {res.theta:.10e}")
    print(f"theta asymptotic   {res.theta_asymptotic:.10e}")
    print(f"residue r          {res.residue:.12f}")
    print(f"newton iterations  {res.newton_iters} ({res.method})")
    print(f"final residual     {res.final_residual:.3e}")
    print(f"95% deterioration  {'inf' if math.isinf(det) else f'{det:.6e}'}")
    write_csv(
        out / "theta.csv",
        ["profile", "omega", "theta", "theta_asymptotic", "residue", "newton_iters",
         "final_residual", "deterioration_time (model time)"],
        [[p.name, w, res.theta, res.theta_asymptotic, res.residue, res.newton_iters,
          res.final_residual, "inf" if math.isinf(det) else det]],
    )
    update_manifest(out, "theta", _entry("theta", opts, wall_time=time.perf_counter() - t0,
                                         theta=res.theta, residue=res.residue))
    return EXIT_OK


def cmd_simulate(opts) -> int:
    p, w = opts["profile_obj"], opts["omega"]
    frames = _parse_range(opts["frames"], "--frames")
    cfg = SimConfig(p, w, a0=opts["a0"], t_final=opts["t_final"], dt=opts["dt"], frames=frames)
    opts["dt_used"] = opts["dx_used"] = cfg.step
    out = _out_dir(opts)
    t0 = time.perf_counter()
    res = run(cfg)
    a, e = res.a_series, res.energy_series
    write_csv(out / "a_series.csv", ["t (model time)", "a (dimensionless)", "E (dimensionless)"],
              zip(a.t, a.values, e.values))
    fr = res.frames[-1]
    write_csv(out / "frame.csv", ["l (model length)", "re_psi (dimensionless)", "im_psi (dimensionless)"],
              zip(fr.l, fr.psi.real, fr.psi.imag))
    drift = res.energy_drift
    update_manifest(out, "simulate", _entry("simulate", opts, wall_time=time.perf_counter() - t0,
                                            energy_drift=drift, frames=list(frames),
                                            frame_time=fr.t, n_points=cfg.grid.n_points))
    print(f"t_final={a.t[-1]:.6g}  a(t_final)={a.values[-1]:.10e}  energy drift={drift:.3e}")
    if opts["check"] and drift > opts["energy_tol"]:
        print(f"check failed: energy drift {drift:.3e} > {opts['energy_tol']:.1e}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_volterra(opts) -> int:
    p, w = opts["profile_obj"], opts["omega"]
    cfg = RenewalConfig(p, w, a0=opts["a0"], t_final=opts["t_final"], dt=opts["dt"])
    opts["dt_used"] = cfg.step
    out = _out_dir(opts)
    t0 = time.perf_counter()
    a = solve_renewal(cfg)
    write_csv(out / "a_series.csv", ["t (model time)", "a (dimensionless)"], zip(a.t, a.values))
    update_manifest(out, "volterra", _entry("volterra", opts, wall_time=time.perf_counter() - t0))
    print(f"t_final={a.t[-1]:.6g}  a(t_final)={a.values[-1]:.10e}")
    return EXIT_OK


def cmd_sigma(opts) -> int:
    p, w = opts["profile_obj"], opts["omega"]
    lo, hi = _parse_range(opts["frames"], "--frames")
    dx = opts["dt"] if opts["dt"] is not None else math.pi / (10.0 * w)
    opts["dx_used"] = dx
    l_grid = dx * np.arange(math.ceil(lo / dx - 1e-9), math.floor(hi / dx + 1e-9) + 1)
    out = _out_dir(opts)
    t0 = time.perf_counter()
    th = spectral.find_theta(p, w)
    sp = asym.sigma_profile(p, th, w, l_grid)
    write_csv(out / "sigma.csv", ["l (model length)", "re_sigma (dimensionless)", "im_sigma (dimensionless)"],
              zip(sp.l_grid, sp.sigma.real, sp.sigma.imag))
    left = sp.left_edge_amplitude()
    update_manifest(out, "sigma", _entry("sigma", opts, wall_time=time.perf_counter() - t0,
                                         theta=th.theta, left_edge_amplitude=left,
                                         far_field_ref=abs(sp.far_field_ref)))
    print(f"theta={th.theta:.10e}  left-edge |sigma|={left:.3e}  |2 pi q_hat(omega)|={abs(sp.far_field_ref):.3e}")
    return EXIT_OK


def cmd_fit(opts) -> int:
    out = Path(opts["out"])
    src = out / "a_series.csv"
    if not src.exists():
        raise UsageError(f"missing input {src}")
    data = read_csv(src)
    series = TimeSeries(data["t"], data["a"])
    window = _parse_range(opts["window"], "--window") if opts["window"] else None
    t0 = time.perf_counter()
    try:
        fit = asym.fit_decay(series, window)
    except ValueError as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    p, w = opts["profile_obj"], opts["omega"]
    th = spectral.find_theta(p, w)

    def rel(x, ref):
        return abs(x - ref) / ref if ref > 0 else abs(x - ref)

    write_csv(
        out / "fit.csv",
        ["rate (1/model time)", "prefactor", "t_lo", "t_hi", "rms_log_residual",
         "theta_spectral", "theta_asymptotic", "rel_diff_spectral", "rel_diff_asymptotic"],
        [[fit.rate, fit.prefactor, fit.window[0], fit.window[1], fit.rms_log_residual,
          th.theta, th.theta_asymptotic, rel(fit.rate, th.theta),
          rel(fit.rate, th.theta_asymptotic)]],
    )
    update_manifest(out, "fit", _entry("fit", opts, wall_time=time.perf_counter() - t0,
                                       rate=fit.rate, window=list(fit.window)))
    print(f"rate={fit.rate:.10e}  prefactor={fit.prefactor:.6f}  theta={th.theta:.10e}  "
          f"rel diff={rel(fit.rate, th.theta):.3e}")
    if opts["check"] and th.theta > 0 and rel(fit.rate, th.theta) > 0.1:
        return EXIT_NUMERIC
    return EXIT_OK


REPORT_TEMPLATE = """\
# four-panel summary; render with: gnuplot report.gp
set datafile separator ","
set terminal pngcairo size 1400,1000
set output "report.png"
set multiplot layout 2,2 title "{title}"

set title "amplitude, semilog"
set xlabel "t"
set ylabel "a(t)"
set logscale y
plot "a_series.csv" skip 1 using 1:(abs($2)) with lines title "a(t)", \\
     {ref_scale:.17g}*exp(-{ref_slope:.17g}*x) with lines dashtype 2 title "reference slope 2 pi^2 |q_hat|^2", \\
     {fit_pre:.17g}*exp(-{fit_rate:.17g}*x) with lines dashtype 3 title "least-squares fit (fit.csv)"
unset logscale y

set title "amplitude, early times"
set xlabel "t"
set ylabel "a(t)"
set xrange [0:{early:.17g}]
plot "a_series.csv" skip 1 using 1:2 with lines title "a(t)"
set autoscale x

set title "oscillator field near the leading edge"
set xlabel "x - t"
set ylabel "psi"
plot "frame.csv" skip 1 using 1:2 with lines title "Re psi", \\
     "frame.csv" skip 1 using 1:3 with lines title "Im psi"

set title "asymptotic moving-frame profile"
set xlabel "l"
set ylabel "sigma"
plot "sigma.csv" skip 1 using 1:2 with lines title "Re sigma", \\
     "sigma.csv" skip 1 using 1:3 with lines title "Im sigma"

unset multiplot
"""


def cmd_report(opts) -> int:
    out = Path(opts["out"])
    missing = [name for name in REPORT_INPUTS if not (out / name).exists()]
    if missing:
        print("report: missing inputs in " + str(out) + ":", file=sys.stderr)
        for name in missing:
            print("  " + name, file=sys.stderr)
        return EXIT_USAGE
    man = load_manifest(out).get("runs", {})
    base = next(iter(man.values()), {})
    pname = base.get("profile", opts["profile"])
    omega = float(base.get("omega", opts["omega"]))
    p = prof.from_name(pname)
    slope = spectral.theta_asymptotic(p, omega)
    a = read_csv(out / "a_series.csv")
    fit = read_csv(out / "fit.csv")
    if not isinstance(fit.get("rate"), np.ndarray) or fit["rate"].size != 1:
        raise UsageError(f"{out / 'fit.csv'} does not hold a single fit row")
    script = REPORT_TEMPLATE.format(
        title=f"{pname}, omega = {omega:g}",
        ref_scale=float(abs(a["a"][0])) if len(a["a"]) else 1.0,
        ref_slope=slope,
        fit_pre=float(fit["prefactor"][0]),
        fit_rate=float(fit["rate"][0]),
        early=min(30.0, float(a["t"][-1])) if len(a["t"]) else 30.0,
    )
    (out / "report.gp").write_text(script)
    update_manifest(out, "report", _entry("report", {**opts, "profile": pname, "omega": omega},
                                          reference_slope=slope))
    print(f"wrote {out / 'report.gp'}")
    return EXIT_OK


COMMANDS = {
    "theta": cmd_theta,
    "simulate": cmd_simulate,
    "volterra": cmd_volterra,
    "sigma": cmd_sigma,
    "fit": cmd_fit,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radsol", description="Radiating solitary wave model.")
    parser.add_argument("--version", action="version", version=f"radsol {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--profile", choices=prof.PROFILE_NAMES)
        sp.add_argument("--omega", type=float)
        sp.add_argument("--a0", type=float)
        sp.add_argument("--t-final", dest="t_final", type=float)
        sp.add_argument("--dt", type=float)
        sp.add_argument("--out")
        sp.add_argument("--config")
        sp.add_argument("--check", action="store_true", default=None)
        sp.add_argument("--frames", help="moving-frame window l_min:l_max (use --frames=-40:10)")
        sp.add_argument("--window", help="fit window t_lo:t_hi")
        sp.add_argument("--energy-tol", dest="energy_tol", type=float)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        opts = resolve(args)
        return COMMANDS[args.command](opts)
    except UsageError as exc:
        print(f"radsol {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SimulationError, spectral.ConvergenceError, FloatingPointError) as exc:
        print(f"radsol {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
