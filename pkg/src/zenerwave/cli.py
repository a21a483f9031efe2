"""Command-line front end.

Subcommands
-----------
``fundsol``  evaluate ``S`` and ``dS/dt`` on an ``(x, t)`` lattice
``solve``    Cauchy problem for built-in or CSV initial data
``verify``   run the oracle suite and report measured errors
``figures``  regenerate the impulse-response figures

Exit status is 0 on success, 1 on a usage or input error and 2 when a
numerical verification fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings

import numpy as np

from .fraccalc import TimeGrid
from .fundsol import (
    LEADING_CONSTANT,
    QuadratureConfig,
    classical_speed,
    sample_fundamental_solution,
)
from .oracles import dalembert
from .plotting import Curve, Panel, render_svg, write_atomic
from .solver import CauchyData, Grid1D, GridTooNarrowError, recover_strain_stress, solve
from .verification import run_suite
from .zener_kernel import ZenerParams

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

FIGURE_ALPHAS = (0.25, 0.5, 0.75)
FIGURE_STYLES = {0.25: "dashed", 0.5: "dashdot", 0.75: "solid"}
FIGURE_TIMES = (0.5, 1.0, 1.5)
FIGURE_TAU = 0.004
FIGURE_RANGES = {"fig2": "0:3:300", "fig3": "0:6:600", "fig4": "0:5:500", "fig5": "0:5:500"}


class UsageError(Exception):
    """Bad flags or input files."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# flag values


def parse_range(text: str) -> np.ndarray:
    """``min:max:steps`` as ``steps + 1`` evenly spaced values."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} is not of the form min:max:steps")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"range {text!r}: {exc}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise UsageError(f"range {text!r} needs finite min < max")
    if steps < 1:
        raise UsageError(f"range {text!r} needs at least one step")
    return np.linspace(lo, hi, steps + 1)


def parse_times(text: str) -> np.ndarray:
    try:
        t = np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise UsageError(f"time list {text!r}: {exc}") from None
    if t.size == 0 or np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise UsageError(f"time list {text!r} must hold positive numbers")
    return t


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, keys use flag names."""
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


# ---------------------------------------------------------------------------
# output


def _g(v: float) -> str:
    return "%.17g" % v


def lattice_csv(x: np.ndarray, t: np.ndarray, values: np.ndarray) -> str:
    """Rows ``x,t,value`` with ``values[i, j]`` at ``(x[j], t[i])``."""
    buf = io.StringIO()
    buf.write("x,t,value\n")
    for i, ti in enumerate(t):
        for j, xj in enumerate(x):
            buf.write(f"{_g(xj)},{_g(ti)},{_g(values[i, j])}\n")
    return buf.getvalue()


def _json_list(a: np.ndarray):
    return [[None if not np.isfinite(v) else float(v) for v in row] for row in np.atleast_2d(a)]


def lattice_json(params: dict, x: np.ndarray, t: np.ndarray, values: np.ndarray) -> str:
    doc = {
        "params": params,
        "grid": {"x": [float(v) for v in x], "t": [float(v) for v in t]},
        "values": _json_list(values),
    }
    return json.dumps(doc) + "\n"


def _emit(args, stem: str, x, t, values, params: dict) -> list[str]:
    written = []
    for fmt in args.formats:
        if fmt == "csv":
            path = os.path.join(args.out, f"{stem}.csv")
            write_atomic(path, lattice_csv(x, t, values))
        elif fmt == "json":
            path = os.path.join(args.out, f"{stem}.json")
            write_atomic(path, lattice_json(params, x, t, values))
        else:
            continue
        written.append(path)
    return written


def _emit_svg(args, stem: str, panels: list[Panel]) -> list[str]:
    if "svg" not in args.formats:
        return []
    path = os.path.join(args.out, f"{stem}.svg")
    write_atomic(path, render_svg(panels))
    return [path]


def _time_curves(x, t, values, prefix="t") -> list[Curve]:
    styles = ["solid", "dashed", "dashdot", "dotted"]
    return [
        Curve(x, values[i], f"{prefix}={ti:g}", styles[i % len(styles)])
        for i, ti in enumerate(t)
    ]


# ---------------------------------------------------------------------------
# shared argument handling


def _params(args) -> ZenerParams:
    try:
        return ZenerParams(args.alpha, args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cfg(args) -> QuadratureConfig:
    try:
        return QuadratureConfig(rel_tol=args.rel_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _param_dict(args, p: ZenerParams) -> dict:
    return {"alpha": p.alpha, "tau": p.tau, "rel_tol": args.rel_tol}


def safe_sample(x, t, p: ZenerParams, cfg: QuadratureConfig, derivative: bool = False, c0: float = LEADING_CONSTANT):
    """``S`` (or ``dS/dt``) on the lattice ``t x x``; boundary-layer points become NaN.

    Returns the values and the number of points set to NaN.
    """
    X, T = np.meshgrid(np.abs(x), t)
    d = T - X * math.sqrt(p.tau)
    bad = (d > 0) & (d < cfg.cone_margin_min) if classical_speed(p) is None else np.zeros_like(d, bool)
    out = np.full(X.shape, np.nan)
    ok = ~bad
    out[ok] = sample_fundamental_solution(X[ok], T[ok], p, cfg, derivative=derivative, c0=c0)
    return out, int(bad.sum())


# ---------------------------------------------------------------------------
# fundsol


def cmd_fundsol(args) -> int:
    p = _params(args)
    cfg = _cfg(args)
    x = parse_range(args.x)
    t = parse_times(args.t)
    s_vals, n_bad = safe_sample(x, t, p, cfg)
    ds_vals, _ = safe_sample(x, t, p, cfg, derivative=True)
    if n_bad:
        warnings.warn(
            f"{n_bad} lattice points lie within {cfg.cone_margin_min:g} of the cone boundary; "
            "written as NaN",
            stacklevel=1,
        )
    params = _param_dict(args, p)
    written = _emit(args, "S", x, t, s_vals, params)
    written += _emit(args, "dSdt", x, t, ds_vals, params)
    written += _emit_svg(
        args,
        "fundsol",
        [
            Panel(f"S, alpha={p.alpha:g}, tau={p.tau:g}", _time_curves(x, t, s_vals), ylabel="S"),
            Panel(f"dS/dt, alpha={p.alpha:g}, tau={p.tau:g}", _time_curves(x, t, ds_vals), ylabel="dS/dt"),
        ],
    )
    for path in written:
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve


def _builtin(spec: str, grid: Grid1D) -> np.ndarray | None:
    name, _, arg = spec.partition(":")
    if name == "zero":
        return np.zeros(grid.n)
    if name == "delta":
        x0 = float(arg) if arg else 0.0
        j = int(round((x0 - grid.x_min) / grid.dx))
        if not 0 <= j < grid.n:
            raise UsageError(f"delta location {x0} is off the grid")
        out = np.zeros(grid.n)
        out[j] = 1.0 / grid.dx
        return out
    if name == "gaussian":
        try:
            width = float(arg)
        except ValueError:
            raise UsageError(f"gaussian needs a width, as in gaussian:0.1 (got {spec!r})") from None
        if not width > 0:
            raise UsageError("gaussian width must be positive")
        return np.exp(-0.5 * (grid.x / width) ** 2)
    return None


def _read_csv(path: str) -> dict[str, np.ndarray]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    if len(rows) < 2:
        raise UsageError(f"{path}: expected a header and data rows")
    header = [h.strip() for h in rows[0]]
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise UsageError(f"{path}: ragged rows")
    return {h: data[:, k] for k, h in enumerate(header)}


def _field(spec: str, grid: Grid1D) -> np.ndarray:
    """Node values of a built-in or of an ``x,value`` CSV (linear, zero outside)."""
    values = _builtin(spec, grid)
    if values is not None:
        return values
    cols = _read_csv(spec)
    if "x" not in cols or "value" not in cols:
        raise UsageError(f"{spec}: expected columns x,value")
    order = np.argsort(cols["x"])
    return np.interp(grid.x, cols["x"][order], cols["value"][order], left=0.0, right=0.0)


def _force(spec: str, grid: Grid1D, t_max: float) -> tuple[np.ndarray | None, TimeGrid | None]:
    """Body force samples: built-ins are constant in time, CSV is ``x,t,value``."""
    values = _builtin(spec, grid)
    if values is not None:
        if not np.any(values):
            return None, None
        tg = TimeGrid(t_max / 200, 200)
        return np.tile(values, (len(tg), 1)), tg
    cols = _read_csv(spec)
    if not {"x", "t", "value"} <= cols.keys():
        raise UsageError(f"{spec}: expected columns x,t,value")
    ts = np.unique(cols["t"])
    if ts[0] != 0.0 or ts.size < 2 or not np.allclose(np.diff(ts), ts[1] - ts[0]):
        raise UsageError(f"{spec}: force times must be uniform and start at 0")
    tg = TimeGrid(float(ts[1] - ts[0]), ts.size - 1)
    f = np.zeros((len(tg), grid.n))
    for k, tk in enumerate(ts):
        sel = cols["t"] == tk
        order = np.argsort(cols["x"][sel])
        f[k] = np.interp(grid.x, cols["x"][sel][order], cols["value"][sel][order], left=0.0, right=0.0)
    return f, tg


def _auto_grid(specs: list[str], p: ZenerParams, t_max: float, steps: int = 2000) -> Grid1D:
    """Symmetric grid holding the data support dilated by the front travel."""
    speed = classical_speed(p) or 1.0 / math.sqrt(p.tau)
    reach = 0.0
    for spec in specs:
        name, _, arg = spec.partition(":")
        if name == "zero":
            continue
        if name == "delta":
            reach = max(reach, abs(float(arg)) if arg else 0.0)
        elif name == "gaussian":
            reach = max(reach, 9.0 * float(arg))
        else:
            cols = _read_csv(spec)
            reach = max(reach, float(np.abs(cols["x"]).max()))
    half = reach + speed * t_max
    half *= 1.0 + 2.0 / steps
    half = max(half, 1e-3)
    return Grid1D.from_range(-half, half, steps + 1)


def cmd_solve(args) -> int:
    p = _params(args)
    cfg = _cfg(args)
    t = parse_times(args.t)
    specs = [args.u0, args.v0] + ([args.f] if args.f else [])
    if args.grid:
        xs = parse_range(args.grid)
        grid = Grid1D(float(xs[0]), float(xs[1] - xs[0]), xs.size)
    else:
        grid = _auto_grid(specs, p, float(t.max()))
    try:
        f, f_grid = _force(args.f, grid, float(t.max())) if args.f else (None, None)
        data = CauchyData(_field(args.u0, grid), _field(args.v0, grid), f, f_grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    if args.dt is not None:
        if not args.dt > 0:
            raise UsageError("--dt must be positive")
        n_steps = int(round(t.max() / args.dt))
        k_out = np.rint(t / args.dt).astype(int)
        if np.any(np.abs(k_out * args.dt - t) > 1e-9 * np.maximum(t, 1.0)):
            raise UsageError("with --dt, every output time must be a multiple of dt")
        steps = args.dt * np.arange(1, n_steps + 1)
        try:
            u_all = solve(data, p, grid, steps, cfg)
        except GridTooNarrowError as exc:
            raise UsageError(str(exc)) from None
        u_all = np.vstack((data.u0, u_all))
        eps, sigma = recover_strain_stress(u_all, p, args.dt, grid.dx)
        u = u_all[k_out]
    else:
        try:
            u = solve(data, p, grid, t, cfg)
        except GridTooNarrowError as exc:
            raise UsageError(str(exc)) from None

    params = _param_dict(args, p) | {"u0": args.u0, "v0": args.v0, "f": args.f}
    x = grid.x
    written = _emit(args, "u", x, t, u, params)
    curves = _time_curves(x, t, u)
    if args.dt is not None:
        written += _emit(args, "strain", x, t, eps[k_out], params)
        written += _emit(args, "stress", x, t, sigma[k_out], params)
    if args.overlay:
        c = classical_speed(p) or 1.0
        ref = np.array([dalembert(data.u0, data.v0, x, c, x, ti) for ti in t])
        written += _emit(args, "dalembert", x, t, ref, params | {"c": c})
        err = float(np.abs(u - ref).max())
        print(f"d'Alembert overlay (c={c:g}): max |u - u_ref| = {err:.3e}")
        for i, ti in enumerate(t):
            curves.append(Curve(x, ref[i], f"d'Alembert t={ti:g}", "dotted", "#888888"))
    written += _emit_svg(args, "u", [Panel(f"u, alpha={p.alpha:g}, tau={p.tau:g}", curves)])
    for path in written:
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    p = _params(args)
    cfg = _cfg(args)
    if args.dt is not None and not args.dt > 0:
        raise UsageError("--dt must be positive")
    results = run_suite(p, cfg, c0=args.c0, dt=args.dt)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if args.out_given:
        report = {
            "params": _param_dict(args, p) | {"c0": args.c0},
            "checks": [
                {"name": r.name, "value": r.value, "threshold": r.threshold, "lower_bound": r.lower_bound, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
        }
        path = os.path.join(args.out, "verify.json")
        write_atomic(path, json.dumps(report, indent=1) + "\n")
        print(path)
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# figures


def peak_and_width(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Maximum of ``y`` and the extent of ``{y >= max/2}``."""
    i = int(np.nanargmax(y))
    top = y[i]
    above = x[y >= 0.5 * top]
    return float(top), float(above.max() - above.min())


def figure_data(cfg: QuadratureConfig, ranges: dict[str, np.ndarray]) -> dict[str, list[Panel]]:
    """Panels of the four figures; ``u = dS/dt`` is the response to ``u0 = delta``."""
    cache: dict[tuple[str, float], np.ndarray] = {}

    def curve(fig: str, alpha: float) -> np.ndarray:
        key = (fig, alpha)
        if key not in cache:
            p = ZenerParams(alpha, FIGURE_TAU)
            cache[key], _ = safe_sample(ranges[fig], np.array(FIGURE_TIMES), p, cfg, derivative=True)
        return cache[key]

    figs: dict[str, list[Panel]] = {}
    x2 = ranges["fig2"]
    u2 = curve("fig2", 0.23)
    figs["fig2"] = [Panel(f"alpha=0.23, tau={FIGURE_TAU:g}", _time_curves(x2, FIGURE_TIMES, u2))]

    x3 = ranges["fig3"]
    figs["fig3"] = [
        Panel(f"alpha={a:g}", _time_curves(x3, FIGURE_TIMES, curve("fig3", a))) for a in FIGURE_ALPHAS
    ]

    x4 = ranges["fig4"]
    figs["fig4"] = [
        Panel(
            f"t={ti:g}",
            [Curve(x4, curve("fig4", a)[i], f"alpha={a:g}", FIGURE_STYLES[a], "black") for a in FIGURE_ALPHAS],
        )
        for i, ti in enumerate(FIGURE_TIMES)
    ]

    x5 = ranges["fig5"]
    colors = ["#1f4e99", "#b23a22", "#2b7a3d"]
    figs["fig5"] = [
        Panel(
            "all alpha and t",
            [
                Curve(x5, curve("fig5", a)[i], f"alpha={a:g}, t={ti:g}", FIGURE_STYLES[a], colors[i])
                for a in FIGURE_ALPHAS
                for i, ti in enumerate(FIGURE_TIMES)
            ],
        )
    ]
    return figs


def _figure_csv(panels: list[Panel]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["panel", "label", "x", "value"])
    for panel in panels:
        for c in panel.curves:
            for xv, yv in zip(c.x, c.y):
                out.writerow([panel.title, c.label, _g(xv), _g(yv)])
    return buf.getvalue()


def cmd_figures(args) -> int:
    cfg = _cfg(args)
    ranges = {name: parse_range(getattr(args, f"{name}_x")) for name in FIGURE_RANGES}
    figs = figure_data(cfg, ranges)
    for name, panels in figs.items():
        svg = os.path.join(args.out, f"{name}.svg")
        write_atomic(svg, render_svg(panels))
        data = os.path.join(args.out, f"{name}.csv")
        write_atomic(data, _figure_csv(panels))
        print(svg)
        print(data)
    print("peak and half-maximum width of u (fig5 curves):")
    for c in figs["fig5"][0].curves:
        top, width = peak_and_width(c.x, c.y)
        print(f"  {c.label:>20}: peak {top:.4f}, width {width:.4f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser(defaults: dict[str, str] | None = None) -> argparse.ArgumentParser:
    defaults = defaults or {}

    def d(key: str, fallback):
        return defaults.get(key, fallback)

    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=float, default=float(d("alpha", 0.23)), help="fractional order in [0, 1)")
    common.add_argument("--tau", type=float, default=float(d("tau", 0.004)), help="tau_sigma / tau_eps in (0, 1]")
    common.add_argument("--rel-tol", type=float, default=float(d("rel_tol", 1e-10)), help="quadrature relative tolerance")
    common.add_argument(
        "--format",
        dest="format",
        action="append",
        choices=("csv", "json", "svg"),
        help="output format, repeatable (default csv and svg)",
    )
    common.add_argument("--out", default=None, help="output directory (default ./out)")
    common.add_argument("--config", default=None, help="key=value file mirroring the flags")

    parser = _Parser(prog="zenerwave", description="Fractional Zener wave equation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fs = sub.add_parser("fundsol", parents=[common], help="evaluate S and dS/dt on a lattice")
    fs.add_argument("--x", default=d("x", "0:3:300"), help="min:max:steps")
    fs.add_argument("--t", default=d("t", "0.5,1,1.5"), help="comma-separated times")
    fs.set_defaults(func=cmd_fundsol)

    so = sub.add_parser("solve", parents=[common], help="solve a Cauchy problem")
    so.add_argument("--u0", default=d("u0", "delta"), help="zero, delta[:x0], gaussian:width or an x,value CSV")
    so.add_argument("--v0", default=d("v0", "zero"), help="as --u0")
    so.add_argument("--f", default=d("f", None), help="body force: built-in (constant in time) or an x,t,value CSV")
    so.add_argument("--t", default=d("t", "0.5,1,1.5"), help="comma-separated times")
    so.add_argument("--grid", default=d("grid", None), help="min:max:steps (default: fitted to the cone)")
    so.add_argument("--dt", type=float, default=_opt_float(d("dt", None)), help="time step; also writes strain and stress")
    so.add_argument(
        "--overlay",
        action="store_true",
        default=d("overlay", "false").lower() in ("1", "true", "yes"),
        help="add the d'Alembert solution and report the gap",
    )
    so.set_defaults(func=cmd_solve)

    ve = sub.add_parser("verify", parents=[common], help="run the oracle suite")
    ve.add_argument("--dt", type=float, default=_opt_float(d("dt", None)), help="FDTD time step")
    ve.add_argument("--c0", type=float, default=float(d("c0", LEADING_CONSTANT)), help=argparse.SUPPRESS)
    ve.set_defaults(func=cmd_verify)

    fi = sub.add_parser("figures", parents=[common], help="regenerate figures 2 to 5")
    for name, rng in FIGURE_RANGES.items():
        fi.add_argument(f"--{name}-x", default=d(f"{name}_x", rng), help=f"x range of {name} (min:max:steps)")
    fi.set_defaults(func=cmd_figures)
    return parser


def _opt_float(v):
    return None if v is None else float(v)


def _preparse_config(argv: list[str]) -> dict[str, str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return read_config(known.config) if known.config else {}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        defaults = _preparse_config(argv)
        parser = build_parser(defaults)
    except (UsageError, ValueError) as exc:
        print(f"zenerwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.out_given = args.out is not None or "out" in defaults
    args.out = args.out or defaults.get("out", "out")
    fmt = args.format or [s.strip() for s in defaults.get("format", "csv,svg").split(",") if s.strip()]
    bad = [f for f in fmt if f not in ("csv", "json", "svg")]
    if bad:
        print(f"zenerwave: error: unknown format {bad[0]!r}", file=sys.stderr)
        return EXIT_USAGE
    args.formats = fmt
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"zenerwave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
