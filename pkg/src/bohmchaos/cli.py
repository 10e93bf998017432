"""Command-line entry point: ``bohmchaos simulate|strobe|lyapunov|sweep|validate``.

Exit codes: 0 success, 1 configuration error, 2 singular or partial run,
3 validation failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .analysis import lyapunov_benettin, stroboscopic_map
from .dynamics import integrate
from .errors import ConfigError
from .output import fmt, scatter_svg, write_csv

log = logging.getLogger("bohmchaos")

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL, EXIT_VALIDATION = 0, 1, 2, 3


def _meta(cfg: cfgmod.RunConfig, **extra) -> dict:
    m = cfg.field_model().as_dict()
    x0, y0 = cfg.p0
    m.update(x0=fmt(x0), y0=fmt(y0),
             seed_source="config" if cfg.x0 is not None else "default")
    m.update(extra)
    return m


def _write_effective(cfg, out: Path):
    (out / "config.effective").write_text(cfgmod.dump(cfg.effective()))


def _ensemble_seeds(cfg) -> list[tuple[float, float]]:
    p0 = cfg.p0
    if cfg.ensemble == 1:
        return [p0]
    rng = np.random.default_rng(cfg.seed)
    jitter = rng.normal(scale=cfg.ensemble_spread, size=(cfg.ensemble - 1, 2))
    return [p0] + [(p0[0] + dx, p0[1] + dy) for dx, dy in jitter]


def _extent(cfg, pts):
    if cfg.svg_extent is not None:
        e = cfg.svg_extent
        return (-e, e, -e, e)
    if cfg.model.startswith("square_well"):
        return (0.0, math.pi, 0.0, math.pi)
    return (-2.5, 2.5, -2.5, 2.5)


# ------------------------------------------------------------ commands


def run_simulate(cfg, out: Path) -> int:
    rec = integrate(cfg.field_model(), cfg.p0, cfg.integrator())
    meta = _meta(cfg, dt_actual=fmt(rec.dt_actual), termination=rec.termination)
    if rec.fail_step is not None:
        meta.update(fail_step=rec.fail_step, fail_time=fmt(rec.fail_time))
    write_csv(out / "trajectory.csv", ["t", "x", "y"], [rec.t, rec.x, rec.y], meta)
    return EXIT_OK if rec.completed else EXIT_PARTIAL


def run_strobe(cfg, out: Path, svg: bool = False) -> tuple[int, str]:
    model = cfg.field_model()
    seeds = _ensemble_seeds(cfg)
    maps = [stroboscopic_map(model, p, cfg.t_end, cfg.dt, cfg.max_speed) for p in seeds]
    status = next((m.termination for m in maps if m.termination != "completed"), "completed")
    meta = _meta(cfg, period=fmt(maps[0].period), dt_actual=fmt(maps[0].dt_actual),
                 termination=status)
    if len(maps) > 1:
        meta["ensemble"] = len(maps)
    if len(maps) == 1:
        pts = maps[0].points
        write_csv(out / "strobe.csv", ["k", "x", "y"],
                  [np.arange(1, len(pts) + 1), pts[:, 0], pts[:, 1]], meta)
    else:
        traj = np.concatenate([np.full(len(m), i) for i, m in enumerate(maps)])
        ks = np.concatenate([np.arange(1, len(m) + 1) for m in maps])
        pts = np.concatenate([m.points for m in maps]) if any(len(m) for m in maps) else np.empty((0, 2))
        write_csv(out / "strobe.csv", ["traj", "k", "x", "y"], [traj, ks, pts[:, 0], pts[:, 1]], meta)
    if svg:
        allpts = np.concatenate([m.points for m in maps]) if maps else np.empty((0, 2))
        title = ", ".join(f"{k}={v}" for k, v in model.as_dict().items())
        title += f"; T={maps[0].period:.4g}, 0<t<{cfg.t_end:g}"
        scatter_svg(out / "strobe.svg", allpts[:, 0], allpts[:, 1], _extent(cfg, allpts), title)
    return (EXIT_OK if status == "completed" else EXIT_PARTIAL), status


def run_lyapunov(cfg, out: Path, echo=print) -> tuple[int, float, str]:
    est = lyapunov_benettin(cfg.field_model(), cfg.p0, cfg.t_end, cfg.dt, cfg.d0,
                            cfg.renorm_interval, cfg.max_speed)
    meta = _meta(cfg, lambda_max=fmt(est.lambda_max), d0=fmt(est.d0),
                 renorm_interval=fmt(est.renorm_interval), termination=est.termination,
                 tail_spread=fmt(est.tail_spread))
    write_csv(out / "lyapunov.csv", ["t", "partial_lambda"],
              [est.running[:, 0], est.running[:, 1]], meta)
    echo(f"lambda_max={fmt(est.lambda_max)}")
    if not est.reliable:
        echo(f"unreliable=true termination={est.termination}")
        return EXIT_PARTIAL, est.lambda_max, est.termination
    return EXIT_OK, est.lambda_max, est.termination


def _sweep_point(index, values, cfg, out: Path, task, svg):
    pdir = out / f"point_{index:03d}"
    pdir.mkdir(parents=True, exist_ok=True)
    status, lam = "completed", math.nan
    if isinstance(cfg, Exception):
        return index, values, {}, _error_status(cfg), lam
    try:
        _write_effective(cfg, pdir)
        if task in ("strobe", "both"):
            _, status = run_strobe(cfg, pdir, svg)
        if task in ("lyapunov", "both") and status == "completed":
            _, lam, status = run_lyapunov(cfg, pdir, echo=lambda s: None)
    except Exception as exc:  # recorded in the manifest, sweep goes on
        status = _error_status(exc)
    return index, values, cfg.field_model().as_dict(), status, lam


def _error_status(exc) -> str:
    return f"error: {exc}".replace(",", ";").replace("\n", " ")


def run_sweep(cfg, out: Path, svg=False, jobs=None) -> int:
    points = cfg.points()
    names = list(cfg.ladder)
    jobs = jobs or os.cpu_count() or 1
    args = [(i, vals, pc, out, cfg.sweep_task, svg) for i, (vals, pc) in enumerate(points)]
    if jobs == 1 or len(args) == 1:
        results = [_sweep_point(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_sweep_point, *a) for a in args]
            results = [f.result() for f in futures]
    header = ["index", *names, "model", "a0", "a1", "lam", "mu", "lambda_max", "status"]
    with (out / "manifest.csv").open("w") as fh:
        fh.write(",".join(header) + "\n")
        for index, values, model, status, lam in sorted(results, key=lambda r: r[0]):
            row = [str(index), *(repr(values[n]) for n in names),
                   str(model.get("model", "")), *(fmt(model[k]) if k in model else ""
                                                  for k in ("a0", "a1", "lam", "mu")),
                   fmt(lam), status]
            fh.write(",".join(row) + "\n")
    ok = sum(r[3] == "completed" for r in results)
    print(f"sweep: {ok}/{len(results)} points completed; manifest at {out / 'manifest.csv'}")
    return EXIT_OK if ok else EXIT_PARTIAL


def run_validate() -> int:
    from .validation import run_all

    results = run_all()
    for name, ok, detail in results:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    failed = sum(not ok for _, ok, _ in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


# ---------------------------------------------------------------- main


def build_parser():
    p = argparse.ArgumentParser(prog="bohmchaos", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("simulate", "integrate one trajectory and write t,x,y"),
                        ("strobe", "stroboscopic map k,x,y (+ SVG panel)"),
                        ("lyapunov", "largest Lyapunov exponent (Benettin)"),
                        ("sweep", "run a parameter ladder")]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", type=Path, help="flat key = value config file")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")
        sp.add_argument("--stride", type=int, help="keep every n-th step")
        sp.add_argument("--svg", action="store_true", help="also write SVG panels")
        sp.add_argument("--jobs", type=int, help="worker processes for sweeps")
        sp.add_argument("--ensemble", type=int, help="trajectories per strobe panel")
    sub.add_parser("validate", help="run the invariant checks")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "validate":
        return run_validate()
    try:
        text = args.config.read_text() if args.config else ""
        cfg = cfgmod.load(text, args.overrides, stride=args.stride, ensemble=args.ensemble)
    except (OSError, ConfigError) as exc:
        where = f"{args.config}: " if args.config else ""
        print(f"config error: {where}{exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    log.info("running %s with %s", args.command, cfg.field_model())
    _write_effective(cfg, out)
    try:
        if args.command == "simulate":
            return run_simulate(cfg, out)
        if args.command == "strobe":
            return run_strobe(cfg, out, args.svg)[0]
        if args.command == "lyapunov":
            return run_lyapunov(cfg, out)[0]
        return run_sweep(cfg, out, args.svg, args.jobs)
    except ValueError as exc:  # includes ConfigError raised by ladder expansion
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
