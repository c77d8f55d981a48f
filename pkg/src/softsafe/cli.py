"""Command-line front end: ``run``, ``verify``, ``sweep``, ``calibrate``.

Exit status is 0 only when the command completed and, for ``verify``,
every checked configuration came out SAFE.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from softsafe import actuator, limb, supervisor
from softsafe.config import RunConfig, actuator_fragment, load_config, with_overrides
from softsafe.errors import (ConfigError, DimensionMismatch, DomainError, EmptySet,
                             NoConvergence, RankDeficient, Unreachable)

DEFAULT_GAMMAS = (0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9)

_HANDLED = (ConfigError, DomainError, RankDeficient, EmptySet, Unreachable,
            DimensionMismatch, NoConvergence)


def _parse_gammas(text):
    try:
        gammas = [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"--gammas: cannot parse {text!r}") from None
    if not gammas:
        raise ConfigError("--gammas: empty gamma list")
    return gammas


def _load(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    return with_overrides(cfg, dt=getattr(args, "dt", None), mismatch=getattr(args, "mismatch", None))


def _fmt_time(t):
    return "none" if t is None else f"{t:.3f}"


def cmd_run(args):
    cfg = _load(args)
    out = Path(args.out) if args.out else (cfg.out or Path("telemetry.csv"))
    records = limb.run_closed_loop(supervisor_config=cfg.supervisor, **cfg.run_kwargs())
    limb.write_telemetry_csv(out, records)
    row = limb.summarize(records)
    print(f"max_T0={row.max_T0:.6f} max_T1={row.max_T1:.6f} "
          f"final_error={row.final_error:.6f} activation_time={_fmt_time(row.activation_time)} "
          f"telemetry={out}")
    return 0


def cmd_verify(args):
    cfg = _load(args)
    gammas = _parse_gammas(args.gammas) if args.gammas else [cfg.supervisor_settings.gamma]
    wires = [(i, p) for i, p in enumerate(cfg.actuators) if p not in cfg.actuators[:i]]
    all_safe = True
    texts = []
    for g in gammas:
        settings = replace(cfg.supervisor_settings, gamma=g)
        for i, params in wires:
            label = "actuator" if len(wires) == 1 else f"actuator{i}"
            try:
                result = supervisor.verify(params, settings, max_iters=args.max_iters)
            except NoConvergence as exc:
                print(f"{label} gamma={g:g} verdict=NO_CONVERGENCE iterations={exc.iterations}")
                print(exc.last.to_text(), end="")
                all_safe = False
                continue
            verdict = "SAFE" if result.safe else "UNSAFE"
            all_safe &= result.safe
            print(f"{label} gamma={g:g} iterations={result.iterations} verdict={verdict}")
            text = result.invariant_set.to_text()
            print(text, end="")
            texts.append(text)
    if args.out:
        Path(args.out).write_text("".join(texts))
    return 0 if all_safe else 1


def cmd_sweep(args):
    cfg = _load(args)
    gammas = _parse_gammas(args.gammas) if args.gammas is not None else list(DEFAULT_GAMMAS)
    rows = limb.gamma_sweep(gammas, cfg.supervisor_settings, **cfg.run_kwargs())
    out = Path(args.out) if args.out else Path("sweep.csv")
    limb.write_sweep_csv(out, rows)
    for r in rows:
        print(f"gamma={r.gamma:g} activation_time={_fmt_time(r.activation_time)} "
              f"max_T0={r.max_T0:.4f} max_T1={r.max_T1:.4f} "
              f"final_error={r.final_error:.4f} overshoot={r.overshoot:.4f}")
    return 0


def cmd_calibrate(args):
    data = actuator.read_calibration_csv(args.csv)
    dt = 0.1 if args.dt is None else args.dt
    params, residuals = actuator.calibrate(data, dt=dt, return_residuals=True)
    rms = float(np.sqrt(np.mean(residuals ** 2)))
    text = actuator_fragment(params, comment=f"calibrated from {args.csv} "
                                             f"({len(data)} samples, residual RMS {rms:.3e})")
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text, end="")
    print(f"residual_rms={rms:.6e} a1={params.a1!r} a2={params.a2!r} a3={params.a3!r}",
          file=sys.stderr if not args.out else sys.stdout)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="softsafe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario and write telemetry CSV")
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--dt", type=float)
    p.add_argument("--mismatch", type=float)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check the supervisor's safe set is invariant")
    p.add_argument("--config")
    p.add_argument("--gammas", help="comma-separated gammas to check in one batch")
    p.add_argument("--out", help="write the invariant set(s) in polytope text format")
    p.add_argument("--max-iters", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="repeat a run over several gammas")
    p.add_argument("--config")
    p.add_argument("--gammas")
    p.add_argument("--out")
    p.add_argument("--dt", type=float)
    p.add_argument("--mismatch", type=float)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="fit actuator coefficients from a k,w,u,w_next log")
    p.add_argument("csv")
    p.add_argument("--dt", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _HANDLED as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        name = exc.filename if exc.filename is not None else ""
        print(f"error: {exc.strerror or exc}: {name}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
