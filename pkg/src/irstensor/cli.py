"""Command-line front end: run experiments, evaluate bounds, check configs."""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import crb as crb_mod
from .config import PRESETS, load_config, preset
from .harness import (
    gnuplot_script,
    run_experiment,
    summarize,
    write_records_csv,
    write_summary_csv,
)


def _add_config_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESETS, help="named experiment preset")
    src.add_argument("--config", help="path to a key = value config file")
    p.add_argument("--runs", type=int, help="override Monte Carlo runs per SNR")
    p.add_argument("--seed", type=int, help="override the base seed")


def _load(args):
    cfg = preset(args.preset) if args.preset else load_config(args.config)
    if args.runs is not None:
        cfg = replace(cfg, runs=args.runs)
    if args.seed is not None:
        cfg = replace(cfg, base_seed=args.seed)
    return cfg


def _cmd_run(args):
    cfg = _load(args).validate()
    records = run_experiment(cfg, workers=args.workers)
    write_records_csv(records, args.out)
    rows = summarize(records)
    if args.summary_out:
        write_summary_csv(rows, args.summary_out)
        if args.plot_script:
            with open(args.plot_script, "w", encoding="utf-8") as fh:
                fh.write(gnuplot_script(args.summary_out))
    elif args.plot_script:
        raise SystemExit("--plot-script needs --summary-out")
    print(f"wrote {len(records)} records to {args.out}")
    header = f"{'snr_db':>8} {'nmse_h':>12} {'nmse_g':>12} {'nmse_hd':>12} {'ser':>10} {'iters':>8}"
    print(header)
    for row in rows:
        print(
            f"{row['snr_db']:8.1f} {row['nmse_h']:12.4e} {row['nmse_g']:12.4e} "
            f"{row['nmse_hd']:12.4e} {row['ser']:10.4e} {row['iters']:8.1f}"
        )
    return 0


def _cmd_crb(args):
    cfg = _load(args).validate()
    rng = np.random.default_rng(cfg.base_seed)
    points = crb_mod.expected_crb(cfg, n_draws=args.draws, rng=rng)
    lines = ["snr_db,crb_trace_g,crb_trace_h,crb_nmse_g,crb_nmse_h"]
    for pt in points:
        lines.append(
            f"{pt.snr_db!r},{pt.mean_trace_g!r},{pt.mean_trace_h!r},"
            f"{pt.nmse_floor_g!r},{pt.nmse_floor_h!r}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(points)} CRB points to {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_check(args):
    cfg = _load(args)
    try:
        cfg.validate()
    except ValueError as exc:
        print(exc)
        return 1
    print("identifiability: ok")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="irstensor",
        description="Semi-blind joint channel/symbol estimation simulator "
        "for IRS-assisted MIMO links",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a Monte Carlo experiment")
    _add_config_args(p_run)
    p_run.add_argument("--out", default="records.csv", help="per-run records CSV")
    p_run.add_argument("--summary-out", help="per-SNR mean metrics CSV")
    p_run.add_argument("--plot-script", help="write a gnuplot script for the summary")
    p_run.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p_run.set_defaults(func=_cmd_run)

    p_crb = sub.add_parser("crb", help="emit expected-CRB curves for a config")
    _add_config_args(p_crb)
    p_crb.add_argument("--draws", type=int, default=100, help="Monte Carlo draws")
    p_crb.add_argument("--out", help="output CSV (stdout when omitted)")
    p_crb.set_defaults(func=_cmd_crb)

    p_check = sub.add_parser("check", help="identifiability / validity report")
    _add_config_args(p_check)
    p_check.set_defaults(func=_cmd_check)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
