"""Monte Carlo experiment runner: metrics, seeding, records, CSV emission.

Each (snr, run) pair is an independent job with its own RNG stream derived
from the base seed by a splitmix64 hash, so results do not depend on worker
count or completion order. Records are reduced in (snr index, run index)
order; every column except the measured wall time is bit-reproducible.
"""

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import draw_channels
from .coding import build_design, split_design
from .receivers import TalsOptions, demodulate, etals, remove_scaling_ambiguity, tals
from .signals import (
    add_noise,
    add_noise_fixed_power,
    direct_gap_scale,
    direct_link_tensor,
    draw_symbols,
    paratuck_tensor,
)

log = logging.getLogger(__name__)

CSV_COLUMNS = ("snr_db", "run", "seed", "nmse_h", "nmse_g", "nmse_hd",
               "ser", "iters", "converged", "wall_ms")

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ExperimentRecord:
    """Metrics of one (snr, run) job."""

    snr_db: float
    run: int
    seed: int
    nmse_h: float
    nmse_g: float
    nmse_hd: float  # nan when the receiver has no direct-channel estimate
    ser: float
    iters: int
    converged: bool
    wall_ms: float


def nmse(truth, estimate):
    """Squared Frobenius error normalized by the true matrix energy."""
    truth = np.asarray(truth)
    estimate = np.asarray(estimate)
    if truth.shape != estimate.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {estimate.shape}")
    power = float(np.sum(np.abs(truth) ** 2))
    if power == 0.0:
        raise ValueError("zero-norm reference matrix")
    return float(np.sum(np.abs(truth - estimate) ** 2)) / power


def ser(tx_symbols, rx_hard, exclude_pilot_row=True):
    """Fraction of mismatched constellation indices."""
    tx_symbols = np.asarray(tx_symbols)
    rx_hard = np.asarray(rx_hard)
    if tx_symbols.shape != rx_hard.shape:
        raise ValueError(f"shape mismatch: {tx_symbols.shape} vs {rx_hard.shape}")
    tx_idx, _ = demodulate(tx_symbols)
    rx_idx, _ = demodulate(rx_hard)
    if exclude_pilot_row:
        tx_idx = tx_idx[1:, :]
        rx_idx = rx_idx[1:, :]
    return float(np.mean(tx_idx != rx_idx))


def _splitmix64(z):
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(base_seed, snr_index, run_index):
    """64-bit job seed: successive splitmix64 rounds absorbing the indices."""
    h = _splitmix64(base_seed & _MASK64)
    h = _splitmix64(h ^ (snr_index & _MASK64))
    return _splitmix64(h ^ (run_index & _MASK64))


def _tals_options(config, refine=True, init_X=None):
    return TalsOptions(delta=config.delta, max_iters=config.max_iters,
                       refine_symbols=refine, init_X=init_X)


@dataclass(frozen=True)
class TwoWindowScene:
    """One noisy realization of the split-transmission scenario."""

    chans: object
    x: np.ndarray
    w1: np.ndarray
    stage2: object  # CodingDesign of the assisted window
    hd_true: np.ndarray  # gap-scaled direct channel (the NMSE reference)
    y_direct: np.ndarray  # (M, T, K1) noisy direct-only window
    y_stage2: np.ndarray  # (M, T, K2) noisy composite window
    noise2_power: float


def draw_two_window_scene(config, snr_db, rng):
    """Draw channels/symbols/design and both noisy windows for one run.

    The SNR is defined on the composite second-window tensor; the first
    (direct-only) window shares the same per-entry noise variance, so a
    direct link alpha_db below the assisted link is received alpha_db
    closer to the noise floor, as in a real receiver.
    """
    chans = draw_channels(
        config.M, config.L, config.N, rng,
        model=config.channel_model, paths=(config.paths_h, config.paths_g),
        direct=True,
    )
    x = draw_symbols(config.T, config.L, rng)
    w1, stage2 = split_design(
        config.L, config.N, config.K1, config.K2, kind=config.design, rng=rng
    )
    assisted = paratuck_tensor(chans.h, chans.g, x, stage2.s, stage2.w)
    direct = direct_link_tensor(chans.h_direct, x, stage2.w)
    scale = direct_gap_scale(assisted, direct, config.alpha_db)
    hd_true = scale * chans.h_direct
    y_stage2, noise2 = add_noise(assisted + scale * direct, snr_db, rng)
    noise2_power = float(np.sum(np.abs(noise2) ** 2))
    y_direct, _ = add_noise_fixed_power(
        direct_link_tensor(hd_true, x, w1),
        noise2_power * config.K1 / config.K2,
        rng,
    )
    return TwoWindowScene(
        chans=chans, x=x, w1=w1, stage2=stage2, hd_true=hd_true,
        y_direct=y_direct, y_stage2=y_stage2, noise2_power=noise2_power,
    )


def run_single(config, snr_db, snr_index, run_index):
    """One independent realization: draw, receive, score.

    Draw order is fixed (channels, symbols, design, noise, receiver init)
    so a job is fully determined by its mixed seed.
    """
    seed = mix_seed(config.base_seed, snr_index, run_index)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()

    if config.uses_direct_link:
        scene = draw_two_window_scene(config, snr_db, rng)
        chans, x = scene.chans, scene.x
        res = etals(
            scene.y_direct, scene.y_stage2, scene.w1, scene.stage2.w, scene.stage2.s,
            opts=_tals_options(config, refine=(config.receiver == "etals")),
            rng=rng,
        )
        if log.isEnabledFor(logging.DEBUG):
            # effective stage-two noise = thermal noise + stage-one residual
            assisted = paratuck_tensor(chans.h, chans.g, x, scene.stage2.s, scene.stage2.w)
            q = scene.y_stage2 - direct_link_tensor(res.h_direct_hat, res.x_hat, scene.stage2.w)
            residual = float(np.sum(np.abs(q - assisted) ** 2))
            log.debug(
                "snr=%g run=%d nominal noise power %.3e, post-subtraction %.3e",
                snr_db, run_index, scene.noise2_power, residual,
            )
        nmse_hd = nmse(scene.hd_true, res.h_direct_hat)
    else:
        chans = draw_channels(
            config.M, config.L, config.N, rng,
            model=config.channel_model, paths=(config.paths_h, config.paths_g),
        )
        x = draw_symbols(config.T, config.L, rng)
        design = build_design(config.L, config.N, config.K, kind=config.design, rng=rng)
        clean = paratuck_tensor(chans.h, chans.g, x, design.s, design.w)
        y, _ = add_noise(clean, snr_db, rng)
        res = tals(y, design.s, design.w, opts=_tals_options(config), rng=rng)
        nmse_hd = math.nan

    h_corr, g_corr, x_corr = remove_scaling_ambiguity(
        res.h_hat, res.g_hat, res.x_hat, h_true=chans.h
    )
    _, x_hard = demodulate(x_corr)
    wall_ms = (time.perf_counter() - start) * 1e3
    return ExperimentRecord(
        snr_db=float(snr_db),
        run=run_index,
        seed=seed,
        nmse_h=nmse(chans.h, h_corr),
        nmse_g=nmse(chans.g, g_corr),
        nmse_hd=nmse_hd,
        ser=ser(x, x_hard),
        iters=res.iterations,
        converged=res.converged,
        wall_ms=wall_ms,
    )


def _job(args):
    return run_single(*args)


def run_experiment(config, workers=1):
    """Run the full (snr, run) grid; returns records ordered by (snr, run)."""
    config.validate()
    jobs = [
        (config, snr_db, si, ri)
        for si, snr_db in enumerate(config.snr_grid)
        for ri in range(config.runs)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_job, jobs, chunksize=4))
    else:
        records = [run_single(*job) for job in jobs]
    return records


def summarize(records):
    """Per-SNR means of every metric, ordered by SNR."""
    by_snr = {}
    for rec in records:
        by_snr.setdefault(rec.snr_db, []).append(rec)
    rows = []
    for snr_db in sorted(by_snr):
        group = by_snr[snr_db]
        count = len(group)
        rows.append({
            "snr_db": snr_db,
            "runs": count,
            "nmse_h": sum(r.nmse_h for r in group) / count,
            "nmse_g": sum(r.nmse_g for r in group) / count,
            "nmse_hd": sum(r.nmse_hd for r in group) / count,
            "ser": sum(r.ser for r in group) / count,
            "iters": sum(r.iters for r in group) / count,
            "converged": sum(r.converged for r in group) / count,
            "wall_ms": sum(r.wall_ms for r in group) / count,
        })
    return rows


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(records, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow([_fmt(getattr(rec, col)) for col in CSV_COLUMNS])


def write_summary_csv(rows, path):
    columns = ("snr_db", "runs", "nmse_h", "nmse_g", "nmse_hd", "ser",
               "iters", "converged", "wall_ms")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[col]) for col in columns])


def gnuplot_script(summary_csv, out_png="nmse.png"):
    """Plot-script text for the per-SNR mean NMSE curves of a summary CSV."""
    return "\n".join([
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set logscale y",
        "set xlabel 'SNR (dB)'",
        "set ylabel 'NMSE'",
        f"set output '{out_png}'",
        "set terminal pngcairo size 800,600",
        f"plot '{summary_csv}' using 1:3 with linespoints title 'NMSE H', \\",
        f"     '{summary_csv}' using 1:4 with linespoints title 'NMSE G'",
        "",
    ])
