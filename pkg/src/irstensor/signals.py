"""Received-signal synthesis: model tensors, direct-link composition, noise."""

import math

import numpy as np

from . import backend

PSK_ORDER = 16


def psk_constellation(order=PSK_ORDER):
    """Unit-modulus PSK points exp(2j*pi*q/order), q = 0..order-1.

    The zero-phase point makes the all-ones pilot row a valid symbol row.
    """
    return np.exp(2j * np.pi * np.arange(order) / order)


def draw_symbols(t_periods, l_streams, rng, pilot=True, order=PSK_ORDER):
    """Uniform i.i.d. PSK symbol matrix (T, L); row 0 is the all-ones pilot."""
    if pilot and t_periods < 2:
        raise ValueError("pilot row needs T >= 2 (row 0 carries no data)")
    points = psk_constellation(order)
    x = points[rng.integers(0, order, (t_periods, l_streams))]
    if pilot:
        x[0, :] = 1.0
    return x


def _check_shapes(pairs):
    problems = [f"{name} has shape {got}, expected {want}"
                for name, got, want in pairs if got != want]
    if problems:
        raise ValueError("; ".join(problems))


def paratuck_tensor(h, g, x, s, w):
    """Noiseless received tensor (M, T, K) with slice k = H D_k(S) G D_k(W) X^T."""
    m, n = h.shape
    t, l = x.shape
    k = s.shape[0]
    _check_shapes([
        ("g", g.shape, (n, l)),
        ("s", s.shape, (k, n)),
        ("w", w.shape, (k, l)),
    ])
    return backend.paratuck_slices(h, g, x, s, w)


def direct_link_tensor(h_direct, x, w1):
    """Noiseless direct-link tensor (M, T, K1) with slice k = H_d D_k(W1) X^T."""
    m, l = h_direct.shape
    t = x.shape[0]
    k1 = w1.shape[0]
    _check_shapes([
        ("x", x.shape, (t, l)),
        ("w1", w1.shape, (k1, l)),
    ])
    return backend.parafac_slices(h_direct, x, w1)


def direct_gap_scale(assisted, direct, alpha_db):
    """Scale factor for the direct-link term so its power sits alpha_db below
    the assisted term (exact for this realization). Infinite alpha gives 0."""
    if math.isinf(alpha_db):
        return 0.0
    p_direct = float(np.sum(np.abs(direct) ** 2))
    if p_direct == 0.0:
        return 0.0
    p_assisted = float(np.sum(np.abs(assisted) ** 2))
    return math.sqrt(p_assisted / p_direct * 10.0 ** (-alpha_db / 10.0))


def composite_tensor(channels, x, w2, s2, alpha_db):
    """Direct plus IRS-assisted tensor for the second transmission window.

    The direct-link term is deterministically scaled so its Frobenius power
    is alpha_db below the assisted term.
    """
    if channels.h_direct is None:
        raise ValueError("composite tensor needs a direct channel")
    assisted = paratuck_tensor(channels.h, channels.g, x, s2, w2)
    direct = direct_link_tensor(channels.h_direct, x, w2)
    return assisted + direct_gap_scale(assisted, direct, alpha_db) * direct


def add_noise(t, snr_db, rng):
    """Add circular Gaussian noise rescaled so the realized SNR is exact.

    Returns (noisy, noise); ``noisy - noise`` recovers the input exactly.
    ``snr_db=inf`` returns a zero noise tensor.
    """
    t = np.asarray(t)
    signal_power = float(np.sum(np.abs(t) ** 2))
    if signal_power == 0.0:
        raise ValueError("degenerate input: zero signal tensor")
    if math.isinf(snr_db):
        noise = np.zeros_like(t)
        return t.copy(), noise
    noise_power = signal_power * 10.0 ** (-snr_db / 10.0)
    return add_noise_fixed_power(t, noise_power, rng)


def add_noise_fixed_power(t, noise_power, rng):
    """Add circular Gaussian noise rescaled to the given total power exactly.

    Used for secondary transmission windows that share the noise floor of a
    reference window rather than having their own SNR target.
    """
    t = np.asarray(t)
    if noise_power < 0.0:
        raise ValueError("noise power must be >= 0")
    if noise_power == 0.0:
        noise = np.zeros_like(t)
        return t.copy(), noise
    raw = (rng.standard_normal(t.shape) + 1j * rng.standard_normal(t.shape)) / math.sqrt(2.0)
    raw_power = float(np.sum(np.abs(raw) ** 2))
    noise = raw * math.sqrt(noise_power / raw_power)
    return t + noise, noise
