import numpy as np
import pytest

from irstensor.channels import ChannelSet, rayleigh_channel
from irstensor.coding import build_dft_design
from irstensor.signals import (
    add_noise,
    composite_tensor,
    direct_gap_scale,
    direct_link_tensor,
    draw_symbols,
    paratuck_tensor,
    psk_constellation,
)
from irstensor.tensor_ops import khatri_rao, unfold3, vec

from conftest import crandn


def scalar_form_oracle(h, g, x, s, w):
    """Brute-force quintuple sum y[m,t,k] = sum_n sum_l g x h s w."""
    m_dim, n_dim = h.shape
    t_dim, l_dim = x.shape
    k_dim = s.shape[0]
    out = np.zeros((m_dim, t_dim, k_dim), dtype=complex)
    for m in range(m_dim):
        for t in range(t_dim):
            for k in range(k_dim):
                acc = 0.0 + 0.0j
                for n in range(n_dim):
                    for l in range(l_dim):
                        acc += g[n, l] * x[t, l] * h[m, n] * s[k, n] * w[k, l]
                out[m, t, k] = acc
    return out


def parafac_scalar_oracle(a, b, c):
    """Triple sum y[i,j,k] = sum_r a[i,r] b[j,r] c[k,r]."""
    i_dim, r_dim = a.shape
    j_dim = b.shape[0]
    k_dim = c.shape[0]
    out = np.zeros((i_dim, j_dim, k_dim), dtype=complex)
    for i in range(i_dim):
        for j in range(j_dim):
            for k in range(k_dim):
                out[i, j, k] = sum(a[i, r] * b[j, r] * c[k, r] for r in range(r_dim))
    return out


def test_paratuck_rank_one_case():
    rng = np.random.default_rng(0)
    h = crandn(rng, 3, 1)
    g = crandn(rng, 1, 1)
    x = np.ones((4, 1), dtype=complex)
    s = np.ones((5, 1), dtype=complex)
    w = np.ones((5, 1), dtype=complex)
    y = paratuck_tensor(h, g, x, s, w)
    expected = h @ g  # every slice is the same rank-one product
    for k in range(5):
        assert np.abs(y[:, :, k] - expected @ np.ones((1, 4))).max() < 1e-14


def test_paratuck_matches_scalar_oracle():
    rng = np.random.default_rng(1)
    m, l, n, t, k = 2, 2, 3, 4, 5
    h = crandn(rng, m, n)
    g = crandn(rng, n, l)
    x = crandn(rng, t, l)
    s = crandn(rng, k, n)
    w = crandn(rng, k, l)
    y = paratuck_tensor(h, g, x, s, w)
    assert np.abs(y - scalar_form_oracle(h, g, x, s, w)).max() < 1e-12


def test_paratuck_third_unfolding_identity():
    rng = np.random.default_rng(2)
    m, l, n, t, k = 3, 2, 4, 5, 8
    h = crandn(rng, m, n)
    g = crandn(rng, n, l)
    x = crandn(rng, t, l)
    d = build_dft_design(l, n, k)
    y = paratuck_tensor(h, g, x, d.s, d.w)
    psi = khatri_rao(d.w.T, d.s.T)
    rhs = np.kron(x, h) @ np.diag(vec(g)) @ psi
    assert np.abs(unfold3(y) - rhs).max() < 1e-10


def test_paratuck_linearity_in_symbols_and_gains():
    rng = np.random.default_rng(3)
    h = crandn(rng, 2, 3)
    g = crandn(rng, 3, 2)
    x = crandn(rng, 4, 2)
    s = crandn(rng, 5, 3)
    w = crandn(rng, 5, 2)
    base = paratuck_tensor(h, g, x, s, w)
    assert np.abs(paratuck_tensor(h, g, 2.5j * x, s, w) - 2.5j * base).max() < 1e-12
    assert np.abs(paratuck_tensor(h, -3.0 * g, x, s, w) + 3.0 * base).max() < 1e-12


def test_paratuck_shape_mismatch():
    rng = np.random.default_rng(4)
    with pytest.raises(ValueError, match="shape"):
        paratuck_tensor(
            crandn(rng, 2, 3), crandn(rng, 4, 2), crandn(rng, 4, 2),
            crandn(rng, 5, 3), crandn(rng, 5, 2),
        )


def test_direct_link_rank_one_slices():
    rng = np.random.default_rng(5)
    hd = crandn(rng, 3, 1)
    x = crandn(rng, 4, 1)
    w1 = crandn(rng, 6, 1)
    y = direct_link_tensor(hd, x, w1)
    for k in range(6):
        assert np.linalg.matrix_rank(y[:, :, k]) == 1


def test_direct_link_matches_parafac_oracle():
    rng = np.random.default_rng(6)
    hd = crandn(rng, 3, 2)
    x = crandn(rng, 4, 2)
    w1 = crandn(rng, 5, 2)
    y = direct_link_tensor(hd, x, w1)
    assert np.abs(y - parafac_scalar_oracle(hd, x, w1)).max() < 1e-12


def test_direct_link_matricization_identity():
    # unfold3 of the direct tensor equals (X kr H_d) W1^T
    rng = np.random.default_rng(7)
    hd = crandn(rng, 3, 2)
    x = crandn(rng, 5, 2)
    w1 = crandn(rng, 6, 2)
    y = direct_link_tensor(hd, x, w1)
    assert np.abs(unfold3(y) - khatri_rao(x, hd) @ w1.T).max() < 1e-12


def _random_channelset(rng, m=3, l=2, n=4, direct=True):
    return ChannelSet(
        h=rayleigh_channel(m, n, rng),
        g=rayleigh_channel(n, l, rng),
        h_direct=rayleigh_channel(m, l, rng) if direct else None,
    )


def test_composite_infinite_gap_reduces_to_assisted():
    rng = np.random.default_rng(8)
    cs = _random_channelset(rng)
    x = draw_symbols(4, 2, rng)
    d = build_dft_design(2, 4, 8)
    y = composite_tensor(cs, x, d.w, d.s, np.inf)
    assert np.abs(y - paratuck_tensor(cs.h, cs.g, x, d.s, d.w)).max() == 0.0


def test_composite_power_gap_exact():
    rng = np.random.default_rng(9)
    for alpha_db in (0.0, 7.0, 20.0):
        gaps = []
        for _ in range(500):
            cs = _random_channelset(rng)
            x = draw_symbols(4, 2, rng)
            d = build_dft_design(2, 4, 8)
            assisted = paratuck_tensor(cs.h, cs.g, x, d.s, d.w)
            direct = direct_link_tensor(cs.h_direct, x, d.w)
            c = direct_gap_scale(assisted, direct, alpha_db)
            ratio_db = 10 * np.log10(
                np.sum(np.abs(c * direct) ** 2) / np.sum(np.abs(assisted) ** 2)
            )
            gaps.append(ratio_db)
        assert abs(np.mean(gaps) + alpha_db) < 0.1


def test_composite_requires_direct_channel():
    rng = np.random.default_rng(10)
    cs = _random_channelset(rng, direct=False)
    d = build_dft_design(2, 4, 8)
    with pytest.raises(ValueError, match="direct channel"):
        composite_tensor(cs, draw_symbols(4, 2, rng), d.w, d.s, 0.0)


def test_add_noise_exact_snr():
    rng = np.random.default_rng(11)
    t = crandn(rng, 3, 4, 5)
    for snr_db in (-3.0, 0.0, 12.0, 30.0):
        noisy, noise = add_noise(t, snr_db, rng)
        realized = 10 * np.log10(np.sum(np.abs(t) ** 2) / np.sum(np.abs(noise) ** 2))
        assert abs(realized - snr_db) < 1e-9
        assert np.abs((noisy - noise) - t).max() < 1e-12


def test_add_noise_infinite_snr():
    rng = np.random.default_rng(12)
    t = crandn(rng, 2, 2, 2)
    noisy, noise = add_noise(t, np.inf, rng)
    assert np.array_equal(noisy, t)
    assert not np.any(noise)


def test_add_noise_zero_signal():
    with pytest.raises(ValueError, match="zero signal"):
        add_noise(np.zeros((2, 2, 2), complex), 10.0, np.random.default_rng(0))


def test_constellation_and_symbols():
    pts = psk_constellation()
    assert len(pts) == 16
    assert np.allclose(np.abs(pts), 1.0)
    assert pts[0] == 1.0 + 0.0j
    rng = np.random.default_rng(13)
    x = draw_symbols(6, 3, rng)
    assert np.allclose(np.abs(x), 1.0)
    assert np.array_equal(x[0, :], np.ones(3))
    dist_to_grid = np.abs(x.ravel()[:, None] - pts[None, :]).min(axis=1)
    assert dist_to_grid.max() < 1e-12  # every entry on the constellation


def test_draw_symbols_pilot_needs_two_rows():
    with pytest.raises(ValueError, match="T >= 2"):
        draw_symbols(1, 2, np.random.default_rng(0))


def test_symbol_frequencies_uniform():
    rng = np.random.default_rng(14)
    x = draw_symbols(10_001, 10, rng, pilot=False)
    idx = np.mod(np.round(np.angle(x) * 16 / (2 * np.pi)).astype(int), 16)
    counts = np.bincount(idx.ravel(), minlength=16)
    n = idx.size
    p = 1 / 16
    sigma = np.sqrt(n * p * (1 - p))
    assert np.abs(counts - n * p).max() < 3 * sigma + 1  # 3-sigma band per bin
