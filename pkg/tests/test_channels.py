import numpy as np
import pytest

from irstensor.channels import (
    ArrayGeometry,
    draw_channels,
    geometric_channel_pair,
    rayleigh_channel,
    steering_vector,
    ura_shape,
)


def test_rayleigh_moments():
    rng = np.random.default_rng(0)
    a = rayleigh_channel(250, 400, rng)  # 1e5 entries
    assert abs(a.mean()) < 0.02
    assert abs(np.mean(np.abs(a) ** 2) - 1.0) < 0.02


def test_rayleigh_seed_reproducible():
    a = rayleigh_channel(4, 5, np.random.default_rng(42))
    b = rayleigh_channel(4, 5, np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_rayleigh_rejects_bad_dims():
    with pytest.raises(ValueError):
        rayleigh_channel(0, 3, np.random.default_rng(0))


def test_steering_broadside_is_ones():
    ula = ArrayGeometry("ula", (5,))
    assert np.allclose(steering_vector(ula, 0.0), np.ones(5))


def test_steering_ula_endfire():
    ula = ArrayGeometry("ula", (2,))
    v = steering_vector(ula, np.pi / 2)
    assert np.allclose(v, [1.0, -1.0])


def test_steering_ura_is_kron_of_axes():
    ura = ArrayGeometry("ura", (2, 2))
    az, el = 0.7, 0.4
    u = np.sin(el) * np.cos(az)
    v = np.sin(el) * np.sin(az)
    a_r = np.exp(1j * np.pi * np.arange(2) * u)
    a_c = np.exp(1j * np.pi * np.arange(2) * v)
    assert np.allclose(steering_vector(ura, az, el), np.kron(a_r, a_c))


def test_steering_unit_modulus():
    rng = np.random.default_rng(1)
    ura = ArrayGeometry("ura", (3, 4))
    for _ in range(20):
        v = steering_vector(ura, rng.uniform(-np.pi / 2, np.pi / 2), rng.uniform(0, np.pi / 2))
        assert np.allclose(np.abs(v), 1.0)


def test_ura_shape_near_square():
    assert ura_shape(64) == (8, 8)
    assert ura_shape(70) == (7, 10)
    assert ura_shape(13) == (1, 13)


def test_geometric_single_path_is_rank_one():
    rng = np.random.default_rng(2)
    h, g = geometric_channel_pair(4, 2, 16, 1, 1, rng)
    for mat in (h, g):
        sv = np.linalg.svd(mat, compute_uv=False)
        assert sv[1] < 1e-10 * sv[0]


def test_geometric_shapes_on_random_configs():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = int(rng.integers(1, 6))
        l = int(rng.integers(1, 4))
        n = int(rng.integers(2, 30))
        r1 = int(rng.integers(1, 4))
        r2 = int(rng.integers(1, 4))
        h, g = geometric_channel_pair(m, l, n, r1, r2, rng)
        assert h.shape == (m, n)
        assert g.shape == (n, l)
        assert np.linalg.matrix_rank(h) <= r1
        assert np.linalg.matrix_rank(g) <= r2


def test_geometric_expected_power():
    # E||H||_F^2 = M * R1 under the unit-gain normalization, brute-force averaged
    rng = np.random.default_rng(4)
    m, l, n, r1, r2 = 3, 2, 12, 2, 1
    acc_h = 0.0
    acc_g = 0.0
    draws = 10_000
    for _ in range(draws):
        h, g = geometric_channel_pair(m, l, n, r1, r2, rng)
        acc_h += np.sum(np.abs(h) ** 2)
        acc_g += np.sum(np.abs(g) ** 2)
    assert abs(acc_h / draws - m * r1) < 0.05 * m * r1
    assert abs(acc_g / draws - n * r2) < 0.05 * n * r2


def test_geometric_seed_reproducible():
    h1, g1 = geometric_channel_pair(3, 2, 8, 2, 2, np.random.default_rng(7))
    h2, g2 = geometric_channel_pair(3, 2, 8, 2, 2, np.random.default_rng(7))
    assert np.array_equal(h1, h2)
    assert np.array_equal(g1, g2)


def test_draws_independent_across_seeds():
    rng_a = np.random.default_rng(100)
    rng_b = np.random.default_rng(200)
    a = rayleigh_channel(100, 100, rng_a).ravel()
    b = rayleigh_channel(100, 100, rng_b).ravel()
    corr = abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))
    assert corr < 0.05


def test_draw_channels_dispatch():
    rng = np.random.default_rng(5)
    cs = draw_channels(4, 2, 8, rng, model="rayleigh", direct=True)
    assert cs.h.shape == (4, 8) and cs.g.shape == (8, 2) and cs.h_direct.shape == (4, 2)
    cs = draw_channels(4, 2, 8, rng, model="geometric", paths=(2, 1))
    assert cs.h_direct is None and cs.paths == (2, 1)
    with pytest.raises(ValueError, match="unknown channel model"):
        draw_channels(4, 2, 8, rng, model="nakagami")
