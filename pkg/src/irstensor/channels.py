"""Ground-truth channel generation: i.i.d. Rayleigh and geometric models."""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ArrayGeometry:
    """Antenna array layout.

    kind is 'ula' (uniform linear) or 'ura' (uniform rectangular); shape is
    (N,) for a ULA and (rows, cols) for a URA; spacing is in wavelengths.
    """

    kind: str
    shape: tuple
    spacing: float = 0.5

    def __post_init__(self):
        if self.kind not in ("ula", "ura"):
            raise ValueError(f"unknown array kind {self.kind!r}")
        if self.kind == "ula" and len(self.shape) != 1:
            raise ValueError("ULA shape must be (N,)")
        if self.kind == "ura" and len(self.shape) != 2:
            raise ValueError("URA shape must be (rows, cols)")
        if any(n < 1 for n in self.shape):
            raise ValueError("element counts must be >= 1")

    @property
    def size(self):
        return int(np.prod(self.shape))


@dataclass
class ChannelSet:
    """The three ground-truth channels of one realization.

    h: (M, N) IRS-to-BS, g: (N, L) UT-to-IRS, h_direct: (M, L) UT-to-BS
    (None when the direct link is absent).
    """

    h: np.ndarray
    g: np.ndarray
    h_direct: np.ndarray | None = None
    model: str = "rayleigh"
    paths: tuple | None = None


def rayleigh_channel(rows, cols, rng):
    """i.i.d. circularly-symmetric complex Gaussian entries, unit variance."""
    if rows < 1 or cols < 1:
        raise ValueError("channel dimensions must be >= 1")
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / math.sqrt(2.0)


def steering_vector(geometry, azimuth, elevation=0.0):
    """Array response for a plane wave from (azimuth, elevation), unit-modulus entries.

    ULA phases use sin(azimuth) only. A URA response is the Kronecker product
    of its two axis responses, with phase arguments sin(el)cos(az) and
    sin(el)sin(az).
    """
    if geometry.kind == "ula":
        n = np.arange(geometry.shape[0])
        return np.exp(1j * 2.0 * np.pi * geometry.spacing * n * math.sin(azimuth))
    rows, cols = geometry.shape
    u = math.sin(elevation) * math.cos(azimuth)
    v = math.sin(elevation) * math.sin(azimuth)
    a_rows = np.exp(1j * 2.0 * np.pi * geometry.spacing * np.arange(rows) * u)
    a_cols = np.exp(1j * 2.0 * np.pi * geometry.spacing * np.arange(cols) * v)
    return np.kron(a_rows, a_cols)


def ura_shape(n):
    """Near-square (rows, cols) factorization of n for the IRS panel."""
    r = int(math.isqrt(n))
    while n % r:
        r -= 1
    return (r, n // r)


def _response_matrix(geometry, azimuths, elevations):
    cols = [steering_vector(geometry, az, el) for az, el in zip(azimuths, elevations)]
    return np.stack(cols, axis=1)


def geometric_channel_pair(m, l, n, r1, r2, rng, spacing=0.5):
    """Draw (H, G) from the few-specular-path model.

    H (M, N) sums r1 paths between BS ULA and IRS URA; G (N, L) sums r2
    paths between IRS URA and UT ULA. Per path, azimuth ~ U[-pi/2, pi/2],
    elevation ~ U[0, pi/2], complex gain ~ CN(0, 1). The departure-side
    response columns are normalized to unit norm so each path carries an
    expected power equal to the receive-array size (E||H||_F^2 = M*r1,
    E||G||_F^2 = N*r2).
    """
    if r1 < 1 or r2 < 1:
        raise ValueError("path counts must be >= 1")
    bs = ArrayGeometry("ula", (m,), spacing)
    ut = ArrayGeometry("ula", (l,), spacing)
    irs = ArrayGeometry("ura", ura_shape(n), spacing)

    az1 = rng.uniform(-np.pi / 2, np.pi / 2, r1)
    el1 = rng.uniform(0.0, np.pi / 2, r1)
    az2 = rng.uniform(-np.pi / 2, np.pi / 2, r2)
    el2 = rng.uniform(0.0, np.pi / 2, r2)
    beta = (rng.standard_normal(r1) + 1j * rng.standard_normal(r1)) / math.sqrt(2.0)
    gamma = (rng.standard_normal(r2) + 1j * rng.standard_normal(r2)) / math.sqrt(2.0)

    a_bs = _response_matrix(bs, az1, np.zeros(r1))
    a_irs = _response_matrix(irs, az1, el1) / math.sqrt(n)
    b_irs = _response_matrix(irs, az2, el2)
    b_ut = _response_matrix(ut, az2, np.zeros(r2)) / math.sqrt(l)

    h = a_bs @ np.diag(beta) @ a_irs.conj().T
    g = b_irs @ np.diag(gamma) @ b_ut.conj().T
    return h, g


def draw_channels(m, l, n, rng, model="rayleigh", paths=(1, 1), direct=False):
    """Draw a full ChannelSet for one Monte Carlo run.

    The direct UT-to-BS channel, when requested, is always i.i.d. Rayleigh.
    Draw order is fixed (H, G, then H_direct) so seeds reproduce exactly.
    """
    if model == "rayleigh":
        h = rayleigh_channel(m, n, rng)
        g = rayleigh_channel(n, l, rng)
    elif model == "geometric":
        h, g = geometric_channel_pair(m, l, n, paths[0], paths[1], rng)
    else:
        raise ValueError(f"unknown channel model {model!r}")
    h_direct = rayleigh_channel(m, l, rng) if direct else None
    return ChannelSet(h=h, g=g, h_direct=h_direct, model=model,
                      paths=tuple(paths) if model == "geometric" else None)
