"""Joint construction of the transmit coding matrix W and IRS phase-shift
matrix S.

The orthogonal design builds the combined matrix Psi = W^T (khatri-rao) S^T
as the first L*N rows of a K-point DFT matrix and factors it exactly into
unit-modulus W (K, L) and S (K, N). Phases are computed from integer
exponents reduced mod K, so orthogonality and the Khatri-Rao factorization
hold to machine precision.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .tensor_ops import khatri_rao

SEMI_UNITARY_RTOL = 1e-10


@dataclass(frozen=True)
class CodingDesign:
    """One (W, S) pair and its combined matrix Psi = W^T (khatri-rao) S^T."""

    w: np.ndarray  # (K, L) coding matrix, one row per block
    s: np.ndarray  # (K, N) phase-shift matrix, one row per block
    psi: np.ndarray  # (L*N, K)
    semi_unitary: bool
    kind: str  # 'dft' | 'random_phase'

    @property
    def n_blocks(self):
        return self.w.shape[0]


def is_semi_unitary(psi, rtol=SEMI_UNITARY_RTOL):
    """True when conj(Psi) Psi^T equals K*I to within rtol*K (max-abs)."""
    rows, k = psi.shape
    gram = psi.conj() @ psi.T
    return float(np.abs(gram - k * np.eye(rows)).max()) <= rtol * k


def _dft_phase_table(exponents, k):
    # exp(-2j*pi*e/k) evaluated with integer exponents reduced mod k,
    # keeping every phase exact to one rounding of the angle.
    reduced = np.mod(exponents, k)
    return np.exp(-2j * np.pi * reduced / k)


def build_psi_dft(l_streams, n_elements, k_blocks):
    """First L*N rows of the K-point DFT matrix, shape (L*N, K).

    Entry (r, k) is the (k+1)-th DFT generator raised to the power r.
    Requires L*N <= K.
    """
    ln = l_streams * n_elements
    if ln > k_blocks:
        raise ValueError(
            f"orthogonal design needs L*N <= K, got L*N={ln} > K={k_blocks}"
        )
    powers = np.outer(np.arange(ln, dtype=np.int64), np.arange(k_blocks, dtype=np.int64))
    return _dft_phase_table(powers, k_blocks)


def factor_psi(l_streams, n_elements, k_blocks):
    """Exact Khatri-Rao factors (W, S) of `build_psi_dft`.

    Row k of W is [1, psi_k^N, ..., psi_k^{N(L-1)}] and row k of S is
    [1, psi_k, ..., psi_k^{N-1}], so W^T (khatri-rao) S^T reconstructs Psi.
    """
    ln = l_streams * n_elements
    if ln > k_blocks:
        raise ValueError(
            f"orthogonal design needs L*N <= K, got L*N={ln} > K={k_blocks}"
        )
    ks = np.arange(k_blocks, dtype=np.int64)
    w_pow = np.outer(ks, n_elements * np.arange(l_streams, dtype=np.int64))
    s_pow = np.outer(ks, np.arange(n_elements, dtype=np.int64))
    return _dft_phase_table(w_pow, k_blocks), _dft_phase_table(s_pow, k_blocks)


def build_dft_design(l_streams, n_elements, k_blocks):
    w, s = factor_psi(l_streams, n_elements, k_blocks)
    psi = build_psi_dft(l_streams, n_elements, k_blocks)
    return CodingDesign(w=w, s=s, psi=psi, semi_unitary=True, kind="dft")


def build_random_phase(l_streams, n_elements, k_blocks, rng):
    """Non-orthogonal alternative: independent uniform phases on W and S."""
    w = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (k_blocks, l_streams)))
    s = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (k_blocks, n_elements)))
    psi = khatri_rao(w.T, s.T)
    return CodingDesign(
        w=w, s=s, psi=psi, semi_unitary=is_semi_unitary(psi), kind="random_phase"
    )


def build_design(l_streams, n_elements, k_blocks, kind="dft", rng=None):
    """Build a design of the requested kind.

    A 'dft' request with L*N > K (orthogonality impossible) falls back to
    the random-phase design with a warning; identifiability may still hold.
    """
    if kind == "dft":
        if l_streams * n_elements > k_blocks:
            warnings.warn(
                f"L*N={l_streams * n_elements} > K={k_blocks}: orthogonal design "
                "impossible, falling back to random phases",
                stacklevel=2,
            )
            if rng is None:
                raise ValueError("random-phase fallback needs an rng")
            return build_random_phase(l_streams, n_elements, k_blocks, rng)
        return build_dft_design(l_streams, n_elements, k_blocks)
    if kind == "random_phase":
        if rng is None:
            raise ValueError("random-phase design needs an rng")
        return build_random_phase(l_streams, n_elements, k_blocks, rng)
    raise ValueError(f"unknown design kind {kind!r}")


def stage1_coding(k1_blocks, l_streams):
    """Coding matrix for the direct-link-only window: first L columns of the
    K1-point DFT matrix, satisfying W1^T conj(W1) = K1*I_L (needs K1 >= L)."""
    if k1_blocks < l_streams:
        raise ValueError(
            f"stage-one identifiability needs K1 >= L, got K1={k1_blocks} < L={l_streams}"
        )
    powers = np.outer(
        np.arange(k1_blocks, dtype=np.int64), np.arange(l_streams, dtype=np.int64)
    )
    return _dft_phase_table(powers, k1_blocks)


def split_design(l_streams, n_elements, k1_blocks, k2_blocks, kind="dft", rng=None):
    """Two-window design: (W1, stage-two CodingDesign).

    W1 is an independent K1-point truncated DFT (column-orthogonal); the
    second window gets a fresh design of size K2 built by `build_design`.
    """
    w1 = stage1_coding(k1_blocks, l_streams)
    stage2 = build_design(l_streams, n_elements, k2_blocks, kind=kind, rng=rng)
    return w1, stage2
