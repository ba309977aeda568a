"""Pure-numpy implementations of the hot inner-loop kernels.

These are the reference implementations; `_kernels_numba` provides
JIT-compiled equivalents. Selection happens in `backend`.
"""

import numpy as np


def paratuck_slices(H, G, X, S, W):
    """Noiseless block-fading tensor: slice k = H D_k(S) G D_k(W) X^T.

    Shapes: H (M,N), G (N,L), X (T,L), S (K,N), W (K,L) -> (M,T,K).
    """
    return np.einsum("mn,nl,tl,kn,kl->mtk", H, G, X, S, W, optimize=True)


def parafac_slices(A, B, C):
    """Rank-L tensor with slices A D_k(C) B^T; A (I,R), B (J,R), C (K,R)."""
    return np.einsum("ir,jr,kr->ijk", A, B, C, optimize=True)


def irs_bs_regressor(X, G, S, W):
    """Stacked regressor for the IRS-BS channel update.

    Block k (T rows) is X D_k(W) G^T D_k(S); output shape (T*K, N).
    """
    K = S.shape[0]
    T = X.shape[0]
    N = G.shape[0]
    blocks = np.einsum("tl,kl,nl,kn->ktn", X, W, G, S, optimize=True)
    return blocks.reshape(K * T, N)


def symbol_regressor(H, G, S, W):
    """Stacked regressor for the symbol update.

    Block k (M rows) is H D_k(S) G D_k(W); output shape (M*K, L).
    """
    K = S.shape[0]
    M = H.shape[0]
    L = G.shape[1]
    blocks = np.einsum("mn,kn,nl,kl->kml", H, S, G, W, optimize=True)
    return blocks.reshape(K * M, L)


def fit_error(Y, H, G, X, S, W):
    """Reconstruction error pair: (sum of per-slice normalized squared
    errors, global unnormalized squared error)."""
    model = paratuck_slices(H, G, X, S, W)
    num = (np.abs(Y - model) ** 2).sum(axis=(0, 1))
    den = (np.abs(Y) ** 2).sum(axis=(0, 1))
    return float((num / den).sum()), float(num.sum())
