"""Numba-compiled hot inner-loop kernels.

Same contracts as `_kernels_numpy`; all arguments must be C-contiguous
complex128 arrays (the `backend` wrappers take care of that).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def paratuck_slices(H, G, X, S, W):
    M = H.shape[0]
    N = H.shape[1]
    T = X.shape[0]
    L = X.shape[1]
    K = S.shape[0]
    Xt = X.T.copy()
    out = np.empty((M, T, K), np.complex128)
    C = np.empty((N, L), np.complex128)
    for k in range(K):
        for n in range(N):
            for l in range(L):
                C[n, l] = S[k, n] * G[n, l] * W[k, l]
        out[:, :, k] = (H @ C) @ Xt
    return out


@njit(cache=True)
def parafac_slices(A, B, C):
    I = A.shape[0]
    R = A.shape[1]
    J = B.shape[0]
    K = C.shape[0]
    Bt = B.T.copy()
    out = np.empty((I, J, K), np.complex128)
    scaled = np.empty((I, R), np.complex128)
    for k in range(K):
        for i in range(I):
            for r in range(R):
                scaled[i, r] = A[i, r] * C[k, r]
        out[:, :, k] = scaled @ Bt
    return out


@njit(cache=True)
def irs_bs_regressor(X, G, S, W):
    T = X.shape[0]
    L = X.shape[1]
    N = G.shape[0]
    K = S.shape[0]
    Gt = G.T.copy()
    out = np.empty((T * K, N), np.complex128)
    XW = np.empty((T, L), np.complex128)
    for k in range(K):
        for t in range(T):
            for l in range(L):
                XW[t, l] = X[t, l] * W[k, l]
        block = XW @ Gt
        for t in range(T):
            for n in range(N):
                out[k * T + t, n] = block[t, n] * S[k, n]
    return out


@njit(cache=True)
def symbol_regressor(H, G, S, W):
    M = H.shape[0]
    N = H.shape[1]
    L = G.shape[1]
    K = S.shape[0]
    out = np.empty((M * K, L), np.complex128)
    HS = np.empty((M, N), np.complex128)
    for k in range(K):
        for m in range(M):
            for n in range(N):
                HS[m, n] = H[m, n] * S[k, n]
        block = HS @ G
        for m in range(M):
            for l in range(L):
                out[k * M + m, l] = block[m, l] * W[k, l]
    return out


@njit(cache=True)
def fit_error(Y, H, G, X, S, W):
    M = H.shape[0]
    N = H.shape[1]
    T = X.shape[0]
    L = X.shape[1]
    K = S.shape[0]
    Xt = X.T.copy()
    C = np.empty((N, L), np.complex128)
    total = 0.0
    cost = 0.0
    for k in range(K):
        for n in range(N):
            for l in range(L):
                C[n, l] = S[k, n] * G[n, l] * W[k, l]
        model = (H @ C) @ Xt
        num = 0.0
        den = 0.0
        for m in range(M):
            for t in range(T):
                d = Y[m, t, k] - model[m, t]
                num += d.real * d.real + d.imag * d.imag
                y = Y[m, t, k]
                den += y.real * y.real + y.imag * y.imag
        total += num / den
        cost += num
    return total, cost
