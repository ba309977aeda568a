"""Complex matrix/tensor primitives: products, vectorization, unfoldings.

Third-order tensors are plain complex ndarrays of shape (I, J, K) whose
frontal slices are ``t[:, :, k]``. ``vec`` stacks columns (column-major),
which fixes the layout of every unfolding and Kronecker identity used by
the receivers.
"""

import numpy as np

DEFAULT_PINV_RTOL = 1e-12


def vec(a):
    """Column-major vectorization of a matrix."""
    return np.asarray(a).reshape(-1, order="F")


def unvec(v, rows, cols):
    """Inverse of `vec`: reshape a length rows*cols vector column-major."""
    return np.asarray(v).reshape((rows, cols), order="F")


def kronecker(a, b):
    """Kronecker product (standard block layout)."""
    return np.kron(a, b)


def khatri_rao(a, b):
    """Column-wise Kronecker product.

    Parameters
    ----------
    a : (I, R) array
    b : (J, R) array

    Returns
    -------
    (I*J, R) array whose r-th column is ``kron(a[:, r], b[:, r])``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("khatri_rao expects two matrices")
    if a.shape[1] != b.shape[1]:
        raise ValueError(
            f"khatri_rao column mismatch: {a.shape[1]} vs {b.shape[1]} columns"
        )
    i, r = a.shape
    j = b.shape[0]
    return (a[:, None, :] * b[None, :, :]).reshape(i * j, r)


def unfold1(t):
    """1-mode unfolding (I, J*K): frontal slices stacked column-wise."""
    i, j, k = t.shape
    return t.transpose(0, 2, 1).reshape(i, k * j)


def unfold2(t):
    """2-mode unfolding (J, I*K): transposed frontal slices stacked column-wise."""
    i, j, k = t.shape
    return t.transpose(1, 2, 0).reshape(j, k * i)


def unfold3(t):
    """3-mode unfolding (I*J, K): column k is vec of frontal slice k."""
    i, j, k = t.shape
    return t.transpose(1, 0, 2).reshape(j * i, k)


def fold1(m, shape):
    """Inverse of `unfold1` for a tensor of the given (I, J, K) shape."""
    i, j, k = shape
    return m.reshape(i, k, j).transpose(0, 2, 1)


def fold2(m, shape):
    i, j, k = shape
    return m.reshape(j, k, i).transpose(2, 0, 1)


def fold3(m, shape):
    i, j, k = shape
    return m.reshape(j, i, k).transpose(1, 0, 2)


def pinv(a, rel_tol=DEFAULT_PINV_RTOL):
    """Moore-Penrose pseudo-inverse via SVD.

    Singular values below ``rel_tol`` times the largest one are treated as
    zero; a zero matrix maps to a zero pseudo-inverse.
    """
    return np.linalg.pinv(a, rcond=rel_tol)


def diag_row(a, k):
    """Diagonal matrix holding row k of `a` on its main diagonal (0-based)."""
    a = np.asarray(a)
    if not 0 <= k < a.shape[0]:
        raise IndexError(f"row index {k} out of range for {a.shape[0]} rows")
    return np.diag(a[k, :])
