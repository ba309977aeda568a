"""Kernel backend selection.

The hot inner-loop kernels (tensor slice builders, ALS regressor assembly,
reconstruction error) exist in two equivalent variants: numba-compiled
(`_kernels_numba`) and pure numpy (`_kernels_numpy`). The active variant is
chosen at import time from the ``IRSTENSOR_KERNELS`` environment variable:

    IRSTENSOR_KERNELS=numpy  force the pure-numpy path
    IRSTENSOR_KERNELS=numba  require numba (ImportError if unavailable)

Unset, numba is used when importable and numpy otherwise. `set_backend`
rebinds at runtime (used by the benchmark and the cross-backend tests).
"""

import os

import numpy as np

from . import _kernels_numpy

KERNEL_NAMES = (
    "paratuck_slices",
    "parafac_slices",
    "irs_bs_regressor",
    "symbol_regressor",
    "fit_error",
)

try:
    from . import _kernels_numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dependency normally
    _kernels_numba = None
    NUMBA_AVAILABLE = False

ACTIVE = "numpy"


def _as_c128(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def set_backend(kind):
    """Select the kernel implementation: 'numba' or 'numpy'."""
    global ACTIVE
    if kind == "numba":
        if not NUMBA_AVAILABLE:
            raise ImportError("numba backend requested but numba is not importable")
        impl = _kernels_numba
    elif kind == "numpy":
        impl = _kernels_numpy
    else:
        raise ValueError(f"unknown kernel backend {kind!r} (use 'numba' or 'numpy')")
    for name in KERNEL_NAMES:
        globals()["_" + name] = getattr(impl, name)
    ACTIVE = kind


def paratuck_slices(H, G, X, S, W):
    return _paratuck_slices(_as_c128(H), _as_c128(G), _as_c128(X), _as_c128(S), _as_c128(W))


def parafac_slices(A, B, C):
    return _parafac_slices(_as_c128(A), _as_c128(B), _as_c128(C))


def irs_bs_regressor(X, G, S, W):
    return _irs_bs_regressor(_as_c128(X), _as_c128(G), _as_c128(S), _as_c128(W))


def symbol_regressor(H, G, S, W):
    return _symbol_regressor(_as_c128(H), _as_c128(G), _as_c128(S), _as_c128(W))


def fit_error(Y, H, G, X, S, W):
    return _fit_error(
        _as_c128(Y), _as_c128(H), _as_c128(G), _as_c128(X), _as_c128(S), _as_c128(W)
    )


_requested = os.environ.get("IRSTENSOR_KERNELS", "").strip().lower()
if _requested == "":
    set_backend("numba" if NUMBA_AVAILABLE else "numpy")
elif _requested in ("numba", "numpy"):
    set_backend(_requested)
else:
    raise ValueError(
        f"IRSTENSOR_KERNELS={_requested!r} not understood (use 'numba' or 'numpy')"
    )
