import numpy as np
import pytest

from irstensor import backend


def crandn(rng, *shape):
    """Unit-variance circularly-symmetric complex Gaussian array."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Trigger JIT compilation once so timed tests measure compute, not compile.
    rng = np.random.default_rng(0)
    h = crandn(rng, 2, 3)
    g = crandn(rng, 3, 2)
    x = crandn(rng, 2, 2)
    s = crandn(rng, 4, 3)
    w = crandn(rng, 4, 2)
    y = backend.paratuck_slices(h, g, x, s, w)
    backend.parafac_slices(h[:, :2], x, w)
    backend.irs_bs_regressor(x, g, s, w)
    backend.symbol_regressor(h, g, s, w)
    backend.fit_error(y, h, g, x, s, w)
