"""Semi-blind receivers.

`tals` alternates least-squares updates of the IRS-BS channel, the UT-IRS
channel, and the symbol matrix on the block-fading received tensor. `etals`
prepends a closed-form joint estimate of the direct channel and symbols from
a direct-link-only window (`krf`), subtracts the direct-link contribution
from the second window, and warm-starts `tals` with the symbol estimate.
"""

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import backend
from .coding import is_semi_unitary
from .signals import psk_constellation, PSK_ORDER
from .tensor_ops import khatri_rao, pinv, unfold1, unfold2, unfold3, unvec, vec

_PILOT_EPS = 1e-12


@dataclass
class TalsOptions:
    """Knobs for the alternating estimation loop.

    When `init_G`/`init_X` are None the loop starts from i.i.d. complex
    Gaussian draws. `fast_g_step=None` auto-enables the diagonal UT-IRS
    update whenever the combined design matrix is semi-unitary;
    `refine_symbols=False` freezes the symbol matrix at its initial value.
    """

    delta: float = 1e-5
    max_iters: int = 1000
    fast_g_step: bool | None = None
    refine_symbols: bool = True
    init_G: np.ndarray | None = None
    init_X: np.ndarray | None = None

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class ReceiverResult:
    h_hat: np.ndarray
    g_hat: np.ndarray
    x_hat: np.ndarray
    h_direct_hat: np.ndarray | None
    error_trace: np.ndarray
    cost_trace: np.ndarray
    iterations: int
    converged: bool
    wall_time: float


@dataclass(frozen=True)
class IdentifiabilityReport:
    ok: bool
    violations: tuple

    def __bool__(self):
        return self.ok


def check_identifiability(m, l, n, t, k, k1=None):
    """Joint-recovery conditions: T*K >= N, T*K*M >= L*N, M*K >= L, and
    K1 >= L when a direct-link window is used. Returns a report, never raises."""
    violations = []
    if t * k < n:
        violations.append(f"T*K >= N fails ({t}*{k}={t * k} < {n})")
    if t * k * m < l * n:
        violations.append(f"T*K*M >= L*N fails ({t * k * m} < {l * n})")
    if m * k < l:
        violations.append(f"M*K >= L fails ({m * k} < {l})")
    if k1 is not None and k1 < l:
        violations.append(f"K1 >= L fails ({k1} < {l})")
    return IdentifiabilityReport(ok=not violations, violations=tuple(violations))


def irs_bs_regressor(x, g, s, w):
    """Stacked known-factor matrix for the IRS-BS channel update: block k is
    X D_k(W) G^T D_k(S); shape (T*K, N)."""
    return backend.irs_bs_regressor(x, g, s, w)


def symbol_regressor(h, g, s, w):
    """Stacked known-factor matrix for the symbol update: block k is
    H D_k(S) G D_k(W); shape (M*K, L)."""
    return backend.symbol_regressor(h, g, s, w)


def estimate_irs_bs_channel(y1, f):
    """LS minimizer of ||Y1 - H F^T||_F over H (M, N)."""
    return y1 @ pinv(f.T)


def estimate_symbols(y2, e):
    """LS minimizer of ||Y2 - X E^T||_F over X (T, L)."""
    return y2 @ pinv(e.T)


def estimate_ut_irs_channel(y3, x, h, psi, fast=False):
    """LS minimizer over vec(G) of the 3-mode unfolding fit.

    The general path materializes the full regressor
    Psi^T (khatri-rao) (X kron H) and pseudo-inverts it. With `fast=True`
    (valid only for a semi-unitary design) the normal equations collapse to
    a diagonal system: vec(G) = Sigma^{-1} C^H vec(Y3) / K with Sigma
    holding the squared column norms of X kron H.
    """
    t, l = x.shape
    m, n = h.shape
    k = psi.shape[1]
    if fast:
        if not is_semi_unitary(psi):
            raise ValueError(
                "fast UT-IRS update requires a semi-unitary combined design "
                "(conj(Psi) Psi^T = K*I)"
            )
        yt = y3.reshape(m, t, k, order="F")
        # C^H vec(Y3) with C = Psi^T (khatri-rao) (X kron H), computed without
        # materializing the Kronecker product.
        proj = np.einsum("mn,mtk,tl->nlk", h.conj(), yt, x.conj(), optimize=True)
        proj = proj.reshape(l * n, k, order="F")
        cvec = (psi.conj() * proj).sum(axis=1)
        sigma = np.kron(
            np.sum(np.abs(x) ** 2, axis=0), np.sum(np.abs(h) ** 2, axis=0)
        )
        return unvec(cvec / (k * sigma), n, l)
    c = khatri_rao(psi.T, np.kron(x, h))
    return unvec(pinv(c) @ vec(y3), n, l)


def reconstruction_error(y, h, g, x, s, w):
    """Sum over blocks of per-slice normalized squared reconstruction error.

    This is the convergence metric; note it is a slice-weighted quantity,
    so unlike the global squared cost it is not guaranteed monotone under
    the alternating updates (the cost trace is).
    """
    return backend.fit_error(y, h, g, x, s, w)[0]


def _gaussian_init(rows, cols, rng):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2.0)


def tals(y, s, w, opts=None, rng=None):
    """Alternating LS estimation of (H, G, X) from the received tensor.

    Stops when the reconstruction error changes by at most `opts.delta`
    between sweeps, or at `opts.max_iters`. Estimates carry the inherent
    diagonal scaling ambiguities; see `remove_scaling_ambiguity`.
    """
    start = time.perf_counter()
    opts = opts or TalsOptions()
    y = np.asarray(y, dtype=np.complex128)
    m, t, k = y.shape
    n = s.shape[1]
    l = w.shape[1]
    report = check_identifiability(m, l, n, t, k)
    if not report.ok:
        raise ValueError("unidentifiable configuration: " + "; ".join(report.violations))
    if not np.any(y):
        raise ValueError("degenerate input: zero received tensor")

    psi = khatri_rao(w.T, s.T)
    fast = opts.fast_g_step
    if fast is None:
        fast = is_semi_unitary(psi)

    if opts.init_G is not None:
        g_hat = np.asarray(opts.init_G, dtype=np.complex128)
    else:
        if rng is None:
            rng = np.random.default_rng()
        g_hat = _gaussian_init(n, l, rng)
    if opts.init_X is not None:
        x_hat = np.asarray(opts.init_X, dtype=np.complex128)
    else:
        if rng is None:
            rng = np.random.default_rng()
        x_hat = _gaussian_init(t, l, rng)

    y1 = unfold1(y)
    y2 = unfold2(y)
    y3 = unfold3(y)

    trace = []
    costs = []
    eps_prev = math.inf
    converged = False
    h_hat = None
    iterations = 0
    for iterations in range(1, opts.max_iters + 1):
        f = irs_bs_regressor(x_hat, g_hat, s, w)
        h_hat = estimate_irs_bs_channel(y1, f)
        g_hat = estimate_ut_irs_channel(y3, x_hat, h_hat, psi, fast=fast)
        if opts.refine_symbols:
            e = symbol_regressor(h_hat, g_hat, s, w)
            x_hat = estimate_symbols(y2, e)
        eps, cost = backend.fit_error(y, h_hat, g_hat, x_hat, s, w)
        trace.append(eps)
        costs.append(cost)
        if abs(eps - eps_prev) <= opts.delta:
            converged = True
            break
        eps_prev = eps

    return ReceiverResult(
        h_hat=h_hat,
        g_hat=g_hat,
        x_hat=x_hat,
        h_direct_hat=None,
        error_trace=np.asarray(trace),
        cost_trace=np.asarray(costs),
        iterations=iterations,
        converged=converged,
        wall_time=time.perf_counter() - start,
    )


def remove_scaling_ambiguity(h_hat, g_hat, x_hat, h_true=None):
    """Resolve the compensating diagonal ambiguities of the trilinear model.

    The symbol scaling is fixed from the known all-ones pilot row (column l
    of X is divided by its estimated pilot entry). The channel scaling needs
    a reference: when the true H is supplied (simulation only), each column
    of H is aligned to it by the LS scalar and G absorbs the inverse
    factors; otherwise H and G are returned unchanged.
    """
    pilot = x_hat[0, :]
    if np.any(np.abs(pilot) < _PILOT_EPS):
        raise ValueError("zero pilot entry: cannot normalize symbol scaling")
    x_corr = x_hat / pilot[None, :]
    if h_true is None:
        return h_hat, g_hat, x_corr
    scale = (h_hat.conj() * h_true).sum(axis=0) / (np.abs(h_hat) ** 2).sum(axis=0)
    h_corr = h_hat * scale[None, :]
    g_corr = g_hat / scale[:, None] * pilot[None, :]
    return h_corr, g_corr, x_corr


def krf(y_direct, w1):
    """Closed-form joint direct-channel/symbol estimate from the
    direct-link-only window (Khatri-Rao factorization).

    Operates on the (M*T, K1) matricization of the (M, T, K1) input: right-
    multiplying by conj(W1)/K1 isolates X (khatri-rao) H_d, whose columns are
    recovered by L independent rank-1 approximations (leading SVD triplets).
    Column scalings are fixed by the pilot entry of each symbol column.
    Requires a column-orthogonal W1 (W1^T conj(W1) = K1*I).
    """
    m, t, k1 = y_direct.shape
    l = w1.shape[1]
    if w1.shape[0] != k1:
        raise ValueError(f"w1 has {w1.shape[0]} rows, expected K1={k1}")
    gram = w1.T @ w1.conj()
    if float(np.abs(gram - k1 * np.eye(l)).max()) > 1e-10 * k1:
        raise ValueError("stage-one coding matrix must satisfy W1^T conj(W1) = K1*I")
    z = unfold3(y_direct) @ w1.conj() / k1
    x_hat = np.empty((t, l), dtype=np.complex128)
    h_hat = np.empty((m, l), dtype=np.complex128)
    for col in range(l):
        zl = unvec(z[:, col], m, t)
        u, sv, vh = np.linalg.svd(zl)
        h_col = sv[0] * u[:, 0]
        x_col = vh[0, :]
        a = x_col[0]
        if abs(a) > _PILOT_EPS:
            x_col = x_col / a
            h_col = h_col * a
        x_hat[:, col] = x_col
        h_hat[:, col] = h_col
    return x_hat, h_hat


def refine_direct_channel(y_direct, w1, x_hat):
    """LS re-estimate of the direct channel from the first window given a
    refined symbol matrix: Y1_d times the pseudo-inverse of (W1 khatri-rao X)^T."""
    return unfold1(y_direct) @ pinv(khatri_rao(w1, x_hat).T)


def etals(y_direct, y_stage2, w1, w2, s2, opts=None, rng=None):
    """Two-stage receiver for the scenario with a direct link.

    Stage one runs `krf` on the direct-only window. Stage two subtracts the
    estimated direct-link contribution from the second window and runs
    `tals` on the remainder with the stage-one symbols as warm start
    (refined further unless `opts.refine_symbols` is False). Finally the
    direct channel is re-estimated from the first window using the final
    symbols.
    """
    start = time.perf_counter()
    opts = opts or TalsOptions()
    x0, hd0 = krf(y_direct, w1)
    from .signals import direct_link_tensor  # local import avoids a cycle

    q = y_stage2 - direct_link_tensor(hd0, x0, w2)
    stage2 = tals(q, s2, w2, replace(opts, init_X=x0), rng=rng)
    # The alternating refinement can drift the symbol column scalings away
    # from the stage-one pilot normalization; re-anchor them on the known
    # pilot row (G absorbs the compensation, keeping the fit unchanged)
    # so the final direct-channel regressor is scale-consistent.
    x_hat = stage2.x_hat
    g_hat = stage2.g_hat
    pilot = x_hat[0, :]
    if np.all(np.abs(pilot) > _PILOT_EPS):
        x_hat = x_hat / pilot[None, :]
        g_hat = g_hat * pilot[None, :]
    hd = refine_direct_channel(y_direct, w1, x_hat)
    return ReceiverResult(
        h_hat=stage2.h_hat,
        g_hat=g_hat,
        x_hat=x_hat,
        h_direct_hat=hd,
        error_trace=stage2.error_trace,
        cost_trace=stage2.cost_trace,
        iterations=stage2.iterations,
        converged=stage2.converged,
        wall_time=time.perf_counter() - start,
    )


def demodulate(x_soft, order=PSK_ORDER):
    """Hard PSK decisions by nearest phase.

    Returns (indices, hard_symbols) for every entry; SER bookkeeping decides
    which rows to count.
    """
    points = psk_constellation(order)
    idx = np.mod(np.round(np.angle(x_soft) * order / (2.0 * np.pi)).astype(int), order)
    return idx, points[idx]
