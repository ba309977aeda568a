"""Expected Cramér-Rao bounds for the two IRS-link channel matrices.

For a complex Gaussian observation with mean linear in the (complexified)
parameter vector and covariance sigma^2*I, the Fisher information has the
standard 2x2 real block structure; the bound traces follow from its Schur
complements. The bound for the UT-IRS channel treats the IRS-BS channel and
symbols as known nuisance (and vice versa), and the expected bound averages
the per-draw traces over channel/symbol realizations.
"""

from dataclasses import dataclass

import numpy as np

from .channels import draw_channels
from .coding import build_design, is_semi_unitary
from .signals import draw_symbols, paratuck_tensor
from .tensor_ops import khatri_rao

_SINGULAR_MSG = "FIM singular - check identifiability"


@dataclass(frozen=True)
class CrbDraw:
    """Bound traces for one Monte Carlo draw."""

    trace_g: float
    trace_h: float
    sigma2: float
    g_power: float
    h_power: float


@dataclass(frozen=True)
class ExpectedCrbPoint:
    """Per-SNR expected bound, plus the NMSE-unit normalization."""

    snr_db: float
    mean_trace_g: float
    mean_trace_h: float
    nmse_floor_g: float  # mean trace / mean ||G||_F^2
    nmse_floor_h: float
    draws: tuple


def fim_blocks(j):
    """Split the complex information kernel J into (Re J, Im J).

    J must be Hermitian (sesquilinear form C^H R^-1 C); the full FIM for the
    stacked real/imaginary parameters is 2*[[Re J, -Im J], [Im J, Re J]].
    """
    j = np.asarray(j)
    tol = 1e-10 * max(1.0, float(np.abs(j).max()))
    if float(np.abs(j - j.conj().T).max()) > tol:
        raise ValueError("information kernel is not Hermitian")
    return j.real.copy(), j.imag.copy()


def assemble_fim(m_bar, m_tilde):
    """Full real-valued FIM 2*[[M_bar, -M_tilde], [M_tilde, M_bar]]."""
    return 2.0 * np.block([[m_bar, -m_tilde], [m_tilde, m_bar]])


def _inv(a):
    try:
        out = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise ValueError(_SINGULAR_MSG) from exc
    if not np.all(np.isfinite(out)):
        raise ValueError(_SINGULAR_MSG)
    return out


def crb_traces(m_bar, m_tilde):
    """Schur-complement traces of the bound for the real and imaginary parts.

    Returns (trace_real, trace_imag); the bound on the complex parameter is
    their sum.
    """
    mb_inv = _inv(m_bar)
    core_inv = _inv(m_bar + m_tilde @ mb_inv @ m_tilde)
    tr_real = 0.5 * float(np.trace(core_inv).real)
    tr_imag = 0.5 * float(
        np.trace(mb_inv - mb_inv @ m_tilde @ core_inv @ m_tilde @ mb_inv).real
    )
    return tr_real, tr_imag


def crb_trace_ut_irs(x, h, psi, sigma2, method="auto"):
    """Trace of the CRB for the vectorized UT-IRS channel.

    With a semi-unitary combined design the information kernel is real
    diagonal and the trace reduces to (sigma2/K) * sum 1/d_r with d_r the
    squared column norms of X kron H ('diagonal' method). The 'general'
    method materializes the full regressor Psi^T (khatri-rao) (X kron H).
    """
    k = psi.shape[1]
    if method == "auto":
        method = "diagonal" if is_semi_unitary(psi) else "general"
    if method == "diagonal":
        if not is_semi_unitary(psi):
            raise ValueError("diagonal bound requires a semi-unitary design")
        d = np.kron(
            np.sum(np.abs(x) ** 2, axis=0), np.sum(np.abs(h) ** 2, axis=0)
        )
        if np.any(d <= 0.0):
            raise ValueError(_SINGULAR_MSG)
        return float(sigma2 / k * np.sum(1.0 / d))
    if method == "general":
        c = khatri_rao(psi.T, np.kron(x, h))
        j = c.conj().T @ c / sigma2
        tr_real, tr_imag = crb_traces(*fim_blocks(j))
        return tr_real + tr_imag
    raise ValueError(f"unknown method {method!r}")


def crb_trace_irs_bs(f, sigma2, m_antennas):
    """Trace of the CRB for the vectorized IRS-BS channel.

    The observation matricization is linear in the channel through
    F kron I_M, so the information kernel is (F^H F kron I_M)/sigma2.
    """
    j = np.kron(f.conj().T @ f, np.eye(m_antennas)) / sigma2
    tr_real, tr_imag = crb_traces(*fim_blocks(j))
    return tr_real + tr_imag


def noise_variance(signal_tensor, snr_db):
    """Per-entry noise variance implied by the exact-SNR noise scaling."""
    m, t, k = signal_tensor.shape
    power = float(np.sum(np.abs(signal_tensor) ** 2))
    return power * 10.0 ** (-snr_db / 10.0) / (m * t * k)


def expected_crb(config, n_draws=100, rng=None, snr_grid=None, redraw_symbols=True):
    """Monte Carlo average of the two bound traces over channel/symbol draws.

    Traces are averaged per SNR and also normalized by the mean squared
    Frobenius norm of the corresponding channel, making them comparable to
    NMSE curves. With ``redraw_symbols=False`` one symbol matrix is drawn
    up front and held fixed across draws (symbols as known nuisance).
    """
    from .receivers import irs_bs_regressor  # deferred: receivers imports signals

    if rng is None:
        rng = np.random.default_rng()
    if snr_grid is None:
        snr_grid = config.snr_grid
    if n_draws < 1:
        raise ValueError("n_draws must be >= 1")

    x_fixed = None
    if not redraw_symbols:
        x_fixed = draw_symbols(config.T, config.L, rng)

    # Bounds are evaluated on the IRS-assisted window (K2 blocks for the
    # two-stage receiver). One set of realizations is reused across the SNR
    # grid; only sigma^2 changes with SNR.
    k_blocks = config.assisted_blocks
    realizations = []
    for _ in range(n_draws):
        chans = draw_channels(
            config.M, config.L, config.N, rng,
            model=config.channel_model, paths=(config.paths_h, config.paths_g),
        )
        x = x_fixed if x_fixed is not None else draw_symbols(config.T, config.L, rng)
        design = build_design(config.L, config.N, k_blocks, config.design, rng)
        clean = paratuck_tensor(chans.h, chans.g, x, design.s, design.w)
        f = irs_bs_regressor(x, chans.g, design.s, design.w)
        realizations.append((chans, x, design, clean, f))

    points = []
    for snr_db in snr_grid:
        draws = []
        for chans, x, design, clean, f in realizations:
            sigma2 = noise_variance(clean, snr_db)
            trace_g = crb_trace_ut_irs(x, chans.h, design.psi, sigma2)
            trace_h = crb_trace_irs_bs(f, sigma2, config.M)
            draws.append(
                CrbDraw(
                    trace_g=trace_g,
                    trace_h=trace_h,
                    sigma2=sigma2,
                    g_power=float(np.sum(np.abs(chans.g) ** 2)),
                    h_power=float(np.sum(np.abs(chans.h) ** 2)),
                )
            )
        mean_g = sum(d.trace_g for d in draws) / len(draws)
        mean_h = sum(d.trace_h for d in draws) / len(draws)
        mean_gp = sum(d.g_power for d in draws) / len(draws)
        mean_hp = sum(d.h_power for d in draws) / len(draws)
        points.append(
            ExpectedCrbPoint(
                snr_db=float(snr_db),
                mean_trace_g=mean_g,
                mean_trace_h=mean_h,
                nmse_floor_g=mean_g / mean_gp,
                nmse_floor_h=mean_h / mean_hp,
                draws=tuple(draws),
            )
        )
    return points
