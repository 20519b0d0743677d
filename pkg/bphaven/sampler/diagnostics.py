"""
diagnostics.py

Convergence diagnostics and posterior summaries.

``r_hat`` and ``ess`` work on one (n_chains, n_draws) matrix. The ``*_by_parameter``
wrappers run them over every parameter of a PosteriorDraws and flag the parameters
whose draws have no variance instead of failing the whole table.
"""

from loguru import logger
import numpy as np
import pandas as pd
from scipy import fft

from ..errors import DiagnosticError
from .config import ESS_INFLATION_BOUND, RHAT_THRESHOLD, SUMMARY_QUANTILES


def _as_matrix(draws, min_draws):
    arr = np.asarray(draws, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DiagnosticError(f"expected a (chains, draws) matrix, got shape {arr.shape}")
    if arr.shape[1] < min_draws:
        raise DiagnosticError(f"need at least {min_draws} draws per chain, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise DiagnosticError("draws contain non-finite values")
    return arr


def split_chains(arr):
    """Split each chain into halves; the middle draw of an odd-length chain is dropped."""
    m, n = arr.shape
    half = n // 2
    return np.vstack([arr[:, :half], arr[:, n - half:]])


def r_hat(draws):
    """
    Split-chain potential scale reduction factor of one parameter.

    Raises:
        DiagnosticError: fewer than 2 chains or 4 draws, or all draws identical
    """
    arr = _as_matrix(draws, 4)
    if arr.shape[0] < 2:
        raise DiagnosticError("r_hat needs at least 2 chains")
    if np.ptp(arr) == 0.0:
        raise DiagnosticError("r_hat undefined: all draws are identical")

    split = split_chains(arr)
    m, n = split.shape
    chain_means = split.mean(axis=1)
    W = split.var(axis=1, ddof=1).mean()
    B = n * chain_means.var(ddof=1)
    if W == 0.0:
        return np.inf
    var_hat = (n - 1) / n * W + B / n
    return float(np.sqrt(var_hat / W))


def _autocovariance(arr):
    """Biased autocovariance of every chain at every lag, by FFT."""
    n = arr.shape[1]
    centered = arr - arr.mean(axis=1, keepdims=True)
    size = fft.next_fast_len(2 * n)
    spectrum = fft.rfft(centered, n=size, axis=1)
    return fft.irfft(spectrum * np.conj(spectrum), n=size, axis=1)[:, :n] / n


def ess(draws):
    """
    Multi-chain effective sample size of one parameter.

    Autocorrelations are combined across chains and summed in pairs of consecutive lags
    until a pair turns non-positive (initial positive sequence), with the pair sums made
    monotone. The result is capped at ESS_INFLATION_BOUND * N for N total draws.

    Raises:
        DiagnosticError: fewer than 4 draws per chain, or all draws identical
    """
    arr = _as_matrix(draws, 4)
    m, n = arr.shape
    if np.ptp(arr) == 0.0:
        raise DiagnosticError("ess undefined: all draws are identical")

    acov = _autocovariance(arr)
    chain_var = acov[:, 0] * n / (n - 1.0)
    W = chain_var.mean()
    var_plus = W * (n - 1.0) / n
    if m > 1:
        var_plus += arr.mean(axis=1).var(ddof=1)
    if var_plus == 0.0:
        raise DiagnosticError("ess undefined: zero within-chain variance")

    rho = 1.0 - (W - acov.mean(axis=0)) / var_plus
    rho[0] = 1.0
    n_pairs = n // 2
    pairs = rho[0:2 * n_pairs:2] + rho[1:2 * n_pairs:2]
    non_positive = np.flatnonzero(pairs <= 0.0)
    if non_positive.size:
        pairs = pairs[:non_positive[0]]
    pairs = np.minimum.accumulate(pairs)
    tau = -1.0 + 2.0 * pairs.sum()

    total = m * n
    cap = ESS_INFLATION_BOUND * total
    if tau <= 0.0:
        return float(cap)
    return float(min(total / tau, cap))


def _by_parameter(func, label, draws, names=None):
    names = list(draws.names) if names is None else list(names)
    values = {}
    for name in names:
        try:
            values[name] = func(draws.chains(name))
        except DiagnosticError as e:
            logger.warning(f"{label} flagged for {name}: {e}")
            values[name] = np.nan
    return pd.Series(values, name=label, dtype=float)


def rhat_by_parameter(draws, names=None):
    """Split R-hat of every parameter; NaN marks flagged parameters."""
    return _by_parameter(r_hat, "r_hat", draws, names)


def ess_by_parameter(draws, names=None):
    """ESS of every parameter; NaN marks flagged parameters."""
    return _by_parameter(ess, "ess", draws, names)


def summarize(draws, names=None):
    """
    Mean, sd and quantiles of every parameter over all retained draws, chains pooled.

    Returns:
        DataFrame indexed by parameter with columns mean, sd, q2.5, q25, q50, q75, q97.5
    """
    names = list(draws.names) if names is None else list(names)
    if draws.n_draws == 0:
        raise ValueError("summarize needs at least one draw")
    pooled = np.column_stack([draws.pooled(name) for name in names])
    table = pd.DataFrame(
        {"mean": pooled.mean(axis=0), "sd": pooled.std(axis=0, ddof=1) if len(pooled) > 1 else np.nan},
        index=pd.Index(names, name="parameter"),
    )
    quantiles = np.percentile(pooled, SUMMARY_QUANTILES, axis=0)
    for q, row in zip(SUMMARY_QUANTILES, quantiles):
        table[f"q{q:g}"] = row
    return table


def diagnostics_frame(draws, names=None):
    """summarize() joined with per-parameter r_hat and ess."""
    table = summarize(draws, names)
    table["r_hat"] = rhat_by_parameter(draws, table.index)
    table["ess"] = ess_by_parameter(draws, table.index)
    return table


def convergence(draws, names=None, threshold=RHAT_THRESHOLD):
    """
    (max R-hat, min ESS, converged) over the given parameters.

    Flagged parameters are ignored in the max/min; ``converged`` requires every
    unflagged R-hat <= threshold.
    """
    rhat = rhat_by_parameter(draws, names)
    n_eff = ess_by_parameter(draws, names)
    max_rhat = float(rhat.max()) if rhat.notna().any() else np.nan
    min_ess = float(n_eff.min()) if n_eff.notna().any() else np.nan
    converged = bool(np.isfinite(max_rhat) and max_rhat <= threshold)
    if not converged:
        logger.debug(f"convergence gate failed: max r_hat {max_rhat:.4f} > {threshold}")
    return max_rhat, min_ess, converged
