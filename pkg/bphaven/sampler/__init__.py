"""
bphaven.sampler

Adaptive blockwise Metropolis sampling with multi-chain diagnostics.
"""

from .chains import AdaptationConfig, ChainConfig, PosteriorDraws, run_chains
from .diagnostics import (
    convergence,
    diagnostics_frame,
    ess,
    ess_by_parameter,
    r_hat,
    rhat_by_parameter,
    split_chains,
    summarize,
)
from .target import Block, Target

__all__ = [
    "AdaptationConfig",
    "Block",
    "ChainConfig",
    "PosteriorDraws",
    "Target",
    "convergence",
    "diagnostics_frame",
    "ess",
    "ess_by_parameter",
    "r_hat",
    "rhat_by_parameter",
    "run_chains",
    "split_chains",
    "summarize",
]
