"""
chains.py

Multi-chain adaptive random-walk Metropolis over a Target.

Every iteration visits each block of the target once. Joint blocks propose a
multivariate normal step scaled by a covariance learnt during the first half of
burn-in; separable blocks propose every coordinate at once and accept or reject each
one on its own log-density term. Step sizes follow a Robbins-Monro schedule during
burn-in and are frozen afterwards, so retained draws come from a fixed kernel.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from joblib import Parallel, delayed
from loguru import logger
import numpy as np
import pandas as pd
from scipy.linalg import LinAlgError, cholesky
from tqdm import tqdm

from ..errors import ConfigurationError, InitializationError, SamplingError
from .config import (
    ADAPTATION_DECAY,
    ADAPTATION_WINDOW,
    CHAIN_PROFILES,
    COVARIANCE_JITTER,
    COVARIANCE_SCALE,
    INIT_JITTER_SD,
    INITIAL_LOG_STEP,
    MAX_LOG_STEP,
    MIN_LOG_STEP,
    TARGET_ACCEPTANCE,
)


@dataclass(frozen=True)
class AdaptationConfig:
    target_acceptance: float = TARGET_ACCEPTANCE
    window: int = ADAPTATION_WINDOW
    decay: float = ADAPTATION_DECAY
    initial_log_step: float = INITIAL_LOG_STEP

    def __post_init__(self):
        if not 0.0 < self.target_acceptance < 1.0:
            raise ConfigurationError(f"target acceptance must be in (0, 1), got {self.target_acceptance}")
        if self.window < 1:
            raise ConfigurationError(f"adaptation window must be >= 1, got {self.window}")
        if not 0.5 < self.decay <= 1.0:
            raise ConfigurationError(f"adaptation decay must be in (0.5, 1], got {self.decay}")

    def gain(self, t):
        return (1.0 + t / self.window) ** -self.decay


@dataclass(frozen=True)
class ChainConfig:
    """
    Chain lengths and seeding.

    ``iterations`` counts every iteration of a chain, ``burn_in`` of them are adaptation
    and are discarded. ``seed`` is anything ``np.random.SeedSequence`` accepts; chain c
    samples from the c-th spawned child, so draws do not depend on ``n_jobs``.
    """

    n_chains: int
    iterations: int
    burn_in: int
    seed: Union[int, Sequence[int]]
    adaptation: AdaptationConfig = field(default_factory=AdaptationConfig)
    init_jitter: float = INIT_JITTER_SD
    n_jobs: int = 1
    progress: bool = False

    def __post_init__(self):
        if self.n_chains < 1:
            raise ConfigurationError(f"n_chains must be >= 1, got {self.n_chains}")
        if self.burn_in < 0 or self.burn_in >= self.iterations:
            raise ConfigurationError(
                f"burn_in must satisfy 0 <= burn_in < iterations, got {self.burn_in} and {self.iterations}"
            )
        if self.init_jitter < 0:
            raise ConfigurationError("init_jitter must be >= 0")

    @property
    def retained(self):
        return self.iterations - self.burn_in

    @classmethod
    def from_profile(cls, name, seed, **overrides):
        """Chain lengths of a named profile: zero, free, simulation or desk."""
        if name not in CHAIN_PROFILES:
            raise ConfigurationError(f"unknown chain profile {name!r}; choose from {sorted(CHAIN_PROFILES)}")
        n_chains, iterations, burn_in = CHAIN_PROFILES[name]
        values = {"n_chains": n_chains, "iterations": iterations, "burn_in": burn_in}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(seed=seed, **values)


@dataclass
class PosteriorDraws:
    """
    Retained draws of every chain.

    ``values`` has shape (n_chains, n_draws, n_params) and holds parameters on their
    reported scale; ``acceptance`` has one row per (chain, block).
    """

    values: np.ndarray
    names: Sequence[str]
    burn_in: int
    iterations: int
    seed: object = None
    acceptance: pd.DataFrame = field(default_factory=pd.DataFrame)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 3 or self.values.shape[2] != len(self.names):
            raise ValueError(f"values shape {self.values.shape} does not match {len(self.names)} names")
        self._index = {name: i for i, name in enumerate(self.names)}

    @property
    def n_chains(self):
        return self.values.shape[0]

    @property
    def n_draws(self):
        return self.values.shape[1]

    def __contains__(self, name):
        return name in self._index

    def chains(self, name):
        """(n_chains, n_draws) matrix of one parameter."""
        if name not in self._index:
            raise KeyError(f"no parameter named {name!r}")
        return self.values[:, :, self._index[name]]

    def pooled(self, name):
        """All draws of one parameter, chain after chain."""
        return self.chains(name).reshape(-1)

    def to_frame(self):
        n_chains, n_draws, _ = self.values.shape
        frame = pd.DataFrame(self.values.reshape(n_chains * n_draws, -1), columns=list(self.names))
        frame.insert(0, "draw", np.tile(np.arange(n_draws), n_chains))
        frame.insert(0, "chain", np.repeat(np.arange(n_chains), n_draws))
        return frame

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False)
        return Path(path)

    @classmethod
    def read_csv(cls, path, burn_in=0, iterations=None, seed=None):
        frame = pd.read_csv(path)
        if not {"chain", "draw"} <= set(frame.columns):
            raise ValueError(f"{path} is not a draws file")
        frame = frame.sort_values(["chain", "draw"], kind="mergesort")
        names = [c for c in frame.columns if c not in ("chain", "draw")]
        n_chains = frame["chain"].nunique()
        values = frame[names].to_numpy(dtype=float).reshape(n_chains, -1, len(names))
        if iterations is None:
            iterations = burn_in + values.shape[1]
        return cls(values=values, names=names, burn_in=burn_in, iterations=iterations, seed=seed)


class _JointState:
    def __init__(self, block, adaptation):
        self.block = block
        self.dim = block.size
        self.log_step = adaptation.initial_log_step
        self.chol = np.eye(self.dim)
        self.mean = np.zeros(self.dim)
        self.m2 = np.zeros((self.dim, self.dim))
        self.count = 0
        self.learnt = False
        self.step_sum = 0.0
        self.step_n = 0
        self.accepted = 0.0

    def observe(self, x):
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += np.outer(delta, x - self.mean)

    def refresh_covariance(self):
        if self.count < max(2 * self.dim, 10):
            return
        cov = self.m2 / (self.count - 1) + COVARIANCE_JITTER * np.eye(self.dim)
        try:
            chol = cholesky(cov, lower=True)
        except LinAlgError:
            return
        self.chol = chol
        if not self.learnt:
            self.learnt = True
            self.log_step = float(np.log(COVARIANCE_SCALE / np.sqrt(self.dim)))


class _SeparableState:
    def __init__(self, block, adaptation):
        self.block = block
        self.log_step = np.full(block.size, adaptation.initial_log_step)
        self.step_sum = np.zeros(block.size)
        self.step_n = 0
        self.accepted = np.zeros(block.size)


def _state_dump(target, theta, chain, iteration, block):
    return {
        "chain": chain,
        "iteration": iteration,
        "block": block.name,
        "theta": {name: float(v) for name, v in zip(target.names, theta)},
    }


def _run_chain(target, config, chain, seed_seq, init=None):
    rng = np.random.default_rng(seed_seq)
    adaptation = config.adaptation
    if init is not None:
        theta = np.array(init(rng, chain), dtype=float)
    else:
        theta = target.initial + rng.normal(0.0, config.init_jitter, target.dim)
    logp = target.log_density(theta)
    if not np.isfinite(logp):
        raise InitializationError(f"chain {chain}: log-density is {logp} at the starting point")

    states = [
        _SeparableState(b, adaptation) if b.separable else _JointState(b, adaptation)
        for b in target.blocks
    ]
    half = config.burn_in // 2
    draws = np.empty((config.retained, target.dim))

    iterator = tqdm(
        range(config.iterations), desc=f"chain {chain}", disable=not config.progress, leave=False
    )
    for t in iterator:
        adapting = t < config.burn_in
        gain = adaptation.gain(t)
        for state in states:
            block = state.block
            idx = block.index
            if block.separable:
                current = target.component_terms(theta, block)
                proposal = theta.copy()
                proposal[idx] += np.exp(state.log_step) * rng.standard_normal(block.size)
                proposed = target.component_terms(proposal, block)
                log_ratio = proposed - current
                if np.isnan(log_ratio).any():
                    state_dump = _state_dump(target, proposal, chain, t, block)
                    logger.error(f"NaN log-density in block {block.name}: {state_dump}")
                    raise SamplingError(f"chain {chain}, iteration {t}: NaN in block {block.name}", state_dump)
                accept_prob = np.exp(np.minimum(log_ratio, 0.0))
                accept = rng.random(block.size) < accept_prob
                theta[idx[accept]] = proposal[idx[accept]]
                if accept.any():
                    logp = None
            else:
                if logp is None:
                    logp = target.log_density(theta)
                proposal = theta.copy()
                proposal[idx] += np.exp(state.log_step) * (state.chol @ rng.standard_normal(block.size))
                proposed = target.log_density(proposal)
                if np.isnan(proposed):
                    state_dump = _state_dump(target, proposal, chain, t, block)
                    logger.error(f"NaN log-density in block {block.name}: {state_dump}")
                    raise SamplingError(f"chain {chain}, iteration {t}: NaN in block {block.name}", state_dump)
                log_ratio = proposed - logp
                accept_prob = float(np.exp(min(log_ratio, 0.0)))
                accept = rng.random() < accept_prob
                if accept:
                    theta = proposal
                    logp = proposed

            if adapting:
                state.log_step = np.clip(
                    state.log_step + gain * (accept_prob - adaptation.target_acceptance),
                    MIN_LOG_STEP,
                    MAX_LOG_STEP,
                )
                if t >= half:
                    state.step_sum = state.step_sum + state.log_step
                    state.step_n += 1
                if not block.separable and t < half:
                    state.observe(theta[idx])
                    if (t + 1) % adaptation.window == 0 or t == half - 1:
                        state.refresh_covariance()
                if t == config.burn_in - 1:
                    state.log_step = state.step_sum / state.step_n
            else:
                state.accepted = state.accepted + accept

        if not adapting:
            draws[t - config.burn_in] = target.reported(theta)

    rows = [
        {
            "chain": chain,
            "block": s.block.name,
            "size": s.block.size,
            "acceptance": float(np.mean(s.accepted)) / config.retained,
            "step": float(np.mean(np.exp(s.log_step))),
        }
        for s in states
    ]
    return draws, rows


def run_chains(target, config, init=None):
    """
    Sample ``target`` with ``config.n_chains`` independent chains.

    Parameters:
        target: Target
        config: ChainConfig
        init: optional (rng, chain) -> starting point; default is the target's initial
            point plus N(0, init_jitter^2) noise

    Returns:
        PosteriorDraws with the post-burn-in draws of every chain

    Raises:
        InitializationError: the log-density is not finite at a starting point
        SamplingError: the log-density returned NaN; ``state`` holds the failing point
    """
    seeds = np.random.SeedSequence(config.seed).spawn(config.n_chains)
    logger.debug(
        f"running {config.n_chains} chains x {config.iterations} iterations "
        f"(burn-in {config.burn_in}) over {target.dim} parameters in {len(target.blocks)} blocks"
    )
    results = Parallel(n_jobs=config.n_jobs)(
        delayed(_run_chain)(target, config, chain, seed, init) for chain, seed in enumerate(seeds)
    )
    values = np.stack([draws for draws, _ in results])
    acceptance = pd.DataFrame([row for _, rows in results for row in rows])
    return PosteriorDraws(
        values=values,
        names=target.names,
        burn_in=config.burn_in,
        iterations=config.iterations,
        seed=config.seed,
        acceptance=acceptance,
        metadata=dict(target.metadata),
    )
