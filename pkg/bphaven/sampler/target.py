"""
target.py

What the sampler needs to know about a log-density: its dimension, parameter names and
how the coordinates are grouped into update blocks.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class Block:
    """
    A group of coordinates updated together.

    A separable block has conditionally independent coordinates: the target's
    ``component_terms(theta, block)`` returns one log-density term per coordinate and
    every coordinate gets its own accept/reject decision.
    """

    name: str
    index: np.ndarray
    separable: bool = False

    @property
    def size(self):
        return len(self.index)


@dataclass
class Target:
    """
    A log-density over a flat unconstrained vector.

    Parameters:
        log_density: theta -> float, -inf outside the support
        names: one name per reported coordinate
        initial: starting point before jitter; zeros when omitted
        blocks: update blocks covering every coordinate exactly once; one joint block
            when omitted
        component_terms: (theta, block) -> per-coordinate terms for separable blocks
        transform: unconstrained theta -> reported values; identity when omitted
    """

    log_density: Callable[[np.ndarray], float]
    names: Sequence[str]
    initial: Optional[np.ndarray] = None
    blocks: Optional[List[Block]] = None
    component_terms: Optional[Callable[[np.ndarray, Block], np.ndarray]] = None
    transform: Optional[Callable[[np.ndarray], np.ndarray]] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.names = tuple(self.names)
        if self.initial is None:
            self.initial = np.zeros(self.dim)
        self.initial = np.asarray(self.initial, dtype=float)
        if self.initial.shape != (self.dim,):
            raise ValueError(f"initial point has shape {self.initial.shape}, expected ({self.dim},)")
        if self.blocks is None:
            self.blocks = [Block("all", np.arange(self.dim))]
        covered = np.sort(np.concatenate([b.index for b in self.blocks]))
        if not np.array_equal(covered, np.arange(self.dim)):
            raise ValueError("blocks must cover every coordinate exactly once")
        if any(b.separable for b in self.blocks) and self.component_terms is None:
            raise ValueError("separable blocks need component_terms")

    @property
    def dim(self):
        return len(self.names)

    def reported(self, theta):
        if self.transform is None:
            return np.asarray(theta, dtype=float)
        return self.transform(theta)
