"""
params.py

ParamVector holds one point of a league model's parameter space on its natural scale.
ParamLayout flattens it to the unconstrained vector the sampler moves in, with the
hierarchical scales stored as logs.
"""

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from ..errors import DesignError
from .config import SCALE_NAMES


@dataclass
class ParamVector:
    mu: np.ndarray
    T: float
    T_prime: Optional[float] = None
    attack: Optional[np.ndarray] = None
    defend: Optional[np.ndarray] = None
    team_card: Optional[np.ndarray] = None
    sigma_att: Optional[float] = None
    sigma_def: Optional[float] = None
    sigma_team: Optional[float] = None
    gamma: Optional[float] = None

    @classmethod
    def zeros(cls, design):
        """Location parameters at 0, scales at 1."""
        spec = design.spec
        values = {
            "mu": np.zeros(design.n_seasons),
            "T": 0.0,
            "T_prime": 0.0 if spec.has_post else None,
            "gamma": 0.0 if spec.has_gamma else None,
        }
        for family in spec.families:
            values[family] = np.zeros(design.n_slots)
            values[SCALE_NAMES[family]] = 1.0
        return cls(**values)

    def effect(self, family):
        return getattr(self, family)

    def scale(self, family):
        return getattr(self, SCALE_NAMES[family])

    def check(self, design):
        """Raise DesignError unless the populated fields match the design."""
        spec = design.spec
        if np.shape(self.mu) != (design.n_seasons,):
            raise DesignError(f"mu has shape {np.shape(self.mu)}, design has {design.n_seasons} seasons")
        if spec.has_post != (self.T_prime is not None):
            raise DesignError("T_prime must be set exactly when the model has a restart date")
        if spec.has_gamma != (self.gamma is not None):
            raise DesignError("gamma must be set exactly when lambda3 is free")
        for family in ("attack", "defend", "team_card"):
            value = self.effect(family)
            if family in spec.families:
                if value is None or np.shape(value) != (design.n_slots,):
                    raise DesignError(f"{family} must have {design.n_slots} team-season entries")
                if self.scale(family) is None:
                    raise DesignError(f"{SCALE_NAMES[family]} missing")
            elif value is not None:
                raise DesignError(f"{family} is not part of a {spec.outcome} model")

    def all_finite(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None and not np.all(np.isfinite(value)):
                return False
        return True


class ParamLayout:
    """Positions of every ParamVector entry in the flat unconstrained vector."""

    def __init__(self, design):
        self.design = design
        spec = design.spec
        self.families = spec.families
        self.scale_names = spec.scale_names

        entries = [("mu", design.n_seasons), ("T", 1)]
        if spec.has_post:
            entries.append(("T_prime", 1))
        if spec.has_gamma:
            entries.append(("gamma", 1))
        entries += [(family, design.n_slots) for family in self.families]
        entries += [(name, 1) for name in self.scale_names]

        self.slices = {}
        start = 0
        for name, size in entries:
            self.slices[name] = slice(start, start + size)
            start += size
        self.size = start

        slot_names = [f"{season}|{team}" for season, team in design.slot_labels]
        names = []
        for name, _ in entries:
            if name == "mu":
                names += [f"mu[{s}]" for s in spec.seasons]
            elif name in self.families:
                names += [f"{name}[{s}]" for s in slot_names]
            else:
                names.append(name)
        self.names = tuple(names)
        self.unconstrained_names = tuple(
            f"log_{n}" if n in self.scale_names else n for n in self.names
        )

    def indices(self, name):
        return np.arange(self.size)[self.slices[name]]

    def unpack(self, theta):
        """Unconstrained vector -> ParamVector (scales exponentiated)."""
        theta = np.asarray(theta, dtype=float)
        values = {"mu": theta[self.slices["mu"]], "T": float(theta[self.slices["T"]][0])}
        for name in ("T_prime", "gamma"):
            if name in self.slices:
                values[name] = float(theta[self.slices[name]][0])
        for family in self.families:
            values[family] = theta[self.slices[family]]
        for name in self.scale_names:
            values[name] = float(np.exp(theta[self.slices[name]][0]))
        return ParamVector(**values)

    def pack(self, params):
        """ParamVector -> unconstrained vector."""
        params.check(self.design)
        theta = np.empty(self.size)
        theta[self.slices["mu"]] = params.mu
        theta[self.slices["T"]] = params.T
        for name in ("T_prime", "gamma"):
            if name in self.slices:
                theta[self.slices[name]] = getattr(params, name)
        for family in self.families:
            theta[self.slices[family]] = params.effect(family)
        for name in self.scale_names:
            value = getattr(params, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")
            theta[self.slices[name]] = np.log(value)
        return theta

    def constrain(self, theta):
        """Unconstrained vector -> values on the reported scale, ordered as ``names``."""
        out = np.array(theta, dtype=float, copy=True)
        for name in self.scale_names:
            out[self.slices[name]] = np.exp(out[self.slices[name]])
        return out
