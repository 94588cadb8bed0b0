"""Experiment configuration and numerical tolerances."""

from __future__ import annotations

import contextlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from . import cpoly, kernels


@dataclass
class Tolerances:
    tau: float = 1e-4  # closed form vs direct sum switch for |1 - z conj(w)|
    root_outside: float = 1e-12  # roots with |z| > 1 + root_outside are reflected
    boundary_rtol: float = 1e-8  # boundary modulus after reflection
    interior_atol: float = 1e-8  # pointwise minimum inequality, relative to ||p||
    monotone_rtol: float = 1e-6  # sampling sums and norms along contraction traces
    equality_rtol: float = 1e-12  # equality cases of closed-form bounds
    bound_rtol: float = 1e-12  # slack when comparing against closed-form bounds
    spread_factor: float = 4.0
    floor: float = 1e-6

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def override(self, items) -> "Tolerances":
        """Apply ``key=value`` strings or a mapping; returns a new instance."""
        d = asdict(self)
        pairs = items.items() if isinstance(items, dict) else (_split_pair(s) for s in items)
        for key, value in pairs:
            key = key.replace("-", "_")
            if key not in d:
                raise ValueError(f"unknown tolerance {key!r}; valid names: {', '.join(d)}")
            try:
                d[key] = float(value)
            except (TypeError, ValueError):
                raise ValueError(f"tolerance {key} needs a number, got {value!r}") from None
            if not d[key] > 0:
                raise ValueError(f"tolerance {key} must be positive")
        return Tolerances(**d)

    def to_dict(self) -> dict:
        return asdict(self)


def _split_pair(s: str):
    if "=" not in s:
        raise ValueError(f"tolerance override must look like name=value, got {s!r}")
    k, v = s.split("=", 1)
    return k.strip(), v.strip()


@contextlib.contextmanager
def active_tolerances(tol: Tolerances):
    """Install the module-level thresholds of ``tol`` for the duration of the block."""
    saved = kernels.TAU, cpoly.OUTSIDE_TOL
    kernels.TAU, cpoly.OUTSIDE_TOL = tol.tau, tol.root_outside
    try:
        yield tol
    finally:
        kernels.TAU, cpoly.OUTSIDE_TOL = saved


@dataclass
class ExperimentConfig:
    """One experiment: space, family recipe, degrees, weights, outputs and tolerances."""

    space: str = "hardy"
    recipe: str = "torus-equispaced"
    params: dict = field(default_factory=dict)
    seed: int = 0
    n_list: list[int] = field(default_factory=list)
    gamma: float | None = None
    policy: str = "kernel-diag"
    outputs: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def validate(self) -> "ExperimentConfig":
        from .families import RECIPES

        cpoly.SpaceKind.parse(self.space)
        if self.recipe not in RECIPES:
            raise ValueError(f"unknown recipe {self.recipe!r}; valid recipes: {', '.join(RECIPES)}")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ValueError("n_list must be strictly increasing")
        if self.gamma is not None and not self.gamma > 0:
            raise ValueError("gamma must be positive")
        Tolerances().override(self.tolerances)
        return self

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config fields: {', '.join(sorted(extra))}")
        cfg = cls(**d)
        cfg.n_list = [int(n) for n in cfg.n_list]
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)
