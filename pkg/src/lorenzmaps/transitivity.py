"""Randomized dense-orbit coverage test for numerical transitivity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lorenzmaps import _kernels as K
from lorenzmaps.maps import MapSpec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TransitivityConfig:
    iterations: int = 50_000
    num_trials: int = 5
    transient: int = 200
    bins: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1 or self.num_trials < 1 or self.bins < 1:
            raise ConfigError("iterations, num_trials and bins must be positive")
        if not 0 <= self.transient < self.iterations:
            raise ConfigError(f"need 0 <= transient < iterations, got {self.transient}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    @property
    def skip(self) -> int:
        # Samples x[k..N] (1-based) are kept, i.e. the first k-1 are dropped.
        return max(self.transient - 1, 0)


@dataclass(frozen=True)
class Witness:
    """Trial index and start point of an orbit that hit every bin."""

    trial: int
    x0: float


def trial_start(seed: int, trial: int, lo: float, hi: float) -> float:
    """Uniform start point in ``[lo, hi)`` for one trial.

    Each trial gets its own stream derived from ``(seed, trial)``, so the
    start point does not depend on how many trials run or in which order.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))
    x0 = lo + (hi - lo) * rng.random()
    return x0 if x0 < hi else lo


def generate_orbit(m: MapSpec, x0: float, n: int) -> np.ndarray:
    """``[x0, f(x0), ..., f^{n-1}(x0)]``."""
    m.check_domain(x0)
    if n < 1:
        raise ValueError("orbit length must be >= 1")
    code, vec = m.packed()
    return K.orbit(code, vec, float(x0), int(n))


def _domain(m: MapSpec, lo, hi) -> tuple[float, float]:
    lo = m.domain_lo if lo is None else lo
    hi = m.domain_hi if hi is None else hi
    if not lo < hi:
        raise ValueError(f"empty domain [{lo}, {hi})")
    return float(lo), float(hi)


def find_witness(
    m: MapSpec, lo: float | None = None, hi: float | None = None, cfg: TransitivityConfig | None = None
) -> Witness | None:
    """First trial whose post-transient orbit visits all bins, or ``None``."""
    cfg = cfg or TransitivityConfig()
    lo, hi = _domain(m, lo, hi)
    code, vec = m.packed()
    for j in range(cfg.num_trials):
        x0 = trial_start(cfg.seed, j, lo, hi)
        if K.all_bins_hit(code, vec, x0, cfg.iterations, cfg.skip, lo, hi, cfg.bins):
            return Witness(j, x0)
    return None


def num_trans_test(
    m: MapSpec, lo: float | None = None, hi: float | None = None, cfg: TransitivityConfig | None = None
) -> bool:
    """True if some trial orbit is numerically dense in ``[lo, hi)``.

    ``lo`` and ``hi`` default to the map's domain.
    """
    return find_witness(m, lo, hi, cfg) is not None
