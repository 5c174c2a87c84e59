"""Orbit histograms as invariant-density estimates, and CNV voltage series."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lorenzmaps import _kernels as K
from lorenzmaps.leo import IntervalList
from lorenzmaps.maps import MapSpec, check_invariant_conditions
from lorenzmaps.transitivity import ConfigError, generate_orbit, trial_start


@dataclass(frozen=True)
class DensityEstimate:
    bin_edges: np.ndarray
    density: np.ndarray
    counts: np.ndarray
    support: IntervalList

    @property
    def bin_width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    def support_measure(self) -> float:
        return self.support.measure()


def support_from_counts(counts: np.ndarray, edges: np.ndarray) -> IntervalList:
    """Maximal runs of nonempty bins as closed intervals."""
    hit = np.concatenate(([False], counts > 0, [False]))
    steps = np.flatnonzero(np.diff(hit.astype(np.int8)))
    starts, stops = steps[::2], steps[1::2]
    return IntervalList(tuple((float(edges[s]), float(edges[e])) for s, e in zip(starts, stops)))


def empirical_density(
    m: MapSpec,
    lo: float | None = None,
    hi: float | None = None,
    n_iterations: int = 1_000_000,
    transient: int = 1000,
    bins: int = 1000,
    seed: int = 0,
) -> DensityEstimate:
    """Normalized histogram of one long orbit from a seeded random start.

    The start point is the one the transitivity test would use for its first
    trial with the same seed, and the bins are the same, so the support here
    is directly comparable with that test's verdict.
    """
    lo = m.domain_lo if lo is None else lo
    hi = m.domain_hi if hi is None else hi
    if not 0 <= transient < n_iterations:
        raise ConfigError("need 0 <= transient < n_iterations")
    if bins < 1:
        raise ConfigError("bins must be positive")
    x0 = trial_start(seed, 0, lo, hi)
    code, vec = m.packed()
    counts = K.bin_counts(code, vec, x0, n_iterations, transient, lo, hi, bins)
    edges = np.linspace(lo, hi, bins + 1)
    width = (hi - lo) / bins
    density = counts / (counts.sum() * width)
    return DensityEstimate(edges, density, counts, support_from_counts(counts, edges))


def coverage_fraction(samples: np.ndarray, lo: float, hi: float, bins: int = 100) -> float:
    """Fraction of equal bins of ``[lo, hi)`` visited by ``samples``."""
    idx = np.clip(np.floor((samples - lo) / ((hi - lo) / bins)).astype(np.int64), 0, bins - 1)
    return np.unique(idx).size / bins


def voltage_time_series(spec: MapSpec, x0: float, n: int, transient: int = 0) -> np.ndarray:
    """Orbit of the CNV map from ``x0`` with the first ``transient`` steps dropped."""
    if not spec.is_cnv():
        raise TypeError("voltage series need a CNV map")
    if not check_invariant_conditions(spec, spec.domain_lo, spec.domain_hi):
        raise ValueError(f"[{spec.domain_lo}, {spec.domain_hi}) is not an invariant interval")
    if not 0 <= transient < n:
        raise ConfigError("need 0 <= transient < n")
    return generate_orbit(spec, x0, n)[transient:]
