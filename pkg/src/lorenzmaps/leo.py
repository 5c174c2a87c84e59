"""Numerical LEO (locally eventually onto) test.

The image of a small interval under iterates of a Lorenz map is tracked as a
merged union of closed intervals; the map is numerically LEO when every cell
of a uniform partition of the domain eventually covers the whole domain.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from lorenzmaps import _kernels as K
from lorenzmaps.maps import MapSpec
from lorenzmaps.transitivity import ConfigError


class IntervalOverflow(RuntimeError):
    """Image iteration produced more intervals than the configured cap."""


@dataclass(frozen=True)
class IntervalList:
    """Finite union of closed intervals, stored as ``((x1, x2), ...)``."""

    items: tuple[tuple[float, float], ...]

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "IntervalList":
        return cls(tuple((float(a), float(b)) for a, b in arr))

    def __iter__(self) -> Iterator[tuple[float, float]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def measure(self) -> float:
        return sum(b - a for a, b in self.items)

    def distance(self, x: float) -> float:
        """Distance from ``x`` to the union (0 inside)."""
        return min(max(a - x, x - b, 0.0) for a, b in self.items)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.distance(x) <= tol

    def covers(self, lo: float, hi: float, tol: float = 0.0) -> bool:
        return len(self.items) == 1 and self.items[0][0] <= lo + tol and self.items[0][1] >= hi - tol


@dataclass(frozen=True)
class LeoConfig:
    subdivisions: int = 100
    max_image_iterations: int = 500
    # None means relative to the domain width: 1e-12 and 1e-9 times (hi - lo).
    merge_tolerance: float | None = None
    cover_tolerance: float | None = None
    # Hard cap on the interval count is this factor times the subdivisions.
    cap_factor: int = 10

    def __post_init__(self):
        if self.subdivisions < 1 or self.max_image_iterations < 1:
            raise ConfigError("subdivisions and max_image_iterations must be >= 1")
        for tol in (self.merge_tolerance, self.cover_tolerance):
            if tol is not None and tol < 0:
                raise ConfigError("tolerances must be nonnegative")

    def tolerances(self, lo: float, hi: float) -> tuple[float, float]:
        w = hi - lo
        merge = 1e-12 * w if self.merge_tolerance is None else self.merge_tolerance
        cover = 1e-9 * w if self.cover_tolerance is None else self.cover_tolerance
        return merge, cover

    @property
    def cap(self) -> int:
        return self.cap_factor * self.subdivisions


def _as_array(intervals: Iterable[Sequence[float]]) -> np.ndarray:
    arr = np.asarray([tuple(iv) for iv in intervals], dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot merge an empty interval list")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("intervals must be (left, right) pairs")
    if np.any(arr[:, 0] > arr[:, 1]) or not np.all(np.isfinite(arr)):
        raise ValueError("malformed interval (left > right or non-finite)")
    return arr


def merge_intervals(intervals: Iterable[Sequence[float]], tol: float = 0.0) -> IntervalList:
    """Sort by left endpoint and fuse intervals whose gap is at most ``tol``."""
    arr = _as_array(intervals)
    out = np.empty_like(arr)
    n = K.merge_sorted(arr, len(arr), out, float(tol))
    return IntervalList.from_array(out[:n])


def _check_image_args(m: MapSpec, c: float, x: float, y: float, lo: float, hi: float) -> None:
    if not lo <= x < y <= hi:
        raise ValueError(f"need lo <= x < y <= hi, got [{x}, {y}] in [{lo}, {hi}]")
    if not lo < c < hi:
        raise ValueError(f"discontinuity {c} not inside ({lo}, {hi})")


def image_with_count(
    m: MapSpec, c: float, x: float, y: float, lo: float, hi: float, cfg: LeoConfig | None = None
) -> tuple[IntervalList, int]:
    """Image of ``[x, y]`` and the number of iterations actually applied.

    Iteration stops early once the union is a single interval spanning
    ``[lo, hi]`` up to the cover tolerance.
    """
    cfg = cfg or LeoConfig()
    _check_image_args(m, c, x, y, lo, hi)
    merge_tol, cover_tol = cfg.tolerances(lo, hi)
    code, vec = m.packed()
    arr, used, status = K.image(
        code, vec, float(c), float(x), float(y), float(lo), float(hi),
        cfg.max_image_iterations, merge_tol, cover_tol, cfg.cap,
    )
    if status == K.OVERFLOW:
        raise IntervalOverflow(f"more than {cfg.cap} intervals after {used} iterations")
    return IntervalList.from_array(arr), int(used)


def image(
    m: MapSpec, c: float, x: float, y: float, lo: float, hi: float, cfg: LeoConfig | None = None
) -> IntervalList:
    return image_with_count(m, c, x, y, lo, hi, cfg)[0]


def cover_test(
    m: MapSpec, c: float, x: float, y: float, lo: float, hi: float, cfg: LeoConfig | None = None
) -> bool:
    cfg = cfg or LeoConfig()
    _, cover_tol = cfg.tolerances(lo, hi)
    return image(m, c, x, y, lo, hi, cfg).covers(lo, hi, cover_tol)


def subintervals(lo: float, hi: float, m: int) -> list[tuple[float, float]]:
    dm = (hi - lo) / m
    return [(lo + i * dm, lo + (i + 1) * dm) for i in range(m)]


def leo_test(
    m: MapSpec,
    c: float | None = None,
    lo: float | None = None,
    hi: float | None = None,
    cfg: LeoConfig | None = None,
) -> bool:
    """True if every one of the equal subintervals eventually covers ``[lo, hi]``.

    ``c``, ``lo`` and ``hi`` default to the map's discontinuity and domain.
    """
    cfg = cfg or LeoConfig()
    c = m.discontinuity if c is None else c
    lo = m.domain_lo if lo is None else lo
    hi = m.domain_hi if hi is None else hi
    if not lo < c < hi:
        raise ValueError(f"discontinuity {c} not inside ({lo}, {hi})")
    merge_tol, cover_tol = cfg.tolerances(lo, hi)
    code, vec = m.packed()
    failed, status = K.leo(
        code, vec, float(c), float(lo), float(hi),
        cfg.subdivisions, cfg.max_image_iterations, merge_tol, cover_tol, cfg.cap,
    )
    if status == K.OVERFLOW:
        raise IntervalOverflow(f"subinterval {failed} exceeded {cfg.cap} intervals")
    return failed < 0
