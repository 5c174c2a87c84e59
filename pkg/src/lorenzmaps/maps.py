"""Interval map families: beta-transformations, the 1D CNV neuron map, and
two fixed example Lorenz maps.

Every map is described by an immutable :class:`MapSpec`; evaluation is
delegated to the compiled kernels so that orbit generation and the interval
image computation see exactly the same arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from lorenzmaps import _kernels as K


class DomainError(ValueError):
    """A point lies outside the domain of the map."""


class ParameterError(ValueError):
    """Map parameters violate the family constraints."""


class Family(str, Enum):
    BETA = "beta"
    PLCNV = "plcnv"
    NLCNV = "nlcnv"
    LORENZ_LIKE = "lorenz_like"
    EXPANDING = "expanding_nonlinear"


_CODES = {
    Family.BETA: K.BETA,
    Family.PLCNV: K.PLCNV,
    Family.NLCNV: K.NLCNV,
    Family.LORENZ_LIKE: K.LORENZ_LIKE,
    Family.EXPANDING: K.EXPANDING,
}


@dataclass(frozen=True)
class BetaParams:
    beta: float
    alpha: float

    def __post_init__(self):
        if not in_triangle(self.alpha, self.beta):
            raise ParameterError(
                f"(alpha={self.alpha}, beta={self.beta}) outside 1<beta<=2, alpha>=0, alpha+beta<=2"
            )


@dataclass(frozen=True)
class PlCnvParams:
    m0: float
    m1: float
    a: float
    d: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if not (self.m0 > 0 and self.m1 > 0 and 0 < self.a < 1):
            raise ParameterError("plCNV needs m0 > 0, m1 > 0, 0 < a < 1")

    @property
    def junctions(self) -> tuple[float, float]:
        return plcnv_junction_points(self.m0, self.m1, self.a)


@dataclass(frozen=True)
class NlCnvParams:
    mu: float
    a: float
    d: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if not (self.mu > 0 and 0 < self.a < 1):
            raise ParameterError("nlCNV needs mu > 0, 0 < a < 1")

    @property
    def critical_points(self) -> tuple[float, float]:
        return nlcnv_critical_points(self.a)


CnvParams = Union[PlCnvParams, NlCnvParams]

# Slack for alpha + beta <= 2 so that grid points on the hypotenuse survive rounding.
TRIANGLE_EPS = 1e-12


def in_triangle(alpha: float, beta: float) -> bool:
    return 1.0 < beta <= 2.0 and alpha >= 0.0 and alpha + beta <= 2.0 + TRIANGLE_EPS


@dataclass(frozen=True)
class MapSpec:
    """One interval map together with its domain ``[domain_lo, domain_hi)``."""

    family: Family
    params: object
    domain_lo: float
    domain_hi: float
    discontinuity: float

    def __post_init__(self):
        if not self.domain_lo < self.discontinuity < self.domain_hi:
            raise ParameterError(
                f"discontinuity {self.discontinuity} not inside ({self.domain_lo}, {self.domain_hi})"
            )

    @property
    def code(self) -> int:
        return _CODES[self.family]

    def packed(self) -> tuple[int, np.ndarray]:
        """Family code and flat float64 parameter vector for the kernels."""
        p = self.params
        if self.family is Family.BETA:
            vec = [p.beta, p.alpha]
        elif self.family is Family.PLCNV:
            vec = [p.m0, p.m1, p.a, p.d, p.alpha, p.beta]
        elif self.family is Family.NLCNV:
            vec = [p.mu, p.a, p.d, p.alpha, p.beta]
        elif self.family is Family.EXPANDING:
            vec = [self.discontinuity]
        else:
            vec = [0.0]
        return self.code, np.asarray(vec, dtype=np.float64)

    def check_domain(self, x: float) -> None:
        if not self.domain_lo <= x < self.domain_hi:
            raise DomainError(f"x={x} outside [{self.domain_lo}, {self.domain_hi})")

    def __call__(self, x: float) -> float:
        self.check_domain(x)
        code, vec = self.packed()
        return float(K.evaluate(code, vec, float(x)))

    def is_cnv(self) -> bool:
        return self.family in (Family.PLCNV, Family.NLCNV)


# --- beta-transformations -------------------------------------------------


def beta_map(beta: float, alpha: float) -> MapSpec:
    p = BetaParams(beta, alpha)
    return MapSpec(Family.BETA, p, 0.0, 1.0, beta_discontinuity(p))


def eval_beta(p: BetaParams, x: float) -> float:
    """``beta*x + alpha (mod 1)`` on ``[0, 1)``."""
    if not 0.0 <= x < 1.0:
        raise DomainError(f"x={x} outside [0, 1)")
    return float(K.evaluate(K.BETA, np.array([p.beta, p.alpha]), float(x)))


def beta_discontinuity(p: BetaParams) -> float:
    return (1.0 - p.alpha) / p.beta


# --- CNV model ------------------------------------------------------------


def plcnv_junction_points(m0: float, m1: float, a: float) -> tuple[float, float]:
    s = m0 + m1
    return a * m1 / s, (m0 + a * m1) / s


def nlcnv_critical_points(a: float) -> tuple[float, float]:
    """Local minimum and maximum of ``x (x - a) (1 - x)``."""
    r = math.sqrt(a * a - a + 1.0)
    return (a + 1.0 - r) / 3.0, (a + 1.0 + r) / 3.0


def _cnv_family(params: CnvParams) -> Family:
    if isinstance(params, PlCnvParams):
        return Family.PLCNV
    if isinstance(params, NlCnvParams):
        return Family.NLCNV
    raise TypeError(f"not a CNV parameter record: {params!r}")


def _params_of(spec_or_params) -> CnvParams:
    if isinstance(spec_or_params, MapSpec):
        if not spec_or_params.is_cnv():
            raise TypeError("expected a CNV map")
        return spec_or_params.params
    _cnv_family(spec_or_params)
    return spec_or_params


def _packed_cnv(params: CnvParams) -> tuple[int, np.ndarray]:
    if isinstance(params, PlCnvParams):
        vec = [params.m0, params.m1, params.a, params.d, params.alpha, params.beta]
        return K.PLCNV, np.asarray(vec, dtype=np.float64)
    vec = [params.mu, params.a, params.d, params.alpha, params.beta]
    return K.NLCNV, np.asarray(vec, dtype=np.float64)


def eval_cnv_F(spec, x: float) -> float:
    params = _params_of(spec)
    code, vec = _packed_cnv(params)
    return float(K.cnv_F(code, vec, float(x)))


def eval_cnv(spec, x: float) -> float:
    """``x + F(x) - alpha - beta * H(x - d)`` with ``H(0) = 1``.

    No domain check; the map is defined on the whole real line.
    """
    params = _params_of(spec)
    code, vec = _packed_cnv(params)
    return float(K.evaluate(code, vec, float(x)))


def invariant_interval(spec) -> tuple[float, float]:
    p = _params_of(spec)
    top = p.d + eval_cnv_F(p, p.d) - p.alpha
    return top - p.beta, top


def bc_to_alpha_beta(spec, b: float, c: float) -> tuple[float, float]:
    """Recovery parameter and jump that make ``[b, c)`` the invariant interval."""
    if not c > b:
        raise ParameterError(f"need c > b, got b={b}, c={c}")
    p = _params_of(spec)
    return p.d + eval_cnv_F(p, p.d) - c, c - b


def with_bc(spec, b: float, c: float) -> CnvParams:
    p = _params_of(spec)
    alpha, beta = bc_to_alpha_beta(p, b, c)
    if isinstance(p, PlCnvParams):
        return PlCnvParams(p.m0, p.m1, p.a, p.d, alpha, beta)
    return NlCnvParams(p.mu, p.a, p.d, alpha, beta)


def check_invariant_conditions(spec, b: float, c: float) -> bool:
    """All six existence conditions for the invariant interval ``[b, c)``."""
    p = _params_of(spec)
    if not (b < p.d < c):
        return False
    if isinstance(p, PlCnvParams):
        j_min, j_max = p.junctions
        if not (j_min <= b and c <= j_max):
            return False
    else:
        x_min, x_max = p.critical_points
        if not (x_min < b and c < x_max):
            return False
    q = with_bc(p, b, c)
    return eval_cnv(q, b) >= b and eval_cnv(q, c) < c


def cnv_map(params: CnvParams) -> MapSpec:
    """CNV map restricted to its invariant interval (validity not checked)."""
    b, c = invariant_interval(params)
    return MapSpec(_cnv_family(params), params, b, c, params.d)


def cnv_map_from_bc(template: CnvParams, b: float, c: float) -> MapSpec:
    return cnv_map(with_bc(template, b, c))


# --- fixed examples ---------------------------------------------------------

EXPANDING_C = 0.45


def lorenz_like_map() -> MapSpec:
    return MapSpec(Family.LORENZ_LIKE, None, 0.0, 1.0, 0.45)


def expanding_map() -> MapSpec:
    return MapSpec(Family.EXPANDING, None, 0.0, 1.0, EXPANDING_C)


def builtin_example_map(which: str, x: float) -> float:
    maps = {"lorenz_like": lorenz_like_map, "expanding_nonlinear": expanding_map}
    try:
        spec = maps[which]()
    except KeyError:
        raise ValueError(f"unknown example map {which!r}") from None
    return spec(x)


def expansion_constant(spec: MapSpec, samples: int = 10_000) -> float | None:
    """Infimum of the derivative where it is cheap to get; ``None`` otherwise.

    For CNV maps this is ``1 + min F'`` over a uniform sample of ``[b, c]``.
    """
    if spec.family is Family.BETA:
        return spec.params.beta
    if not spec.is_cnv():
        return None
    p = spec.params
    xs = np.linspace(spec.domain_lo, spec.domain_hi, samples)
    if isinstance(p, PlCnvParams):
        j_min, j_max = p.junctions
        slopes = np.where((xs >= j_min) & (xs <= j_max), p.m1, -p.m0)
    else:
        # F'(x) = mu * (-3x^2 + 2(1 + a)x - a)
        slopes = p.mu * (-3 * xs**2 + 2 * (1 + p.a) * xs - p.a)
    return float(1.0 + slopes.min())
