"""Numerical transitivity and LEO tests for one-dimensional Lorenz maps."""
from lorenzmaps.leo import IntervalList, LeoConfig, cover_test, image, leo_test, merge_intervals
from lorenzmaps.maps import MapSpec, beta_map, cnv_map, cnv_map_from_bc
from lorenzmaps.transitivity import TransitivityConfig, generate_orbit, num_trans_test

__all__ = [
    "IntervalList",
    "LeoConfig",
    "MapSpec",
    "TransitivityConfig",
    "beta_map",
    "cnv_map",
    "cnv_map_from_bc",
    "cover_test",
    "generate_orbit",
    "image",
    "leo_test",
    "merge_intervals",
    "num_trans_test",
]
