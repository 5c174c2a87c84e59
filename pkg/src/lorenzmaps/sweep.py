"""Parameter-plane sweeps: the alpha-beta triangle of beta-transformations and
the (b, c) plane of the CNV model.

Cells are stored in display order: row 0 holds the largest value of the
second axis (beta or c), column 0 the smallest value of the first axis.
Every cell's seed is derived from ``(master_seed, row, col)`` so the result
does not depend on how many workers run the sweep.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

from lorenzmaps import maps
from lorenzmaps.leo import LeoConfig, leo_test
from lorenzmaps.maps import CnvParams, NlCnvParams, PlCnvParams
from lorenzmaps.transitivity import ConfigError, TransitivityConfig, num_trans_test


class Plane(str, Enum):
    ALPHA_BETA = "alpha_beta"
    BC = "bc"


class TestKind(str, Enum):
    TRANS = "trans"
    LEO = "leo"
    BOTH = "both"
    DIFF = "diff"


class CellClass(IntEnum):
    INVALID = 0
    NON_TRANSITIVE = 1
    TRANSITIVE = 2
    NON_LEO = 3
    LEO = 4
    DIFF_TRANS_NOT_LEO = 5
    DIFF_LEO_NOT_TRANS = 6

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "CellClass":
        try:
            return _BY_LABEL[label]
        except KeyError:
            raise ValueError(f"unknown cell class {label!r}") from None


_LABELS = {
    CellClass.INVALID: "Invalid",
    CellClass.NON_TRANSITIVE: "NonTransitive",
    CellClass.TRANSITIVE: "Transitive",
    CellClass.NON_LEO: "NonLeo",
    CellClass.LEO: "Leo",
    CellClass.DIFF_TRANS_NOT_LEO: "DiffTransNotLeo",
    CellClass.DIFF_LEO_NOT_TRANS: "DiffLeoNotTrans",
}
_BY_LABEL = {v: k for k, v in _LABELS.items()}

# Per-cell test outcome arrays use -1 for "not run" (invalid cell or test not requested).
NOT_RUN = -1


@dataclass(frozen=True)
class SweepGrid:
    plane: Plane
    mesh: int
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    fixed_params: CnvParams | None = None
    master_seed: int = 0

    def __post_init__(self):
        if self.mesh < 2:
            raise ConfigError("mesh must be >= 2")
        if not (self.x_range[0] < self.x_range[1] and self.y_range[0] < self.y_range[1]):
            raise ConfigError("axis ranges must be increasing")

    @property
    def axis_names(self) -> tuple[str, str]:
        return ("alpha", "beta") if self.plane is Plane.ALPHA_BETA else ("b", "c")

    def x_centers(self) -> np.ndarray:
        lo, hi = self.x_range
        return lo + (np.arange(self.mesh) + 0.5) * (hi - lo) / self.mesh

    def y_centers(self) -> np.ndarray:
        """Second-axis centers in row order, highest first."""
        lo, hi = self.y_range
        return (lo + (np.arange(self.mesh) + 0.5) * (hi - lo) / self.mesh)[::-1]

    def same_cells(self, other: "SweepGrid", atol: float = 1e-12) -> bool:
        return (
            self.plane == other.plane
            and self.mesh == other.mesh
            and np.allclose(self.x_centers(), other.x_centers(), rtol=0, atol=atol)
            and np.allclose(self.y_centers(), other.y_centers(), rtol=0, atol=atol)
        )


@dataclass
class SweepResult:
    grid: SweepGrid
    test_kind: TestKind
    cells: np.ndarray
    trans: np.ndarray
    leo: np.ndarray
    cell_seconds: np.ndarray = field(repr=False)
    total_seconds: float = 0.0

    def valid_mask(self) -> np.ndarray:
        return self.cells != CellClass.INVALID

    def fraction(self, cls: CellClass) -> float:
        """Share of valid cells with class ``cls``."""
        valid = self.valid_mask()
        n = int(valid.sum())
        return float((self.cells[valid] == cls).sum()) / n if n else 0.0

    def counts(self) -> dict[CellClass, int]:
        return {c: int((self.cells == c).sum()) for c in CellClass}


def cell_seed(master_seed: int, row: int, col: int) -> int:
    ss = np.random.SeedSequence([master_seed, row, col])
    return int(ss.generate_state(1, np.uint64)[0])


def triangle_grid(mesh: int, master_seed: int = 0) -> SweepGrid:
    return SweepGrid(Plane.ALPHA_BETA, mesh, (0.0, 1.0), (1.0, 2.0), None, master_seed)


def bc_rectangle(params: CnvParams) -> tuple[tuple[float, float], tuple[float, float]]:
    """Tightest (b, c) box allowed by the first four existence conditions."""
    if isinstance(params, PlCnvParams):
        lo, hi = params.junctions
    else:
        lo, hi = params.critical_points
    return (lo, params.d), (params.d, hi)


def bc_grid(params: CnvParams, mesh: int, master_seed: int = 0) -> SweepGrid:
    xr, yr = bc_rectangle(params)
    return SweepGrid(Plane.BC, mesh, xr, yr, params, master_seed)


def _cell_map(grid: SweepGrid, x: float, y: float) -> maps.MapSpec | None:
    if grid.plane is Plane.ALPHA_BETA:
        if not maps.in_triangle(x, y):
            return None
        return maps.beta_map(y, x)
    if not maps.check_invariant_conditions(grid.fixed_params, x, y):
        return None
    return maps.cnv_map_from_bc(grid.fixed_params, x, y)


def _run_row(grid, kind, tcfg, lcfg, row, y, xs, cells, trans, leo, secs):
    for col, x in enumerate(xs):
        t0 = time.perf_counter()
        m = _cell_map(grid, float(x), float(y))
        if m is None:
            cells[row, col] = CellClass.INVALID
        else:
            if kind in (TestKind.TRANS, TestKind.BOTH):
                cfg = TransitivityConfig(
                    tcfg.iterations, tcfg.num_trials, tcfg.transient, tcfg.bins,
                    cell_seed(grid.master_seed, row, col),
                )
                trans[row, col] = num_trans_test(m, cfg=cfg)
            if kind in (TestKind.LEO, TestKind.BOTH):
                leo[row, col] = leo_test(m, cfg=lcfg)
            if kind is TestKind.LEO:
                cells[row, col] = CellClass.LEO if leo[row, col] else CellClass.NON_LEO
            else:
                cells[row, col] = CellClass.TRANSITIVE if trans[row, col] else CellClass.NON_TRANSITIVE
        secs[row, col] = time.perf_counter() - t0


def run_sweep(
    grid: SweepGrid,
    test_kind: TestKind | str = TestKind.TRANS,
    trans_cfg: TransitivityConfig | None = None,
    leo_cfg: LeoConfig | None = None,
    workers: int = 1,
) -> SweepResult:
    """Classify every cell of ``grid``.

    With ``BOTH`` the cell class is the transitivity class; both booleans are
    kept in ``trans`` and ``leo``. The seed in ``trans_cfg`` is ignored in
    favour of the per-cell seed.
    """
    kind = TestKind(test_kind)
    if kind is TestKind.DIFF:
        raise ConfigError("use diff_map for difference maps")
    tcfg = trans_cfg or TransitivityConfig()
    lcfg = leo_cfg or LeoConfig()
    n = grid.mesh
    cells = np.zeros((n, n), np.int8)
    trans = np.full((n, n), NOT_RUN, np.int8)
    leo = np.full((n, n), NOT_RUN, np.int8)
    secs = np.zeros((n, n))
    xs, ys = grid.x_centers(), grid.y_centers()
    t0 = time.perf_counter()
    args = [(grid, kind, tcfg, lcfg, r, ys[r], xs, cells, trans, leo, secs) for r in range(n)]
    if workers <= 1:
        for a in args:
            _run_row(*a)
    else:
        # The compiled kernels release the GIL; rows write to disjoint slices.
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda a: _run_row(*a), args))
    return SweepResult(grid, kind, cells, trans, leo, secs, time.perf_counter() - t0)


def beta_triangle_sweep(
    mesh: int,
    test_kind: TestKind | str = TestKind.TRANS,
    trans_cfg: TransitivityConfig | None = None,
    leo_cfg: LeoConfig | None = None,
    master_seed: int = 0,
    workers: int = 1,
) -> SweepResult:
    return run_sweep(triangle_grid(mesh, master_seed), test_kind, trans_cfg, leo_cfg, workers)


def cnv_sweep(
    fixed_params: CnvParams,
    mesh: int,
    test_kind: TestKind | str = TestKind.TRANS,
    trans_cfg: TransitivityConfig | None = None,
    leo_cfg: LeoConfig | None = None,
    master_seed: int = 0,
    workers: int = 1,
) -> SweepResult:
    """Sweep the (b, c) plane; ``fixed_params`` alpha and beta are ignored."""
    if not isinstance(fixed_params, (PlCnvParams, NlCnvParams)):
        raise TypeError("cnv_sweep needs PlCnvParams or NlCnvParams")
    return run_sweep(bc_grid(fixed_params, mesh, master_seed), test_kind, trans_cfg, leo_cfg, workers)


def _trans_outcome(r: SweepResult) -> np.ndarray:
    out = r.trans.copy()
    out[r.cells == CellClass.TRANSITIVE] = 1
    out[r.cells == CellClass.NON_TRANSITIVE] = 0
    return out


def _leo_outcome(r: SweepResult) -> np.ndarray:
    out = r.leo.copy()
    out[r.cells == CellClass.LEO] = 1
    out[r.cells == CellClass.NON_LEO] = 0
    return out


def diff_map(r1: SweepResult, r2: SweepResult) -> SweepResult:
    """Cells where the transitivity verdict of ``r1`` and the LEO verdict of ``r2`` disagree."""
    if not r1.grid.same_cells(r2.grid):
        raise ValueError("sweep grids differ")
    t, l = _trans_outcome(r1), _leo_outcome(r2)
    if (t == NOT_RUN).all() and r1.valid_mask().any():
        raise ValueError("first sweep carries no transitivity outcomes")
    if (l == NOT_RUN).all() and r2.valid_mask().any():
        raise ValueError("second sweep carries no LEO outcomes")
    cells = np.full(r1.cells.shape, CellClass.INVALID, np.int8)
    cells[(t == 1) & (l == 0)] = CellClass.DIFF_TRANS_NOT_LEO
    cells[(l == 1) & (t == 0)] = CellClass.DIFF_LEO_NOT_TRANS
    secs = np.zeros(cells.shape)
    return SweepResult(r1.grid, TestKind.DIFF, cells, t, l, secs, 0.0)


def disagreement_fraction(r: SweepResult) -> float:
    """Share of cells where both tests ran and disagree, among those cells."""
    both = (r.trans != NOT_RUN) & (r.leo != NOT_RUN)
    n = int(both.sum())
    return float((r.trans[both] != r.leo[both]).sum()) / n if n else 0.0
