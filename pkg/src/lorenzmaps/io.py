"""CSV and binary PPM output for sweeps, densities and time series."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from lorenzmaps.density import DensityEstimate
from lorenzmaps.sweep import NOT_RUN, CellClass, Plane, SweepGrid, SweepResult, TestKind

PALETTE = {
    CellClass.INVALID: (255, 255, 255),
    CellClass.NON_TRANSITIVE: (255, 255, 0),
    CellClass.TRANSITIVE: (255, 0, 0),
    CellClass.NON_LEO: (0, 255, 0),
    CellClass.LEO: (0, 0, 0),
    CellClass.DIFF_TRANS_NOT_LEO: (0, 0, 255),
    CellClass.DIFF_LEO_NOT_TRANS: (255, 0, 0),
}


def _fmt(x: float) -> str:
    return repr(float(x))


def _flag(v: int) -> str:
    return "" if v == NOT_RUN else ("true" if v else "false")


def sweep_csv_lines(result: SweepResult) -> list[str]:
    x_name, y_name = result.grid.axis_names
    with_flags = result.test_kind in (TestKind.BOTH, TestKind.DIFF)
    header = [x_name, y_name, "class"] + (["trans", "leo"] if with_flags else [])
    lines = [",".join(header)]
    xs, ys = result.grid.x_centers(), result.grid.y_centers()
    for r, y in enumerate(ys):
        for c, x in enumerate(xs):
            row = [_fmt(x), _fmt(y), CellClass(result.cells[r, c]).label]
            if with_flags:
                row += [_flag(result.trans[r, c]), _flag(result.leo[r, c])]
            lines.append(",".join(row))
    return lines


def write_sweep_csv(result: SweepResult, path: str | Path) -> None:
    Path(path).write_text("\n".join(sweep_csv_lines(result)) + "\n")


def read_sweep_csv(path: str | Path) -> SweepResult:
    """Rebuild a sweep result from its CSV; the grid is inferred from the cell centers."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], [r for r in rows[1:] if r]
    if header[:3] == ["alpha", "beta", "class"]:
        plane = Plane.ALPHA_BETA
    elif header[:3] == ["b", "c", "class"]:
        plane = Plane.BC
    else:
        raise ValueError(f"{path}: not a sweep CSV (header {header})")
    mesh = math.isqrt(len(body))
    if mesh * mesh != len(body) or mesh < 2:
        raise ValueError(f"{path}: {len(body)} rows is not a square grid")
    xs = np.array([float(r[0]) for r in body[:mesh]])
    ys = np.array([float(r[1]) for r in body[::mesh]])
    hx, hy = (xs[-1] - xs[0]) / (mesh - 1), (ys[0] - ys[-1]) / (mesh - 1)
    grid = SweepGrid(
        plane, mesh,
        (xs[0] - hx / 2, xs[-1] + hx / 2),
        (ys[-1] - hy / 2, ys[0] + hy / 2),
    )
    cells = np.array([CellClass.from_label(r[2]) for r in body], np.int8).reshape(mesh, mesh)
    flags = {"": NOT_RUN, "true": 1, "false": 0}
    trans = np.full((mesh, mesh), NOT_RUN, np.int8)
    leo = np.full((mesh, mesh), NOT_RUN, np.int8)
    if "trans" in header and "leo" in header:
        ti, li = header.index("trans"), header.index("leo")
        trans = np.array([flags[r[ti]] for r in body], np.int8).reshape(mesh, mesh)
        leo = np.array([flags[r[li]] for r in body], np.int8).reshape(mesh, mesh)
        kind = TestKind.BOTH
    else:
        present = set(np.unique(cells).tolist())
        leo_like = {CellClass.LEO, CellClass.NON_LEO}
        kind = TestKind.LEO if present & leo_like else TestKind.TRANS
    return SweepResult(grid, kind, cells, trans, leo, np.zeros((mesh, mesh)), 0.0)


def ppm_bytes(cells: np.ndarray) -> bytes:
    """Binary P6 image, one pixel per cell, row 0 at the top."""
    h, w = cells.shape
    lut = np.zeros((len(CellClass), 3), np.uint8)
    for cls, rgb in PALETTE.items():
        lut[cls] = rgb
    return f"P6\n{w} {h}\n255\n".encode("ascii") + lut[cells].tobytes()


def write_sweep_ppm(result: SweepResult, path: str | Path) -> None:
    Path(path).write_bytes(ppm_bytes(result.cells))


def write_density_csv(est: DensityEstimate, path: str | Path) -> None:
    lines = ["bin_center,density"]
    lines += [f"{_fmt(c)},{_fmt(d)}" for c, d in zip(est.bin_centers, est.density)]
    lines += [f"# support {_fmt(a)},{_fmt(b)}" for a, b in est.support]
    Path(path).write_text("\n".join(lines) + "\n")


def write_series_csv(samples: np.ndarray, path: str | Path) -> None:
    lines = ["step,x"] + [f"{i},{_fmt(x)}" for i, x in enumerate(samples)]
    Path(path).write_text("\n".join(lines) + "\n")
