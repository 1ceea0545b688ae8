"""Materialize ranked partitions and resolve mirror-orientation ambiguity.

Reshaping a flat signal fixes a shape but not an orientation: the same
shape read mirrored along any axis contains the same bits in a different
arrangement.  ``orientation_candidates`` enumerates every per-axis mirror
(4 variants in 2D, 8 in 3D), scores each by per-window block
decomposition and ranks ascending, so the lowest-complexity reading comes
first.  Transposes are deliberately not enumerated: the transposed shape
is the swapped partition, which the landscape already scores separately.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

import numpy as np

from .metrics import bdm_2d, bdm_3d
from .signals import BitSignal, Grid

__all__ = [
    "reshape",
    "OrientationVariant",
    "orientation_candidates",
    "apply_flips",
    "grid_to_p1",
    "export_grid",
]


def reshape(x, partition):
    """Row-major (then plane-major) fill of the partition's kept bits.

    Trailing bits beyond ``kept_bits`` are dropped.
    """
    signal = x if isinstance(x, BitSignal) else BitSignal(x)
    kept = partition.kept_bits
    if kept > len(signal):
        raise ValueError("partition keeps more bits than the signal holds")
    bits = signal.bits[:kept]
    dims = partition.dims
    if len(dims) == 2:
        return Grid(bits.reshape(dims), dims=dims)
    m, n, p = dims
    return Grid(bits.reshape(p, m, n), dims=dims)


def apply_flips(grid, flips):
    """Mirror the grid along each axis whose flag is set.

    2D flips are (rows, cols); 3D flips are (rows, cols, planes).
    Applying the same flips twice returns the original grid.
    """
    cells = grid.cells
    if grid.ndim == 2:
        fr, fc = flips
        if fr:
            cells = cells[::-1, :]
        if fc:
            cells = cells[:, ::-1]
    else:
        fr, fc, fp = flips
        if fp:
            cells = cells[::-1, :, :]
        if fr:
            cells = cells[:, ::-1, :]
        if fc:
            cells = cells[:, :, ::-1]
    return Grid(np.ascontiguousarray(cells), dims=grid.dims)


@dataclass
class OrientationVariant:
    flips: tuple        # per-axis mirror flags
    grid: Grid
    score: float        # per-window block decomposition


def orientation_candidates(grid, table):
    """All per-axis mirror variants, scored and sorted ascending.

    Ties break toward fewer flips, then the lexicographically smaller
    flip pattern, so output order is deterministic.
    """
    if min(grid.dims[:2]) < 4:
        raise ValueError("grid must be at least 4x4 per plane to score")
    axes = grid.ndim
    variants = []
    for flips in product((False, True), repeat=axes):
        flipped = apply_flips(grid, flips)
        if axes == 2:
            score = bdm_2d(flipped, table, stride=1).per_window
        else:
            score = bdm_3d(flipped, table).per_window
        variants.append(OrientationVariant(flips, flipped, float(score)))
    variants.sort(key=lambda v: (v.score, sum(v.flips), v.flips))
    return variants


def grid_to_p1(plane):
    """Render one plane as a P1 ASCII bitmap."""
    arr = np.asarray(plane, dtype=np.uint8)
    h, w = arr.shape
    lines = [f"P1", f"{w} {h}"]
    lines.extend(" ".join(str(int(b)) for b in row) for row in arr)
    return "\n".join(lines) + "\n"


def export_grid(grid, out_dir, basename="grid", flips=None, score=None):
    """Write per-plane P1 bitmaps plus a JSON manifest; returns the manifest path."""
    out_dir.mkdir(parents=True, exist_ok=True)
    plane_files = []
    for idx, plane in enumerate(grid.planes()):
        name = f"{basename}.pbm" if grid.ndim == 2 else f"{basename}_plane{idx:03d}.pbm"
        (out_dir / name).write_text(grid_to_p1(plane))
        plane_files.append(name)
    manifest = {
        "dims": list(grid.dims),
        "planes": plane_files,
        "flips": list(flips) if flips is not None else None,
        "score": score,
    }
    path = out_dir / f"{basename}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path
