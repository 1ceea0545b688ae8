"""Information-content metrics for bit signals and grids.

Four base measures plus block decomposition:

* ``shannon_entropy``  -- bits per symbol over the 0/1 frequency.
* ``block_entropy``    -- entropy of the distribution of fixed-length
  non-overlapping blocks, in bits per block.
* ``lzw_dict_len``     -- final dictionary size of textbook LZW over the
  binary alphabet (initial entries "0" and "1" included).
* ``deflate_b64_len``  -- character count of the Base64 of the zlib
  (RFC 1950) stream of the MSB-first packed bits.  Deterministic within
  one zlib build; use it comparatively, never as an absolute.
* ``bdm_1d/2d/3d``     -- block decomposition against a CTM table:
  sum over distinct blocks of ``ctm(block) + log2(multiplicity)``.

All functions are pure; the table argument is shared read-only.
"""
from __future__ import annotations

import base64
import json
import math
import zlib
from dataclasses import dataclass, fields

import numpy as np

from .signals import BitSignal, Grid

__all__ = [
    "shannon_entropy",
    "block_entropy",
    "lzw_dict_len",
    "deflate_b64_len",
    "bdm_1d",
    "bdm_2d",
    "bdm_3d",
    "BdmResult",
    "ComplexityReport",
    "report",
    "REPORT_COLUMNS",
]


def _as_bits(x):
    return x.bits if isinstance(x, BitSignal) else np.asarray(x, dtype=np.uint8)


def _entropy_of_counts(counts):
    total = counts.sum()
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def shannon_entropy(x):
    """Empirical symbol entropy of a binary signal, in [0, 1] bits/symbol."""
    bits = _as_bits(x)
    if bits.size == 0:
        raise ValueError("entropy of an empty signal is undefined")
    ones = int(bits.sum())
    return _entropy_of_counts(np.array([bits.size - ones, ones]))


def block_entropy(x, block_len):
    """Entropy of consecutive non-overlapping blocks, in bits per block.

    The trailing remainder shorter than ``block_len`` is discarded.
    """
    bits = _as_bits(x)
    if block_len < 1:
        raise ValueError("block_len must be >= 1")
    nblocks = bits.size // block_len
    if nblocks == 0:
        raise ValueError("block_len exceeds the signal length")
    blocks = bits[: nblocks * block_len].reshape(nblocks, block_len)
    _, counts = np.unique(blocks, axis=0, return_counts=True)
    return _entropy_of_counts(counts)


def lzw_dict_len(x):
    """Dictionary entry count after classic LZW over the {0,1} alphabet.

    The dictionary starts as {"0", "1"}; on each longest-match miss the
    matched phrase extended by the next bit is added.  The empty signal
    returns 2.
    """
    bits = _as_bits(x)
    table = {(0,): 0, (1,): 1}
    w = ()
    for b in bits.tolist():
        wc = w + (b,)
        if wc in table:
            w = wc
        else:
            table[wc] = len(table)
            w = (b,)
    return len(table)


def deflate_b64_len(x):
    """Length in characters of base64(zlib(packed bits))."""
    data = x.to_bytes() if isinstance(x, BitSignal) else BitSignal(x).to_bytes()
    return len(base64.b64encode(zlib.compress(data)))


@dataclass(frozen=True)
class BdmResult:
    bits: float
    window_count: int
    distinct_windows: int
    fallback_fraction: float

    @property
    def per_window(self):
        return self.bits / self.window_count if self.window_count else 0.0


def _bdm_from_codes(codes, table):
    values, present = table.dense()
    uniq, mult = np.unique(codes, return_counts=True)
    total = float(values[uniq].sum() + np.log2(mult).sum())
    fallback_windows = int(mult[~present[uniq]].sum())
    return BdmResult(
        bits=total,
        window_count=int(codes.size),
        distinct_windows=int(uniq.size),
        fallback_fraction=fallback_windows / codes.size if codes.size else 0.0,
    )


def _window_codes_1d(bits, block_len, stride):
    nwin = (bits.size - block_len) // stride + 1
    idx = stride * np.arange(nwin)[:, None] + np.arange(block_len)[None, :]
    windows = bits[idx]
    weights = (1 << np.arange(block_len - 1, -1, -1)).astype(np.int64)
    return (windows.astype(np.int64) @ weights) | (1 << block_len)


def bdm_1d(x, table, block_len=8, stride=None):
    """Block decomposition of a 1D signal.

    Windows of ``block_len`` bits are taken at the given ``stride``
    (defaults to ``block_len``, i.e. non-overlapping); the trailing
    remainder is discarded.  Returns a ``BdmResult``.
    """
    if table.space.dimensionality != 1:
        raise ValueError("bdm_1d requires a 1D table")
    if block_len < 1 or block_len > 16:
        raise ValueError("block_len must be within the table coverage (1..16)")
    if stride is None:
        stride = block_len
    if stride < 1:
        raise ValueError("stride must be >= 1")
    bits = _as_bits(x)
    if bits.size < block_len:
        raise ValueError("signal shorter than one block")
    return _bdm_from_codes(_window_codes_1d(bits, block_len, stride), table)


def _window_codes_2d(cells, stride):
    m, n = cells.shape
    view = np.lib.stride_tricks.sliding_window_view(cells, (4, 4))[::stride, ::stride]
    flat = view.reshape(-1, 16).astype(np.int64)
    weights = (1 << np.arange(15, -1, -1)).astype(np.int64)
    return flat @ weights


def bdm_2d(grid, table, stride=1):
    """Block decomposition of an m-by-n grid with sliding 4x4 windows.

    With stride 1 the window count is ``(m-3)(n-3)``.  Returns a
    ``BdmResult`` so callers can normalize by the window count.
    """
    if table.space.dimensionality != 2:
        raise ValueError("bdm_2d requires a 2D table")
    cells = grid.cells if isinstance(grid, Grid) else np.asarray(grid, dtype=np.uint8)
    if cells.ndim != 2 or cells.shape[0] < 4 or cells.shape[1] < 4:
        raise ValueError("grid must be at least 4x4")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    return _bdm_from_codes(_window_codes_2d(cells, stride), table)


def bdm_3d(volume, table):
    """Slice-wise block decomposition of a (m, n, p) volume.

    Sums ``bdm_2d`` at stride 1 over the p planes; a slice-wise
    approximation, not a native 3D coding-theorem table.
    """
    if not isinstance(volume, Grid) or volume.ndim != 3:
        raise ValueError("bdm_3d requires a 3D Grid")
    m, n, _p = volume.dims
    if m < 4 or n < 4:
        raise ValueError("every plane must be at least 4x4")
    total = 0.0
    window_count = 0
    distinct = 0
    fallback_windows = 0.0
    for plane in volume.planes():
        r = bdm_2d(plane, table, stride=1)
        total += r.bits
        window_count += r.window_count
        distinct += r.distinct_windows
        fallback_windows += r.fallback_fraction * r.window_count
    return BdmResult(
        bits=total,
        window_count=window_count,
        distinct_windows=distinct,
        fallback_fraction=fallback_windows / window_count if window_count else 0.0,
    )


def bdm_3d_pooled(volume, table):
    """Volume block decomposition with window counts pooled across planes.

    Same 4x4 slice windows as ``bdm_3d``, but a pattern recurring in many
    planes is charged once plus the log of its total multiplicity.  Use
    this form to compare alternative volume readings of one signal:
    per-plane accounting would bill shared structure once per plane,
    systematically favoring readings with fewer planes.
    """
    if not isinstance(volume, Grid) or volume.ndim != 3:
        raise ValueError("bdm_3d_pooled requires a 3D Grid")
    m, n, _p = volume.dims
    if m < 4 or n < 4:
        raise ValueError("every plane must be at least 4x4")
    codes = np.concatenate([_window_codes_2d(plane, 1) for plane in volume.planes()])
    return _bdm_from_codes(codes, table)


REPORT_COLUMNS = [
    "length",
    "entropy",
    "block_entropy",
    "block_len",
    "lzw_dict_len",
    "deflate_b64_len",
    "bdm",
    "normalized_bdm",
    "normalized_deflate",
    "fallback_fraction",
]

ALL_METRICS = ("entropy", "block_entropy", "lzw", "deflate", "bdm")


@dataclass
class ComplexityReport:
    """Per-signal metric values plus the structural-sweep normalizations."""

    length: int
    entropy: float | None = None
    block_entropy: float | None = None
    block_len: int | None = None
    lzw_dict_len: int | None = None
    deflate_b64_len: int | None = None
    bdm: float | None = None
    normalized_bdm: float | None = None
    normalized_deflate: float | None = None
    fallback_fraction: float | None = None

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_json(self):
        return json.dumps(self.to_dict())

    def csv_row(self):
        vals = self.to_dict()
        return ",".join("" if vals[c] is None else repr(vals[c]) if isinstance(vals[c], float)
                        else str(vals[c]) for c in REPORT_COLUMNS)

    @staticmethod
    def csv_header():
        return ",".join(REPORT_COLUMNS)


def report(x, table=None, metrics=ALL_METRICS, block_len=8, bdm_stride=None,
           kept_bits=None, original_bits=None):
    """Populate a ComplexityReport for a signal or grid.

    ``kept_bits``/``original_bits`` feed the deflate normalization used by
    structural sweeps: the deflate length is divided by the ratio of bits
    kept.  When omitted the ratio is 1 and ``normalized_deflate`` equals
    ``deflate_b64_len``.
    """
    if isinstance(x, Grid):
        grid = x
        signal = x.flatten()
    else:
        grid = None
        signal = x if isinstance(x, BitSignal) else BitSignal(x)

    rep = ComplexityReport(length=len(signal))
    if "entropy" in metrics:
        rep.entropy = shannon_entropy(signal)
    if "block_entropy" in metrics:
        rep.block_entropy = block_entropy(signal, block_len)
        rep.block_len = block_len
    if "lzw" in metrics:
        rep.lzw_dict_len = lzw_dict_len(signal)
    if "deflate" in metrics:
        rep.deflate_b64_len = deflate_b64_len(signal)
        kept = len(signal) if kept_bits is None else kept_bits
        orig = kept if original_bits is None else original_bits
        rep.normalized_deflate = rep.deflate_b64_len / (kept / orig)
    if "bdm" in metrics:
        if table is None:
            raise ValueError("bdm metric requires a CTM table")
        if grid is not None and grid.ndim == 3:
            res = bdm_3d(grid, table)
        elif grid is not None:
            res = bdm_2d(grid, table, stride=1)
        else:
            res = bdm_1d(signal, table, block_len=block_len, stride=bdm_stride)
        rep.bdm = res.bits
        rep.normalized_bdm = res.per_window
        rep.fallback_fraction = res.fallback_fraction
    return rep
