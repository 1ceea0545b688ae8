"""Flat bit signals and multidimensional grids.

A ``BitSignal`` is the universal ingestion form of any message: an ordered
sequence of bits of known length, with no assumption about what the bits
encode.  A ``Grid`` is a signal materialized into a 2D or 3D shape.
"""
from __future__ import annotations

import numpy as np

__all__ = ["BitSignal", "Grid", "pack_bits", "unpack_bytes"]


class BitSignal:
    """An ordered sequence of bits.

    Internally a ``numpy.uint8`` array of 0/1 values.  Instances are
    treated as immutable; operations return new signals.
    """

    __slots__ = ("bits",)

    def __init__(self, bits):
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if arr.size and arr.max() > 1:
            raise ValueError("bits must contain only 0 and 1")
        self.bits = arr

    @classmethod
    def from_string(cls, text):
        """Parse an ASCII 0/1 string; whitespace is ignored."""
        cleaned = "".join(text.split())
        if cleaned and set(cleaned) - {"0", "1"}:
            raise ValueError("bit string may contain only 0, 1 and whitespace")
        return cls(np.frombuffer(cleaned.encode("ascii"), dtype=np.uint8) - ord("0")
                   if cleaned else np.zeros(0, dtype=np.uint8))

    @classmethod
    def from_bytes(cls, data):
        """Expand raw bytes to bits, MSB first."""
        return cls(unpack_bytes(data))

    @property
    def length(self):
        return int(self.bits.size)

    def __len__(self):
        return int(self.bits.size)

    def __eq__(self, other):
        if not isinstance(other, BitSignal):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.all(self.bits == other.bits))

    def __hash__(self):
        return hash(self.to_string())

    def __repr__(self):
        head = self.to_string()
        if len(head) > 32:
            head = head[:32] + "..."
        return f"BitSignal({head!r}, length={len(self)})"

    def to_string(self):
        return "".join("01"[b] for b in self.bits)

    def to_bytes(self):
        """Pack into bytes MSB-first, zero-padding the final byte."""
        return pack_bits(self.bits)

    def ones_count(self):
        return int(self.bits.sum())

    def ones_fraction(self):
        if not len(self):
            raise ValueError("empty signal has no ones fraction")
        return self.ones_count() / len(self)

    def complement(self):
        return BitSignal(1 - self.bits)

    def slice(self, start, stop):
        return BitSignal(self.bits[start:stop])

    def concat(self, other):
        return BitSignal(np.concatenate([self.bits, other.bits]))


class Grid:
    """A signal embedded into a 2D or 3D shape.

    ``dims`` is ``(m, n)`` for a single m-by-n plane or ``(m, n, p)`` for
    p stacked m-by-n planes.  The flat layout is row-major within a plane,
    planes consecutive, so ``cells.ravel()`` reproduces the originating
    bit order.  3D cells are stored with shape ``(p, m, n)``.
    """

    __slots__ = ("cells", "dims")

    def __init__(self, cells, dims=None):
        arr = np.asarray(cells, dtype=np.uint8)
        if dims is None:
            if arr.ndim == 2:
                dims = (arr.shape[0], arr.shape[1])
            elif arr.ndim == 3:
                dims = (arr.shape[1], arr.shape[2], arr.shape[0])
            else:
                raise ValueError("cells must be 2D or 3D")
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims):
            raise ValueError("every dimension must be >= 1")
        if len(dims) == 2:
            arr = arr.reshape(dims)
        elif len(dims) == 3:
            m, n, p = dims
            arr = arr.reshape((p, m, n))
        else:
            raise ValueError("dims must have 2 or 3 entries")
        if arr.size and arr.max() > 1:
            raise ValueError("cells must contain only 0 and 1")
        self.cells = arr
        self.dims = dims

    @property
    def ndim(self):
        return len(self.dims)

    def planes(self):
        """Iterate the (m, n) planes; a 2D grid is its own single plane."""
        if self.ndim == 2:
            yield self.cells
        else:
            for q in range(self.cells.shape[0]):
                yield self.cells[q]

    def flatten(self):
        return BitSignal(self.cells.ravel())

    def complement(self):
        return Grid(1 - self.cells, self.dims)

    def cell_count(self):
        return int(self.cells.size)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.dims == other.dims and bool(np.all(self.cells == other.cells))

    def __repr__(self):
        return f"Grid(dims={self.dims})"


def pack_bits(bits):
    """Pack a 0/1 array into bytes, MSB first, zero-padding the last byte."""
    arr = np.asarray(bits, dtype=np.uint8)
    return np.packbits(arr).tobytes()


def unpack_bytes(data):
    """Expand bytes into a 0/1 array, MSB first."""
    raw = np.frombuffer(bytes(data), dtype=np.uint8)
    return np.unpackbits(raw)
