"""Bundled corpus samples, reference tables and synthetic test objects.

The three text corpora are 402 characters each: a balanced random bit
string, a string of random printable characters with known vowel and
space fractions, and a natural-language excerpt.  The reference tables
are the default desk-scale machine spaces (3-state 1D, 2-state 2D, both
at 200 steps); regenerating them with ``build_table`` reproduces the
bundled files byte for byte.
"""
from __future__ import annotations

from importlib import resources

import numpy as np

from .ctm import load_table
from .signals import BitSignal, Grid

__all__ = [
    "random_bits_402",
    "random_chars_402",
    "darwin_402",
    "default_table_1d",
    "default_table_2d",
    "table_path_1d",
    "table_path_2d",
    "stripe_image",
    "ellipsoid_volume",
    "repetitive_text",
    "random_signal",
]

_CACHE = {}


def _data_text(name):
    return resources.files("dimsig.data").joinpath(name).read_text(encoding="utf-8")


def random_bits_402():
    """The bundled 402-bit balanced random string (201 ones, 201 zeros)."""
    return BitSignal.from_string(_data_text("corpus_random_bits.txt"))


def random_chars_402():
    """402 random printable characters; 49 vowels, 6 spaces."""
    return _data_text("corpus_random_chars.txt")


def darwin_402():
    """A 402-character natural-language excerpt."""
    return _data_text("corpus_darwin.txt")


def table_path_1d():
    return resources.files("dimsig.data").joinpath("ctm_1d_3state.txt")


def table_path_2d():
    return resources.files("dimsig.data").joinpath("ctm_2d_2state.txt")


def default_table_1d():
    """The bundled 3-state 1D table (block lookups for 1D decomposition)."""
    if "t1" not in _CACHE:
        with resources.as_file(table_path_1d()) as path:
            _CACHE["t1"] = load_table(path)
    return _CACHE["t1"]


def default_table_2d():
    """The bundled 2-state 2D table (4x4 window lookups)."""
    if "t2" not in _CACHE:
        with resources.as_file(table_path_2d()) as path:
            _CACHE["t2"] = load_table(path)
    return _CACHE["t2"]


def stripe_image(rows=32, cols=64, seed=20260809):
    """A rows-by-cols image of vertical stripes with aperiodic widths.

    Every row is identical, so the flattened signal is strongly aligned
    with the true row length, but the stripe layout is irregular enough
    that no shorter period exists.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    profile = np.zeros(cols, dtype=np.uint8)
    value = 0
    c = 0
    while c < cols:
        width = int(rng.integers(3, 7))
        profile[c : c + width] = value
        value ^= 1
        c += width
    cells = np.tile(profile, (rows, 1))
    return Grid(cells, dims=(rows, cols))


def ellipsoid_volume(side=16, semi_axes=(6.5, 5.0, 7.0), seed=None):
    """A side^3 volume holding a solid axis-aligned ellipsoid of ones."""
    m = n = p = side
    zc = yc = xc = (side - 1) / 2.0
    z, y, x = np.mgrid[0:p, 0:m, 0:n].astype(np.float64)
    az, ay, ax = semi_axes
    inside = ((z - zc) / az) ** 2 + ((y - yc) / ay) ** 2 + ((x - xc) / ax) ** 2 <= 1.0
    return Grid(inside.astype(np.uint8), dims=(m, n, p))


def repetitive_text(min_chars=512):
    """A highly repetitive synthetic phrase stream of at least min_chars."""
    phrase = "the quick brown fox jumps over the lazy dog. "
    reps = -(-min_chars // len(phrase))
    return (phrase * reps)[: max(min_chars, reps * len(phrase))]


def random_signal(length, seed):
    """A seeded uniform random bit signal."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return BitSignal(rng.integers(0, 2, size=length, dtype=np.uint8))
