"""Coding-theorem tables: from machine output frequencies to complexity.

A table maps small binary patterns to ``-log2(count / total_halting)``,
the discrete coding-theorem reading of output frequency as algorithmic
probability.  ``build_table`` tallies the halting outputs of one machine
space and then closes the tally under bitwise complement: each blank-0
run is credited together with its complemented output, which is exactly
the output the symbol-swapped machine produces on a blank-1 tape.  Raw
blank-0 tallies alone are measurably complement-asymmetric, so the
closure step is what makes ``ctm(x) == ctm(~x)`` hold exactly; counts
stay integers and ``total_halting`` counts halting runs over both tape
polarities.

Patterns never tallied resolve to ``max_entry + 1.0`` and are flagged as
fallbacks, keeping comparisons among unseen blocks order-stable.
"""
from __future__ import annotations

import hashlib
import math
import re

import numpy as np

from .machines import (
    DISCARDED,
    MAX_PATTERN_BITS_1D,
    MAX_PATTERN_SIDE_2D,
    MachineSpace,
    NONHALT,
    Pattern,
    code_to_key_1d,
    code_to_key_2d,
    enumerate_1d,
    enumerate_2d,
    key_to_code_1d,
    key_to_code_2d,
    tally_fast,
)

__all__ = ["CtmTable", "build_table", "save_table", "load_table", "TableFormatError"]

_HEADER_RE = re.compile(
    r"^CTMv1 dims=(?P<dims>[12]) states=(?P<states>\d+) symbols=2 "
    r"max_steps=(?P<steps>\d+) total_machines=(?P<machines>\d+) "
    r"total_halting=(?P<halting>\d+)$"
)


class TableFormatError(ValueError):
    """Raised when a table file is malformed or fails verification."""


def _complement_key(key):
    return key.translate(str.maketrans("01", "10"))


class CtmTable:
    """Immutable map from patterns to complexity in bits.

    ``counts`` maps canonical pattern keys (0/1 strings, row-major and
    padded to 4x4 for 2D) to exact integer tallies.  Complexity values are
    always recomputed from counts, never stored.
    """

    def __init__(self, space, counts, total_halting):
        if total_halting <= 0:
            raise ValueError("degenerate space: no machine halted")
        if sum(counts.values()) != total_halting:
            raise ValueError("counts must sum to total_halting")
        self.space = space
        self.counts = dict(sorted(counts.items()))
        self.total_halting = int(total_halting)
        self.total_machines = space.total_machines
        self._dense = None

    # -- basic queries ------------------------------------------------------

    def complexity_of_count(self, count):
        return -math.log2(count / self.total_halting)

    @property
    def entries(self):
        """Pattern key -> complexity bits."""
        return {k: self.complexity_of_count(c) for k, c in self.counts.items()}

    @property
    def max_entry(self):
        return self.complexity_of_count(min(self.counts.values()))

    @property
    def fallback_value(self):
        return self.max_entry + 1.0

    def __contains__(self, pattern):
        return self._canonical_key(pattern) in self.counts

    def __eq__(self, other):
        if not isinstance(other, CtmTable):
            return NotImplemented
        return (self.space == other.space
                and self.total_halting == other.total_halting
                and self.counts == other.counts)

    def __repr__(self):
        return (f"CtmTable(dims={self.space.dimensionality}, "
                f"states={self.space.state_count}, entries={len(self.counts)})")

    def _canonical_key(self, pattern):
        if isinstance(pattern, str):
            pattern = Pattern.from_key(pattern, self.space.dimensionality)
        if isinstance(pattern, Pattern):
            if pattern.dims != self.space.dimensionality:
                raise ValueError(
                    f"pattern is {pattern.dims}D but table is "
                    f"{self.space.dimensionality}D"
                )
            if pattern.dims == 2:
                pattern = pattern.padded()
            return pattern.key()
        arr = np.asarray(pattern)
        return self._canonical_key(Pattern(arr, dims=arr.ndim))

    def lookup(self, pattern):
        """Return ``(complexity_bits, is_fallback)`` for a pattern."""
        key = self._canonical_key(pattern)
        count = self.counts.get(key)
        if count is None:
            return self.fallback_value, True
        return self.complexity_of_count(count), False

    def complexity(self, pattern):
        return self.lookup(pattern)[0]

    # -- dense views used by the block decomposition fast path ---------------

    def dense(self):
        """(values, present) arrays indexed by pattern code.

        1D tables index by the length-prefix code ``(1 << L) | bits`` and
        cover every length up to 16; 2D tables index padded 4x4 patterns
        by their row-major 16-bit code.  Absent codes already hold the
        fallback value.
        """
        if self._dense is None:
            if self.space.dimensionality == 1:
                size = 1 << (MAX_PATTERN_BITS_1D + 1)
                to_code = key_to_code_1d
            else:
                size = 1 << (MAX_PATTERN_SIDE_2D ** 2)
                to_code = key_to_code_2d
            values = np.full(size, self.fallback_value, dtype=np.float64)
            present = np.zeros(size, dtype=bool)
            for key, count in self.counts.items():
                code = to_code(key)
                values[code] = self.complexity_of_count(count)
                present[code] = True
            self._dense = (values, present)
        return self._dense


def _symmetrized(raw_counts):
    """Close a key->count tally under bitwise complement."""
    out = {}
    for key, count in raw_counts.items():
        out[key] = count + raw_counts.get(_complement_key(key), 0)
        ckey = _complement_key(key)
        if ckey not in out:
            out[ckey] = raw_counts.get(ckey, 0) + count
    return out


def build_table(space, engine="fast", chunk=2_000_000):
    """Enumerate a machine space and build its complement-closed table.

    ``engine="fast"`` runs the compiled tally kernel over machine-id
    chunks; ``engine="reference"`` consumes the pure-Python enumeration
    stream.  Both produce identical tables.
    """
    if engine == "reference":
        stream = enumerate_1d(space) if space.dimensionality == 1 else enumerate_2d(space)
        raw = {}
        halting = 0
        for _mid, outcome in stream:
            if outcome is NONHALT or outcome is DISCARDED:
                continue
            key = outcome.padded().key() if outcome.dims == 2 else outcome.key()
            raw[key] = raw.get(key, 0) + 1
            halting += 1
    elif engine == "fast":
        total = space.total_machines
        counts = None
        halting = 0
        start = 0
        while start < total:
            stop = min(start + chunk, total)
            part, halt, _nonhalt, _disc = tally_fast(space, start, stop)
            counts = part if counts is None else counts + part
            halting += halt
            start = stop
        to_key = code_to_key_1d if space.dimensionality == 1 else code_to_key_2d
        raw = {to_key(code): int(counts[code]) for code in np.nonzero(counts)[0]}
    else:
        raise ValueError(f"unknown engine {engine!r}")

    if halting == 0:
        raise ValueError("degenerate space: no machine halted within the budget")
    return CtmTable(space, _symmetrized(raw), 2 * halting)


# ---------------------------------------------------------------------------
# Persistence.  UTF-8 text; header, body checksum, then one "pattern,count"
# line per entry sorted lexicographically by pattern.  Counts, not floats,
# are persisted; complexity is recomputed on load.
# ---------------------------------------------------------------------------


def _body_lines(table):
    return [f"{key},{count}" for key, count in sorted(table.counts.items())]


def save_table(table, path):
    body = "\n".join(_body_lines(table)) + "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    sp = table.space
    header = (
        f"CTMv1 dims={sp.dimensionality} states={sp.state_count} symbols=2 "
        f"max_steps={sp.max_steps} total_machines={sp.total_machines} "
        f"total_halting={table.total_halting}"
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        fh.write(f"sha256={digest}\n")
        fh.write(body)
    return path


def load_table(path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = text.split("\n")
    if len(lines) < 3:
        raise TableFormatError("table file is truncated")
    match = _HEADER_RE.match(lines[0])
    if not match:
        if lines[0].startswith("CTMv") and not lines[0].startswith("CTMv1 "):
            raise TableFormatError(f"unsupported table version: {lines[0].split()[0]}")
        raise TableFormatError(f"malformed table header: {lines[0]!r}")
    if not lines[1].startswith("sha256="):
        raise TableFormatError("missing sha256 checksum line")
    stated = lines[1][len("sha256="):]
    body = "\n".join(lines[2:])
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if digest != stated:
        raise TableFormatError("table body fails sha256 verification")

    dims = int(match["dims"])
    space = MachineSpace(dimensionality=dims, state_count=int(match["states"]),
                         max_steps=int(match["steps"]))
    if space.total_machines != int(match["machines"]):
        raise TableFormatError("total_machines does not match the stated space")

    counts = {}
    for line in body.splitlines():
        if not line:
            continue
        try:
            key, count_s = line.rsplit(",", 1)
            count = int(count_s)
        except ValueError as exc:
            raise TableFormatError(f"malformed entry line: {line!r}") from exc
        if count < 1 or not key or set(key) - {"0", "1"}:
            raise TableFormatError(f"malformed entry line: {line!r}")
        if dims == 2 and len(key) != MAX_PATTERN_SIDE_2D ** 2:
            raise TableFormatError(f"2D pattern must have 16 bits: {line!r}")
        if dims == 1 and len(key) > MAX_PATTERN_BITS_1D:
            raise TableFormatError(f"1D pattern longer than 16 bits: {line!r}")
        if key in counts:
            raise TableFormatError(f"duplicate pattern: {key}")
        counts[key] = count

    total_halting = int(match["halting"])
    if sum(counts.values()) != total_halting:
        raise TableFormatError("entry counts do not sum to total_halting")
    return CtmTable(space, counts, total_halting)
