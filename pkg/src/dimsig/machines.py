"""Exhaustive enumeration of small binary Turing machines and turmites.

Machine formalism
-----------------
1D machines have ``state_count`` states over a binary tape.  Each
(state, read symbol) pair maps to one of ``4*states + 2`` options:

* option ``t < 2``: write symbol ``t`` at the current cell and halt in
  place (halting carries no move, hence 2 rather than 4 halt options);
* option ``t >= 2`` with ``t' = t - 2``: write ``t' & 1``, move right if
  ``(t' >> 1) & 1`` else left, continue in state ``t' >> 2``.

2D machines (turmites) walk an unbounded binary plane.  Each pair maps to
one of ``8*(states + 1)`` options ``t``: write ``t & 1``, move
``(t >> 1) & 3`` (0=up, 1=down, 2=left, 3=right) and continue in state
``t >> 3``, where a next-state index equal to ``state_count`` means halt.
A halting transition writes at the current cell and stops; its move
component never affects the output.

A machine id is the little-endian mixed-radix number over the per-pair
option digits, pair index ``j = state*2 + read``.  Enumeration order is
ascending machine id, which makes every stream reproducible.

Machines start in state 0 on an all-zero tape/plane.  A cell counts as
visited when a step executes there.  The output of a halting 1D machine
is the tape between the leftmost and rightmost visited cells; a 2D output
is the plane content over the bounding box of visited cells.  Outputs
that exceed the pattern size cap (16 bits in 1D, 4x4 in 2D) are reported
as discarded rather than tallied.  Running beyond the step budget yields
the non-halting marker; there is no loop detection.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MachineSpace",
    "Pattern",
    "NONHALT",
    "DISCARDED",
    "enumerate_1d",
    "enumerate_2d",
    "simulate_1d",
    "simulate_2d",
    "decode_machine",
    "tally_fast",
    "MAX_PATTERN_BITS_1D",
    "MAX_PATTERN_SIDE_2D",
]

MAX_PATTERN_BITS_1D = 16
MAX_PATTERN_SIDE_2D = 4


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


#: Sentinel for machines that do not halt within the step budget.
NONHALT = _Marker("NONHALT")
#: Sentinel for halting outputs larger than the pattern size cap.
DISCARDED = _Marker("DISCARDED")


@dataclass(frozen=True)
class MachineSpace:
    """A finite, exhaustively enumerable space of machines."""

    dimensionality: int
    state_count: int
    max_steps: int
    symbol_count: int = 2

    def __post_init__(self):
        if self.dimensionality not in (1, 2):
            raise ValueError("dimensionality must be 1 or 2")
        if self.state_count < 1:
            raise ValueError("state_count must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.symbol_count != 2:
            raise ValueError("only binary machines are supported")

    @property
    def options_per_pair(self):
        n = self.state_count
        return 4 * n + 2 if self.dimensionality == 1 else 8 * (n + 1)

    @property
    def pair_count(self):
        return 2 * self.state_count

    @property
    def total_machines(self):
        """Cardinality of the enumeration, computable before it starts."""
        return self.options_per_pair ** self.pair_count


class Pattern:
    """A small binary pattern: a 1D bit string or a 2D binary matrix."""

    __slots__ = ("dims", "payload")

    def __init__(self, payload, dims=None):
        arr = np.asarray(payload, dtype=np.uint8)
        if dims is None:
            dims = arr.ndim
        if dims == 1:
            if arr.ndim != 1 or arr.size < 1:
                raise ValueError("1D payload must be a non-empty bit vector")
            if arr.size > MAX_PATTERN_BITS_1D:
                raise ValueError(f"1D payload longer than {MAX_PATTERN_BITS_1D} bits")
        elif dims == 2:
            if arr.ndim != 2 or arr.size < 1:
                raise ValueError("2D payload must be a non-empty bit matrix")
            if max(arr.shape) > MAX_PATTERN_SIDE_2D:
                raise ValueError(f"2D payload sides must be <= {MAX_PATTERN_SIDE_2D}")
        else:
            raise ValueError("dims must be 1 or 2")
        if arr.max(initial=0) > 1:
            raise ValueError("payload must be binary")
        self.dims = dims
        self.payload = arr

    @classmethod
    def from_key(cls, key, dims):
        bits = np.frombuffer(key.encode("ascii"), dtype=np.uint8) - ord("0")
        if dims == 2:
            side = MAX_PATTERN_SIDE_2D
            if bits.size != side * side:
                raise ValueError("2D pattern key must have 16 bits")
            return cls(bits.reshape(side, side), dims=2)
        return cls(bits, dims=1)

    def key(self):
        """Canonical string form: 0/1 chars, row-major for 2D."""
        return "".join("01"[b] for b in self.payload.ravel())

    def padded(self):
        """2D patterns padded with background zeros to 4x4, anchored top-left."""
        if self.dims == 1:
            return self
        side = MAX_PATTERN_SIDE_2D
        if self.payload.shape == (side, side):
            return self
        out = np.zeros((side, side), dtype=np.uint8)
        h, w = self.payload.shape
        out[:h, :w] = self.payload
        return Pattern(out, dims=2)

    def complement(self):
        return Pattern(1 - self.payload, dims=self.dims)

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return (self.dims == other.dims
                and self.payload.shape == other.payload.shape
                and bool(np.all(self.payload == other.payload)))

    def __hash__(self):
        return hash((self.dims, self.payload.shape, self.key()))

    def __repr__(self):
        return f"Pattern({self.key()!r}, dims={self.dims})"


def decode_machine(machine_id, space):
    """Decode a machine id into its per-pair option digits."""
    base = space.options_per_pair
    digits = []
    m = machine_id
    for _ in range(space.pair_count):
        digits.append(m % base)
        m //= base
    if m:
        raise ValueError("machine id out of range for this space")
    return digits


def simulate_1d(digits, state_count, max_steps):
    """Run one 1D machine; returns a Pattern, NONHALT or DISCARDED."""
    if all(t >= 2 for t in digits):
        return NONHALT  # no halt option anywhere: cannot ever halt
    tape = {}
    pos = 0
    state = 0
    lo = hi = 0
    for _ in range(max_steps):
        lo = min(lo, pos)
        hi = max(hi, pos)
        t = digits[state * 2 + tape.get(pos, 0)]
        if t < 2:
            tape[pos] = t
            out = np.fromiter((tape.get(i, 0) for i in range(lo, hi + 1)),
                              dtype=np.uint8, count=hi - lo + 1)
            if out.size > MAX_PATTERN_BITS_1D:
                return DISCARDED
            return Pattern(out, dims=1)
        tp = t - 2
        tape[pos] = tp & 1
        pos += 1 if (tp >> 1) & 1 else -1
        state = tp >> 2
    return NONHALT


def simulate_2d(digits, state_count, max_steps):
    """Run one turmite; returns a Pattern (raw bounding box), NONHALT or DISCARDED."""
    if all(t >> 3 != state_count for t in digits):
        return NONHALT
    plane = {}
    r = c = 0
    state = 0
    rlo = rhi = clo = chi = 0
    for _ in range(max_steps):
        rlo = min(rlo, r)
        rhi = max(rhi, r)
        clo = min(clo, c)
        chi = max(chi, c)
        t = digits[state * 2 + plane.get((r, c), 0)]
        plane[(r, c)] = t & 1
        nxt = t >> 3
        if nxt == state_count:
            h = rhi - rlo + 1
            w = chi - clo + 1
            if h > MAX_PATTERN_SIDE_2D or w > MAX_PATTERN_SIDE_2D:
                return DISCARDED
            out = np.zeros((h, w), dtype=np.uint8)
            for (i, j), v in plane.items():
                if rlo <= i <= rhi and clo <= j <= chi:
                    out[i - rlo, j - clo] = v
            return Pattern(out, dims=2)
        mv = (t >> 1) & 3
        if mv == 0:
            r -= 1
        elif mv == 1:
            r += 1
        elif mv == 2:
            c -= 1
        else:
            c += 1
        state = nxt
    return NONHALT


def enumerate_1d(space):
    """Stream (machine_id, outcome) over the canonical 1D enumeration."""
    if space.dimensionality != 1:
        raise ValueError("enumerate_1d requires a 1D space")
    base = space.options_per_pair
    pairs = space.pair_count
    digits = [0] * pairs
    for mid in range(space.total_machines):
        yield mid, simulate_1d(digits, space.state_count, space.max_steps)
        for j in range(pairs):  # increment mixed-radix counter
            digits[j] += 1
            if digits[j] < base:
                break
            digits[j] = 0


def enumerate_2d(space):
    """Stream (machine_id, outcome) over the canonical turmite enumeration."""
    if space.dimensionality != 2:
        raise ValueError("enumerate_2d requires a 2D space")
    base = space.options_per_pair
    pairs = space.pair_count
    digits = [0] * pairs
    for mid in range(space.total_machines):
        yield mid, simulate_2d(digits, space.state_count, space.max_steps)
        for j in range(pairs):
            digits[j] += 1
            if digits[j] < base:
                break
            digits[j] = 0


# ---------------------------------------------------------------------------
# Fast tally kernels.  Compiled lazily so that importing the package does not
# pay the numba import cost; results are bit-identical to the generators
# above (cross-checked in the test suite).
# ---------------------------------------------------------------------------

_KERNELS = {}


def _get_kernel(dims):
    if dims in _KERNELS:
        return _KERNELS[dims]
    from numba import njit

    if dims == 1:

        @njit(cache=True, nogil=True)
        def kernel(n_states, max_steps, start, stop, counts):
            base = 4 * n_states + 2
            npairs = 2 * n_states
            trans = np.empty(npairs, np.int64)
            tape = np.zeros(2 * max_steps + 1, np.uint8)
            origin = max_steps
            halt = 0
            nonhalt = 0
            discarded = 0
            for mid in range(start, stop):
                m = mid
                has_halt = False
                for j in range(npairs):
                    t = m % base
                    m //= base
                    trans[j] = t
                    if t < 2:
                        has_halt = True
                if not has_halt:
                    nonhalt += 1
                    continue
                pos = origin
                state = 0
                lo = origin
                hi = origin
                halted = False
                for _ in range(max_steps):
                    if pos < lo:
                        lo = pos
                    elif pos > hi:
                        hi = pos
                    t = trans[state * 2 + tape[pos]]
                    if t < 2:
                        tape[pos] = np.uint8(t)
                        halted = True
                        break
                    tp = t - 2
                    tape[pos] = np.uint8(tp & 1)
                    if (tp >> 1) & 1:
                        pos += 1
                    else:
                        pos -= 1
                    state = tp >> 2
                if halted:
                    if hi - lo + 1 > 16:
                        discarded += 1
                    else:
                        code = 1  # length-prefix code: (1 << L) | bits
                        for i in range(lo, hi + 1):
                            code = (code << 1) | tape[i]
                        counts[code] += 1
                        halt += 1
                else:
                    nonhalt += 1
                for i in range(lo, hi + 1):
                    tape[i] = 0
            return halt, nonhalt, discarded

    else:

        @njit(cache=True, nogil=True)
        def kernel(n_states, max_steps, start, stop, counts):
            base = 8 * (n_states + 1)
            npairs = 2 * n_states
            trans = np.empty(npairs, np.int64)
            width = 2 * max_steps + 1
            plane = np.zeros((width, width), np.uint8)
            origin = max_steps
            halt = 0
            nonhalt = 0
            discarded = 0
            for mid in range(start, stop):
                m = mid
                has_halt = False
                for j in range(npairs):
                    t = m % base
                    m //= base
                    trans[j] = t
                    if (t >> 3) == n_states:
                        has_halt = True
                if not has_halt:
                    nonhalt += 1
                    continue
                r = origin
                c = origin
                state = 0
                rlo = origin
                rhi = origin
                clo = origin
                chi = origin
                halted = False
                for _ in range(max_steps):
                    if r < rlo:
                        rlo = r
                    elif r > rhi:
                        rhi = r
                    if c < clo:
                        clo = c
                    elif c > chi:
                        chi = c
                    t = trans[state * 2 + plane[r, c]]
                    plane[r, c] = np.uint8(t & 1)
                    nxt = t >> 3
                    if nxt == n_states:
                        halted = True
                        break
                    mv = (t >> 1) & 3
                    if mv == 0:
                        r -= 1
                    elif mv == 1:
                        r += 1
                    elif mv == 2:
                        c -= 1
                    else:
                        c += 1
                    state = nxt
                if halted:
                    if rhi - rlo + 1 > 4 or chi - clo + 1 > 4:
                        discarded += 1
                    else:
                        code = 0  # padded 4x4 pattern, row-major 16-bit code
                        for i in range(4):
                            for j in range(4):
                                b = 0
                                if rlo + i <= rhi and clo + j <= chi:
                                    b = plane[rlo + i, clo + j]
                                code = (code << 1) | b
                        counts[code] += 1
                        halt += 1
                else:
                    nonhalt += 1
                for i in range(rlo, rhi + 1):
                    for j in range(clo, chi + 1):
                        plane[i, j] = 0
            return halt, nonhalt, discarded

    _KERNELS[dims] = kernel
    return kernel


def tally_fast(space, start=0, stop=None):
    """Tally halting outputs over a machine-id range with the compiled kernel.

    Returns ``(counts, halt, nonhalt, discarded)`` where ``counts`` indexes
    1D outputs by the length-prefix code ``(1 << L) | bits`` and 2D outputs
    by the row-major 16-bit code of the padded 4x4 pattern.  Tallies merge
    associatively over id ranges, so any chunking yields identical totals.
    """
    if stop is None:
        stop = space.total_machines
    kernel = _get_kernel(space.dimensionality)
    size = (1 << (MAX_PATTERN_BITS_1D + 1)) if space.dimensionality == 1 else (1 << 16)
    counts = np.zeros(size, dtype=np.int64)
    halt, nonhalt, discarded = kernel(space.state_count, space.max_steps,
                                      start, stop, counts)
    return counts, int(halt), int(nonhalt), int(discarded)


def code_to_key_1d(code):
    length = int(code).bit_length() - 1
    bits = int(code) & ((1 << length) - 1)
    return format(bits, f"0{length}b") if length else ""


def key_to_code_1d(key):
    return (1 << len(key)) | int(key, 2) if key else 1


def code_to_key_2d(code):
    return format(int(code), "016b")


def key_to_code_2d(key):
    return int(key, 2)
