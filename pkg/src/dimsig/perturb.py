"""Bit-flip and scramble perturbations with reproducible randomness.

Every trial derives its own 64-bit seed from ``(master_seed, k,
trial_index)`` through a pinned SplitMix64 mixing chain, so results never
depend on execution order or on how trials are distributed over workers.

All perturbations used here are low-complexity transformations: given the
input, each is fully described by a handful of integers (flip count plus
the index set, or segment boundaries plus a permutation).  The
``*_description_bits`` helpers expose that exact description length so a
perturbation budget can be audited.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .signals import BitSignal
from . import metrics as _metrics

__all__ = [
    "mix64",
    "flip_positions",
    "flip_at",
    "flip_bits",
    "FlipExperimentPlan",
    "TrialSummary",
    "run_flip_experiment",
    "scramble",
    "scramble_experiment",
    "ScrambleResult",
    "flip_description_bits",
    "scramble_description_bits",
    "default_schedule",
    "SUMMARY_COLUMNS",
]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # SplitMix64 increment


def _splitmix(z):
    z = (z + _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix64(*values):
    """Mix integers into one 64-bit seed; order-sensitive, pinned for good."""
    h = 0x8E4C2DD5D1B0E3A7
    for v in values:
        h = _splitmix((h ^ (int(v) & _MASK)) & _MASK)
    return h


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def flip_positions(length, k, trial_seed):
    """The k distinct positions a seeded trial flips, in ascending order."""
    if not 0 <= k <= length:
        raise ValueError(f"flip count {k} outside [0, {length}]")
    if k == 0:
        return np.zeros(0, dtype=np.int64)
    positions = _rng(trial_seed).choice(length, size=k, replace=False)
    return np.sort(positions.astype(np.int64))


def flip_at(x, positions):
    """Complement the bits at the given positions."""
    bits = x.bits.copy()
    bits[np.asarray(positions, dtype=np.int64)] ^= 1
    return BitSignal(bits)


def flip_bits(x, k, trial_seed):
    """Flip exactly k distinct uniformly chosen positions."""
    return flip_at(x, flip_positions(len(x), k, trial_seed))


def flip_description_bits(length, k):
    """Exact bits to describe one flip perturbation given the input.

    The flip count needs ``ceil(log2(length + 1))`` bits and the position
    set an index into the ``C(length, k)`` possible sets.
    """
    count_bits = math.ceil(math.log2(length + 1)) if length else 0
    set_bits = math.ceil(math.log2(math.comb(length, k))) if 0 < k < length else 0
    return count_bits + set_bits


def default_schedule(length, points=32):
    """Evenly spaced distinct flip counts from 0 to the full length."""
    ks = np.linspace(0, length, num=min(points, length + 1), dtype=np.int64)
    return sorted(set(int(k) for k in ks))


@dataclass(frozen=True)
class FlipExperimentPlan:
    schedule: tuple
    trials_per_k: int = 1024
    master_seed: int = 0
    metrics: tuple = ("entropy", "lzw", "bdm", "deflate")
    bdm_block_len: int = 8
    bdm_stride: int | None = None

    def __post_init__(self):
        sched = tuple(int(k) for k in self.schedule)
        object.__setattr__(self, "schedule", sched)
        if len(set(sched)) != len(sched):
            raise ValueError("schedule values must be distinct")
        if any(k < 0 for k in sched):
            raise ValueError("schedule values must be >= 0")
        if self.trials_per_k < 1:
            raise ValueError("trials_per_k must be >= 1")
        bad = set(self.metrics) - {"entropy", "lzw", "bdm", "deflate"}
        if bad:
            raise ValueError(f"unknown metrics: {sorted(bad)}")


@dataclass
class TrialSummary:
    """Violin-plot statistics of each metric at one flip count."""

    k: int
    stats: dict = field(default_factory=dict)  # metric -> (min,q1,median,q3,max,mean)

    def check(self):
        for metric, (mn, q1, med, q3, mx, _mean) in self.stats.items():
            if not (mn <= q1 <= med <= q3 <= mx):
                raise AssertionError(f"quartile ordering violated for {metric}")
        return self


SUMMARY_COLUMNS = ["k", "metric", "min", "q1", "median", "q3", "max", "mean"]


def _quartiles(values):
    arr = np.asarray(values, dtype=np.float64)
    # linear interpolation on sorted samples (the inclusive method)
    q1, med, q3 = np.quantile(arr, [0.25, 0.5, 0.75], method="linear")
    return (float(arr.min()), float(q1), float(med), float(q3),
            float(arr.max()), float(arr.mean()))


def _metric_values(signal, names, table, block_len, stride):
    out = {}
    for name in names:
        if name == "entropy":
            out[name] = _metrics.shannon_entropy(signal)
        elif name == "lzw":
            out[name] = float(_metrics.lzw_dict_len(signal))
        elif name == "deflate":
            out[name] = float(_metrics.deflate_b64_len(signal))
        elif name == "bdm":
            out[name] = _metrics.bdm_1d(signal, table, block_len=block_len,
                                        stride=stride).bits
    return out


def run_flip_experiment(x, plan, table=None, workers=1):
    """Run the flip schedule and summarize each metric's distribution.

    For each k the plan's trial count is run with per-trial seeds
    ``mix64(master_seed, k, trial_index)``; the result is independent of
    execution order and of ``workers``.
    """
    if "bdm" in plan.metrics and table is None:
        raise ValueError("bdm metric requires a CTM table")
    length = len(x)
    for k in plan.schedule:
        if k > length:
            raise ValueError(f"flip count {k} exceeds signal length {length}")

    def one_k(k):
        per_metric = {m: [] for m in plan.metrics}
        for trial in range(plan.trials_per_k):
            seed = mix64(plan.master_seed, k, trial)
            flipped = flip_bits(x, k, seed)
            for name, value in _metric_values(flipped, plan.metrics, table,
                                              plan.bdm_block_len,
                                              plan.bdm_stride).items():
                per_metric[name].append(value)
        return TrialSummary(
            k=k, stats={m: _quartiles(v) for m, v in per_metric.items()}
        ).check()

    ks = sorted(plan.schedule)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(one_k, ks))
    else:
        summaries = [one_k(k) for k in ks]
    return summaries


def summaries_to_csv(summaries, metric_order=None):
    lines = [",".join(SUMMARY_COLUMNS)]
    for summary in summaries:
        names = metric_order or sorted(summary.stats)
        for name in names:
            mn, q1, med, q3, mx, mean = summary.stats[name]
            lines.append(",".join([str(summary.k), name] +
                                  [repr(v) for v in (mn, q1, med, q3, mx, mean)]))
    return "\n".join(lines) + "\n"


def _segments(length, boundaries):
    bounds = [int(b) for b in boundaries]
    if bounds != sorted(set(bounds)) or any(not 0 <= b <= length for b in bounds):
        raise ValueError("boundaries must be strictly increasing within [0, length]")
    cuts = [0] + bounds + [length]
    return [(a, b) for a, b in zip(cuts, cuts[1:]) if b > a]


def scramble(x, segment_boundaries, trial_seed):
    """Permute the order of the segments cut at the given boundaries.

    Bits within a segment are untouched; the segment order is drawn as a
    seeded uniform permutation.  Output length equals input length.
    """
    segs = _segments(len(x), segment_boundaries)
    order = _rng(trial_seed).permutation(len(segs))
    pieces = [x.bits[segs[i][0]:segs[i][1]] for i in order]
    return BitSignal(np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.uint8))


def scramble_description_bits(length, boundaries):
    """Bits to describe one scramble: the boundaries plus the permutation."""
    nseg = len(_segments(length, list(boundaries)))
    addr = math.ceil(math.log2(length + 1)) if length else 0
    perm_bits = math.ceil(math.log2(math.factorial(nseg))) if nseg > 1 else 0
    return addr * (len(list(boundaries)) + 1) + perm_bits


@dataclass
class ScrambleResult:
    original: float
    values: list
    quartiles: tuple
    percentile: float  # fraction of trials with metric <= the original's
    histogram: tuple   # (bin_edges, counts)


def scramble_experiment(x, boundaries, trials, master_seed, metric="deflate",
                        table=None, bins=20):
    """Distribution of a metric over seeded segment scrambles.

    Returns the unscrambled value, the empirical distribution and the
    fraction of trials at or below the original (its percentile).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = (metric,)
    original = _metric_values(x, names, table, 8, None)[metric]
    values = []
    for trial in range(trials):
        seed = mix64(master_seed, 0, trial)
        values.append(_metric_values(scramble(x, boundaries, seed), names,
                                     table, 8, None)[metric])
    arr = np.asarray(values, dtype=np.float64)
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        edges = np.array([lo, hi + 1.0])
    else:
        edges = np.linspace(lo, hi, bins + 1)
    counts, edges = np.histogram(arr, bins=edges)
    return ScrambleResult(
        original=float(original),
        values=values,
        quartiles=_quartiles(arr),
        percentile=float((arr <= original).mean()),
        histogram=(edges.tolist(), counts.tolist()),
    )
