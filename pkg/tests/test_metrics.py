"""Metric oracles: entropy, block entropy, LZW, deflate, block decomposition."""
import math

import numpy as np
import pytest

from dimsig.fixtures import default_table_1d, default_table_2d, random_bits_402, random_signal
from dimsig.metrics import (
    bdm_1d,
    bdm_2d,
    bdm_3d,
    block_entropy,
    deflate_b64_len,
    lzw_dict_len,
    report,
    shannon_entropy,
)
from dimsig.signals import BitSignal, Grid


def test_entropy_balanced_is_exactly_one():
    x = random_bits_402()
    assert x.ones_count() == 201 and len(x) == 402
    assert shannon_entropy(x) == 1.0


def test_entropy_constant_is_zero():
    assert shannon_entropy(BitSignal([0] * 57)) == 0.0


def test_entropy_quarter_ones():
    x = BitSignal([1, 0, 0, 0] * 25)
    expected = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
    assert shannon_entropy(x) == pytest.approx(expected, abs=1e-6)
    assert shannon_entropy(x) == pytest.approx(0.811278, abs=1e-6)


def test_entropy_empty_rejected():
    with pytest.raises(ValueError):
        shannon_entropy(BitSignal([]))


def test_entropy_bounds_and_balance():
    rng = np.random.default_rng(3)
    for _ in range(50):
        bits = rng.integers(0, 2, size=int(rng.integers(1, 200)))
        h = shannon_entropy(BitSignal(bits))
        assert 0.0 <= h <= 1.0
        ones = bits.sum()
        assert (h == 1.0) == (2 * ones == bits.size)


@pytest.mark.parametrize("bits,block,expected", [
    ("01010101", 2, 0.0),
    ("0011", 2, 1.0),
    ("010011", 2, math.log2(3)),
])
def test_block_entropy_examples(bits, block, expected):
    assert block_entropy(BitSignal.from_string(bits), block) == pytest.approx(expected)


def test_block_entropy_discards_remainder():
    # trailing odd bit must not affect the distribution
    a = block_entropy(BitSignal.from_string("001101"), 2)
    b = block_entropy(BitSignal.from_string("0011011"), 2)
    assert a == b


def test_block_entropy_oversized_block_rejected():
    with pytest.raises(ValueError):
        block_entropy(BitSignal.from_string("01"), 3)


def test_repeated_block_has_zero_block_entropy():
    x = BitSignal.from_string("0110" * 40)
    assert block_entropy(x, 4) == 0.0


@pytest.mark.parametrize("bits,expected", [
    ("", 2),
    ("01", 3),
    ("0000", 4),
])
def test_lzw_hand_traces(bits, expected):
    assert lzw_dict_len(BitSignal.from_string(bits)) == expected


def _lzw_reference(bits):
    # independent trace: explicit string dictionary, longest-match scan
    dictionary = {"0", "1"}
    i = 0
    s = "".join(str(b) for b in bits)
    while i < len(s):
        j = i + 1
        while j <= len(s) and s[i:j] in dictionary:
            j += 1
        if j <= len(s):
            dictionary.add(s[i:j])
            i = j - 1
        else:
            i = len(s)
    return len(dictionary)


def test_lzw_matches_brute_force_all_short_signals():
    for length in range(0, 17):
        for value in range(1 << length):
            bits = [(value >> (length - 1 - i)) & 1 for i in range(length)]
            assert lzw_dict_len(BitSignal(bits)) == _lzw_reference(bits), bits


def test_deflate_multiple_of_four_and_deterministic():
    x = random_signal(4096, seed=11)
    n = deflate_b64_len(x)
    assert n % 4 == 0
    assert n == deflate_b64_len(x)


def test_deflate_orders_structure_below_noise():
    zeros = BitSignal(np.zeros(4096, dtype=np.uint8))
    noise = random_signal(4096, seed=5)
    assert deflate_b64_len(zeros) < deflate_b64_len(noise)


def test_bdm_single_block_equals_table_value():
    table = default_table_1d()
    x = BitSignal.from_string("01101001")
    res = bdm_1d(x, table, block_len=8)
    assert res.bits == table.complexity("01101001")
    assert res.window_count == 1


def test_bdm_repeated_block_identity():
    table = default_table_1d()
    block = "10110001"
    for k in (2, 3, 7, 64):
        x = BitSignal.from_string(block * k)
        res = bdm_1d(x, table, block_len=8, stride=8)
        assert res.bits == pytest.approx(table.complexity(block) + math.log2(k), abs=1e-12)


def test_bdm_complement_invariance_1d():
    table = default_table_1d()
    for seed in range(100):
        x = random_signal(256, seed=seed)
        a = bdm_1d(x, table, block_len=8).bits
        b = bdm_1d(x.complement(), table, block_len=8).bits
        assert a == b


def test_bdm_discards_trailing_remainder():
    table = default_table_1d()
    x = BitSignal.from_string("10110001" * 3 + "101")
    full = bdm_1d(BitSignal.from_string("10110001" * 3), table, block_len=8)
    assert bdm_1d(x, table, block_len=8).bits == full.bits


def test_bdm_2d_single_window():
    table = default_table_2d()
    cells = np.array([[1, 0, 0, 0]] + [[0] * 4] * 3, dtype=np.uint8)
    res = bdm_2d(Grid(cells), table)
    assert res.window_count == 1
    assert res.bits == table.complexity("1000000000000000")


def test_bdm_2d_zero_grid_window_count():
    table = default_table_2d()
    res = bdm_2d(Grid(np.zeros((8, 8), dtype=np.uint8)), table)
    assert res.window_count == 25
    assert res.bits == pytest.approx(
        table.complexity("0" * 16) + math.log2(25), abs=1e-12)


def test_bdm_2d_complement_invariance():
    table = default_table_2d()
    rng = np.random.default_rng(9)
    for _ in range(20):
        cells = rng.integers(0, 2, size=(12, 9), dtype=np.uint8)
        g = Grid(cells)
        assert bdm_2d(g, table).bits == bdm_2d(g.complement(), table).bits


def test_bdm_2d_undersized_rejected():
    table = default_table_2d()
    with pytest.raises(ValueError):
        bdm_2d(Grid(np.zeros((3, 8), dtype=np.uint8)), table)


def test_bdm_3d_single_plane_equals_2d():
    table = default_table_2d()
    rng = np.random.default_rng(2)
    cells = rng.integers(0, 2, size=(6, 6), dtype=np.uint8)
    vol = Grid(cells.reshape(1, 6, 6), dims=(6, 6, 1))
    assert bdm_3d(vol, table).bits == bdm_2d(Grid(cells), table).bits


def test_bdm_3d_zero_volume():
    table = default_table_2d()
    vol = Grid(np.zeros((2, 8, 8), dtype=np.uint8), dims=(8, 8, 2))
    res = bdm_3d(vol, table)
    assert res.window_count == 50
    assert res.bits == pytest.approx(
        2 * (table.complexity("0" * 16) + math.log2(25)), abs=1e-12)


def test_bdm_3d_plane_order_invariant():
    table = default_table_2d()
    rng = np.random.default_rng(4)
    cells = rng.integers(0, 2, size=(3, 8, 8), dtype=np.uint8)
    a = bdm_3d(Grid(cells, dims=(8, 8, 3)), table)
    b = bdm_3d(Grid(cells[::-1].copy(), dims=(8, 8, 3)), table)
    assert a.bits == b.bits


def test_permutation_sensitivity():
    table = default_table_1d()
    x = BitSignal.from_string("10110001" * 16)
    perm = np.random.default_rng(22).permutation(len(x))
    y = BitSignal(x.bits[perm])
    assert shannon_entropy(x) == shannon_entropy(y)
    assert lzw_dict_len(x) != lzw_dict_len(y)
    assert bdm_1d(x, table).bits != bdm_1d(y, table).bits


def test_report_populates_requested_metrics():
    table = default_table_1d()
    x = random_signal(4096, seed=8)
    rep = report(x, table=table)
    assert rep.entropy is not None
    assert rep.lzw_dict_len is not None
    assert rep.deflate_b64_len is not None
    assert rep.bdm is not None
    assert rep.block_entropy is not None
    assert 0.0 <= rep.fallback_fraction <= 1.0
    data = rep.to_dict()
    assert data["length"] == 4096


def test_report_deflate_normalization():
    x = random_signal(1000, seed=13)
    rep = report(x, metrics=("deflate",))
    assert rep.normalized_deflate == rep.deflate_b64_len
    rep2 = report(x, metrics=("deflate",), kept_bits=990, original_bits=1000)
    assert rep2.normalized_deflate == pytest.approx(rep2.deflate_b64_len / 0.99)
