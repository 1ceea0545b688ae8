"""Enumeration and simulation of small machines."""
import itertools

import numpy as np
import pytest

from dimsig.machines import (
    DISCARDED,
    NONHALT,
    MachineSpace,
    Pattern,
    decode_machine,
    enumerate_1d,
    enumerate_2d,
    simulate_1d,
    simulate_2d,
    tally_fast,
    code_to_key_1d,
)


def test_space_validation():
    with pytest.raises(ValueError):
        MachineSpace(3, 1, 200)
    with pytest.raises(ValueError):
        MachineSpace(1, 0, 200)
    with pytest.raises(ValueError):
        MachineSpace(1, 1, 0)


@pytest.mark.parametrize("states,expected", [(1, 36), (2, 10_000), (3, 14 ** 6)])
def test_total_machines_1d(states, expected):
    # per-pair options: 2 writes * 2 moves * n next-states, plus 2 halt writes
    assert MachineSpace(1, states, 200).total_machines == expected


@pytest.mark.parametrize("states,expected", [(1, 256), (2, 24 ** 4)])
def test_total_machines_2d(states, expected):
    # per-pair options: 2 writes * 4 moves * (n + 1) next-states incl. halt
    assert MachineSpace(2, states, 200).total_machines == expected


def test_enumerator_visits_every_machine_small():
    space = MachineSpace(1, 1, 50)
    seen = [mid for mid, _ in enumerate_1d(space)]
    assert seen == list(range(36))


def test_halt_write_machine_outputs_single_symbol():
    # 1-state machine whose (s0, read 0) option is halt-write-1
    space = MachineSpace(1, 1, 200)
    digits = [1, 0]
    out = simulate_1d(digits, 1, 200)
    assert isinstance(out, Pattern)
    assert out.key() == "1"


def test_left_looping_machine_never_halts():
    # (s0, 0) -> write 0, move left, stay in s0; halt option exists on read 1
    # but is never reached on the all-zero tape
    digits = [2, 0]
    assert simulate_1d(digits, 1, 200) is NONHALT


def test_machines_without_halt_option_are_nonhalting():
    space = MachineSpace(1, 1, 200)
    for mid, outcome in enumerate_1d(space):
        digits = decode_machine(mid, space)
        if all(t >= 2 for t in digits):
            assert outcome is NONHALT


def test_enumeration_deterministic():
    space = MachineSpace(1, 2, 100)
    run1 = [(mid, o.key() if isinstance(o, Pattern) else repr(o))
            for mid, o in enumerate_1d(space)]
    run2 = [(mid, o.key() if isinstance(o, Pattern) else repr(o))
            for mid, o in enumerate_1d(space)]
    assert run1 == run2


def test_move_flip_bijection_reverses_output():
    # flipping every move bit mirrors the tape, so the output reverses
    space = MachineSpace(1, 2, 200)
    rng = np.random.default_rng(7)
    for mid in rng.integers(0, space.total_machines, size=300):
        digits = decode_machine(int(mid), space)
        flipped = [t if t < 2 else ((t - 2) ^ 2) + 2 for t in digits]
        a = simulate_1d(digits, 2, 200)
        b = simulate_1d(flipped, 2, 200)
        if a is NONHALT:
            assert b is NONHALT
        else:
            assert isinstance(b, Pattern)
            assert b.key() == a.key()[::-1]


def test_turmite_first_step_halt():
    # 1-state turmite: (s0, 0) writes 1 and halts; bounding box is one cell
    halt_t = 1 | (0 << 1) | (1 << 3)
    out = simulate_2d([halt_t, 0], 1, 200)
    assert isinstance(out, Pattern)
    assert out.payload.shape == (1, 1)
    padded = out.padded()
    assert padded.payload.shape == (4, 4)
    assert padded.payload[0, 0] == 1 and padded.payload.sum() == 1


def test_turmite_oversize_output_discarded():
    # 5-state chain walking right: steps execute at 5 distinct columns,
    # so the visited bounding box is 1x5 and the output must be discarded
    n = 5
    digits = []
    for state in range(n):
        nxt = state + 1 if state < n - 1 else n  # last state halts
        t = 1 | (3 << 1) | (nxt << 3)
        digits.extend([t, 0])
    assert simulate_2d(digits, n, 200) is DISCARDED


def test_turmite_four_cell_walk_kept():
    n = 4
    digits = []
    for state in range(n):
        nxt = state + 1 if state < n - 1 else n
        t = 1 | (3 << 1) | (nxt << 3)
        digits.extend([t, 0])
    out = simulate_2d(digits, n, 200)
    assert isinstance(out, Pattern)
    assert out.payload.shape == (1, 4)
    assert out.key() == "1111"


def test_fast_tally_matches_reference_stream_1d():
    space = MachineSpace(1, 2, 100)
    counts, halt, nonhalt, discarded = tally_fast(space)
    ref = {}
    ref_halt = ref_nonhalt = 0
    for _mid, out in enumerate_1d(space):
        if out is NONHALT:
            ref_nonhalt += 1
        elif out is DISCARDED:
            pass
        else:
            ref[out.key()] = ref.get(out.key(), 0) + 1
            ref_halt += 1
    assert halt == ref_halt and nonhalt == ref_nonhalt and discarded == 0
    fast = {code_to_key_1d(c): int(counts[c]) for c in np.nonzero(counts)[0]}
    assert fast == ref


def test_fast_tally_matches_reference_stream_2d_prefix():
    space = MachineSpace(2, 2, 100)
    stop = 30_000
    counts, halt, nonhalt, discarded = tally_fast(space, 0, stop)
    ref = {}
    ref_halt = ref_nonhalt = ref_disc = 0
    for mid, out in itertools.islice(enumerate_2d(space), stop):
        if out is NONHALT:
            ref_nonhalt += 1
        elif out is DISCARDED:
            ref_disc += 1
        else:
            key = out.padded().key()
            ref[key] = ref.get(key, 0) + 1
            ref_halt += 1
    assert (halt, nonhalt, discarded) == (ref_halt, ref_nonhalt, ref_disc)
    fast = {format(int(c), "016b"): int(counts[c]) for c in np.nonzero(counts)[0]}
    assert fast == ref


def test_tally_chunks_merge_associatively():
    space = MachineSpace(1, 2, 100)
    whole, halt, _, _ = tally_fast(space)
    mid = space.total_machines // 3
    a, ha, _, _ = tally_fast(space, 0, mid)
    b, hb, _, _ = tally_fast(space, mid, space.total_machines)
    assert np.array_equal(whole, a + b)
    assert halt == ha + hb


def test_pattern_validation_and_complement():
    with pytest.raises(ValueError):
        Pattern(np.zeros(17, dtype=np.uint8), dims=1)
    with pytest.raises(ValueError):
        Pattern(np.zeros((5, 2), dtype=np.uint8), dims=2)
    p = Pattern(np.array([0, 1, 1], dtype=np.uint8))
    assert p.complement().key() == "100"
    q = Pattern.from_key("0110", 1)
    assert q.key() == "0110"
