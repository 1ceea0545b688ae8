"""Encoding schemes and their inverses."""
import numpy as np
import pytest

from dimsig.encodings import (
    EncodingError,
    balanced,
    decode,
    encode,
    indicator,
    parse_scheme,
    space,
    utf8,
    vowel,
)
from dimsig.fixtures import darwin_402, random_chars_402
from dimsig.signals import BitSignal


def test_encode_utf8_single_char():
    assert encode("A", utf8()).to_string() == "01000001"


def test_encode_balanced_single_char():
    assert encode("A", balanced()).to_string() == "01000001" + "10111110"


def test_encode_vowel_indicator():
    assert encode("aB c", vowel()).to_string() == "1000"


def test_output_lengths():
    text = "hello world"
    assert len(encode(text, utf8())) == 8 * len(text)
    assert len(encode(text, balanced())) == 16 * len(text)
    assert len(encode(text, space())) == len(text)


def test_multibyte_rejected():
    with pytest.raises(EncodingError):
        encode("café", utf8())
    with pytest.raises(EncodingError):
        encode("☃", balanced())


def test_indicator_requires_characters():
    with pytest.raises(ValueError):
        indicator("")


def test_round_trip_utf8():
    assert decode(encode("Origin", utf8()), utf8()) == "Origin"


def test_round_trip_all_single_byte_texts():
    rng = np.random.default_rng(17)
    pool = [chr(c) for c in range(32, 127)]
    for _ in range(50):
        text = "".join(rng.choice(pool, size=int(rng.integers(0, 40))))
        for scheme in (utf8(), balanced()):
            assert decode(encode(text, scheme), scheme) == text


def test_balanced_integrity_error_names_index():
    good = encode("AB", balanced())
    bits = good.bits.copy()
    bits[8] ^= 1  # corrupt the complement byte of character 0
    with pytest.raises(EncodingError, match="index 0"):
        decode(BitSignal(bits), balanced())
    bits = good.bits.copy()
    bits[24] ^= 1  # character 1
    with pytest.raises(EncodingError, match="index 1"):
        decode(BitSignal(bits), balanced())


def test_indicator_not_invertible():
    with pytest.raises(EncodingError, match="cannot be decoded"):
        decode(encode("abc", vowel()), vowel())


def test_decode_requires_whole_groups():
    with pytest.raises(EncodingError):
        decode(BitSignal([0] * 12), utf8())


def test_balanced_always_half_ones():
    rng = np.random.default_rng(23)
    pool = [chr(c) for c in range(32, 127)]
    for _ in range(25):
        text = "".join(rng.choice(pool, size=int(rng.integers(1, 60))))
        assert encode(text, balanced()).ones_fraction() == 0.5


def test_indicator_fraction_matches_character_fraction():
    text = "algorithmic information dynamics"
    sig = encode(text, vowel())
    expected = sum(c in "AaEeIiOoUu" for c in text) / len(text)
    assert sig.ones_fraction() == expected


def test_parse_scheme_forms():
    assert parse_scheme("utf8").kind == "utf8"
    assert parse_scheme("balanced").kind == "balanced"
    assert parse_scheme("vowel").indicator_set == frozenset("AaEeIiOoUu")
    assert parse_scheme("space").indicator_set == frozenset(" ")
    custom = parse_scheme("set:xyz")
    assert custom.indicator_set == frozenset("xyz")
    with pytest.raises(EncodingError):
        parse_scheme("rot13")
    with pytest.raises(EncodingError):
        parse_scheme("set:")


def test_corpus_fractions():
    chars = random_chars_402()
    assert len(chars) == 402
    assert encode(chars, vowel()).ones_fraction() == pytest.approx(0.1219, abs=1e-4)
    assert encode(chars, space()).ones_fraction() == pytest.approx(0.0149, abs=1e-4)
    darwin = darwin_402()
    sig = encode(darwin, utf8())
    assert len(sig) == 3216
    assert sig.ones_fraction() == pytest.approx(0.4555, abs=1e-4)
    assert encode(darwin, balanced()).ones_fraction() == 0.5
