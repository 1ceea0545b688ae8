"""Text-to-bits encoding schemes.

Four schemes are supported:

* ``utf8``      -- 8 bits per character, MSB first (single-byte code points
  only).
* ``balanced``  -- 16 bits per character: the byte followed by its bitwise
  complement, so the output always contains exactly 50% ones.
* indicator sets -- 1 bit per character, 1 iff the character belongs to the
  scheme's indicator set.  ``vowel()`` and ``space()`` are the two stock
  indicator schemes.

``utf8`` and ``balanced`` are invertible; indicator schemes are not.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .signals import BitSignal

__all__ = [
    "EncodingScheme",
    "EncodingError",
    "utf8",
    "balanced",
    "vowel",
    "space",
    "indicator",
    "parse_scheme",
    "encode",
    "decode",
]

VOWELS = "AaEeIiOoUu"


class EncodingError(ValueError):
    """Raised for characters or bit patterns a scheme cannot handle."""


@dataclass(frozen=True)
class EncodingScheme:
    kind: str                      # "utf8" | "balanced" | "indicator"
    indicator_set: frozenset = field(default_factory=frozenset)
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("utf8", "balanced", "indicator"):
            raise ValueError(f"unknown scheme kind: {self.kind!r}")
        if self.kind == "indicator" and not self.indicator_set:
            raise ValueError("indicator scheme requires a non-empty indicator set")

    @property
    def bits_per_char(self):
        return {"utf8": 8, "balanced": 16, "indicator": 1}[self.kind]

    @property
    def invertible(self):
        return self.kind in ("utf8", "balanced")

    def label(self):
        return self.name or self.kind


def utf8():
    return EncodingScheme("utf8", name="utf8")


def balanced():
    return EncodingScheme("balanced", name="balanced")


def indicator(chars, name=""):
    return EncodingScheme("indicator", frozenset(chars), name=name or f"set:{''.join(sorted(set(chars)))}")


def vowel():
    return indicator(VOWELS, name="vowel")


def space():
    return indicator(" ", name="space")


def parse_scheme(spec):
    """Parse a CLI scheme name: utf8 | balanced | vowel | space | set:<chars>."""
    if spec == "utf8":
        return utf8()
    if spec == "balanced":
        return balanced()
    if spec == "vowel":
        return vowel()
    if spec == "space":
        return space()
    if spec.startswith("set:"):
        chars = spec[4:]
        if not chars:
            raise EncodingError("set: scheme requires at least one character")
        return indicator(chars)
    raise EncodingError(f"unknown encoding scheme {spec!r}")


def _text_bytes(text, scheme):
    codes = [ord(c) for c in text]
    for i, c in enumerate(codes):
        if c > 0x7F:
            raise EncodingError(
                f"{scheme.kind} scheme requires single-byte code points; "
                f"character {text[i]!r} at index {i} does not fit"
            )
    return np.array(codes, dtype=np.uint8)


def encode(text, scheme):
    """Convert text to a BitSignal under the given scheme."""
    if scheme.kind == "indicator":
        bits = np.fromiter((1 if c in scheme.indicator_set else 0 for c in text),
                           dtype=np.uint8, count=len(text))
        return BitSignal(bits)
    codes = _text_bytes(text, scheme)
    byte_bits = np.unpackbits(codes.reshape(-1, 1), axis=1)
    if scheme.kind == "utf8":
        return BitSignal(byte_bits.ravel())
    # balanced: byte then its bitwise complement
    paired = np.concatenate([byte_bits, 1 - byte_bits], axis=1)
    return BitSignal(paired.ravel())


def decode(signal, scheme):
    """Invert an encoding; only utf8 and balanced schemes are invertible."""
    if not scheme.invertible:
        raise EncodingError(
            f"{scheme.label()} is an indicator scheme and cannot be decoded"
        )
    width = scheme.bits_per_char
    if len(signal) % width:
        raise EncodingError(
            f"signal length {len(signal)} is not a multiple of {width}"
        )
    groups = signal.bits.reshape(-1, width)
    if scheme.kind == "balanced":
        first, second = groups[:, :8], groups[:, 8:]
        bad = np.nonzero(np.any(second != 1 - first, axis=1))[0]
        if bad.size:
            raise EncodingError(
                f"balanced integrity violation at character index {int(bad[0])}: "
                "second byte is not the complement of the first"
            )
        groups = first
    codes = np.packbits(groups, axis=1).ravel()
    if codes.size and codes.max() > 0x7F:
        idx = int(np.argmax(codes > 0x7F))
        raise EncodingError(f"byte at character index {idx} is not a single-byte code point")
    return codes.tobytes().decode("ascii")
