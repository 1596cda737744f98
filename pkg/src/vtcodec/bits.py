"""Binary words and input validation helpers.

A BitWord is an immutable sequence over {0, 1}. The text form used by every
file format and the CLI is an ASCII string of '0'/'1' characters whose first
character is position 1 (positions are 1-based throughout the package).
"""

from __future__ import annotations

from typing import Iterable, Iterator, Union

import numpy as np

from .errors import BitValueError

WordLike = Union["BitWord", str, Iterable[int]]


class BitWord:
    """Immutable finite binary sequence.

    Python indexing on a BitWord is the usual 0-based indexing; the 1-based
    positional convention of the checksum arithmetic lives in the functions
    that implement it, not here.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int]):
        bits = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in bits):
            raise BitValueError(f"bits must be 0/1, got {bits!r}")
        object.__setattr__(self, "_bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("BitWord is immutable")

    @classmethod
    def from_text(cls, text: str) -> "BitWord":
        text = text.strip()
        if not all(c in "01" for c in text):
            raise BitValueError(f"not a bitstring: {text!r}")
        return cls(int(c) for c in text)

    @classmethod
    def from_array(cls, arr) -> "BitWord":
        return cls(int(b) for b in np.asarray(arr).ravel())

    @property
    def bits(self) -> tuple:
        return self._bits

    @property
    def text(self) -> str:
        return "".join(str(b) for b in self._bits)

    def to_array(self) -> np.ndarray:
        return np.array(self._bits, dtype=np.uint8)

    def weight(self) -> int:
        return sum(self._bits)

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits)

    def __getitem__(self, idx):
        out = self._bits[idx]
        return BitWord(out) if isinstance(idx, slice) else out

    def __eq__(self, other) -> bool:
        if isinstance(other, BitWord):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._bits)

    def __repr__(self) -> str:
        return f"BitWord({self.text!r})"


def as_word(value: WordLike) -> BitWord:
    """Coerce a bitstring, int iterable, or BitWord to a BitWord."""
    if isinstance(value, BitWord):
        return value
    if isinstance(value, str):
        return BitWord.from_text(value)
    return BitWord(value)


def as_words(values: Iterable[WordLike]) -> list:
    return [as_word(v) for v in values]
