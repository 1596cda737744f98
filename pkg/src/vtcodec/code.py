"""Varshamov-Tenengolts code parameters, checksum arithmetic, and the
systematic encoder.

Positions are 1-based everywhere in this module: the checksum of a word
(b_1, ..., b_L) is sum(i * b_i for i = 1..L) reduced modulo m = 2n + 1, and
the code VT_{a,m}(n) is the set of length-n words whose checksum equals a.
With m = 2n + 1 the code corrects any single insertion, deletion, or
substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .base import ParamsMixin
from .bits import BitWord, WordLike, as_word, as_words
from .errors import LengthError, MessageLengthError, SizeLimit, UnrepresentableDeficit


@dataclass(frozen=True)
class VtParams:
    """Parameters of one VT code family member.

    n: codeword length in bits; a: target checksum residue in [0, 2n].

    Membership and decoding work for any n >= 3. The systematic encoder
    needs the parity deficit to fit the power-of-two span after paying the
    position-n slot; when n is an exact power of two a few residues do not
    fit and encode() raises UnrepresentableDeficit for the affected
    messages. Non-power-of-two lengths (all the lengths used in practice)
    always encode.
    """

    n: int
    a: int = 0

    def __post_init__(self):
        n, a = self.n, self.a
        if n < 3:
            raise ValueError(f"n must be >= 3, got {n}")
        if not 0 <= a <= 2 * n:
            raise ValueError(f"a must be in [0, {2 * n}], got {a}")

    @property
    def m(self) -> int:
        return 2 * self.n + 1

    @cached_property
    def y(self) -> int:
        # message length; ceil(log2 n) via bit_length avoids float rounding
        return self.n - (self.n - 1).bit_length() - 1

    @cached_property
    def parity_positions(self) -> tuple:
        positions = [1 << i for i in range(self.n - self.y - 1)]
        positions.append(self.n)
        return tuple(positions)

    @cached_property
    def message_positions(self) -> tuple:
        parity = set(self.parity_positions)
        return tuple(i for i in range(1, self.n + 1) if i not in parity)


def checksum(word: WordLike, params: VtParams) -> int:
    """Position-weighted sum of the word's bits, mod m. Defined for any length."""
    word = as_word(word)
    return sum(i * b for i, b in enumerate(word, start=1)) % params.m


def is_codeword(word: WordLike, params: VtParams) -> bool:
    word = as_word(word)
    return len(word) == params.n and checksum(word, params) == params.a


def encode(message: WordLike, params: VtParams) -> BitWord:
    """Systematically encode a length-y message into VT_{a,2n+1}(n).

    Message bits occupy the non-parity positions in order. The parity
    deficit d = (a - weighted message sum) mod m is paid first with the
    position-n bit when d exceeds the power-of-two span, then expanded in
    binary over the positions 2^0 .. 2^(n-y-2), whose position index is its
    own weight.
    """
    message = as_word(message)
    n, a, m, y = params.n, params.a, params.m, params.y
    if len(message) != y:
        raise MessageLengthError(
            f"message length {len(message)} != y={y} for n={n}"
        )

    bits = [0] * (n + 1)  # 1-based; slot 0 unused
    for pos, bit in zip(params.message_positions, message):
        bits[pos] = bit
    deficit = (a - sum(pos * bit for pos, bit in zip(params.message_positions, message))) % m

    span = (1 << (n - y - 1)) - 1  # largest value expressible on the 2^i slots
    if deficit > span:
        bits[n] = 1
        deficit -= n
    if not 0 <= deficit <= span:
        raise UnrepresentableDeficit(
            f"residual deficit {deficit} outside [0, {span}] for n={n}"
        )
    for i in range(n - y - 1):
        if deficit & (1 << i):
            bits[1 << i] = 1
    return BitWord(bits[1:])


def extract_message(codeword: WordLike, params: VtParams) -> BitWord:
    """Read the message bits back out of their systematic positions."""
    codeword = as_word(codeword)
    if len(codeword) != params.n:
        raise LengthError(f"codeword length {len(codeword)} != n={params.n}")
    return BitWord(codeword[pos - 1] for pos in params.message_positions)


def enumerate_messages(params: VtParams):
    """All 2^y messages, lexicographic. Guarded against huge codes."""
    if params.y > 24:
        raise SizeLimit(f"2^{params.y} messages is too many to enumerate")
    for bits in product((0, 1), repeat=params.y):
        yield BitWord(bits)


def codebook(params: VtParams) -> list:
    """Every codeword in the systematic encoder's range, message order."""
    return [encode(u, params) for u in enumerate_messages(params)]


def enumerate_vt_set(params: VtParams) -> list:
    """The full code VT_{a,m}(n): every length-n word with checksum a.

    This is the membership-defined set (a superset of the systematic
    encoder's range) and the hypothesis space of the MAP decoders.
    """
    if params.n > 16:
        raise SizeLimit(f"2^{params.n} words is too many to enumerate")
    return [
        BitWord(w)
        for w in product((0, 1), repeat=params.n)
        if sum(i * b for i, b in enumerate(w, start=1)) % params.m == params.a
    ]


def split_codebook(params: VtParams, fraction: float = 0.8, seed: int = 0):
    """Disjoint (train, test) partition of the full codebook.

    The permutation is drawn from `seed` alone, so two calls with the same
    seed but different consumers always agree on the partition.
    """
    words = codebook(params)
    order = np.random.default_rng(seed).permutation(len(words))
    cut = int(fraction * len(words))
    train = [words[i] for i in order[:cut]]
    test = [words[i] for i in order[cut:]]
    return train, test


class VtEncoder(ParamsMixin):
    """Estimator-style wrapper: transform messages to codewords.

    transform() maps length-y messages to length-n codewords and
    inverse_transform() reads them back.
    """

    def __init__(self, n: int = 20, a: int = 0):
        self.n = n
        self.a = a

    @property
    def params_(self) -> VtParams:
        return VtParams(self.n, self.a)

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> list:
        params = self.params_
        return [encode(u, params) for u in as_words(X)]

    def inverse_transform(self, X) -> list:
        params = self.params_
        return [extract_message(v, params) for v in as_words(X)]
