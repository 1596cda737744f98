"""Classical hard-decision VT decoder.

Corrects exactly one insertion, deletion, or substitution per received word
using the checksum difference. With m = 2n + 1 the corrected codeword is
unique whenever the received word really is one edit away from the code;
anything else (wrong length by more than one, or inconsistent arithmetic)
falls back to the input truncated or zero-padded to length n so that
multi-error BER stays well defined.

Syndrome differences are reduced to canonical representatives in [0, m-1].
For a received word r with checksum abar and weight W = sum(r):

* length n, D = (abar - a) mod m != 0: a substitution. D <= n means
  position D was flipped 0 -> 1; otherwise position m - D was flipped
  1 -> 0.
* length n + 1: an insertion. An inserted 0 sits just left of the D-th
  '1' counted from the back (D = number of ones to its right); an
  inserted 1 has exactly D - W zeros to its left.
* length n - 1: a deletion, the mirror image with D = (a - abar) mod m:
  reinsert a 0 so that D ones sit at or after it, or reinsert a 1 after
  the (D - W - 1)-th zero.

Where both candidate reinsertions are arithmetically possible the checksum
test keeps whichever lands in the code; at most one can.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import ParamsMixin
from .bits import BitWord, WordLike, as_word, as_words
from .code import VtParams, checksum, is_codeword

CLEAN = "clean"
CORRECTED_INSERTION = "corrected_insertion"
CORRECTED_DELETION = "corrected_deletion"
CORRECTED_SUBSTITUTION = "corrected_substitution"
FALLBACK = "fallback"


@dataclass(frozen=True)
class HdOutcome:
    decoded: BitWord
    status: str


def pad_to_length(word: BitWord, n: int) -> BitWord:
    """Truncate or zero-pad at the tail to exactly n bits (fallback shape)."""
    bits = list(word)[:n]
    bits.extend([0] * (n - len(bits)))
    return BitWord(bits)


def _remove_inserted(bits: list, D: int, W: int, params: VtParams):
    """Candidate original words for a single insertion, as lists."""
    candidates = []
    if D <= W:
        # inserted 0 with exactly D ones to its right
        ones_right = 0
        for i in range(len(bits) - 1, -1, -1):
            if bits[i] == 0 and ones_right == D:
                candidates.append(bits[:i] + bits[i + 1:])
                break
            if bits[i] == 1:
                ones_right += 1
    zeros_left_target = D - W
    if zeros_left_target >= 0:
        # inserted 1 with exactly D - W zeros to its left
        zeros_left = 0
        for i, b in enumerate(bits):
            if b == 1 and zeros_left == zeros_left_target:
                candidates.append(bits[:i] + bits[i + 1:])
                break
            if b == 0:
                zeros_left += 1
    return [c for c in candidates if is_codeword(c, params)]


def _reinsert_deleted(bits: list, D: int, W: int, params: VtParams):
    """Candidate original words for a single deletion, as lists."""
    candidates = []
    if D <= W:
        # deleted bit was 0; D ones must sit at or after the reinsertion spot
        if D == 0:
            candidates.append(bits + [0])
        else:
            ones_seen = 0
            for i in range(len(bits) - 1, -1, -1):
                if bits[i] == 1:
                    ones_seen += 1
                    if ones_seen == D:
                        candidates.append(bits[:i] + [0] + bits[i:])
                        break
    zeros_left_target = D - W - 1
    if zeros_left_target >= 0:
        # deleted bit was 1; reinsert right after the (D-W-1)-th zero
        zeros_seen = 0
        spot = None
        if zeros_left_target == 0:
            spot = 0
        else:
            for i, b in enumerate(bits):
                if b == 0:
                    zeros_seen += 1
                    if zeros_seen == zeros_left_target:
                        spot = i + 1
                        break
        if spot is not None:
            candidates.append(bits[:spot] + [1] + bits[spot:])
    return [c for c in candidates if is_codeword(c, params)]


def decode_hd(received: WordLike, params: VtParams) -> HdOutcome:
    """Decode one received word, correcting at most one IDS error."""
    received = as_word(received)
    n, a, m = params.n, params.a, params.m
    N = len(received)
    bits = list(received)
    abar = checksum(received, params)

    if N == n:
        D = (abar - a) % m
        if D == 0:
            return HdOutcome(received, CLEAN)
        if 1 <= D <= n and bits[D - 1] == 1:
            bits[D - 1] = 0
            return HdOutcome(BitWord(bits), CORRECTED_SUBSTITUTION)
        if D > n and bits[m - D - 1] == 0:
            bits[m - D - 1] = 1
            return HdOutcome(BitWord(bits), CORRECTED_SUBSTITUTION)
        return HdOutcome(pad_to_length(received, n), FALLBACK)

    if N == n + 1:
        D = (abar - a) % m
        fixed = _remove_inserted(bits, D, sum(bits), params)
        if fixed:
            return HdOutcome(BitWord(fixed[0]), CORRECTED_INSERTION)
        return HdOutcome(pad_to_length(received, n), FALLBACK)

    if N == n - 1:
        D = (a - abar) % m
        fixed = _reinsert_deleted(bits, D, sum(bits), params)
        if fixed:
            return HdOutcome(BitWord(fixed[0]), CORRECTED_DELETION)
        return HdOutcome(pad_to_length(received, n), FALLBACK)

    return HdOutcome(pad_to_length(received, n), FALLBACK)


class HardDecisionDecoder(ParamsMixin):
    """Estimator-style wrapper around decode_hd. predict() returns decoded
    words; decode() exposes the per-word status as well."""

    def __init__(self, n: int = 20, a: int = 0):
        self.n = n
        self.a = a

    @property
    def params_(self) -> VtParams:
        return VtParams(self.n, self.a)

    def fit(self, X=None, y=None):
        return self

    def decode(self, X) -> list:
        params = self.params_
        return [decode_hd(r, params) for r in as_words(X)]

    def predict(self, X) -> list:
        return [outcome.decoded for outcome in self.decode(X)]
