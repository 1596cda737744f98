"""Insertion/deletion/substitution channel models.

Two regimes: `corrupt_fixed` applies an exact number of events sequentially
to the evolving sequence; `corrupt_iid` scans transmitted positions and
draws at most one event per position (plus one trailing insertion slot).
Both return the corrupted word together with a CorruptionLog recording every
event, which is the ground truth for the length law N = n + ins - del.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .base import ParamsMixin
from .bits import BitWord, WordLike, as_word, as_words

INSERTION = "insertion"
DELETION = "deletion"
SUBSTITUTION = "substitution"
KINDS = (INSERTION, DELETION, SUBSTITUTION)


@dataclass(frozen=True)
class ErrorEvent:
    """One channel event. `position` is 1-based into the sequence state at
    the moment the event is applied; `inserted_bit` is set only for
    insertions."""

    kind: str
    position: int
    inserted_bit: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if (self.inserted_bit is not None) != (self.kind == INSERTION):
            raise ValueError("inserted_bit present iff kind is insertion")


@dataclass
class CorruptionLog:
    events: list = field(default_factory=list)
    source_length: int = 0
    result_length: int = 0

    def counts(self) -> dict:
        out = {k: 0 for k in KINDS}
        for e in self.events:
            out[e.kind] += 1
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "events": [
                    {"kind": e.kind, "position": e.position}
                    | ({"inserted_bit": e.inserted_bit} if e.kind == INSERTION else {})
                    for e in self.events
                ],
                "source_length": self.source_length,
                "result_length": self.result_length,
            },
            separators=(",", ":"),
        )


@dataclass(frozen=True)
class ChannelSpec:
    """Channel configuration. mode='fixed' uses k exact events per word;
    mode='iid' corrupts each position independently at `rate`."""

    mode: str
    k: int = 0
    rate: float = 0.0
    type_weights: tuple = (1 / 3, 1 / 3, 1 / 3)

    def __post_init__(self):
        if self.mode == "fixed_count":  # accepted alias
            object.__setattr__(self, "mode", "fixed")
        if self.mode not in ("fixed", "iid"):
            raise ValueError(f"mode must be 'fixed' or 'iid', got {self.mode!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("rate must be in [0, 1]")
        if len(self.type_weights) != 3 or abs(sum(self.type_weights) - 1.0) > 1e-9:
            raise ValueError("type_weights must be 3 probabilities summing to 1")


def _pick_kind(rng: np.random.Generator, type_weights) -> str:
    u = rng.random()
    if u < type_weights[0]:
        return INSERTION
    if u < type_weights[0] + type_weights[1]:
        return DELETION
    return SUBSTITUTION


def corrupt_fixed(word: WordLike, k: int, rng: np.random.Generator,
                  type_weights=(1 / 3, 1 / 3, 1 / 3)):
    """Apply exactly k events, each drawn against the mutated sequence.

    Substitution flips the bit so every drawn event realizes an error.
    A deletion drawn on an empty sequence (unreachable for the code sizes
    in use) resamples the kind.
    """
    word = as_word(word)
    if k < 0:
        raise ValueError("k must be >= 0")
    state = list(word)
    log = CorruptionLog(source_length=len(word))
    for _ in range(k):
        kind = _pick_kind(rng, type_weights)
        while kind == DELETION and not state:
            kind = _pick_kind(rng, type_weights)
        if kind == INSERTION:
            pos = int(rng.integers(1, len(state) + 2))
            bit = int(rng.integers(0, 2))
            state.insert(pos - 1, bit)
            log.events.append(ErrorEvent(INSERTION, pos, bit))
        elif kind == DELETION:
            pos = int(rng.integers(1, len(state) + 1))
            del state[pos - 1]
            log.events.append(ErrorEvent(DELETION, pos))
        else:
            pos = int(rng.integers(1, len(state) + 1))
            state[pos - 1] ^= 1
            log.events.append(ErrorEvent(SUBSTITUTION, pos))
    log.result_length = len(state)
    return BitWord(state), log


def corrupt_iid(word: WordLike, rate: float, rng: np.random.Generator,
                type_weights=(1 / 3, 1 / 3, 1 / 3)):
    """Independent per-position corruption.

    Scanning transmitted positions 1..n, at most one event fires per
    position (probability `rate`, kind by `type_weights`); an insertion
    lands immediately before the scanned bit. One extra insertion-only
    slot after position n fires with probability rate * w_ins.
    """
    word = as_word(word)
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must be in [0, 1]")
    out: list = []
    log = CorruptionLog(source_length=len(word))
    for bit in word:
        if rng.random() < rate:
            kind = _pick_kind(rng, type_weights)
            if kind == INSERTION:
                ins = int(rng.integers(0, 2))
                out.append(ins)
                log.events.append(ErrorEvent(INSERTION, len(out), ins))
                out.append(bit)
            elif kind == DELETION:
                log.events.append(ErrorEvent(DELETION, len(out) + 1))
            else:
                out.append(bit ^ 1)
                log.events.append(ErrorEvent(SUBSTITUTION, len(out)))
        else:
            out.append(bit)
    if rng.random() < rate * type_weights[0]:
        ins = int(rng.integers(0, 2))
        out.append(ins)
        log.events.append(ErrorEvent(INSERTION, len(out), ins))
    log.result_length = len(out)
    return BitWord(out), log


def edit_distance(a: WordLike, b: WordLike) -> int:
    """Levenshtein distance with unit insertion/deletion/substitution costs."""
    a, b = as_word(a), as_word(b)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


class IdsChannel(ParamsMixin):
    """Estimator-style wrapper: transform clean words into corrupted words.

    Each input word gets its own RNG stream derived from (seed, index), so
    results do not depend on batch order or size. Logs from the last
    transform are kept on `logs_`.
    """

    def __init__(self, mode: str = "iid", rate: float = 0.0, k: int = 0,
                 type_weights=(1 / 3, 1 / 3, 1 / 3), seed: int = 0):
        self.mode = mode
        self.rate = rate
        self.k = k
        self.type_weights = type_weights
        self.seed = seed

    @property
    def spec_(self) -> ChannelSpec:
        return ChannelSpec(self.mode, k=self.k, rate=self.rate,
                           type_weights=tuple(self.type_weights))

    def fit(self, X=None, y=None):
        return self

    def transform(self, X) -> list:
        spec = self.spec_
        out = []
        self.logs_ = []
        for i, word in enumerate(as_words(X)):
            rng = rng_for_trial(self.seed, i)
            corrupted, log = corrupt_word(word, spec, rng)
            out.append(corrupted)
            self.logs_.append(log)
        return out


def corrupt_word(word: WordLike, spec: ChannelSpec, rng: np.random.Generator):
    if spec.mode == "fixed":
        return corrupt_fixed(word, spec.k, rng, spec.type_weights)
    return corrupt_iid(word, spec.rate, rng, spec.type_weights)


def rng_for_trial(seed: int, index: int) -> np.random.Generator:
    """Independent per-trial stream: same (seed, index) -> same draws,
    regardless of how many other trials run or in which order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
