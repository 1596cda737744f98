"""Soft-in soft-out bitwise-MAP decoding on the joint (syndrome, drift)
trellis.

State after step t is (s, d): s is the running checksum of the first t
transmitted bits mod m, d the cumulative insertions-minus-deletions, so the
received prefix consumed so far has length t + d. One trellis step spends
one transmitted bit and moves d by at most +-1:

  drift +1  an insertion fired before position t: the received pair
            (inserted bit, clean copy of v_t) is consumed,
  drift  0  v_t was transmitted, flipped with probability p_sub,
  drift -1  v_t was deleted, nothing consumed.

Events at one position are mutually exclusive with the clean case carrying
1 - p_ins - p_del - p_sub, exactly the generative story of
channel.corrupt_iid, and the trailing insertion slot of that channel shows
up here as the terminal factor: paths may finish at drift N - n (no final
insertion, weight 1 - p_ins) or N - n - 1 (final insertion, weight
p_ins / 2). The uniform bit prior 1/2 is folded into every step.

All arithmetic is in the log domain; impossible transitions are -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from .base import ParamsMixin
from .bits import BitWord, WordLike, as_word, as_words
from .channel import ChannelSpec
from .code import VtParams
from .errors import NoValidPath, SizeLimit
from .hard_decision import pad_to_length

NEG_INF = float("-inf")


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else NEG_INF


@dataclass(frozen=True)
class ChannelPrior:
    """Per-position event probabilities and the tracked drift range."""

    p_ins: float
    p_del: float
    p_sub: float
    drift_bound: int

    def __post_init__(self):
        if min(self.p_ins, self.p_del, self.p_sub) < 0:
            raise ValueError("event probabilities must be >= 0")
        if self.p_ins + self.p_del + self.p_sub > 1.0 + 1e-12:
            raise ValueError("p_ins + p_del + p_sub must be <= 1")
        if self.drift_bound < 0:
            raise ValueError("drift_bound must be >= 0")

    @property
    def p_clean(self) -> float:
        return max(0.0, 1.0 - self.p_ins - self.p_del - self.p_sub)


class TrellisState(NamedTuple):
    s: int
    d: int


def build_prior(spec: ChannelSpec, n: int, N: int) -> ChannelPrior:
    """Map a channel spec to decoder-side event probabilities.

    iid mode uses the true generative rates; fixed-count mode spreads the
    k expected events uniformly, (k/n) * weight each. The drift bound
    covers the observed length difference with margin.
    """
    if spec.mode == "iid":
        base = spec.rate
    else:
        base = spec.k / n
    w_ins, w_del, w_sub = spec.type_weights
    drift = max(4, abs(N - n) + 2)
    return ChannelPrior(base * w_ins, base * w_del, base * w_sub, drift)


def gamma(prev: TrellisState, nxt: TrellisState, bit: int, emitted, prior: ChannelPrior,
          t: int, m: int, bit_prior: float = 0.5) -> float:
    """Log-probability of one trellis transition; -inf when incompatible.

    `emitted` is the received segment consumed by the step: two bits for
    drift +1 (inserted bit then the clean copy of v_t), one bit for drift
    0, empty for drift -1. `bit_prior` is Pr[v_t = bit], uniform unless an
    outer code supplies extrinsic information.
    """
    emitted = list(as_word(emitted))
    delta = nxt.d - prev.d
    if nxt.s != (prev.s + t * bit) % m:
        return NEG_INF
    if abs(delta) > 1 or len(emitted) != delta + 1:
        return NEG_INF
    lp_prior = _log(bit_prior)
    if delta == 1:
        if emitted[1] != bit:
            return NEG_INF
        return lp_prior + _log(prior.p_ins) + _log(0.5)
    if delta == 0:
        p = prior.p_clean if emitted[0] == bit else prior.p_sub
        return lp_prior + _log(p)
    return lp_prior + _log(prior.p_del)


def _bit_prior_table(n: int, bit_priors) -> np.ndarray:
    """(n, 2) table of log Pr[v_t = b]; uniform 1/2 unless supplied."""
    if bit_priors is None:
        return np.full((n, 2), _log(0.5))
    table = np.asarray(bit_priors, dtype=float)
    if table.shape != (n, 2):
        raise ValueError(f"bit_priors must have shape ({n}, 2)")
    if np.any(table < 0) or not np.allclose(table.sum(axis=1), 1.0, atol=1e-9):
        raise ValueError("bit_priors rows must be probabilities summing to 1")
    with np.errstate(divide="ignore"):
        return np.log(table)


def _step_weights(received: np.ndarray, t: int, drifts: np.ndarray, prior: ChannelPrior,
                  lp_bit: np.ndarray):
    """Per-source-drift log weights for each (bit, delta) at step t.

    Returns w0[b], wp[b] as vectors over the source drift d' (delta 0 and
    +1 respectively) plus wdel[b]. Indices that would consume a received
    bit out of range get -inf. lp_bit[b] = log Pr[v_t = b].
    """
    N = len(received)
    lp_clean = _log(prior.p_clean)
    lp_sub = _log(prior.p_sub)
    lp_ins = _log(prior.p_ins)
    lp_del = _log(prior.p_del)

    w0 = np.full((2, len(drifts)), NEG_INF)
    wp = np.full((2, len(drifts)), NEG_INF)
    j = t + drifts  # received index consumed on a delta=0 step, 1-based
    valid0 = (j >= 1) & (j <= N)
    jp = j + 1  # transmitted copy on a delta=+1 step
    validp = (jp >= 1) & (jp <= N)
    for b in (0, 1):
        match0 = np.zeros(len(drifts), dtype=bool)
        match0[valid0] = received[j[valid0] - 1] == b
        w0[b, valid0 & match0] = lp_bit[b] + lp_clean
        w0[b, valid0 & ~match0] = lp_bit[b] + lp_sub
        matchp = np.zeros(len(drifts), dtype=bool)
        matchp[validp] = received[jp[validp] - 1] == b
        wp[b, validp & matchp] = lp_bit[b] + lp_ins + _log(0.5)
    wdel = np.array([lp_bit[0] + lp_del, lp_bit[1] + lp_del])
    return w0, wp, wdel


def _lse(stack: list) -> np.ndarray:
    out = stack[0]
    for arr in stack[1:]:
        out = np.logaddexp(out, arr)
    return out


def _lse_flat(values: np.ndarray) -> float:
    top = values.max()
    if top == NEG_INF:
        return NEG_INF
    return float(top + np.log(np.exp(values - top).sum()))


def _terminal(params: VtParams, prior: ChannelPrior, N: int, drifts: np.ndarray,
              m: int) -> np.ndarray:
    """log beta_n: syndrome must equal a; drift pays the final insertion slot."""
    beta = np.full((m, len(drifts)), NEG_INF)
    for idx, d in enumerate(drifts):
        if d == N - params.n:
            beta[params.a, idx] = _log(1.0 - prior.p_ins)
        elif d == N - params.n - 1:
            beta[params.a, idx] = _log(prior.p_ins) + _log(0.5)
    return beta


def _shifted(arr: np.ndarray, shift: int) -> np.ndarray:
    return np.roll(arr, shift, axis=0) if shift else arr


def forward_backward_full(received: WordLike, params: VtParams, prior: ChannelPrior,
                          bit_priors=None):
    """Run both recursions; return (llr, per-bit joint log-probs, evidence).

    joint[t, b] = log P[r, v_{t+1} = b]; evidence = log P[r]. bit_priors,
    when given, is an (n, 2) table of Pr[v_t = b] replacing the uniform
    1/2 (extrinsic input from an outer code). Raises NoValidPath when no
    trellis path explains the received word.
    """
    received = as_word(received)
    n, m = params.n, params.m
    N = len(received)
    delta_max = prior.drift_bound
    if abs(N - n) > delta_max:
        raise NoValidPath(f"length difference {N - n} exceeds drift bound {delta_max}")
    drifts = np.arange(-delta_max, delta_max + 1)
    D = len(drifts)
    r = received.to_array().astype(np.int64)
    lp_bits = _bit_prior_table(n, bit_priors)

    weights = [_step_weights(r, t, drifts, prior, lp_bits[t - 1])
               for t in range(1, n + 1)]

    alpha = np.full((n + 1, m, D), NEG_INF)
    alpha[0, 0, delta_max] = 0.0  # (s=0, d=0)
    for t in range(1, n + 1):
        w0, wp, wdel = weights[t - 1]
        terms = []
        for b in (0, 1):
            rolled = _shifted(alpha[t - 1], (t * b) % m)
            stay = rolled + w0[b][None, :]
            up = np.full((m, D), NEG_INF)
            up[:, 1:] = rolled[:, :-1] + wp[b][None, :-1]
            down = np.full((m, D), NEG_INF)
            down[:, :-1] = rolled[:, 1:] + wdel[b]
            terms += [stay, up, down]
        alpha[t] = _lse(terms)

    beta = np.full((n + 1, m, D), NEG_INF)
    beta[n] = _terminal(params, prior, N, drifts, m)
    for t in range(n, 0, -1):
        w0, wp, wdel = weights[t - 1]
        terms = []
        for b in (0, 1):
            shifted = _shifted(beta[t], -((t * b) % m))
            stay = shifted + w0[b][None, :]
            up = np.full((m, D), NEG_INF)
            up[:, :-1] = shifted[:, 1:] + wp[b][None, :-1]
            down = np.full((m, D), NEG_INF)
            down[:, 1:] = shifted[:, :-1] + wdel[b]
            terms += [stay, up, down]
        beta[t - 1] = _lse(terms)

    evidence = _lse_flat((alpha[n] + beta[n]).ravel())
    if evidence == NEG_INF:
        raise NoValidPath("received word has zero probability under every hypothesis")

    joint = np.empty((n, 2))
    for t in range(1, n + 1):
        w0, wp, wdel = weights[t - 1]
        for b in (0, 1):
            bshift = _shifted(beta[t], -((t * b) % m))
            cells = [
                alpha[t - 1] + w0[b][None, :] + bshift,
                alpha[t - 1][:, :-1] + wp[b][None, :-1] + bshift[:, 1:],
                alpha[t - 1][:, 1:] + wdel[b] + bshift[:, :-1],
            ]
            joint[t - 1, b] = _lse_flat(np.concatenate([c.ravel() for c in cells]))
    llr = joint[:, 0] - joint[:, 1]
    return llr, joint, evidence


def forward_backward(received: WordLike, params: VtParams, prior: ChannelPrior,
                     bit_priors=None) -> np.ndarray:
    """Per-position log-posterior ratios L(v_t) = log P[v_t=0|r] - log P[v_t=1|r]."""
    llr, _, _ = forward_backward_full(received, params, prior, bit_priors)
    return llr


def decode_siso(received: WordLike, params: VtParams, prior: ChannelPrior,
                bit_priors=None):
    """Sign decision on the LLRs; ties decode to 0.

    The bitwise-MAP word need not itself be a codeword. When no trellis
    path exists the hard-decision fallback shape (truncate/zero-pad) is
    returned with all-zero LLRs.
    """
    received = as_word(received)
    try:
        llr = forward_backward(received, params, prior, bit_priors)
    except NoValidPath:
        return pad_to_length(received, params.n), np.zeros(params.n)
    bits = [0 if v >= 0 else 1 for v in llr]
    return BitWord(bits), llr


def exact_map_oracle(received: WordLike, params: VtParams, prior: ChannelPrior,
                     bit_priors=None) -> np.ndarray:
    """Brute-force bitwise posterior by codeword enumeration.

    Enumerates every length-n word with checksum a, scores P[r | v] with an
    alignment DP over the identical event model (including the trailing
    insertion slot), and marginalizes per bit. Independent of the trellis
    code path; used as its oracle.
    """
    received = as_word(received)
    n = params.n
    if n > 12:
        raise SizeLimit("exact enumeration limited to n <= 12")
    words = np.array(
        [w for w in product((0, 1), repeat=n)
         if sum(i * b for i, b in enumerate(w, start=1)) % params.m == params.a],
        dtype=np.int64,
    )
    lik = _alignment_likelihoods(words, received.to_array().astype(np.int64), prior)
    if bit_priors is not None:
        # posterior ratio needs P[r|v] * prod_t P[v_t]; uniform priors cancel
        lp_bits = _bit_prior_table(n, bit_priors)
        word_prior = np.where(words == 0, lp_bits[None, :, 0], lp_bits[None, :, 1])
        lik = lik * np.exp(word_prior.sum(axis=1))
    llr = np.empty(n)
    for t in range(n):
        p0 = lik[words[:, t] == 0].sum()
        p1 = lik[words[:, t] == 1].sum()
        llr[t] = _log(p0) - _log(p1)
    return llr


def _alignment_likelihoods(words: np.ndarray, r: np.ndarray, prior: ChannelPrior) -> np.ndarray:
    """P[r | v] for every row of `words`, linear domain, vectorized over rows."""
    K, n = words.shape
    N = len(r)
    A = np.zeros((n + 1, N + 1, K))
    A[0, 0] = 1.0
    for i in range(1, n + 1):
        vi = words[:, i - 1]
        for j in range(0, N + 1):
            acc = A[i - 1, j] * prior.p_del
            if j >= 1:
                match = (r[j - 1] == vi)
                acc = acc + A[i - 1, j - 1] * np.where(match, prior.p_clean, prior.p_sub)
            if j >= 2:
                acc = acc + A[i - 1, j - 2] * (prior.p_ins * 0.5) * (r[j - 1] == vi)
            A[i, j] = acc
    out = A[n, N] * (1.0 - prior.p_ins)
    if N >= 1:
        out = out + A[n, N - 1] * prior.p_ins * 0.5
    return out


class SisoDecoder(ParamsMixin):
    """Estimator-style wrapper: bitwise-MAP decoding with a fixed channel
    assumption. predict() returns decoded words; predict_llr() the soft
    outputs."""

    def __init__(self, n: int = 20, a: int = 0, mode: str = "fixed", k: int = 1,
                 rate: float = 0.0, type_weights=(1 / 3, 1 / 3, 1 / 3)):
        self.n = n
        self.a = a
        self.mode = mode
        self.k = k
        self.rate = rate
        self.type_weights = type_weights

    @property
    def params_(self) -> VtParams:
        return VtParams(self.n, self.a)

    @property
    def spec_(self) -> ChannelSpec:
        return ChannelSpec(self.mode, k=self.k, rate=self.rate,
                           type_weights=tuple(self.type_weights))

    def fit(self, X=None, y=None):
        return self

    def _prior_for(self, received: BitWord) -> ChannelPrior:
        return build_prior(self.spec_, self.n, len(received))

    def predict(self, X) -> list:
        params = self.params_
        return [decode_siso(r, params, self._prior_for(r))[0] for r in as_words(X)]

    def predict_llr(self, X) -> list:
        params = self.params_
        return [decode_siso(r, params, self._prior_for(r))[1] for r in as_words(X)]
