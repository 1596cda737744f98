"""Experiment orchestration: dataset generation, decoder evaluation,
timing, and the ablation grids.

Every trial draws from its own RNG stream keyed by (seed, trial index),
so results are independent of execution order and parallel evaluation
would aggregate to identical reports.
"""

from __future__ import annotations

import csv
import platform
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import torch

from .bits import BitWord
from .channel import ChannelSpec, corrupt_word, rng_for_trial
from .code import VtParams, encode, extract_message, split_codebook
from .errors import VtCodecError
from .hard_decision import HardDecisionDecoder
from .metrics import MetricsReport, count_errors
from .siso import SisoDecoder
from .tvtd import TvtdConfig, TvtdDecoder, TvtdModel, train
from .tvtd.embedding import words_to_tensor

DECODERS = ("hd", "siso", "tvtd")


@dataclass
class ExperimentSpec:
    params: VtParams
    channel: ChannelSpec
    decoder: str
    trials: int = 10_000
    seed: int = 0
    ckpt: str | None = None
    split: str | None = None  # None, 'train', or 'test'
    split_fraction: float = 0.8
    split_seed: int = 17
    message_only: bool = False

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise VtCodecError(f"unknown decoder {self.decoder!r}; pick from {DECODERS}")
        if self.trials < 1:
            raise VtCodecError("trials must be >= 1")
        if self.decoder == "tvtd" and not self.ckpt:
            raise VtCodecError("tvtd evaluation needs a checkpoint path")
        if self.split not in (None, "train", "test"):
            raise VtCodecError("split must be omitted, 'train', or 'test'")


def _groundtruth_pool(spec: ExperimentSpec):
    """Codeword pool to draw groundtruths from; None means sample fresh
    random messages per trial."""
    if spec.split is None:
        return None
    train_words, test_words = split_codebook(
        spec.params, spec.split_fraction, seed=spec.split_seed
    )
    return train_words if spec.split == "train" else test_words


def draw_trial(spec: ExperimentSpec, index: int, pool=None):
    """(groundtruth, received) for one trial, deterministically from
    (seed, index)."""
    rng = rng_for_trial(spec.seed, index)
    if pool is None:
        message = BitWord(rng.integers(0, 2, spec.params.y))
        truth = encode(message, spec.params)
    else:
        truth = pool[int(rng.integers(len(pool)))]
    received, _ = corrupt_word(truth, spec.channel, rng)
    return truth, received


def make_decoder(spec: ExperimentSpec):
    n, a = spec.params.n, spec.params.a
    if spec.decoder == "hd":
        return HardDecisionDecoder(n=n, a=a)
    if spec.decoder == "siso":
        return SisoDecoder(n=n, a=a, mode=spec.channel.mode, k=spec.channel.k,
                           rate=spec.channel.rate,
                           type_weights=spec.channel.type_weights)
    return TvtdDecoder.load(spec.ckpt, expected_n=n)


def evaluate(spec: ExperimentSpec) -> MetricsReport:
    """Run the trials and collect BER/FER.

    Decoding never mutates datasets or checkpoints. For the transformer
    decoder, received words longer than its position table are truncated
    to fit and counted in the report.
    """
    pool = _groundtruth_pool(spec)
    trials = [draw_trial(spec, i, pool) for i in range(spec.trials)]
    truths = [t for t, _ in trials]
    received = [r for _, r in trials]
    decoder = make_decoder(spec)

    truncated = 0
    if spec.decoder == "tvtd":
        limit = decoder.model_.config.table_length
        clipped = []
        for r in received:
            if len(r) > limit:
                clipped.append(r[:limit])
                truncated += 1
            else:
                clipped.append(r)
        received = clipped

    start = time.perf_counter()
    decoded = decoder.predict(received)
    wall = time.perf_counter() - start

    if spec.message_only:
        decoded = [extract_message(w, spec.params) for w in decoded]
        truths = [extract_message(w, spec.params) for w in truths]
    bit_errors = frame_errors = 0
    for d, t in zip(decoded, truths):
        wrong, frame = count_errors(d, t)
        bit_errors += wrong
        frame_errors += frame
    return MetricsReport(
        decoder=spec.decoder,
        n=spec.params.n,
        trials=spec.trials,
        bit_errors=bit_errors,
        frame_errors=frame_errors,
        seed=spec.seed,
        channel={
            "mode": spec.channel.mode,
            "k": spec.channel.k,
            "rate": spec.channel.rate,
        },
        message_only=spec.message_only,
        bits_per_frame=spec.params.y if spec.message_only else spec.params.n,
        wall_clock_s=wall,
        truncated_inputs=truncated,
    )


def gen_dataset(params: VtParams, channel: ChannelSpec, count: int, seed: int,
                out_path, split: str | None = None, split_fraction: float = 0.8,
                split_seed: int = 17) -> int:
    """Write `count` corrupted<TAB>groundtruth lines; returns pair count.

    With split='train'/'test', groundtruths are drawn only from that side
    of the disjoint codebook partition (same split_seed => same partition
    across invocations).
    """
    if count < 1:
        raise VtCodecError("count must be >= 1")
    pool = None
    if split is not None:
        if split not in ("train", "test"):
            raise VtCodecError("split must be 'train' or 'test'")
        sides = split_codebook(params, split_fraction, seed=split_seed)
        pool = sides[0] if split == "train" else sides[1]
    out_path = Path(out_path)
    with open(out_path, "w") as fh:
        for i in range(count):
            rng = rng_for_trial(seed, i)
            if pool is None:
                truth = encode(BitWord(rng.integers(0, 2, params.y)), params)
            else:
                truth = pool[int(rng.integers(len(pool)))]
            received, _ = corrupt_word(truth, channel, rng)
            fh.write(f"{received.text}\t{truth.text}\n")
    return count


def read_dataset(path) -> list:
    """TSV pairs back into BitWord tuples."""
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            corrupted, truth = line.split("\t")
            pairs.append((BitWord.from_text(corrupted), BitWord.from_text(truth)))
    return pairs


def time_decoders(params: VtParams, channel: ChannelSpec, count: int = 1000,
                  seed: int = 0, decoders=("hd", "siso"), ckpt=None) -> dict:
    """Wall-clock comparison over one shared batch of corrupted words."""
    words = []
    for i in range(count):
        rng = rng_for_trial(seed, i)
        truth = encode(BitWord(rng.integers(0, 2, params.y)), params)
        received, _ = corrupt_word(truth, channel, rng)
        words.append(received)
    report = {
        "count": count,
        "n": params.n,
        "channel": {"mode": channel.mode, "k": channel.k, "rate": channel.rate},
        "hardware": f"{platform.machine()} / {platform.processor() or 'unknown cpu'} "
                    f"/ {torch.get_num_threads()} torch threads",
        "decoders": {},
    }
    for name in decoders:
        spec = ExperimentSpec(params, channel, name, trials=1, seed=seed, ckpt=ckpt)
        decoder = make_decoder(spec)
        start = time.perf_counter()
        decoder.predict(words)
        elapsed = time.perf_counter() - start
        report["decoders"][name] = {
            "seconds": elapsed,
            "words_per_second": count / elapsed if elapsed > 0 else float("inf"),
        }
    return report


@dataclass
class AblationResult:
    cell: str
    errors: int
    one_minus_ber: float
    one_minus_fer: float


def _train_model(config: TvtdConfig, pairs) -> TvtdModel:
    torch.manual_seed(config.seed)
    model = TvtdModel(config)
    train(model, pairs, config)
    return model


def _eval_fixed_errors(model: TvtdModel, words, k: int, seed: int, trials: int):
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(trials):
        truth = words[int(rng.integers(len(words)))]
        received, _ = corrupt_word(truth, ChannelSpec("fixed", k=k), rng)
        limit = model.config.table_length
        pairs.append((received[:limit] if len(received) > limit else received, truth))
    bits, lengths = words_to_tensor([p[0] for p in pairs])
    tbits, _ = words_to_tensor([p[1] for p in pairs])
    out = model.greedy_decode(bits, lengths)
    wrong_bits = int((out != tbits).sum())
    wrong_frames = int((out != tbits).any(dim=1).sum())
    n = model.config.n
    return 1 - wrong_bits / (trials * n), 1 - wrong_frames / trials


def ablation_suite(kind: str, base: TvtdConfig, out_csv, train_pairs=None,
                   eval_words=None, error_counts=(1, 2), trials: int = 400,
                   seed: int = 0, pairs_per_word: int = 2) -> list:
    """Train/evaluate a grid of model variants; emits CSV and returns rows.

    kind='window' sweeps the window size (including 'all' = pure causal);
    kind='statistic' toggles the statistic embedding on memory/target
    sides (w/w, w/wo, wo/w, wo/wo); kind='encoder_depth' compares the
    direct-embedding memory against a transformer encoder stack.
    """
    if kind not in ("window", "statistic", "encoder_depth"):
        raise VtCodecError(f"unknown ablation kind {kind!r}")
    params = VtParams(base.n)
    if eval_words is None or train_pairs is None:
        train_words, test_words = split_codebook(params, 0.8, seed=17)
        if eval_words is None:
            eval_words = test_words
        if train_pairs is None:
            rng = np.random.default_rng(seed)
            kmax = max(error_counts)
            train_pairs = []
            for _ in range(pairs_per_word):
                for v in train_words:
                    k = int(rng.integers(0, kmax + 1))
                    r, _ = corrupt_word(v, ChannelSpec("fixed", k=k), rng)
                    train_pairs.append((r, v))

    if kind == "window":
        small = [w for w in (1, 2, 4, 8, 16, 32) if w <= base.n]
        cells = [(f"w={w}", replace(base, window=w)) for w in small]
        cells.append(("w=all", replace(base, window=base.n)))
    elif kind == "statistic":
        cells = [
            ("w/w", replace(base, stat_memory=True, stat_target=True)),
            ("w/wo", replace(base, stat_memory=True, stat_target=False)),
            ("wo/w", replace(base, stat_memory=False, stat_target=True)),
            ("wo/wo", replace(base, stat_memory=False, stat_target=False)),
        ]
    else:
        cells = [
            ("enc=0", replace(base, encoder_layers=0)),
            ("enc=3", replace(base, encoder_layers=3)),
        ]

    rows = []
    for cell, config in cells:
        model = _train_model(config, train_pairs)
        for k in error_counts:
            ber1, fer1 = _eval_fixed_errors(model, eval_words, k, seed, trials)
            rows.append(AblationResult(cell, k, ber1, fer1))

    out_csv = Path(out_csv)
    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cell", "errors", "one_minus_ber", "one_minus_fer"])
        for row in rows:
            writer.writerow([row.cell, row.errors,
                             f"{row.one_minus_ber:.6f}", f"{row.one_minus_fer:.6f}"])
    return rows
