"""Command-line surface: `vt` with one verb per pipeline stage.

Words travel as one ASCII bitstring per line on stdin/stdout or files.
Validation problems (ours or click's) exit with status 2.
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click
import numpy as np

from .bits import BitWord
from .channel import ChannelSpec, corrupt_word, rng_for_trial
from .code import VtParams, encode
from .errors import VtCodecError
from .harness import (
    ExperimentSpec,
    ablation_suite,
    evaluate,
    gen_dataset,
    read_dataset,
    time_decoders,
)
from .hard_decision import HardDecisionDecoder
from .siso import build_prior, decode_siso
from .tvtd import TvtdConfig, TvtdDecoder, TvtdModel, save_checkpoint, train
from .tvtd.config import desk_config


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _parse_code(text: str) -> VtParams:
    try:
        if "," in text:
            n, a = text.split(",")
            return VtParams(int(n), int(a))
        return VtParams(int(text))
    except (ValueError, VtCodecError) as exc:
        _fail(f"bad --code {text!r}: {exc}")


def _read_words(path) -> list:
    stream = sys.stdin if path == "-" else open(path)
    try:
        return [BitWord.from_text(line) for line in stream if line.strip()]
    finally:
        if stream is not sys.stdin:
            stream.close()


def _write_lines(path, lines):
    stream = sys.stdout if path == "-" else open(path, "w")
    try:
        for line in lines:
            stream.write(line + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()


def _channel_from_options(mode: str, k, rate) -> ChannelSpec:
    if mode == "fixed":
        if k is None:
            _fail("--mode fixed needs --k")
        return ChannelSpec("fixed", k=k)
    if rate is None:
        _fail("--mode iid needs --rate")
    return ChannelSpec("iid", rate=rate)


def _load_config_file(path, n: int) -> TvtdConfig:
    """Flat key=value lines onto TvtdConfig fields."""
    values: dict = {"n": n}
    types = {f.name: f.type for f in dataclasses.fields(TvtdConfig)}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#")[0].strip()
            if not line:
                continue
            if "=" not in line:
                _fail(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in types:
                _fail(f"{path}:{lineno}: unknown config key {key!r}")
            kind = types[key]
            try:
                if kind in ("bool", bool):
                    values[key] = value.lower() in ("1", "true", "yes", "on")
                elif kind in ("float", float):
                    values[key] = float(value)
                else:
                    values[key] = int(value)
            except ValueError as exc:
                _fail(f"{path}:{lineno}: {exc}")
    try:
        return TvtdConfig(**values)
    except (TypeError, ValueError) as exc:
        _fail(f"bad config: {exc}")


@click.group()
def main():
    """Varshamov-Tenengolts codec toolkit."""


@main.command("encode")
@click.option("--code", required=True, help="n or n,a")
@click.option("--in", "in_path", default="-", help="messages, one per line")
@click.option("--out", "out_path", default="-")
def encode_cmd(code, in_path, out_path):
    """Encode length-y messages into codewords."""
    params = _parse_code(code)
    try:
        words = [encode(u, params) for u in _read_words(in_path)]
    except VtCodecError as exc:
        _fail(str(exc))
    _write_lines(out_path, [w.text for w in words])


@main.command("corrupt")
@click.option("--mode", type=click.Choice(["fixed", "iid"]), required=True)
@click.option("--k", type=int, default=None, help="error count (fixed mode)")
@click.option("--rate", type=float, default=None, help="error rate (iid mode)")
@click.option("--seed", type=int, default=0)
@click.option("--in", "in_path", default="-")
@click.option("--out", "out_path", default="-")
@click.option("--log", "log_path", default=None,
              help="write one JSON event log per line here")
def corrupt_cmd(mode, k, rate, seed, in_path, out_path, log_path):
    """Pass words through the IDS channel."""
    spec = _channel_from_options(mode, k, rate)
    try:
        words = _read_words(in_path)
    except VtCodecError as exc:
        _fail(str(exc))
    outputs, logs = [], []
    for i, word in enumerate(words):
        corrupted, log = corrupt_word(word, spec, rng_for_trial(seed, i))
        outputs.append(corrupted.text)
        logs.append(log.to_json())
    _write_lines(out_path, outputs)
    if log_path:
        _write_lines(log_path, logs)


@main.command("decode")
@click.option("--algo", type=click.Choice(["hd", "siso", "tvtd"]), required=True)
@click.option("--code", required=True)
@click.option("--k", type=int, default=None, help="assumed error count (siso)")
@click.option("--rate", type=float, default=None, help="assumed error rate (siso)")
@click.option("--ckpt", default=None, help="checkpoint path (tvtd)")
@click.option("--llr", is_flag=True, help="append per-bit LLRs (siso)")
@click.option("--in", "in_path", default="-")
@click.option("--out", "out_path", default="-")
def decode_cmd(algo, code, k, rate, ckpt, llr, in_path, out_path):
    """Decode received words; hd emits decoded<TAB>status."""
    params = _parse_code(code)
    try:
        words = _read_words(in_path)
    except VtCodecError as exc:
        _fail(str(exc))
    lines = []
    if algo == "hd":
        decoder = HardDecisionDecoder(n=params.n, a=params.a)
        for outcome in decoder.decode(words):
            lines.append(f"{outcome.decoded.text}\t{outcome.status}")
    elif algo == "siso":
        if (k is None) == (rate is None):
            _fail("siso needs exactly one of --k / --rate")
        spec = ChannelSpec("fixed", k=k) if k is not None else ChannelSpec("iid", rate=rate)
        for word in words:
            prior = build_prior(spec, params.n, len(word))
            decoded, values = decode_siso(word, params, prior)
            if llr:
                lines.append(decoded.text + "\t" + ",".join(f"{v:.6g}" for v in values))
            else:
                lines.append(decoded.text)
    else:
        if not ckpt:
            _fail("tvtd needs --ckpt")
        try:
            decoder = TvtdDecoder.load(ckpt, expected_n=params.n)
        except VtCodecError as exc:
            _fail(str(exc))
        limit = decoder.model_.config.table_length
        clipped = [w[:limit] if len(w) > limit else w for w in words]
        lines = [w.text for w in decoder.predict(clipped)]
    _write_lines(out_path, lines)


@main.command("gen")
@click.option("--code", required=True)
@click.option("--mode", type=click.Choice(["fixed", "iid"]), required=True)
@click.option("--k", type=int, default=None)
@click.option("--rate", type=float, default=None)
@click.option("--count", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", required=True)
@click.option("--split", type=click.Choice(["train", "test"]), default=None,
              help="draw groundtruths from one side of the 80/20 codebook split")
@click.option("--split-seed", type=int, default=17)
def gen_cmd(code, mode, k, rate, count, seed, out_path, split, split_seed):
    """Generate a corrupted<TAB>groundtruth dataset."""
    params = _parse_code(code)
    spec = _channel_from_options(mode, k, rate)
    try:
        gen_dataset(params, spec, count, seed, out_path, split=split,
                    split_seed=split_seed)
    except VtCodecError as exc:
        _fail(str(exc))


@main.command("train")
@click.option("--code", required=True)
@click.option("--task", required=True,
              help="fixed:K (0..K errors per sample) or iid:RATE")
@click.option("--config", "config_path", default=None,
              help="key=value hyperparameter file")
@click.option("--data", "data_path", default=None,
              help="existing TSV dataset; otherwise one is generated")
@click.option("--count", type=int, default=20_000,
              help="generated pair count when --data is absent")
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", required=True)
def train_cmd(code, task, config_path, data_path, count, seed, out_path):
    """Train the transformer decoder and write a checkpoint."""
    import torch

    params = _parse_code(code)
    config = (_load_config_file(config_path, params.n) if config_path
              else desk_config(params.n))
    if config.seed != seed and seed != 0:
        config.seed = seed
    if data_path:
        pairs = read_dataset(data_path)
    else:
        kind, _, value = task.partition(":")
        rng = np.random.default_rng(seed)
        pairs = []
        if kind == "fixed":
            kmax = int(value or 1)
            for _ in range(count):
                message = BitWord(rng.integers(0, 2, params.y))
                truth = encode(message, params)
                spec = ChannelSpec("fixed", k=int(rng.integers(0, kmax + 1)))
                received, _ = corrupt_word(truth, spec, rng)
                pairs.append((received, truth))
        elif kind == "iid":
            spec = ChannelSpec("iid", rate=float(value or 0.01))
            for _ in range(count):
                message = BitWord(rng.integers(0, 2, params.y))
                truth = encode(message, params)
                received, _ = corrupt_word(truth, spec, rng)
                pairs.append((received, truth))
        else:
            _fail(f"bad --task {task!r}; expected fixed:K or iid:RATE")
    limit = config.table_length
    pairs = [(r[:limit] if len(r) > limit else r, t) for r, t in pairs]
    torch.manual_seed(config.seed)
    model = TvtdModel(config)
    try:
        curve = train(model, pairs, config)
    except VtCodecError as exc:
        _fail(str(exc))
    save_checkpoint(model, out_path,
                    {"loss_curve": curve, "task": task, "seed": config.seed})
    click.echo(f"saved {out_path} (final loss {curve[-1]:.5f})")


@main.command("eval")
@click.option("--code", required=True)
@click.option("--algo", type=click.Choice(["hd", "siso", "tvtd"]), required=True)
@click.option("--mode", type=click.Choice(["fixed", "iid"]), required=True)
@click.option("--k", type=int, default=None)
@click.option("--rate", type=float, default=None)
@click.option("--trials", type=int, default=10_000)
@click.option("--seed", type=int, default=0)
@click.option("--ckpt", default=None)
@click.option("--split", type=click.Choice(["train", "test"]), default=None)
@click.option("--split-seed", type=int, default=17)
@click.option("--message-only", is_flag=True,
              help="score the y message bits instead of all n")
@click.option("--json", "json_path", default=None, help="write the JSON report here")
def eval_cmd(code, algo, mode, k, rate, trials, seed, ckpt, split, split_seed,
             message_only, json_path):
    """Monte Carlo BER/FER for one decoder/channel cell."""
    params = _parse_code(code)
    channel = _channel_from_options(mode, k, rate)
    try:
        spec = ExperimentSpec(params, channel, algo, trials=trials, seed=seed,
                              ckpt=ckpt, split=split, split_seed=split_seed,
                              message_only=message_only)
        report = evaluate(spec)
    except VtCodecError as exc:
        _fail(str(exc))
    click.echo(report.to_table())
    if json_path:
        with open(json_path, "w") as fh:
            fh.write(report.to_json() + "\n")


@main.command("time")
@click.option("--code", required=True)
@click.option("--mode", type=click.Choice(["fixed", "iid"]), default="fixed")
@click.option("--k", type=int, default=2)
@click.option("--rate", type=float, default=None)
@click.option("--count", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--algos", default="hd,siso", help="comma-separated decoder list")
@click.option("--ckpt", default=None)
@click.option("--json", "json_path", default=None)
def time_cmd(code, mode, k, rate, count, seed, algos, ckpt, json_path):
    """Wall-clock decoder comparison on one shared batch."""
    params = _parse_code(code)
    channel = _channel_from_options(mode, k, rate)
    names = tuple(name.strip() for name in algos.split(",") if name.strip())
    try:
        report = time_decoders(params, channel, count=count, seed=seed,
                               decoders=names, ckpt=ckpt)
    except VtCodecError as exc:
        _fail(str(exc))
    for name, stats in report["decoders"].items():
        click.echo(f"{name}: {stats['seconds']:.3f}s "
                   f"({stats['words_per_second']:.0f} words/s)")
    click.echo(f"hardware: {report['hardware']}")
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")


@main.command("ablate")
@click.option("--kind", type=click.Choice(["window", "statistic", "encoder_depth"]),
              required=True)
@click.option("--code", required=True)
@click.option("--config", "config_path", default=None)
@click.option("--errors", default="1,2", help="comma-separated error counts")
@click.option("--trials", type=int, default=400)
@click.option("--seed", type=int, default=0)
@click.option("--out", "out_path", required=True)
def ablate_cmd(kind, code, config_path, errors, trials, seed, out_path):
    """Train and score a grid of model variants; writes CSV."""
    params = _parse_code(code)
    base = (_load_config_file(config_path, params.n) if config_path
            else desk_config(params.n))
    counts = tuple(int(x) for x in errors.split(","))
    try:
        rows = ablation_suite(kind, base, out_path, error_counts=counts,
                              trials=trials, seed=seed)
    except VtCodecError as exc:
        _fail(str(exc))
    for row in rows:
        click.echo(f"{row.cell} @{row.errors} errors: "
                   f"1-FER={100 * row.one_minus_fer:.1f}%")


if __name__ == "__main__":
    main()
