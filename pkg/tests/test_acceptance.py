"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`. The end-to-end training
criterion dominates the runtime (tens of minutes on a small CPU); the rest
complete in a few minutes combined.
"""

import math
import time

import numpy as np
import pytest
import torch

from vtcodec.bits import BitWord
from vtcodec.channel import ChannelSpec, corrupt_fixed, corrupt_iid, rng_for_trial
from vtcodec.code import (
    VtParams,
    codebook,
    encode,
    enumerate_messages,
    enumerate_vt_set,
    extract_message,
    is_codeword,
    split_codebook,
)
from vtcodec.harness import ExperimentSpec, evaluate, time_decoders
from vtcodec.hard_decision import decode_hd
from vtcodec.siso import build_prior, decode_siso, exact_map_oracle, forward_backward
from vtcodec.tvtd import (
    CodewordEmbedding,
    TvtdConfig,
    TvtdModel,
    build_combined_mask,
    frame_accuracy,
    token_accuracy,
    train,
    words_to_tensor,
)
from vtcodec.tvtd.training import pairs_to_tensors

P20 = VtParams(20, 0)
P8 = VtParams(8, 0)


def record(name: str, passed: bool, detail: str):
    print(f"\nACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


class TestC01HdExhaustive:
    def test_hd_single_error_exhaustive_vt20(self):
        start = time.time()
        failures = 0
        checks = 0
        for v in codebook(P20):
            bits = list(v)
            variants = []
            for pos in range(21):
                variants.append(bits[:pos] + [0] + bits[pos:])
                variants.append(bits[:pos] + [1] + bits[pos:])
            for pos in range(20):
                variants.append(bits[:pos] + bits[pos + 1:])
            for pos in range(20):
                flipped = bits.copy()
                flipped[pos] ^= 1
                variants.append(flipped)
            for received in variants:
                checks += 1
                if decode_hd(received, P20).decoded != v:
                    failures += 1
        elapsed = time.time() - start
        record(
            "C01 HD exhaustive single-error (VT(20,14))",
            failures == 0 and elapsed < 300,
            f"{checks} decodes, {failures} failures, {elapsed:.0f}s",
        )


class TestC02EncoderFidelity:
    def test_encoder_example_and_roundtrip(self):
        start = time.time()
        example_ok = encode("11011", VtParams(10, 0)).text == "0010101111"
        failures = 0
        seen = set()
        for u in enumerate_messages(P20):
            v = encode(u, P20)
            if not is_codeword(v, P20) or extract_message(v, P20) != u:
                failures += 1
            seen.add(v.bits)
        elapsed = time.time() - start
        record(
            "C02 encoder fidelity",
            example_ok and failures == 0 and len(seen) == 2 ** 14 and elapsed < 60,
            f"example={'ok' if example_ok else 'BAD'}, {failures} roundtrip failures, "
            f"{len(seen)} distinct codewords, {elapsed:.0f}s",
        )


class TestC03SisoOracleEquivalence:
    def test_forward_backward_matches_enumeration(self):
        start = time.time()
        vt8 = enumerate_vt_set(P8)
        rng = np.random.default_rng(77)
        rates = (0.02, 0.05, 0.10)
        worst = 0.0
        trials = 0
        mismatched_inf = 0
        while trials < 1000:
            rate = float(rates[trials % len(rates)])
            v = vt8[int(rng.integers(len(vt8)))]
            received, _ = corrupt_iid(v, rate, rng)
            prior = build_prior(ChannelSpec("iid", rate=rate), 8, len(received))
            fb = forward_backward(received, P8, prior)
            oracle = exact_map_oracle(received, P8, prior)
            if not (np.array_equal(np.isposinf(fb), np.isposinf(oracle))
                    and np.array_equal(np.isneginf(fb), np.isneginf(oracle))):
                mismatched_inf += 1
            finite = np.isfinite(fb) & np.isfinite(oracle)
            if finite.any():
                worst = max(worst, float(np.abs(fb[finite] - oracle[finite]).max()))
            trials += 1
        elapsed = time.time() - start
        record(
            "C03 SISO oracle equivalence (VT(8,4))",
            worst < 1e-6 and mismatched_inf == 0 and elapsed < 600,
            f"{trials} trials, worst |diff|={worst:.2e}, "
            f"{mismatched_inf} infinity mismatches, {elapsed:.0f}s",
        )


class TestC04SisoFrameAccuracy:
    def test_single_error_frame_accuracy(self):
        start = time.time()
        book = codebook(P20)
        spec = ChannelSpec("fixed", k=1)
        ok = 0
        trials = 10_000
        for i in range(trials):
            rng = rng_for_trial(1001, i)
            v = book[int(rng.integers(len(book)))]
            received, _ = corrupt_fixed(v, 1, rng)
            prior = build_prior(spec, 20, len(received))
            decoded, _ = decode_siso(received, P20, prior)
            ok += decoded == v
        accuracy = ok / trials
        elapsed = time.time() - start
        record(
            "C04a SISO 1-error 1-FER (VT(20,14))",
            0.965 <= accuracy <= 1.0,
            f"1-FER={100 * accuracy:.1f}% over {trials} trials "
            f"(band [96.5, 100]), {elapsed:.0f}s",
        )

    def test_two_error_frame_accuracy_wide_band(self):
        start = time.time()
        book = codebook(P20)
        spec = ChannelSpec("fixed", k=2)
        ok = 0
        trials = 10_000
        for i in range(trials):
            rng = rng_for_trial(1002, i)
            v = book[int(rng.integers(len(book)))]
            received, _ = corrupt_fixed(v, 2, rng)
            prior = build_prior(spec, 20, len(received))
            decoded, _ = decode_siso(received, P20, prior)
            ok += decoded == v
        accuracy = ok / trials
        elapsed = time.time() - start
        record(
            "C04b SISO 2-error 1-FER wide band",
            0.08 <= accuracy <= 0.20,
            f"1-FER={100 * accuracy:.1f}% over {trials} trials "
            f"(band [8, 20]), {elapsed:.0f}s",
        )


class TestC05GradientCheck:
    def test_gradients_match_central_differences(self):
        start = time.time()
        torch.manual_seed(5)
        cfg = TvtdConfig(n=10, d_model=16, n_layers=2, n_heads=2, window=4,
                         max_drift=4, epochs=1, batch=4, seed=5)
        model = TvtdModel(cfg).double()
        book = codebook(VtParams(10))
        rng = np.random.default_rng(5)
        pairs = [(corrupt_fixed(v, 1, rng)[0], v) for v in book[:6]]
        bits, lengths, targets = pairs_to_tensors(pairs, 10)
        loss_fn = torch.nn.CrossEntropyLoss()

        def loss_value():
            logits = model.forward_teacher(bits, lengths, targets)
            return loss_fn(logits.reshape(-1, 2), targets.reshape(-1))

        loss_value().backward()
        gen = np.random.default_rng(6)
        named = list(model.named_parameters())
        worst = 0.0
        informative = 0
        for _ in range(60):
            name, p = named[int(gen.integers(len(named)))]
            flat = p.detach().view(-1)
            idx = int(gen.integers(flat.numel()))
            h = 1e-5
            with torch.no_grad():
                orig = flat[idx].item()
                flat[idx] = orig + h
                up = loss_value().item()
                flat[idx] = orig - h
                down = loss_value().item()
                flat[idx] = orig
            fd = (up - down) / (2 * h)
            an = p.grad.view(-1)[idx].item()
            scale = max(abs(fd), abs(an))
            if scale < 1e-6:
                continue  # below finite-difference resolution
            informative += 1
            worst = max(worst, abs(fd - an) / scale)
        elapsed = time.time() - start
        record(
            "C05 TVTD gradient check",
            worst < 1e-4 and informative >= 30 and elapsed < 120,
            f"worst rel err={worst:.2e} over {informative} informative "
            f"parameters, {elapsed:.0f}s",
        )


class TestC06CapacityCheck:
    def test_overfit_256_pairs_within_500_steps(self):
        start = time.time()
        book = codebook(P20)
        rng = np.random.default_rng(8)
        idx = rng.choice(len(book), 256, replace=False)
        pairs = []
        for i in idx:
            v = book[i]
            received, _ = corrupt_fixed(v, int(rng.integers(0, 2)), rng)
            pairs.append((received, v))
        # full-batch: one optimizer step per epoch, 500 steps total
        cfg = TvtdConfig(n=20, d_model=64, n_layers=2, n_heads=4, window=20,
                         max_drift=6, lr=2e-3, epochs=500, batch=256,
                         warmup_epochs=25, seed=0)
        torch.manual_seed(0)
        model = TvtdModel(cfg)
        train(model, pairs, cfg)
        accuracy = token_accuracy(model, pairs)
        elapsed = time.time() - start
        record(
            "C06 TVTD capacity (overfit 256 pairs, 500 steps)",
            accuracy >= 0.999,
            f"teacher-forced accuracy={100 * accuracy:.2f}%, {elapsed:.0f}s",
        )


class TestC07DeskScaleEndToEnd:
    def test_train_desk_model_and_score_heldout(self):
        import copy

        start = time.time()
        train_words, test_words = split_codebook(P20, 0.8, seed=17)
        assert len(train_words) == 13107 and len(test_words) == 3277
        # 12 corruption variants per training codeword, biased toward the
        # single-error case the cell scores (still 0-1 errors per sample)
        rng = np.random.default_rng(100)
        pairs = []
        for _ in range(12):
            for v in train_words:
                k = int(rng.random() < 0.75)
                received, _ = corrupt_fixed(v, k, rng)
                pairs.append((received, v))
        # model selection uses train-side codewords only (fresh corruptions)
        val_rng = np.random.default_rng(300)
        val_idx = val_rng.choice(len(train_words), 1500, replace=False)
        val_pairs = [(corrupt_fixed(train_words[i], 1, val_rng)[0], train_words[i])
                     for i in val_idx]

        cfg = TvtdConfig(n=20, d_model=128, n_layers=3, n_heads=4, window=20,
                         max_drift=6, dropout=0.1, lr=2e-3, epochs=18,
                         batch=256, warmup_epochs=1, seed=0)
        torch.manual_seed(0)
        model = TvtdModel(cfg)
        best = {"fa": -1.0, "state": None}

        def select(epoch, loss):
            if epoch >= cfg.epochs - 8:
                fa = frame_accuracy(model, val_pairs, batch=512)
                model.train()
                if fa > best["fa"]:
                    best.update(fa=fa, state=copy.deepcopy(model.state_dict()))
            return False

        train(model, pairs, cfg, epoch_callback=select)
        model.load_state_dict(best["state"])

        eval_rng = np.random.default_rng(200)
        eval_pairs = [(corrupt_fixed(v, 1, eval_rng)[0], v) for v in test_words]
        accuracy = frame_accuracy(model, eval_pairs, batch=512)
        elapsed = time.time() - start
        record(
            "C07 TVTD desk-scale end-to-end (held-out single error)",
            accuracy >= 0.95,
            f"held-out 1-FER={100 * accuracy:.1f}% on {len(eval_pairs)} frames "
            f"(target >= 95), {elapsed:.0f}s",
        )


class TestC08PropertySuite:
    def test_mask_and_embedding_properties(self):
        start = time.time()
        rng = np.random.default_rng(9)

        # mask soundness: zero weight wherever -inf, rows sum to 1,
        # every row keeps at least one finite entry
        mask_cases = 0
        for _ in range(1000):
            L = int(rng.integers(1, 24))
            w = int(rng.integers(1, 24))
            mask = build_combined_mask(L, w)
            assert bool((mask == 0).any(dim=1).all())
            scores = torch.from_numpy(rng.normal(size=(L, L))).float() + mask
            weights = torch.softmax(scores, dim=-1)
            assert torch.all(weights[mask == -math.inf] == 0)
            assert torch.allclose(weights.sum(dim=-1), torch.ones(L), atol=1e-6)
            mask_cases += 1

        # gather purity and statistic identity
        torch.manual_seed(9)
        emb = CodewordEmbedding(table_length=24, stat_key_max=24 * 25 // 2,
                                d_model=8)
        table = emb.symbol.detach()
        gather_cases = stat_cases = 0
        for _ in range(1000):
            L = int(rng.integers(1, 25))
            word = rng.integers(0, 2, L)
            bits, lengths = words_to_tensor([BitWord(word)])
            out = emb.symbol_embed(bits)[0]
            i = int(rng.integers(L))
            assert torch.equal(out[i], table[i, int(word[i])])
            flipped = word.copy()
            flipped[i] ^= 1
            out2 = emb.symbol_embed(words_to_tensor([BitWord(flipped)])[0])[0]
            differs = (out != out2).any(dim=-1)
            assert differs.tolist() == [j == i for j in range(L)]
            gather_cases += 1
            s0, s1 = emb.stat_keys(bits, lengths)
            assert int(s0) + int(s1) == L * (L + 1) // 2
            stat_cases += 1

        # causality: teacher-forced logits at t never depend on bits >= t
        torch.manual_seed(10)
        cfg = TvtdConfig(n=12, d_model=16, n_layers=2, n_heads=2, window=5,
                         max_drift=4, epochs=1, batch=4, seed=10)
        causal_cases = 0
        for _ in range(8):
            model = TvtdModel(cfg)
            bits = torch.from_numpy(rng.integers(0, 2, (16, 12))).long()
            lengths = torch.full((16,), 12, dtype=torch.long)
            targets = torch.from_numpy(rng.integers(0, 2, (16, 12))).long()
            base = model.forward_teacher(bits, lengths, targets)
            for _ in range(16):
                t = int(rng.integers(12))
                perturbed = targets.clone()
                perturbed[:, t] ^= 1
                out = model.forward_teacher(bits, lengths, perturbed)
                diff = (base - out).abs().amax(dim=(0, 2))
                assert torch.all(diff[: t + 1] == 0)
                causal_cases += 1

        elapsed = time.time() - start
        record(
            "C08 mask and embedding property suite",
            mask_cases >= 1000 and gather_cases >= 1000 and stat_cases >= 1000
            and causal_cases >= 128 and elapsed < 300,
            f"{mask_cases} mask, {gather_cases} gather, {stat_cases} statistic, "
            f"{causal_cases} causality cases, {elapsed:.0f}s",
        )


class TestC09TimingOrdering:
    def test_siso_at_least_ten_times_slower_than_hd(self):
        report = time_decoders(P20, ChannelSpec("fixed", k=2), count=1000, seed=3)
        hd = report["decoders"]["hd"]["seconds"]
        siso = report["decoders"]["siso"]["seconds"]
        ratio = siso / hd
        record(
            "C09 timing ordering (SISO vs HD)",
            ratio >= 10.0,
            f"time(SISO)={siso:.2f}s, time(HD)={hd:.2f}s, ratio={ratio:.0f}x",
        )


class TestC10MetricLaws:
    def test_fer_dominates_ber_and_reports_reproduce(self):
        cells = [
            ExperimentSpec(P20, ChannelSpec("fixed", k=k), "hd",
                           trials=400, seed=40 + k)
            for k in (0, 1, 2, 3)
        ] + [
            ExperimentSpec(P20, ChannelSpec("iid", rate=r), "hd",
                           trials=400, seed=50)
            for r in (0.01, 0.05)
        ] + [
            ExperimentSpec(P20, ChannelSpec("fixed", k=2), "siso",
                           trials=60, seed=60)
        ]
        violations = 0
        for spec in cells:
            report = evaluate(spec)
            if report.fer < report.ber:
                violations += 1
        spec = ExperimentSpec(P20, ChannelSpec("iid", rate=0.03), "hd",
                              trials=500, seed=70)
        identical = evaluate(spec).to_json() == evaluate(spec).to_json()
        record(
            "C10 metric laws (FER >= BER, byte-identical reruns)",
            violations == 0 and identical,
            f"{len(cells)} reports checked, {violations} violations, "
            f"rerun identical={identical}",
        )
