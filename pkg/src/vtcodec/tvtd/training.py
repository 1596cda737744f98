"""Teacher-forced training loop.

Cross-entropy over the two bit classes per position, Adam with the
learning rate cosine-annealed to ~zero over the configured epochs (after
an optional linear warmup). Fixing the seed (and thread configuration)
reproduces the loss curve exactly.
"""

from __future__ import annotations

import math

import torch
from torch import nn

from ..errors import TrainingDiverged
from .config import TvtdConfig
from .embedding import words_to_tensor
from .model import TvtdModel


def lr_at_epoch(config: TvtdConfig, epoch: int) -> float:
    """Linear warmup for warmup_epochs, then cosine from lr to lr/100."""
    if epoch < config.warmup_epochs:
        return config.lr * (epoch + 1) / config.warmup_epochs
    span = max(1, config.epochs - config.warmup_epochs)
    progress = (epoch - config.warmup_epochs) / span
    floor = config.lr * 1e-2
    return floor + (config.lr - floor) * 0.5 * (1 + math.cos(math.pi * progress))


def pairs_to_tensors(pairs, n: int):
    """(corrupted, groundtruth) BitWord pairs -> padded tensor triple."""
    corrupted = [c for c, _ in pairs]
    targets = [g for _, g in pairs]
    if any(len(g) != n for g in targets):
        raise ValueError(f"every groundtruth word must have length {n}")
    bits, lengths = words_to_tensor(corrupted)
    target_bits, _ = words_to_tensor(targets)
    return bits, lengths, target_bits


def train(model: TvtdModel, pairs, config: TvtdConfig | None = None,
          epoch_callback=None):
    """Optimize in place; returns the per-epoch mean loss curve.

    `epoch_callback(epoch, loss)` runs after each epoch; returning True
    stops early (the schedule still anneals over config.epochs).
    """
    config = config or model.config
    torch.manual_seed(config.seed)
    bits, lengths, target_bits = pairs_to_tensors(pairs, config.n)
    count = bits.shape[0]
    optimizer = torch.optim.Adam(model.parameters(), lr=config.lr)
    loss_fn = nn.CrossEntropyLoss()
    shuffler = torch.Generator().manual_seed(config.seed)
    curve = []
    model.train()
    for epoch in range(config.epochs):
        lr = lr_at_epoch(config, epoch)
        for group in optimizer.param_groups:
            group["lr"] = lr
        order = torch.randperm(count, generator=shuffler)
        total, batches = 0.0, 0
        for start in range(0, count, config.batch):
            idx = order[start : start + config.batch]
            logits = model.forward_teacher(bits[idx], lengths[idx], target_bits[idx])
            loss = loss_fn(logits.reshape(-1, 2), target_bits[idx].reshape(-1))
            if not math.isfinite(loss.item()):
                raise TrainingDiverged(f"non-finite loss at epoch {epoch}")
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            total += loss.item()
            batches += 1
        curve.append(total / batches)
        if epoch_callback is not None and epoch_callback(epoch, curve[-1]):
            break
    return curve


@torch.no_grad()
def token_accuracy(model: TvtdModel, pairs) -> float:
    """Teacher-forced argmax accuracy over all positions."""
    model.eval()
    bits, lengths, target_bits = pairs_to_tensors(pairs, model.config.n)
    hits, total = 0, 0
    step = 1024
    for start in range(0, bits.shape[0], step):
        sl = slice(start, start + step)
        logits = model.forward_teacher(bits[sl], lengths[sl], target_bits[sl])
        hits += int((logits.argmax(dim=-1) == target_bits[sl]).sum())
        total += target_bits[sl].numel()
    return hits / total


@torch.no_grad()
def frame_accuracy(model: TvtdModel, pairs, batch: int = 1024) -> float:
    """Fraction of pairs whose greedy decode equals the groundtruth."""
    model.eval()
    bits, lengths, target_bits = pairs_to_tensors(pairs, model.config.n)
    ok = 0
    for start in range(0, bits.shape[0], batch):
        sl = slice(start, start + batch)
        out = model.greedy_decode(bits[sl], lengths[sl])
        ok += int((out == target_bits[sl]).all(dim=1).sum())
    return ok / bits.shape[0]
