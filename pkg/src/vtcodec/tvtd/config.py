"""Hyperparameters for the transformer decoder."""

from __future__ import annotations

from dataclasses import asdict, dataclass


def default_window(n: int) -> int:
    """Paper convention: a quarter of the code length for medium/long codes,
    20 for short ones."""
    return n // 4 if n >= 68 else 20


@dataclass
class TvtdConfig:
    """Model and training hyperparameters.

    The feed-forward width is fixed at four times the embedding width. The
    position table covers n + max_drift symbols so received words that
    gained up to max_drift insertions still embed. encoder_layers > 0
    switches the memory side from plain codeword embedding to a transformer
    encoder stack over it (the heavier seq2seq variant kept for
    comparison runs).
    """

    n: int
    d_model: int = 128
    n_layers: int = 3
    n_heads: int = 4
    window: int = 0  # 0 means: use default_window(n)
    max_drift: int = 8
    dropout: float = 0.0
    lr: float = 1e-3
    epochs: int = 30
    batch: int = 256
    warmup_epochs: int = 0
    seed: int = 0
    stat_memory: bool = True
    stat_target: bool = True
    encoder_layers: int = 0

    def __post_init__(self):
        if self.window == 0:
            self.window = default_window(self.n)
        if self.d_model % self.n_heads:
            raise ValueError(
                f"d_model={self.d_model} not divisible by n_heads={self.n_heads}"
            )
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.n < 2 or self.max_drift < 0:
            raise ValueError("need n >= 2 and max_drift >= 0")
        if self.epochs < 1 or self.batch < 1:
            raise ValueError("epochs and batch must be >= 1")
        if not 0 <= self.warmup_epochs < self.epochs:
            raise ValueError("warmup_epochs must be in [0, epochs)")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")

    @property
    def d_ff(self) -> int:
        return 4 * self.d_model

    @property
    def table_length(self) -> int:
        return self.n + self.max_drift

    @property
    def stat_key_max(self) -> int:
        return self.table_length * (self.table_length + 1) // 2

    def to_dict(self) -> dict:
        return asdict(self)


def desk_config(n: int, **overrides) -> TvtdConfig:
    """Small configuration trainable on a workstation CPU."""
    base = dict(n=n, d_model=128, n_layers=3, n_heads=4, dropout=0.1,
                lr=2e-3, epochs=16, batch=256, warmup_epochs=1)
    base.update(overrides)
    return TvtdConfig(**base)


def paper_config(n: int, **overrides) -> TvtdConfig:
    """Published configuration: d=512, 3 layers, 8 heads, lr 1e-4, 200 epochs."""
    base = dict(n=n, d_model=512, n_layers=3, n_heads=8, lr=1e-4,
                epochs=200, batch=256)
    base.update(overrides)
    return TvtdConfig(**base)
