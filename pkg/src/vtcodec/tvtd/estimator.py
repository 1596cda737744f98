"""fit/predict wrapper around the transformer decoder."""

from __future__ import annotations

from ..base import ParamsMixin
from ..bits import as_words
from .checkpoint import load_checkpoint, save_checkpoint
from .config import TvtdConfig
from .model import TvtdModel
from .training import train


class TvtdDecoder(ParamsMixin):
    """Trainable VT decoder with the estimator protocol.

    fit(X, y) trains on corrupted words X against groundtruth codewords y;
    predict(X) greedily decodes. A fitted instance can round-trip through
    save()/load().
    """

    def __init__(self, n: int = 20, d_model: int = 128, n_layers: int = 3,
                 n_heads: int = 4, window: int = 0, max_drift: int = 8,
                 dropout: float = 0.0, lr: float = 1e-3, epochs: int = 30,
                 batch: int = 256, warmup_epochs: int = 0, seed: int = 0,
                 stat_memory: bool = True, stat_target: bool = True,
                 encoder_layers: int = 0):
        self.n = n
        self.d_model = d_model
        self.n_layers = n_layers
        self.n_heads = n_heads
        self.window = window
        self.max_drift = max_drift
        self.dropout = dropout
        self.lr = lr
        self.epochs = epochs
        self.batch = batch
        self.warmup_epochs = warmup_epochs
        self.seed = seed
        self.stat_memory = stat_memory
        self.stat_target = stat_target
        self.encoder_layers = encoder_layers

    @property
    def config_(self) -> TvtdConfig:
        return TvtdConfig(**self.get_params())

    def fit(self, X, y, epoch_callback=None):
        pairs = list(zip(as_words(X), as_words(y)))
        self.model_ = TvtdModel(self.config_)
        self.loss_curve_ = train(self.model_, pairs, epoch_callback=epoch_callback)
        return self

    def predict(self, X) -> list:
        if not hasattr(self, "model_"):
            raise RuntimeError("decoder is not fitted; call fit() or load()")
        return self.model_.decode_words(as_words(X))

    def save(self, path, metadata: dict | None = None) -> None:
        meta = {"loss_curve": getattr(self, "loss_curve_", [])}
        meta.update(metadata or {})
        save_checkpoint(self.model_, path, meta)

    @classmethod
    def load(cls, path, expected_n: int | None = None) -> "TvtdDecoder":
        model, metadata = load_checkpoint(path, expected_n=expected_n)
        decoder = cls(**{k: getattr(model.config, k) for k in cls._param_names()})
        decoder.model_ = model
        decoder.loss_curve_ = metadata.get("loss_curve", [])
        return decoder
