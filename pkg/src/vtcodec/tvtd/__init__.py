from .checkpoint import load_checkpoint, save_checkpoint
from .config import TvtdConfig, default_window, desk_config, paper_config
from .embedding import CodewordEmbedding, words_to_tensor
from .estimator import TvtdDecoder
from .masks import allowed_pair_count, build_combined_mask, causal_mask
from .model import TvtdModel
from .training import frame_accuracy, token_accuracy, train

__all__ = [
    "CodewordEmbedding",
    "TvtdConfig",
    "TvtdDecoder",
    "TvtdModel",
    "allowed_pair_count",
    "build_combined_mask",
    "causal_mask",
    "default_window",
    "desk_config",
    "frame_accuracy",
    "load_checkpoint",
    "paper_config",
    "save_checkpoint",
    "token_accuracy",
    "train",
    "words_to_tensor",
]
