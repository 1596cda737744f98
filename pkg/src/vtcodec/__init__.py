"""Varshamov-Tenengolts codec toolkit.

Encoding, insertion/deletion/substitution channels, and three decoders
(hard-decision, trellis bitwise-MAP, transformer) for binary VT codes,
plus a benchmark harness. Decoders follow the scikit-learn estimator
protocol (fit/predict/get_params) so they compose with pipeline tooling.
"""

from .bits import BitWord, as_word, as_words
from .channel import (
    ChannelSpec,
    CorruptionLog,
    ErrorEvent,
    IdsChannel,
    corrupt_fixed,
    corrupt_iid,
    edit_distance,
)
from .code import (
    VtEncoder,
    VtParams,
    checksum,
    codebook,
    encode,
    enumerate_vt_set,
    extract_message,
    is_codeword,
    split_codebook,
)
from .hard_decision import HardDecisionDecoder, HdOutcome, decode_hd
from .harness import ExperimentSpec, ablation_suite, evaluate, gen_dataset, time_decoders
from .metrics import MetricsReport
from .siso import (
    ChannelPrior,
    SisoDecoder,
    build_prior,
    decode_siso,
    exact_map_oracle,
    forward_backward,
)
from .tvtd import TvtdConfig, TvtdDecoder, TvtdModel, desk_config, paper_config

__version__ = "0.1.0"

__all__ = [
    "BitWord",
    "ChannelPrior",
    "ChannelSpec",
    "CorruptionLog",
    "ErrorEvent",
    "ExperimentSpec",
    "HardDecisionDecoder",
    "HdOutcome",
    "IdsChannel",
    "MetricsReport",
    "SisoDecoder",
    "TvtdConfig",
    "TvtdDecoder",
    "TvtdModel",
    "VtEncoder",
    "VtParams",
    "ablation_suite",
    "as_word",
    "as_words",
    "build_prior",
    "checksum",
    "codebook",
    "corrupt_fixed",
    "corrupt_iid",
    "decode_hd",
    "decode_siso",
    "desk_config",
    "edit_distance",
    "encode",
    "enumerate_vt_set",
    "evaluate",
    "exact_map_oracle",
    "extract_message",
    "forward_backward",
    "gen_dataset",
    "is_codeword",
    "paper_config",
    "split_codebook",
    "time_decoders",
]
