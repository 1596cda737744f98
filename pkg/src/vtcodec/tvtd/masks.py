"""Additive attention masks: causal next-symbol masking combined with a
local window.

Entry (k, j) of the combined mask is 0 when position k may attend to
position j, which requires j <= k (no peeking at symbols still to be
predicted) and k - j <= w (only the last w positions are visible). All
other entries are -inf so softmax assigns them exactly zero weight.
"""

from __future__ import annotations

import torch

NEG_INF = float("-inf")


def build_combined_mask(length: int, window: int,
                        dtype: torch.dtype = torch.float32) -> torch.Tensor:
    if length < 1 or window < 1:
        raise ValueError("need length >= 1 and window >= 1")
    k = torch.arange(length).unsqueeze(1)
    j = torch.arange(length).unsqueeze(0)
    allowed = (j <= k) & (k - j <= window)
    mask = torch.zeros(length, length, dtype=dtype)
    mask[~allowed] = NEG_INF
    return mask


def causal_mask(length: int, dtype: torch.dtype = torch.float32) -> torch.Tensor:
    """Pure next-symbol mask, i.e. the w >= length - 1 limit of the above."""
    return build_combined_mask(length, max(1, length), dtype=dtype)


def allowed_pair_count(length: int, window: int) -> int:
    """Number of finite entries; the self-attention work measure that the
    window bounds (grows ~linearly in window at fixed length)."""
    return int((build_combined_mask(length, window) == 0).sum().item())
