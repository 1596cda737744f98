"""Transformer decoder over the codeword embedding.

The sequence-to-sequence encoder is collapsed to the memory embedding of
the corrupted word (optionally run through encoder layers when configured);
the decoder predicts the transmitted codeword bit by bit through masked
self-attention over its own prefix, cross-attention into the memory, and a
position-wise feed-forward, all pre-normalized. Scores are scaled by
1/sqrt(head_dim) and masked additively before softmax, so -inf mask
entries receive exactly zero attention weight.
"""

from __future__ import annotations

import math

import torch
from torch import nn

from .config import TvtdConfig
from .embedding import CodewordEmbedding, words_to_tensor
from .masks import NEG_INF, build_combined_mask


class MultiheadAttention(nn.Module):
    def __init__(self, d_model: int, n_heads: int, dropout: float = 0.0):
        super().__init__()
        self.n_heads = n_heads
        self.d_head = d_model // n_heads
        self.wq = nn.Linear(d_model, d_model)
        self.wk = nn.Linear(d_model, d_model)
        self.wv = nn.Linear(d_model, d_model)
        self.wo = nn.Linear(d_model, d_model)
        self.drop = nn.Dropout(dropout)

    def forward(self, query, memory, attn_mask=None, key_padding_mask=None,
                need_weights: bool = False):
        B, Lq, _ = query.shape
        shape = (B, -1, self.n_heads, self.d_head)
        q = self.wq(query).view(*shape).transpose(1, 2)
        k = self.wk(memory).view(*shape).transpose(1, 2)
        v = self.wv(memory).view(*shape).transpose(1, 2)
        scores = q @ k.transpose(-2, -1) / math.sqrt(self.d_head)
        if attn_mask is not None:
            scores = scores + attn_mask
        if key_padding_mask is not None:
            scores = scores.masked_fill(
                key_padding_mask[:, None, None, :], NEG_INF
            )
        weights = torch.softmax(scores, dim=-1)
        out = (self.drop(weights) @ v).transpose(1, 2).reshape(B, Lq, -1)
        return self.wo(out), (weights if need_weights else None)


class FeedForward(nn.Sequential):
    def __init__(self, d_model: int, d_ff: int, dropout: float = 0.0):
        super().__init__(nn.Linear(d_model, d_ff), nn.ReLU(),
                         nn.Dropout(dropout), nn.Linear(d_ff, d_model))


class DecoderLayer(nn.Module):
    def __init__(self, d_model: int, n_heads: int, d_ff: int, dropout: float = 0.0):
        super().__init__()
        self.self_attn = MultiheadAttention(d_model, n_heads, dropout)
        self.cross_attn = MultiheadAttention(d_model, n_heads, dropout)
        self.ffn = FeedForward(d_model, d_ff, dropout)
        self.norm_self = nn.LayerNorm(d_model)
        self.norm_cross = nn.LayerNorm(d_model)
        self.norm_ffn = nn.LayerNorm(d_model)
        self.drop = nn.Dropout(dropout)

    def forward(self, x, memory, self_mask, memory_padding, need_weights=False):
        h = self.norm_self(x)
        attn, self_w = self.self_attn(h, h, attn_mask=self_mask,
                                      need_weights=need_weights)
        x = x + self.drop(attn)
        h = self.norm_cross(x)
        attn, cross_w = self.cross_attn(h, memory,
                                        key_padding_mask=memory_padding,
                                        need_weights=need_weights)
        x = x + self.drop(attn)
        x = x + self.drop(self.ffn(self.norm_ffn(x)))
        return x, self_w, cross_w


class EncoderLayer(nn.Module):
    def __init__(self, d_model: int, n_heads: int, d_ff: int, dropout: float = 0.0):
        super().__init__()
        self.self_attn = MultiheadAttention(d_model, n_heads, dropout)
        self.ffn = FeedForward(d_model, d_ff, dropout)
        self.norm_attn = nn.LayerNorm(d_model)
        self.norm_ffn = nn.LayerNorm(d_model)
        self.drop = nn.Dropout(dropout)

    def forward(self, x, key_padding_mask):
        h = self.norm_attn(x)
        attn, _ = self.self_attn(h, h, key_padding_mask=key_padding_mask)
        x = x + self.drop(attn)
        return x + self.drop(self.ffn(self.norm_ffn(x)))


class TvtdModel(nn.Module):
    def __init__(self, config: TvtdConfig):
        super().__init__()
        self.config = config
        self.embedding = CodewordEmbedding(
            config.table_length, config.stat_key_max, config.d_model
        )
        self.encoder_layers = nn.ModuleList(
            EncoderLayer(config.d_model, config.n_heads, config.d_ff, config.dropout)
            for _ in range(config.encoder_layers)
        )
        self.decoder_layers = nn.ModuleList(
            DecoderLayer(config.d_model, config.n_heads, config.d_ff, config.dropout)
            for _ in range(config.n_layers)
        )
        self.final_norm = nn.LayerNorm(config.d_model)
        self.out_proj = nn.Linear(config.d_model, 2)

    def encode_memory(self, corrupted_bits, lengths):
        memory, padding = self.embedding.embed_memory(
            corrupted_bits, lengths, with_stat=self.config.stat_memory
        )
        for layer in self.encoder_layers:
            memory = layer(memory, padding)
        return memory, padding

    def _run_decoder(self, tokens, memory, padding, self_mask, need_weights=False):
        x = tokens
        self_ws, cross_ws = [], []
        for layer in self.decoder_layers:
            x, sw, cw = layer(x, memory, self_mask, padding, need_weights)
            self_ws.append(sw)
            cross_ws.append(cw)
        logits = self.out_proj(self.final_norm(x))
        return logits, self_ws, cross_ws

    def forward_teacher(self, corrupted_bits, lengths, target_bits,
                        need_weights: bool = False):
        """Teacher-forced logits, (B, n, 2); position t predicts bit t from
        the start token plus groundtruth bits 1..t-1."""
        n = self.config.n
        memory, padding = self.encode_memory(corrupted_bits, lengths)
        tokens = self.embedding.target_tokens(
            target_bits[:, : n - 1], first=1, count=n,
            with_stat=self.config.stat_target,
        )
        mask = build_combined_mask(n, self.config.window, dtype=tokens.dtype)
        logits, self_ws, cross_ws = self._run_decoder(
            tokens, memory, padding, mask, need_weights
        )
        if need_weights:
            return logits, self_ws, cross_ws
        return logits

    def forward(self, corrupted_bits, lengths, target_bits):
        return self.forward_teacher(corrupted_bits, lengths, target_bits)

    @torch.no_grad()
    def greedy_decode(self, corrupted_bits, lengths) -> torch.Tensor:
        """Autoregressive inference, (B, n) bits.

        Each step feeds only the trailing window of already generated
        tokens (their running-prefix statistics still summarize the whole
        prefix) plus the full memory, and takes the argmax bit.
        """
        self.eval()
        n, w = self.config.n, self.config.window
        B = corrupted_bits.shape[0]
        memory, padding = self.encode_memory(corrupted_bits, lengths)
        generated = torch.zeros(B, 0, dtype=torch.long,
                                device=corrupted_bits.device)
        for t in range(1, n + 1):
            first = max(1, t - w + 1)
            count = t - first + 1
            tokens = self.embedding.target_tokens(
                generated, first=first, count=count,
                with_stat=self.config.stat_target,
            )
            mask = build_combined_mask(count, w, dtype=tokens.dtype)
            logits, _, _ = self._run_decoder(tokens, memory, padding, mask)
            bit = logits[:, -1].argmax(dim=-1)
            generated = torch.cat([generated, bit.unsqueeze(1)], dim=1)
        return generated

    def decode_words(self, words, batch: int = 1024) -> list:
        """BitWord batch -> decoded BitWord batch (chunked)."""
        from ..bits import BitWord

        decoded = []
        for start in range(0, len(words), batch):
            chunk = words[start : start + batch]
            bits, lengths = words_to_tensor(chunk)
            out = self.greedy_decode(bits, lengths)
            decoded.extend(BitWord(row.tolist()) for row in out)
        return decoded

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())
