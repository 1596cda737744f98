"""Symbol- and statistic-based codeword embedding.

Each position i of a word owns two learnable vectors, one per bit value;
embedding a word is a pure gather of the vector matching each bit, which
subsumes positional encoding. The statistic embedding looks up the two
position-index sums s0 = sum(i : bit_i = 0) and s1 = sum(i : bit_i = 1).

The memory side (the corrupted word) prepends the two statistic vectors to
the symbol sequence, as two extra positions. The target side cannot do
that without leaking future bits under teacher forcing, so each target
token instead adds the statistic embeddings of the prefix generated so
far; those are causal and identical between training and inference.

One table set serves both sides: both kinds of words are embedded the same
way over the same position axis.
"""

from __future__ import annotations

import torch
from torch import nn

from ..errors import KeyOverflow, LengthOverflow


def words_to_tensor(words, pad_to: int = 0):
    """Pack variable-length bit sequences into (bits, lengths) tensors.

    Padding bits are 0 and excluded from everything via the lengths.
    """
    lengths = torch.tensor([len(w) for w in words], dtype=torch.long)
    width = max(int(lengths.max()) if len(words) else 0, pad_to)
    bits = torch.zeros(len(words), width, dtype=torch.long)
    for i, w in enumerate(words):
        if len(w):
            bits[i, : len(w)] = torch.tensor(list(w), dtype=torch.long)
    return bits, lengths


class CodewordEmbedding(nn.Module):
    def __init__(self, table_length: int, stat_key_max: int, d_model: int):
        super().__init__()
        self.table_length = table_length
        self.stat_key_max = stat_key_max
        self.symbol = nn.Parameter(torch.empty(table_length, 2, d_model))
        self.stat0 = nn.Embedding(stat_key_max + 1, d_model)
        self.stat1 = nn.Embedding(stat_key_max + 1, d_model)
        self.start = nn.Parameter(torch.empty(d_model))
        nn.init.normal_(self.symbol, std=0.02)
        nn.init.normal_(self.stat0.weight, std=0.02)
        nn.init.normal_(self.stat1.weight, std=0.02)
        nn.init.normal_(self.start, std=0.02)

    def symbol_embed(self, bits: torch.Tensor) -> torch.Tensor:
        """(B, L) bits -> (B, L, d); column i is the table row for
        (position i, bit value), nothing else."""
        L = bits.shape[1]
        if L > self.table_length:
            raise LengthOverflow(
                f"word length {L} exceeds position table {self.table_length}"
            )
        positions = torch.arange(L, device=bits.device).unsqueeze(0)
        return self.symbol[positions, bits]

    def stat_keys(self, bits: torch.Tensor, lengths: torch.Tensor):
        """Position-index sums of the 0-bits and of the 1-bits."""
        L = bits.shape[1]
        positions = torch.arange(1, L + 1, device=bits.device).unsqueeze(0)
        live = (positions <= lengths.unsqueeze(1)).long()
        s1 = (positions * bits * live).sum(dim=1)
        s0 = (positions * (1 - bits) * live).sum(dim=1)
        if s0.numel() and max(int(s0.max()), int(s1.max())) > self.stat_key_max:
            raise KeyOverflow(
                f"statistic key exceeds table maximum {self.stat_key_max}"
            )
        return s0, s1

    def stat_embed(self, bits: torch.Tensor, lengths: torch.Tensor):
        s0, s1 = self.stat_keys(bits, lengths)
        return self.stat0(s0), self.stat1(s1)

    def embed_memory(self, bits: torch.Tensor, lengths: torch.Tensor,
                     with_stat: bool = True):
        """Corrupted-word embedding: [stat0, stat1, symbols...].

        Returns (embeddings (B, L+2, d), padding mask (B, L+2), True where
        the slot is padding). Without the statistic part the two leading
        slots are dropped.
        """
        sym = self.symbol_embed(bits)
        B, L, _ = sym.shape
        positions = torch.arange(L, device=bits.device).unsqueeze(0)
        pad = positions >= lengths.unsqueeze(1)
        sym = sym.masked_fill(pad.unsqueeze(-1), 0.0)
        if not with_stat:
            return sym, pad
        e0, e1 = self.stat_embed(bits, lengths)
        emb = torch.cat([e0.unsqueeze(1), e1.unsqueeze(1), sym], dim=1)
        pad = torch.cat(
            [torch.zeros(B, 2, dtype=torch.bool, device=bits.device), pad], dim=1
        )
        return emb, pad

    def target_tokens(self, prefix_bits: torch.Tensor, first: int, count: int,
                      with_stat: bool = True) -> torch.Tensor:
        """Decoder input tokens `first .. first+count-1` (1-based).

        Token 1 is the start vector; token t > 1 is the symbol embedding of
        prefix bit t-1 at its own position. With statistics on, token t
        additionally carries the embeddings of s0/s1 of the prefix up to
        bit t-1 (empty prefix for token 1), keeping the statistic channel
        strictly causal.
        """
        B, P = prefix_bits.shape
        last = first + count - 1
        if last > P + 1:
            raise ValueError(f"tokens up to {last} need a prefix of {last - 1} bits, got {P}")
        if last - 1 > self.table_length:
            raise LengthOverflow(
                f"token position {last} exceeds position table {self.table_length}"
            )
        device = prefix_bits.device
        tok = torch.empty(B, count, self.start.shape[0], device=device,
                          dtype=self.start.dtype)
        t = torch.arange(first, last + 1, device=device)
        sym_slots = t[t > 1] - 2  # table row of prefix bit t-1
        if len(sym_slots):
            gathered = self.symbol[sym_slots.unsqueeze(0),
                                   prefix_bits[:, sym_slots]]
            tok[:, (t > 1).nonzero(as_tuple=True)[0]] = gathered
        if first == 1:
            tok[:, 0] = self.start
        if not with_stat:
            return tok

        positions = torch.arange(1, P + 1, device=device)
        w1 = (positions * prefix_bits).cumsum(dim=1)
        w0 = (positions * (1 - prefix_bits)).cumsum(dim=1)
        zero = torch.zeros(B, 1, dtype=w1.dtype, device=device)
        s1_at = torch.cat([zero, w1], dim=1)  # s1 of prefix of length l at index l
        s0_at = torch.cat([zero, w0], dim=1)
        lens = t - 1  # prefix length feeding token t
        keys1 = s1_at[:, lens]
        keys0 = s0_at[:, lens]
        if int(keys0.max()) > self.stat_key_max or int(keys1.max()) > self.stat_key_max:
            raise KeyOverflow(
                f"statistic key exceeds table maximum {self.stat_key_max}"
            )
        return tok + self.stat0(keys0) + self.stat1(keys1)
