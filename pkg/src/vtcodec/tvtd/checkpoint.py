"""Self-describing checkpoint container.

Byte layout (all integers little-endian):

    bytes 0..7    magic b"VTCKPT01"
    bytes 8..15   uint64 header length H
    bytes 16..    H bytes of UTF-8 JSON header
    then          raw tensor data, contiguous, in header order

The JSON header holds {"format": 1, "config": {...}, "metadata": {...},
"tensors": [{"name", "dtype", "shape", "offset", "nbytes"}, ...]} with
offsets relative to the end of the header. Keys are sorted and floats use
repr, so saving the same model twice yields identical bytes.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
import torch

from ..errors import CheckpointError
from .config import TvtdConfig
from .model import TvtdModel

MAGIC = b"VTCKPT01"
FORMAT = 1


def save_checkpoint(model: TvtdModel, path, metadata: dict | None = None) -> None:
    path = Path(path)
    state = model.state_dict()
    names = sorted(state.keys())
    tensors = []
    blobs = []
    offset = 0
    for name in names:
        array = state[name].detach().cpu().numpy()
        data = np.ascontiguousarray(array).tobytes()
        tensors.append(
            {
                "name": name,
                "dtype": array.dtype.name,
                "shape": list(array.shape),
                "offset": offset,
                "nbytes": len(data),
            }
        )
        blobs.append(data)
        offset += len(data)
    header = json.dumps(
        {
            "format": FORMAT,
            "config": model.config.to_dict(),
            "metadata": metadata or {},
            "tensors": tensors,
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path, expected_n: int | None = None):
    """Rebuild (model, metadata) from a checkpoint file.

    expected_n, when given, must match the stored code length.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint: {exc}") from exc
    if len(raw) < 16 or raw[:8] != MAGIC:
        raise CheckpointError(f"{path} is not a vtcodec checkpoint")
    (header_len,) = struct.unpack("<Q", raw[8:16])
    body_start = 16 + header_len
    if len(raw) < body_start:
        raise CheckpointError("truncated checkpoint header")
    try:
        header = json.loads(raw[16:body_start].decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"corrupt checkpoint header: {exc}") from exc
    if header.get("format") != FORMAT:
        raise CheckpointError(
            f"unsupported checkpoint format {header.get('format')!r}"
        )
    config = TvtdConfig(**header["config"])
    if expected_n is not None and config.n != expected_n:
        raise CheckpointError(
            f"checkpoint is for n={config.n}, expected n={expected_n}"
        )
    model = TvtdModel(config)
    state = {}
    for spec in header["tensors"]:
        start = body_start + spec["offset"]
        end = start + spec["nbytes"]
        if end > len(raw):
            raise CheckpointError(f"truncated tensor data for {spec['name']}")
        array = np.frombuffer(
            raw[start:end], dtype=np.dtype(spec["dtype"])
        ).reshape(spec["shape"])
        state[spec["name"]] = torch.from_numpy(array.copy())
    try:
        model.load_state_dict(state, strict=True)
    except RuntimeError as exc:
        raise CheckpointError(f"parameter mismatch: {exc}") from exc
    return model, header["metadata"]
