"""Occupancy-grid dataset files ("OSGD"): collection and streaming reads.

Layout (little-endian), followed by sample_count row-major grids at one
byte per cell with values in {0, 1}:

    offset  size  field
    0       4     magic "OSGD"
    4       4     format version (u32)
    8       4     grid rows (u32)
    12      4     grid cols (u32)
    16      8     sample count (u64)
    24      32    sha-256 digest of the generating scenario config

The digest ties a dataset to the exact scenario that produced it, so an
encoder can refuse to pretrain on grids with mismatched geometry.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from itertools import islice
from typing import BinaryIO, Iterator

import numpy as np

from .config import ScenarioConfig, config_digest
from .episode import Environment, RandomPolicy
from .errors import DatasetFormatError

MAGIC = b"OSGD"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIIIQ32s")
HEADER_SIZE = _HEADER.size  # 56 bytes


@dataclass(frozen=True)
class GridDatasetHeader:
    version: int
    grid_rows: int
    grid_cols: int
    sample_count: int
    config_digest: bytes

    @property
    def grid_bytes(self) -> int:
        return self.grid_rows * self.grid_cols

    def pack(self) -> bytes:
        return _HEADER.pack(
            MAGIC,
            self.version,
            self.grid_rows,
            self.grid_cols,
            self.sample_count,
            self.config_digest,
        )


def _grid_stream(config: ScenarioConfig, seed: int) -> Iterator[np.ndarray]:
    """Endless stream of occupancy grids from random-policy episodes."""
    env = Environment(config)
    policy = RandomPolicy(seed)
    episode = 0
    while True:
        _, obs = env.reset(seed + episode, namespace="data")
        episode += 1
        yield obs.occupancy
        while True:
            result = env.step(policy(obs))
            obs = result.observation
            yield obs.occupancy
            if result.terminated or result.truncated:
                break


def collect(config: ScenarioConfig, n_samples: int, seed: int, sink: BinaryIO) -> int:
    """Write n_samples grids gathered under a random policy; returns the count."""
    if "occupancy" not in config.sensors.modalities:
        raise ValueError("dataset collection requires the occupancy modality")
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    cells = config.sensors.grid_cells
    header = GridDatasetHeader(
        version=FORMAT_VERSION,
        grid_rows=cells,
        grid_cols=cells,
        sample_count=n_samples,
        config_digest=config_digest(config),
    )
    written = 0
    try:
        sink.write(header.pack())
        for grid in islice(_grid_stream(config, seed), n_samples):
            sink.write(grid.tobytes())
            written += 1
    except OSError as exc:
        raise OSError(
            f"dataset write failed after {written} of {n_samples} samples "
            f"(output is partial): {exc}"
        ) from exc
    return written


def read_header(source: BinaryIO) -> GridDatasetHeader:
    raw = source.read(HEADER_SIZE)
    if len(raw) < HEADER_SIZE:
        raise DatasetFormatError("not a grid dataset: header too short")
    magic, version, rows, cols, count, digest = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise DatasetFormatError("not a grid dataset: bad magic")
    if version != FORMAT_VERSION:
        raise DatasetFormatError(f"unsupported version: {version}")
    if rows < 1 or cols < 1:
        raise DatasetFormatError(f"invalid grid geometry {rows}x{cols}")
    return GridDatasetHeader(version, rows, cols, count, digest)


def read(source: BinaryIO) -> tuple[GridDatasetHeader, Iterator[np.ndarray]]:
    """Validate the header and stream grids one at a time.

    Memory use is bounded by a single grid.  Seekable sources get a full
    length check up front; pure streams fail at the first truncated grid.
    """
    header = read_header(source)
    if source.seekable():
        pos = source.tell()
        end = source.seek(0, 2)
        source.seek(pos)
        expected = HEADER_SIZE + header.sample_count * header.grid_bytes
        if end < expected:
            raise DatasetFormatError("truncated dataset")
        if end > expected:
            raise DatasetFormatError("length mismatch: trailing bytes after last grid")

    def grids() -> Iterator[np.ndarray]:
        for _ in range(header.sample_count):
            raw = source.read(header.grid_bytes)
            if len(raw) < header.grid_bytes:
                raise DatasetFormatError("truncated dataset")
            grid = np.frombuffer(raw, dtype=np.uint8).reshape(header.grid_rows, header.grid_cols)
            if grid.max(initial=0) > 1:
                raise DatasetFormatError("corrupt dataset: cells must be 0 or 1")
            yield grid

    return header, grids()


def read_all(source: BinaryIO) -> tuple[GridDatasetHeader, np.ndarray]:
    """Load a whole dataset into an (n, rows, cols) array."""
    header, grids = read(source)
    if header.sample_count == 0:
        return header, np.zeros((0, header.grid_rows, header.grid_cols), dtype=np.uint8)
    return header, np.stack(list(grids))
