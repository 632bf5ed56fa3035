"""Binary snapshot stream for trajectories.

Layout (all integers little-endian):

    bytes 0..7    magic b"WGNLSNP1"
    byte  8       endianness tag: b"<" (files are always little-endian)
    bytes 9..12   uint32 header length H
    bytes 13..    H bytes of ASCII JSON: {"grid": <grid description>,
                  "dt": <record spacing>, "stride": <record stride>,
                  "count": <frame count>}
    then          count frames, each modes[0]*...*modes[d-1] complex128
                  values in C (row-major) lattice order

The frame count is patched into the header on close; a count of -1 marks
a stream that was not finalized.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .grid import GridSpec, SpectralField, build_grid

MAGIC = b"WGNLSNP1"
_HEADER_PAD = 256  # fixed-size JSON slot so count can be patched in place


class SnapshotWriter:
    def __init__(self, path, grid: GridSpec, dt: float, stride: int):
        self.path = path
        self.grid = grid
        self.dt = dt
        self.stride = stride
        self.count = 0
        self._fh = open(path, "wb")
        self._fh.write(MAGIC)
        self._fh.write(b"<")
        self._write_header(-1)

    def _write_header(self, count: int) -> None:
        head = json.dumps(
            {
                "grid": self.grid.describe(),
                "dt": self.dt,
                "stride": self.stride,
                "count": count,
            }
        ).encode("ascii")
        if len(head) > _HEADER_PAD:
            raise ValueError("grid description too large for header slot")
        head = head + b" " * (_HEADER_PAD - len(head))
        self._fh.seek(len(MAGIC) + 1)
        self._fh.write(struct.pack("<I", _HEADER_PAD))
        self._fh.write(head)
        self._fh.seek(0, 2)

    def write(self, snap: SpectralField) -> None:
        arr = np.ascontiguousarray(snap.coeffs, dtype="<c16")
        self._fh.write(arr.tobytes())
        self.count += 1

    def close(self) -> None:
        self._write_header(self.count)
        self._fh.close()


def read_snapshots(path):
    """Returns (grid, dt, stride, list of SpectralField)."""
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValueError("not a snapshot stream")
        endian = fh.read(1)
        if endian != b"<":
            raise ValueError(f"unsupported endianness tag {endian!r}")
        (hlen,) = struct.unpack("<I", fh.read(4))
        head = json.loads(fh.read(hlen).decode("ascii"))
        g = head["grid"]
        grid = build_grid(
            g["d"], list(zip(g["kinds"], g["periods"])), g["modes"]
        )
        count = head["count"]
        if count < 0:
            raise ValueError("snapshot stream was not finalized")
        npts = int(np.prod(grid.shape))
        snaps = []
        for _ in range(count):
            buf = fh.read(npts * 16)
            arr = np.frombuffer(buf, dtype="<c16").astype(np.complex128).reshape(grid.shape)
            snaps.append(SpectralField(grid, arr))
        return grid, head["dt"], head["stride"], snaps
