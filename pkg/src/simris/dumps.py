"""Channel dump file formats.

Binary layout (little-endian):

    magic      4 bytes  b"SRIS"
    version    u16      1
    n          u32      elements per vector
    r          u32      realization count
    seed       u64      master seed
    config_len u32      length of the UTF-8 JSON config block
    config     bytes    resolved run configuration, JSON
    records    r times: h (n complex64), g (n complex64), h_siso (1 complex64)

The CSV dump mirrors the binary one: the same JSON config in '#' header
lines, then one row per realization with float32-precision re/im pairs.
Both decode to identical complex64 values.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import ChannelRealization

MAGIC = b"SRIS"
VERSION = 1

_FIXED_HEADER = struct.Struct("<4sHIIQI")

# 9 significant digits round-trip any float32 exactly.
_FLOAT_FMT = "%.9g"


@dataclass(frozen=True)
class DumpHeader:
    n: int
    r: int
    seed: int
    config: dict


def _record_dtype(n: int) -> np.dtype:
    return np.dtype([("h", "<c8", (n,)), ("g", "<c8", (n,)), ("h_siso", "<c8")])


def write_binary(
    path: str,
    config: dict,
    realizations: Iterable[ChannelRealization],
    n: int,
    count: int,
    seed: int,
) -> None:
    config_bytes = json.dumps(config, sort_keys=True).encode("utf-8")
    dtype = _record_dtype(n)
    with open(path, "wb") as fh:
        fh.write(_FIXED_HEADER.pack(MAGIC, VERSION, n, count, seed, len(config_bytes)))
        fh.write(config_bytes)
        written = 0
        for real in realizations:
            rec = np.zeros((), dtype=dtype)
            rec["h"] = real.h.astype(np.complex64)
            rec["g"] = real.g.astype(np.complex64)
            rec["h_siso"] = np.complex64(real.h_siso)
            fh.write(rec.tobytes())
            written += 1
        if written != count:
            raise ValueError(f"expected {count} realizations, wrote {written}")


def read_binary(path: str) -> tuple[DumpHeader, np.ndarray, np.ndarray, np.ndarray]:
    """Returns (header, h[r, n], g[r, n], h_siso[r]) as complex64 arrays."""
    with open(path, "rb") as fh:
        magic, version, n, r, seed, config_len = _FIXED_HEADER.unpack(
            fh.read(_FIXED_HEADER.size)
        )
        if magic != MAGIC:
            raise ValueError("not a channel dump file")
        if version != VERSION:
            raise ValueError(f"unsupported dump version {version}")
        config = json.loads(fh.read(config_len).decode("utf-8"))
        records = np.frombuffer(fh.read(), dtype=_record_dtype(n), count=r)
    header = DumpHeader(n=n, r=r, seed=seed, config=config)
    return header, records["h"], records["g"], records["h_siso"]


def _csv_columns(n: int) -> list[str]:
    cols = ["realization"]
    for i in range(n):
        cols += [f"h{i}_re", f"h{i}_im"]
    for i in range(n):
        cols += [f"g{i}_re", f"g{i}_im"]
    cols += ["hsiso_re", "hsiso_im"]
    return cols


def write_csv(
    path: str,
    config: dict,
    realizations: Iterable[ChannelRealization],
    n: int,
    count: int,
    seed: int,
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# simris channel dump v%d\n" % VERSION)
        fh.write("# seed: %d\n" % seed)
        fh.write("# config: %s\n" % json.dumps(config, sort_keys=True))
        fh.write(",".join(_csv_columns(n)) + "\n")
        written = 0
        for real in realizations:
            values = np.concatenate(
                [
                    real.h.astype(np.complex64).view(np.float32),
                    real.g.astype(np.complex64).view(np.float32),
                    np.array([real.h_siso], dtype=np.complex64).view(np.float32),
                ]
            )
            row = [str(real.index)] + [_FLOAT_FMT % v for v in values]
            fh.write(",".join(row) + "\n")
            written += 1
        if written != count:
            raise ValueError(f"expected {count} realizations, wrote {written}")


def read_csv(path: str) -> tuple[DumpHeader, np.ndarray, np.ndarray, np.ndarray]:
    """Decode a CSV dump into the same arrays as read_binary."""
    config: dict = {}
    seed = 0
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# seed:"):
                seed = int(line.split(":", 1)[1])
            elif line.startswith("# config:"):
                config = json.loads(line.split(":", 1)[1])
            elif line.startswith("#") or line.startswith("realization"):
                continue
            elif line:
                rows.append(line.split(","))
    if not rows:
        raise ValueError("dump contains no realizations")
    n = (len(rows[0]) - 3) // 4
    flat = np.array([[np.float32(v) for v in row[1:]] for row in rows], dtype=np.float32)
    cplx = flat.view(np.complex64)
    h = cplx[:, :n]
    g = cplx[:, n : 2 * n]
    h_siso = cplx[:, 2 * n]
    header = DumpHeader(n=n, r=len(rows), seed=seed, config=config)
    return header, h, g, h_siso
