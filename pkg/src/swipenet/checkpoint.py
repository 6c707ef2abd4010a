"""Binary checkpoint serialization.

Layout: magic ``SWCK``, u32 format version, u32 header length, header
JSON (spec + meta), then each parameterized layer's w and b as raw
32-bit little-endian floats in spec order. Round trip is bit-exact.
"""

import json
import os
import struct

import numpy as np

from .errors import CorruptionError, FormatError, VersionError
from .model import Checkpoint, ModelSpec, param_shapes

MAGIC = b"SWCK"
VERSION = 1


def save_checkpoint(ckpt, path):
    # created_at is volatile; dropping it keeps re-runs of the same seed
    # byte-identical on disk
    meta = {k: v for k, v in ckpt.meta.items() if k != "created_at"}
    header = json.dumps({"spec": ckpt.spec.to_dict(), "meta": meta}).encode()
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<II", VERSION, len(header)))
        f.write(header)
        for p in ckpt.params:
            for key in ("w", "b"):
                arr = np.ascontiguousarray(p[key], dtype="<f4")
                f.write(arr.tobytes())
    os.replace(tmp, path)


def load_checkpoint(path):
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        head = f.read(8)
        if len(head) < 8:
            raise CorruptionError("truncated checkpoint header")
        version, hlen = struct.unpack("<II", head)
        if version != VERSION:
            raise VersionError(f"checkpoint version {version}, reader supports {VERSION}")
        raw = f.read(hlen)
        if len(raw) < hlen:
            raise CorruptionError("truncated checkpoint header JSON")
        try:
            header = json.loads(raw)
            spec = ModelSpec.from_dict(header["spec"])
        except (ValueError, KeyError) as e:
            raise CorruptionError(f"unreadable checkpoint header: {e}") from e
        params = []
        for _, shapes in param_shapes(spec):
            layer = {}
            for key in ("w", "b"):
                shape = shapes[key]
                nbytes = int(np.prod(shape)) * 4
                buf = f.read(nbytes)
                if len(buf) < nbytes:
                    raise CorruptionError(
                        f"truncated parameter data: wanted {nbytes} bytes for "
                        f"shape {shape}, got {len(buf)}")
                layer[key] = np.frombuffer(buf, dtype="<f4").reshape(shape).copy()
            params.append(layer)
        if f.read(1):
            raise CorruptionError("trailing bytes after parameter data")
    return Checkpoint(spec, params, header.get("meta", {}))
