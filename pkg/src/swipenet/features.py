"""Feature-matrix file format for externally extracted descriptors.

Layout: ascii header line ``SWFT1 n d``, then n rows of d 32-bit
little-endian floats, then n trailer lines ``id,label``. Round trips
bitwise.
"""

from dataclasses import dataclass

import numpy as np

from .errors import FormatError

MAGIC = "SWFT1"


@dataclass
class FeatureMatrix:
    features: np.ndarray   # (n, d) float32
    ids: list
    labels: np.ndarray     # (n,) int64

    def __post_init__(self):
        n = self.features.shape[0]
        if len(self.ids) != n or len(self.labels) != n:
            raise FormatError(
                f"row misalignment: {n} feature rows, {len(self.ids)} ids, "
                f"{len(self.labels)} labels")
        if len(set(self.ids)) != n:
            raise FormatError("duplicate ids in feature matrix")

    def __len__(self):
        return self.features.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]


def export_features(fm, path):
    n, d = fm.features.shape
    with open(path, "wb") as f:
        f.write(f"{MAGIC} {n} {d}\n".encode("ascii"))
        f.write(np.ascontiguousarray(fm.features, dtype="<f4").tobytes())
        for eid, label in zip(fm.ids, fm.labels):
            f.write(f"{eid},{int(label)}\n".encode())


def import_features(path):
    with open(path, "rb") as f:
        header = f.readline().decode("ascii", errors="replace").split()
        if len(header) != 3 or header[0] != MAGIC:
            raise FormatError(f"bad feature file header: {header}")
        n, d = int(header[1]), int(header[2])
        nbytes = n * d * 4
        buf = f.read(nbytes)
        if len(buf) < nbytes:
            raise FormatError(f"feature data truncated: wanted {nbytes} bytes, "
                              f"got {len(buf)}")
        features = np.frombuffer(buf, dtype="<f4").reshape(n, d).copy()
        ids, labels = [], []
        for line in f.read().decode().splitlines():
            if not line:
                continue
            eid, label = line.rsplit(",", 1)
            ids.append(eid)
            labels.append(int(label))
        if len(ids) != n:
            raise FormatError(f"header declares {n} rows but trailer has {len(ids)}")
    return FeatureMatrix(features, ids, np.array(labels, dtype=np.int64))
