"""Manifest-based dataset mechanics: CSV manifests, seeded splits,
image loading, mean-image preprocessing and audit sampling."""

import csv
import os
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ConfigError, DataError, IngestionError

SPLITS = ("train", "val", "test", "unassigned")
CATEGORIES = ("clean", "unknown", "mixed", "no_face", "partial_face", "untagged")


@dataclass
class ManifestEntry:
    id: str
    path: str
    label: int | None   # 0 dislike/male, 1 like/female, None unlabeled
    split: str = "unassigned"
    category: str = "untagged"

    def __post_init__(self):
        if self.label is not None and self.label not in (0, 1):
            raise DataError(f"label must be 0 or 1, got {self.label!r} (id={self.id})")
        if self.split not in SPLITS:
            raise DataError(f"bad split {self.split!r} (id={self.id})")
        if self.category not in CATEGORIES:
            raise DataError(f"bad category {self.category!r} (id={self.id})")


@dataclass
class Manifest:
    entries: list = field(default_factory=list)

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise DataError("manifest ids are not unique")

    def __len__(self):
        return len(self.entries)

    def by_id(self, eid):
        for e in self.entries:
            if e.id == eid:
                return e
        return None

    def by_split(self, split):
        return [e for e in self.entries if e.split == split]

    def labeled(self):
        return [e for e in self.entries if e.label is not None]

    def unlabeled(self):
        return [e for e in self.entries if e.label is None]

    def save(self, path):
        """Atomic write: temp file then rename."""
        tmp = f"{path}.tmp"
        with open(tmp, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["id", "path", "label", "split", "category"])
            for e in self.entries:
                w.writerow([e.id, e.path,
                            "" if e.label is None else e.label,
                            e.split, e.category])
        os.replace(tmp, path)

    @classmethod
    def load(cls, path):
        entries = []
        with open(path, newline="") as f:
            r = csv.DictReader(f)
            for row in r:
                entries.append(ManifestEntry(
                    id=row["id"], path=row["path"],
                    label=None if row["label"] == "" else int(row["label"]),
                    split=row["split"] or "unassigned",
                    category=row["category"] or "untagged"))
        return cls(entries)


def split(manifest, ratios, seed):
    """Assign train/val/test splits by a seeded permutation.

    n_val = round(n*r_val), n_test = round(n*r_test), train gets the
    remainder. Returns a new Manifest; splits are disjoint & exhaustive.
    """
    r_train, r_val, r_test = ratios
    if min(ratios) <= 0 or abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"ratios must be positive and sum to 1, got {ratios}")
    n = len(manifest)
    n_val = round(n * r_val)
    n_test = round(n * r_test)
    perm = np.random.default_rng(seed).permutation(n)
    assignment = ["train"] * n
    for i in perm[:n_val]:
        assignment[i] = "val"
    for i in perm[n_val:n_val + n_test]:
        assignment[i] = "test"
    entries = [ManifestEntry(e.id, e.path, e.label, assignment[i], e.category)
               for i, e in enumerate(manifest.entries)]
    return Manifest(entries)


def load_image(path, target_size):
    """Decode to 3-channel float32 (3,H,W) in [0,1], bilinear resize."""
    try:
        with Image.open(path) as im:
            im = im.convert("RGB")  # drops alpha, replicates gray
            if im.size != (target_size, target_size):
                im = im.resize((target_size, target_size), Image.BILINEAR)
            arr = np.asarray(im, dtype=np.float32) / 255.0
    except (OSError, UnidentifiedImageError, ValueError) as e:
        raise IngestionError(path, str(e)) from e
    return np.ascontiguousarray(arr.transpose(2, 0, 1))


def compute_mean(images):
    """Per-pixel, per-channel mean image over the training split."""
    if len(images) == 0:
        raise DataError("cannot compute mean of an empty training split")
    return np.mean(np.asarray(images, dtype=np.float64), axis=0).astype(np.float32)


def apply_mean(x, mean):
    return x - mean


@dataclass
class ArrayDataset:
    """In-memory dataset: images (N,3,H,W) float32, labels (N,) int."""
    images: np.ndarray
    labels: np.ndarray
    ids: list | None = None

    def __len__(self):
        return len(self.labels)

    def subset(self, idx):
        return ArrayDataset(self.images[idx], self.labels[idx],
                            [self.ids[i] for i in idx] if self.ids else None)


def load_split(manifest, which, target_size):
    """Materialize one split of a manifest as an ArrayDataset."""
    entries = [e for e in manifest.by_split(which) if e.label is not None]
    if not entries:
        raise DataError(f"split {which!r} has no labeled entries")
    images = np.stack([load_image(e.path, target_size) for e in entries])
    labels = np.array([e.label for e in entries], dtype=np.int64)
    return ArrayDataset(images, labels, [e.id for e in entries])


def audit_sample(manifest, n, seed):
    """Uniform sample of n entries without replacement, seeded."""
    if n > len(manifest):
        raise ConfigError(f"cannot sample {n} from manifest of size {len(manifest)}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(manifest), size=n, replace=False)
    return [manifest.entries[i] for i in idx]


def tally_categories(manifest):
    counts = {}
    for e in manifest.entries:
        counts[e.category] = counts.get(e.category, 0) + 1
    return counts
