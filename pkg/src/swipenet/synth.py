"""Synthetic stand-in dataset: filled ellipses on textured noise.

The true label says whether the ellipse covers more than a threshold
number of pixels, with the threshold calibrated for a ~53/47 class
balance. Observed labels are the true labels with a configurable flip
rate, modelling inconsistent human labeling. Fully deterministic per
seed, and the true label is recoverable exactly from the pixels
(ellipse pixels are > 0.5, background stays below it).
"""

from dataclasses import dataclass

import numpy as np
from PIL import Image

from .data import ArrayDataset, Manifest, ManifestEntry
from .errors import ConfigError

AXIS_LO = 0.10   # semi-axis range, as a fraction of image size
AXIS_HI = 0.30
ELLIPSE_MIN = 0.6   # ellipse brightness range; background stays <= 0.4
ELLIPSE_MAX = 1.0
BALANCE = 0.53      # target fraction of label 1


def area_threshold(size):
    """Pixel-count threshold giving ~53% of ellipses the label 1.

    The (1-BALANCE) quantile of a*b for independent uniform semi-axes,
    computed on a fixed grid, times pi.
    """
    g = np.linspace(AXIS_LO * size, AXIS_HI * size, 2001)
    prod = np.multiply.outer(g, g).ravel()
    return float(np.pi * np.quantile(prod, 1 - BALANCE))


@dataclass
class SynthDataset(ArrayDataset):
    true_labels: np.ndarray = None
    pixel_threshold: float = 0.0


def synth_generate(n, noise_rate, seed, size=250):
    """Generate n images (n,3,size,size) with noisy binary labels."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if not (0 <= noise_rate < 0.5):
        raise ConfigError(f"noise_rate must be in [0,0.5), got {noise_rate}")
    rng = np.random.default_rng(seed)
    lo, hi = AXIS_LO * size, AXIS_HI * size
    a = rng.uniform(lo, hi, n)
    b = rng.uniform(lo, hi, n)
    cx = a + rng.random(n) * (size - 2 * a)
    cy = b + rng.random(n) * (size - 2 * b)
    brightness = rng.uniform(ELLIPSE_MIN, ELLIPSE_MAX, n)

    thresh = area_threshold(size)
    yy, xx = np.mgrid[0:size, 0:size]
    images = np.empty((n, 3, size, size), dtype=np.float32)
    true_labels = np.empty(n, dtype=np.int64)
    coarse_n = size // 8 + 1
    for i in range(n):
        coarse = rng.random((3, coarse_n, coarse_n))
        coarse = np.kron(coarse, np.ones((1, 8, 8)))[:, :size, :size]
        fine = rng.random((3, size, size))
        bg = 0.25 * coarse + 0.15 * fine
        mask = ((xx - cx[i]) / a[i]) ** 2 + ((yy - cy[i]) / b[i]) ** 2 <= 1.0
        img = bg.astype(np.float32)
        img[:, mask] = brightness[i]
        images[i] = img
        true_labels[i] = int(mask.sum() > thresh)

    flips = rng.random(n) < noise_rate
    labels = np.where(flips, 1 - true_labels, true_labels)
    return SynthDataset(images=images, labels=labels,
                        ids=[f"synth-{i:05d}" for i in range(n)],
                        true_labels=true_labels, pixel_threshold=thresh)


def oracle_classify(images, pixel_threshold):
    """Recover true labels from pixels alone: count bright pixels."""
    bright = (images > 0.5).all(axis=1)  # ellipse is bright on all channels
    return (bright.sum(axis=(1, 2)) > pixel_threshold).astype(np.int64)


def write_synth_dataset(ds, outdir, labeled=True):
    """Write PNGs plus a manifest CSV; returns the manifest path."""
    import os
    img_dir = os.path.join(outdir, "images")
    os.makedirs(img_dir, exist_ok=True)
    entries = []
    for i, eid in enumerate(ds.ids):
        path = os.path.join(img_dir, f"{eid}.png")
        arr = (ds.images[i].transpose(1, 2, 0) * 255).round().astype(np.uint8)
        Image.fromarray(arr).save(path)
        entries.append(ManifestEntry(eid, path,
                                     int(ds.labels[i]) if labeled else None))
    manifest = Manifest(entries)
    mpath = os.path.join(outdir, "manifest.csv")
    manifest.save(mpath)
    return mpath
