import numpy as np
import pytest

from swipenet.data import Manifest
from swipenet.errors import ConfigError
from swipenet.synth import (oracle_classify, synth_generate,
                            write_synth_dataset)


def test_deterministic_per_seed():
    a = synth_generate(8, 0.2, seed=4, size=32)
    b = synth_generate(8, 0.2, seed=4, size=32)
    np.testing.assert_array_equal(a.images, b.images)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_zero_noise_labels_are_true():
    ds = synth_generate(50, 0.0, seed=0, size=32)
    np.testing.assert_array_equal(ds.labels, ds.true_labels)


def test_flip_fraction_binomial():
    ds = synth_generate(10_000, 0.24, seed=1, size=32)
    flipped = (ds.labels != ds.true_labels).mean()
    assert 0.225 <= flipped <= 0.255


def test_class_balance():
    ds = synth_generate(10_000, 0.0, seed=2, size=32)
    frac = ds.true_labels.mean()
    assert 0.50 <= frac <= 0.56


def test_oracle_reaches_100_percent_on_true_labels():
    ds = synth_generate(300, 0.24, seed=3, size=48)
    pred = oracle_classify(ds.images, ds.pixel_threshold)
    np.testing.assert_array_equal(pred, ds.true_labels)


def test_oracle_on_observed_labels_within_binomial_ci():
    n = 2000
    ds = synth_generate(n, 0.24, seed=5, size=32)
    pred = oracle_classify(ds.images, ds.pixel_threshold)
    acc = (pred == ds.labels).mean()
    sigma = np.sqrt(0.24 * 0.76 / n)
    assert abs(acc - 0.76) <= 4 * sigma


def test_pixel_ranges_separate_ellipse_from_background():
    ds = synth_generate(20, 0.0, seed=6, size=32)
    bright = ds.images > 0.5
    # every channel agrees on what is ellipse
    assert (bright[:, 0] == bright[:, 1]).all()
    assert ds.images.min() >= 0 and ds.images.max() <= 1


def test_bad_args():
    with pytest.raises(ConfigError):
        synth_generate(0, 0.1, seed=0)
    with pytest.raises(ConfigError):
        synth_generate(5, 0.5, seed=0)


def test_write_dataset(tmp_path):
    ds = synth_generate(6, 0.0, seed=7, size=32)
    mpath = write_synth_dataset(ds, tmp_path)
    m = Manifest.load(mpath)
    assert len(m) == 6
    assert all(e.label in (0, 1) for e in m.entries)
    from swipenet.data import load_image
    x = load_image(m.entries[0].path, 32)
    # PNG quantization stays within half a step of the float image
    assert np.abs(x - ds.images[0]).max() <= 1 / 255


def test_write_unlabeled(tmp_path):
    ds = synth_generate(4, 0.0, seed=8, size=32)
    mpath = write_synth_dataset(ds, tmp_path, labeled=False)
    m = Manifest.load(mpath)
    assert all(e.label is None for e in m.entries)
