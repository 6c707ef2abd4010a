import numpy as np
import pytest

from swipenet.errors import FormatError
from swipenet.features import FeatureMatrix, export_features, import_features


def random_fm(n=5, d=4096, seed=0):
    rng = np.random.default_rng(seed)
    return FeatureMatrix(rng.standard_normal((n, d)).astype(np.float32),
                         [f"id{i}" for i in range(n)],
                         rng.integers(0, 2, n).astype(np.int64))


def test_round_trip_bitwise(tmp_path):
    fm = random_fm()
    p = tmp_path / "f.swft"
    export_features(fm, p)
    back = import_features(p)
    assert back.features.tobytes() == fm.features.tobytes()
    assert back.ids == fm.ids
    np.testing.assert_array_equal(back.labels, fm.labels)


def test_header_row_count_mismatch(tmp_path):
    fm = random_fm(n=10, d=8)
    p = tmp_path / "f.swft"
    export_features(fm, p)
    raw = p.read_bytes()
    # drop the last trailer line -> 9 rows declared as 10
    trimmed = raw[: raw.rstrip(b"\n").rfind(b"\n") + 1]
    p.write_bytes(trimmed)
    with pytest.raises(FormatError):
        import_features(p)


def test_truncated_matrix(tmp_path):
    fm = random_fm(n=4, d=16)
    p = tmp_path / "f.swft"
    export_features(fm, p)
    p.write_bytes(p.read_bytes()[:30])
    with pytest.raises(FormatError):
        import_features(p)


def test_bad_magic(tmp_path):
    p = tmp_path / "f.swft"
    p.write_bytes(b"NOPE 3 4\n" + b"\x00" * 48)
    with pytest.raises(FormatError):
        import_features(p)


def test_duplicate_ids_rejected():
    with pytest.raises(FormatError):
        FeatureMatrix(np.zeros((2, 3), np.float32), ["a", "a"],
                      np.zeros(2, np.int64))


def test_row_misalignment_rejected():
    with pytest.raises(FormatError):
        FeatureMatrix(np.zeros((2, 3), np.float32), ["a"], np.zeros(2, np.int64))
