"""Transfer-learning regimes: last-k fine-tuning of a pretrained
network, feature extraction at a named layer, logistic regression on
feature files, and the relabeling noise estimator."""

import numpy as np

from . import net
from .data import ArrayDataset
from .errors import ConfigError, ShapeError
from .features import FeatureMatrix
from .model import INIT_RANGE, build_preset, freeze_all_but_last_k, init_params
from .optim import TrainConfig, train

FINE_TUNE_DEFAULTS = dict(learning_rate=0.001, momentum=0.9, l2=0.0001,
                          epochs=50, batch_size=16, dropout_enabled=False)
LOGREG_DEFAULTS = dict(learning_rate=0.0001, momentum=0.9, l2=0.8,
                       epochs=50, batch_size=16, dropout_enabled=False)


def fine_tune(pretrained, last_k, train_set, val_set, cfg=None):
    """Retrain only the last k FC layers of a pretrained network.

    The trainable tail is reinitialized from the run seed; everything
    else stays frozen (bitwise). Dropout is off. Returns
    (CurveLog, best checkpoint by validation error).
    """
    if last_k not in (1, 2, 3):
        raise ConfigError(f"last_k must be 1, 2 or 3, got {last_k}")
    n_classes = pretrained.spec.layers[-2].out_units
    if int(train_set.labels.max()) >= n_classes:
        raise ShapeError(f"model has {n_classes} classes but labels reach "
                         f"{int(train_set.labels.max())}")
    if cfg is None:
        cfg = TrainConfig(**FINE_TUNE_DEFAULTS)
    freeze = freeze_all_but_last_k(pretrained.spec, last_k)
    model = pretrained.copy()
    rng = np.random.default_rng(cfg.seed)
    for i, trainable in enumerate(freeze):
        if trainable:
            p = model.params[i]
            p["w"] = rng.uniform(-INIT_RANGE, INIT_RANGE,
                                 size=p["w"].shape).astype(p["w"].dtype)
            p["b"] = np.zeros_like(p["b"])
    return train(model, freeze, train_set, val_set, cfg, keep="best")


def extract_features(ckpt, layer_name, dataset, batch_size=64):
    """Inference up to a named layer boundary; rows follow dataset order."""
    rows = []
    for s in range(0, len(dataset), batch_size):
        cache = net.forward(ckpt, dataset.images[s:s + batch_size],
                            mode="test", upto=layer_name)
        rows.append(cache["out"].reshape(cache["out"].shape[0], -1))
    features = np.concatenate(rows, axis=0)
    ids = dataset.ids or [str(i) for i in range(len(dataset))]
    return FeatureMatrix(features, list(ids), np.asarray(dataset.labels, dtype=np.int64))


def _as_dataset(fm):
    n, d = fm.features.shape
    return ArrayDataset(np.ascontiguousarray(fm.features, dtype=np.float32)
                        .reshape(n, d, 1, 1),
                        fm.labels, list(fm.ids))


def train_logreg(train_fm, val_fm, cfg=None):
    """Logistic-regression head (FC-2 + softmax) on feature matrices."""
    if train_fm.dim != val_fm.dim:
        raise ShapeError(f"feature dim mismatch: train {train_fm.dim} vs "
                         f"val {val_fm.dim}")
    if cfg is None:
        cfg = TrainConfig(**LOGREG_DEFAULTS)
    spec = build_preset("logreg_head", in_dim=train_fm.dim)
    model = init_params(spec, cfg.seed)
    return train(model, None, _as_dataset(train_fm), _as_dataset(val_fm),
                 cfg, keep="best")


def estimate_label_noise(n_relabeled, n_disagreements):
    """Noise fraction 2e/n (capped at 1), under the coin-flip-on-the-
    boundary assumption."""
    if n_relabeled <= 0:
        raise ValueError(f"n_relabeled must be > 0, got {n_relabeled}")
    if not (0 <= n_disagreements <= n_relabeled):
        raise ValueError(f"n_disagreements must be in [0, {n_relabeled}], "
                         f"got {n_disagreements}")
    return min(1.0, 2.0 * n_disagreements / n_relabeled)
