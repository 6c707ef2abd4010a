"""SGD with momentum and L2 weight decay, the epoch loop, early
stopping and error-curve logging."""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import net
from .errors import ConfigError, DataError, NumericError
from .model import full_freeze_mask


@dataclass
class TrainConfig:
    learning_rate: float = 0.001
    momentum: float = 0.9
    l2: float = 0.0
    epochs: int = 50
    batch_size: int = 128
    dropout_enabled: bool = True
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if not (0 <= self.momentum < 1):
            raise ConfigError(f"momentum must be in [0,1), got {self.momentum}")
        if self.l2 < 0:
            raise ConfigError(f"l2 must be >= 0, got {self.l2}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")

    def replace(self, **kw):
        return replace(self, **kw)


@dataclass
class CurveLog:
    """Per-epoch train/validation misclassification rates."""
    records: list = field(default_factory=list)  # {"epoch","train_err","val_err"}

    def append(self, epoch, train_err, val_err):
        if self.records and epoch <= self.records[-1]["epoch"]:
            raise ConfigError("epochs must be strictly increasing")
        self.records.append({"epoch": epoch, "train_err": float(train_err),
                             "val_err": float(val_err)})

    def __len__(self):
        return len(self.records)

    def val_errors(self):
        return [r["val_err"] for r in self.records]

    def to_csv(self, path):
        with open(path, "w") as f:
            f.write("epoch,train_err,val_err\n")
            for r in self.records:
                f.write(f"{r['epoch']},{r['train_err']:.6f},{r['val_err']:.6f}\n")

    @classmethod
    def from_csv(cls, path):
        log = cls()
        with open(path) as f:
            header = f.readline().strip()
            if header != "epoch,train_err,val_err":
                raise ConfigError(f"unexpected curve CSV header {header!r}")
            for line in f:
                e, t, v = line.strip().split(",")
                log.append(int(e), float(t), float(v))
        return log


def zero_velocity(params):
    return [{k: np.zeros_like(v) for k, v in p.items()} for p in params]


def sgd_step(params, grads, velocity, cfg, freeze=None):
    """One momentum-SGD update, in place.

    Weights get L2 decay (g + 2*l2*w); biases are excluded. Frozen
    parameter groups are left untouched.
    """
    for i, (p, g, v) in enumerate(zip(params, grads, velocity)):
        if freeze is not None and not freeze[i]:
            continue
        for key in p:
            if p[key].shape != g[key].shape:
                raise ConfigError(
                    f"param/grad shape mismatch: {p[key].shape} vs {g[key].shape}")
            eff = g[key] + 2 * cfg.l2 * p[key] if key == "w" else g[key]
            v[key] *= cfg.momentum
            v[key] -= cfg.learning_rate * eff
            p[key] += v[key]
    return params, velocity


def train(ckpt, freeze, train_set, val_set, cfg, keep="best"):
    """Train a model; returns (CurveLog, checkpoint(s)).

    keep="best" returns the single min-val-error checkpoint (earliest
    tie); keep="all" returns one checkpoint per epoch. The input
    checkpoint is not mutated. Deterministic for a fixed cfg.seed.
    """
    if len(train_set.labels) == 0 or len(val_set.labels) == 0:
        raise DataError("train and validation sets must be non-empty")
    if cfg.batch_size > len(train_set.labels):
        raise ConfigError(f"batch_size {cfg.batch_size} exceeds train size "
                          f"{len(train_set.labels)}")
    if freeze is None:
        freeze = full_freeze_mask(ckpt.spec)
    if not any(freeze):
        raise ConfigError("freeze mask leaves no trainable parameters")

    model = ckpt.copy()
    rng = np.random.default_rng(cfg.seed)
    velocity = zero_velocity(model.params)
    curve = CurveLog()
    kept = []
    best = model.copy()
    best_val = np.inf
    n = len(train_set.labels)

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n) if cfg.shuffle else np.arange(n)
        wrong = 0
        for bi, s in enumerate(range(0, n, cfg.batch_size)):
            idx = order[s:s + cfg.batch_size]
            xb, yb = train_set.images[idx], train_set.labels[idx]
            cache = net.forward(model, xb, labels=yb, mode="train", rng=rng,
                                dropout_enabled=cfg.dropout_enabled)
            if not np.isfinite(cache["loss"]):
                raise NumericError(f"non-finite loss at epoch {epoch}, batch {bi}")
            wrong += int((cache["probs"].argmax(axis=1) != yb).sum())
            grads = net.backward(model, cache, yb)
            sgd_step(model.params, grads, velocity, cfg, freeze)
        train_err = wrong / n
        val_err = evaluate(model, val_set)["misclassification"]
        curve.append(epoch, train_err, val_err)
        model.meta.update(epoch=epoch, train_err=train_err, val_err=val_err,
                          seed=cfg.seed, created_at=time.time())
        if keep == "all":
            kept.append(model.copy())
        if val_err < best_val:
            best_val = val_err
            best = model.copy()

    return (curve, kept) if keep == "all" else (curve, best)


def select_early_stop(curve, checkpoints):
    """Checkpoint at the epoch of minimum validation error (earliest tie)."""
    if len(curve) == 0:
        raise DataError("empty curve log")
    vals = curve.val_errors()
    return checkpoints[int(np.argmin(vals))]


def evaluate(ckpt, dataset, batch_size=256):
    """Misclassification, accuracy and confusion matrix, dropout off."""
    if len(dataset.labels) == 0:
        raise DataError("cannot evaluate on an empty dataset")
    probs = net.predict_proba(ckpt, dataset.images, batch_size)
    pred = probs.argmax(axis=1)  # argmax first-hit rule = lower class on ties
    y = dataset.labels
    k = probs.shape[1]
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (y, pred), 1)
    mis = float((pred != y).mean())
    return {"misclassification": mis, "accuracy": 1.0 - mis, "confusion": confusion}
