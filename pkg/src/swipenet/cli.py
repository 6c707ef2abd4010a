"""Command-line surface for every pipeline stage."""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import data as data_mod
from . import synth as synth_mod
from .checkpoint import load_checkpoint, save_checkpoint
from .errors import SwipenetError
from .features import import_features
from .model import build_preset, init_params
from .optim import TrainConfig, evaluate, train
from .transfer import (FINE_TUNE_DEFAULTS, LOGREG_DEFAULTS,
                       estimate_label_noise, extract_features, fine_tune,
                       train_logreg)

PRESET_DEFAULTS = {
    "attractiveness": dict(learning_rate=0.001, momentum=0.9, l2=0.001,
                           epochs=50, batch_size=128, dropout_enabled=True),
    "attractiveness_small": dict(learning_rate=0.05, momentum=0.9, l2=0.0,
                                 epochs=30, batch_size=32, dropout_enabled=True),
    "gender": dict(learning_rate=0.001, momentum=0.9, l2=0.0001,
                   epochs=13, batch_size=50, dropout_enabled=True),
}


def _load_config(path):
    if path is None:
        return {}
    with open(path) as f:
        return json.load(f)


def _make_cfg(defaults, args):
    cfg = dict(defaults)
    cfg.update(_load_config(args.config))
    for key in ("learning_rate", "momentum", "l2", "epochs", "batch_size"):
        v = getattr(args, key.replace("learning_rate", "lr"), None)
        if v is not None:
            cfg[key] = v
    cfg["seed"] = args.seed
    return TrainConfig(**cfg)


def _prepare_splits(manifest_path, size):
    manifest = data_mod.Manifest.load(manifest_path)
    train_set = data_mod.load_split(manifest, "train", size)
    val_set = data_mod.load_split(manifest, "val", size)
    mean = data_mod.compute_mean(train_set.images)
    train_set.images = data_mod.apply_mean(train_set.images, mean)
    val_set.images = data_mod.apply_mean(val_set.images, mean)
    return manifest, train_set, val_set, mean


def _write_run(outdir, cfg, curve, best, extra=None):
    os.makedirs(outdir, exist_ok=True)
    curve.to_csv(os.path.join(outdir, "curves.csv"))
    save_checkpoint(best, os.path.join(outdir, "best.ckpt"))
    with open(os.path.join(outdir, "run.txt"), "w") as f:
        f.write(f"finished: {time.strftime('%Y-%m-%d %H:%M:%S')}\n")
        f.write(f"config: {cfg}\n")
        final = curve.records[-1] if curve.records else None
        f.write(f"final: {final}\n")
        f.write(f"best: epoch={best.meta.get('epoch')} "
                f"val_err={best.meta.get('val_err')}\n")
        for k, v in (extra or {}).items():
            f.write(f"{k}: {v}\n")


def cmd_split(args):
    manifest = data_mod.Manifest.load(args.manifest)
    ratios = tuple(float(x) for x in args.ratios.split(","))
    out = data_mod.split(manifest, ratios, args.seed)
    out.save(args.manifest)
    counts = {s: len(out.by_split(s)) for s in ("train", "val", "test")}
    print(f"assigned splits: {counts}")
    return 0


def cmd_synth(args):
    ds = synth_mod.synth_generate(args.n, args.noise_rate, args.seed, args.size)
    os.makedirs(args.out, exist_ok=True)
    mpath = synth_mod.write_synth_dataset(ds, args.out, labeled=not args.unlabeled)
    print(f"wrote {args.n} images and {mpath}")
    return 0


def cmd_train(args):
    cfg = _make_cfg(PRESET_DEFAULTS[args.preset], args)
    spec = build_preset(args.preset, input_size=args.size)
    _, train_set, val_set, _ = _prepare_splits(args.manifest, spec.input_shape[1])
    model = init_params(spec, cfg.seed)
    curve, best = train(model, None, train_set, val_set, cfg)
    _write_run(args.out, cfg, curve, best)
    print(f"best epoch {best.meta['epoch']}: val_err={best.meta['val_err']:.4f}")
    return 0


def cmd_transfer(args):
    cfg = _make_cfg(FINE_TUNE_DEFAULTS, args)
    pretrained = load_checkpoint(args.pretrained)
    size = pretrained.spec.input_shape[1]
    _, train_set, val_set, _ = _prepare_splits(args.manifest, size)
    curve, best = fine_tune(pretrained, args.last_k, train_set, val_set, cfg)
    _write_run(args.out, cfg, curve, best, {"last_k": args.last_k})
    print(f"best epoch {best.meta['epoch']}: val_err={best.meta['val_err']:.4f}")
    return 0


def cmd_extract_features(args):
    ckpt = load_checkpoint(args.checkpoint)
    size = ckpt.spec.input_shape[1]
    manifest = data_mod.Manifest.load(args.manifest)
    train_set = data_mod.load_split(manifest, "train", size)
    mean = data_mod.compute_mean(train_set.images)
    dataset = data_mod.load_split(manifest, args.split, size)
    dataset.images = data_mod.apply_mean(dataset.images, mean)
    fm = extract_features(ckpt, args.layer, dataset)
    from .features import export_features
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    export_features(fm, args.out)
    print(f"wrote {len(fm)} x {fm.dim} features to {args.out}")
    return 0


def cmd_train_logreg(args):
    cfg = _make_cfg(LOGREG_DEFAULTS, args)
    train_fm = import_features(args.train_features)
    val_fm = import_features(args.val_features)
    curve, best = train_logreg(train_fm, val_fm, cfg)
    _write_run(args.out, cfg, curve, best)
    print(f"best epoch {best.meta['epoch']}: val_err={best.meta['val_err']:.4f}")
    return 0


def cmd_evaluate(args):
    ckpt = load_checkpoint(args.checkpoint)
    size = ckpt.spec.input_shape[1]
    manifest = data_mod.Manifest.load(args.manifest)
    train_set = data_mod.load_split(manifest, "train", size)
    mean = data_mod.compute_mean(train_set.images)
    dataset = data_mod.load_split(manifest, args.split, size)
    dataset.images = data_mod.apply_mean(dataset.images, mean)
    res = evaluate(ckpt, dataset)
    print(f"misclassification: {res['misclassification']:.4f}")
    print(f"accuracy: {res['accuracy']:.4f}")
    print(f"confusion:\n{res['confusion']}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "run.txt"), "w") as f:
            f.write(f"accuracy: {res['accuracy']:.6f}\n")
            f.write(f"misclassification: {res['misclassification']:.6f}\n")
            f.write(f"confusion: {res['confusion'].tolist()}\n")
    return 0


def cmd_noise_estimate(args):
    print(f"{estimate_label_noise(args.n, args.errors):.2f}")
    return 0


def cmd_audit(args):
    manifest = data_mod.Manifest.load(args.manifest)
    sample = data_mod.audit_sample(manifest, args.n, args.seed)
    for e in sample[:20]:
        print(f"{e.id}  {e.category}")
    if len(sample) > 20:
        print(f"... ({len(sample) - 20} more)")
    print(f"tally: {data_mod.tally_categories(manifest)}")
    return 0


def cmd_serve(args):
    import uvicorn
    from .server import create_app
    app = create_app(args.manifest, args.checkpoint, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="swipenet")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--config", default=None, help="JSON config overrides")
        if out:
            sp.add_argument("--out", default="run")

    def train_flags(sp):
        sp.add_argument("--lr", type=float, default=None)
        sp.add_argument("--momentum", type=float, default=None)
        sp.add_argument("--l2", type=float, default=None)
        sp.add_argument("--epochs", type=int, default=None)
        sp.add_argument("--batch-size", dest="batch_size", type=int, default=None)

    sp = sub.add_parser("split", help="assign train/val/test splits in a manifest")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--ratios", default="0.9,0.05,0.05")
    common(sp, out=False)
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("synth", help="generate a synthetic dataset on disk")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--noise-rate", dest="noise_rate", type=float, default=0.0)
    sp.add_argument("--size", type=int, default=250)
    sp.add_argument("--unlabeled", action="store_true",
                    help="write the manifest without labels (for the labeling UI)")
    common(sp)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("train", help="train a preset from scratch")
    sp.add_argument("--preset", required=True,
                    choices=("attractiveness", "attractiveness_small", "gender"))
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--size", type=int, default=None,
                    help="square input size (preset default: 250, or 64 for "
                         "attractiveness_small)")
    train_flags(sp)
    common(sp)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("transfer", help="fine-tune the last k layers of a checkpoint")
    sp.add_argument("--pretrained", required=True)
    sp.add_argument("--last-k", dest="last_k", type=int, required=True)
    sp.add_argument("--manifest", required=True)
    train_flags(sp)
    common(sp)
    sp.set_defaults(func=cmd_transfer)

    sp = sub.add_parser("extract-features", help="dump activations at a layer")
    sp.add_argument("--checkpoint", required=True)
    sp.add_argument("--layer", required=True)
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--split", default="train")
    common(sp)
    sp.set_defaults(func=cmd_extract_features)

    sp = sub.add_parser("train-logreg", help="logistic regression on feature files")
    sp.add_argument("--train-features", dest="train_features", required=True)
    sp.add_argument("--val-features", dest="val_features", required=True)
    train_flags(sp)
    common(sp)
    sp.set_defaults(func=cmd_train_logreg)

    sp = sub.add_parser("evaluate", help="evaluate a checkpoint on a split")
    sp.add_argument("--checkpoint", required=True)
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--split", default="test")
    sp.add_argument("--out", default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--config", default=None)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("noise-estimate", help="relabeling noise estimate 2e/n")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--errors", type=int, required=True)
    common(sp, out=False)
    sp.set_defaults(func=cmd_noise_estimate)

    sp = sub.add_parser("audit", help="seeded audit sample plus category tally")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--n", type=int, default=1000)
    common(sp, out=False)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("serve", help="run the labeling HTTP service")
    sp.add_argument("--manifest", required=True)
    sp.add_argument("--checkpoint", default=None)
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8008)
    sp.add_argument("--ui", default=None, help="static frontend directory")
    common(sp, out=False)
    sp.set_defaults(func=cmd_serve)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SwipenetError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
