"""Convnet training and transfer-learning stack for binary photo
preference modeling, with a human-in-the-loop labeling service."""

from . import kernels
from .checkpoint import load_checkpoint, save_checkpoint
from .data import (ArrayDataset, Manifest, ManifestEntry, apply_mean,
                   audit_sample, compute_mean, load_image, load_split, split,
                   tally_categories)
from .features import FeatureMatrix, export_features, import_features
from .gradcheck import check_layer
from .model import (Checkpoint, ModelSpec, build_preset, count_params,
                    freeze_all_but_last_k, full_freeze_mask, infer_shapes,
                    init_params, param_shapes, spatial_chain)
from .optim import (CurveLog, TrainConfig, evaluate, select_early_stop,
                    sgd_step, train)
from .synth import oracle_classify, synth_generate, write_synth_dataset
from .transfer import (estimate_label_noise, extract_features, fine_tune,
                       train_logreg)

__version__ = "0.1.0"
