"""Sequential model specs, the two architecture presets, shape inference,
parameter counting, freezing masks and initialization."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ShapeError


# ---------------------------------------------------------------- layer kinds

@dataclass(frozen=True)
class Conv3x3:
    out_maps: int
    bias_mode: str = "untied"  # "tied" | "untied"
    kind: str = field(default="conv3x3", init=False)


@dataclass(frozen=True)
class MaxPool2x2:
    kind: str = field(default="maxpool2x2", init=False)


@dataclass(frozen=True)
class ReLU:
    kind: str = field(default="relu", init=False)


@dataclass(frozen=True)
class Flatten:
    kind: str = field(default="flatten", init=False)


@dataclass(frozen=True)
class FullyConnected:
    out_units: int
    kind: str = field(default="fc", init=False)


@dataclass(frozen=True)
class Dropout:
    p: float
    kind: str = field(default="dropout", init=False)


@dataclass(frozen=True)
class SoftmaxNLL:
    kind: str = field(default="softmax_nll", init=False)


_KINDS = {
    "conv3x3": Conv3x3, "maxpool2x2": MaxPool2x2, "relu": ReLU,
    "flatten": Flatten, "fc": FullyConnected, "dropout": Dropout,
    "softmax_nll": SoftmaxNLL,
}


@dataclass
class ModelSpec:
    input_shape: tuple        # (C, H, W)
    layers: list
    name: str = "model"

    def __post_init__(self):
        self.input_shape = tuple(self.input_shape)
        n_softmax = sum(1 for l in self.layers if l.kind == "softmax_nll")
        if n_softmax != 1 or self.layers[-1].kind != "softmax_nll":
            raise ConfigError("spec must end in exactly one softmax_nll layer")
        infer_shapes(self)  # raises ShapeError if any layer underflows

    def layer_names(self):
        """Stable per-layer names: conv1, relu1, pool1, fc1, ..."""
        counts = {}
        short = {"conv3x3": "conv", "maxpool2x2": "pool", "relu": "relu",
                 "flatten": "flatten", "fc": "fc", "dropout": "dropout",
                 "softmax_nll": "softmax"}
        names = []
        for l in self.layers:
            s = short[l.kind]
            counts[s] = counts.get(s, 0) + 1
            names.append(s if s in ("flatten", "softmax") else f"{s}{counts[s]}")
        return names

    def to_dict(self):
        out = []
        for l in self.layers:
            d = {"kind": l.kind}
            if l.kind == "conv3x3":
                d.update(out_maps=l.out_maps, bias_mode=l.bias_mode)
            elif l.kind == "fc":
                d["out_units"] = l.out_units
            elif l.kind == "dropout":
                d["p"] = l.p
            out.append(d)
        return {"name": self.name, "input_shape": list(self.input_shape), "layers": out}

    @classmethod
    def from_dict(cls, d):
        layers = []
        for ld in d["layers"]:
            kind = ld.pop("kind")
            if kind not in _KINDS:
                raise ConfigError(f"unknown layer kind {kind!r}")
            layers.append(_KINDS[kind](**ld))
        return cls(tuple(d["input_shape"]), layers, d.get("name", "model"))


# ---------------------------------------------------------------- presets

def build_preset(name, input_size=None, in_dim=None):
    """Return one of the named architectures.

    'attractiveness' and 'gender' take an optional square input size
    (250 default). 'attractiveness_small' is the shrunk low-resolution
    variant (64 default): the first two conv/pool stages plus the same
    FC head, for fast runs on small synthetic images. Deeper stacks do
    not train at this scale: the small-uniform init contracts each conv
    stage's activations several-fold, so with three or more stages no
    single learning rate reaches every layer. 'logreg_head' needs in_dim.
    """
    if input_size is None:
        input_size = 64 if name == "attractiveness_small" else 250
    if name == "attractiveness":
        layers = []
        for m in (8, 16, 16, 32, 32):
            layers += [Conv3x3(m), ReLU(), MaxPool2x2()]
        layers += [Flatten(),
                   Dropout(0.5), FullyConnected(32), ReLU(),
                   Dropout(0.5), FullyConnected(16), ReLU(),
                   FullyConnected(2), SoftmaxNLL()]
        return ModelSpec((3, input_size, input_size), layers, "attractiveness")
    if name == "attractiveness_small":
        layers = []
        for m in (8, 16):
            layers += [Conv3x3(m), ReLU(), MaxPool2x2()]
        layers += [Flatten(),
                   Dropout(0.5), FullyConnected(32), ReLU(),
                   Dropout(0.5), FullyConnected(16), ReLU(),
                   FullyConnected(2), SoftmaxNLL()]
        return ModelSpec((3, input_size, input_size), layers,
                         "attractiveness_small")
    if name == "gender":
        layers = [Conv3x3(64), ReLU(), MaxPool2x2()]
        for m in (128, 256, 512):
            layers += [Conv3x3(m), ReLU(), Conv3x3(m), ReLU(), MaxPool2x2()]
        # feature maps stay at 512 after the last pool; the trailing pool
        # brings the flattened dim to 512*4*4 = 8192
        layers += [Conv3x3(512), ReLU(), Conv3x3(512), ReLU(), MaxPool2x2()]
        layers += [Flatten(),
                   Dropout(0.5), FullyConnected(1024), ReLU(),
                   Dropout(0.5), FullyConnected(512), ReLU(),
                   FullyConnected(2), SoftmaxNLL()]
        return ModelSpec((3, input_size, input_size), layers, "gender")
    if name == "logreg_head":
        if in_dim is None:
            raise ConfigError("logreg_head preset requires in_dim")
        layers = [Flatten(), FullyConnected(2), SoftmaxNLL()]
        return ModelSpec((in_dim, 1, 1), layers, "logreg_head")
    raise ConfigError(f"unknown preset {name!r}")


# ---------------------------------------------------------------- shapes

def infer_shapes(spec):
    """Per-layer (in_shape, out_shape), batch dimension omitted."""
    shape = tuple(spec.input_shape)
    table = []
    for i, l in enumerate(spec.layers):
        ins = shape
        if l.kind == "conv3x3":
            c, h, w = shape
            if h < 3 or w < 3:
                raise ShapeError(f"layer {i} (conv3x3): input {shape} smaller than 3x3")
            shape = (l.out_maps, h - 2, w - 2)
        elif l.kind == "maxpool2x2":
            c, h, w = shape
            shape = (c, math.ceil(h / 2), math.ceil(w / 2))
        elif l.kind == "flatten":
            shape = (int(np.prod(shape)),)
        elif l.kind == "fc":
            if len(shape) != 1:
                raise ShapeError(f"layer {i} (fc): expects flat input, got {shape}")
            shape = (l.out_units,)
        # relu / dropout / softmax_nll keep the shape
        if min(shape) < 1:
            raise ShapeError(f"layer {i} ({l.kind}): output shape {shape} underflows")
        table.append((ins, shape))
    return table


def spatial_chain(spec):
    """Input heights of each conv/pool layer plus the flatten input height."""
    chain = []
    for l, (ins, _) in zip(spec.layers, infer_shapes(spec)):
        if l.kind in ("conv3x3", "maxpool2x2"):
            chain.append(ins[1])
        elif l.kind == "flatten":
            chain.append(ins[1])
    return chain


# ---------------------------------------------------------------- parameters

def param_shapes(spec):
    """Shapes of (w, b) for each parameterized layer, in layer order.

    Returns a list of (layer_index, {"w": shape, "b": shape}).
    """
    out = []
    for i, (l, (ins, outs)) in enumerate(zip(spec.layers, infer_shapes(spec))):
        if l.kind == "conv3x3":
            w = (l.out_maps, ins[0], 3, 3)
            b = (l.out_maps,) if l.bias_mode == "tied" else outs
            out.append((i, {"w": w, "b": b}))
        elif l.kind == "fc":
            out.append((i, {"w": (ins[0], l.out_units), "b": (l.out_units,)}))
    return out


def count_params(spec, last_k=None):
    shapes = param_shapes(spec)
    if last_k is not None:
        if not (1 <= last_k <= len(shapes)):
            raise ConfigError(f"last_k={last_k} out of range; "
                              f"spec has {len(shapes)} parameterized layers")
        shapes = shapes[-last_k:]
    return sum(int(np.prod(s["w"])) + int(np.prod(s["b"])) for _, s in shapes)


@dataclass
class Checkpoint:
    spec: ModelSpec
    params: list   # per parameterized layer: {"w": array, "b": array}
    meta: dict = field(default_factory=dict)

    def copy(self):
        return Checkpoint(self.spec,
                          [{k: v.copy() for k, v in p.items()} for p in self.params],
                          dict(self.meta))


INIT_RANGE = 0.06  # weights ~ U(-0.06, 0.06); biases start at zero


def init_params(spec, seed, dtype=np.float32):
    """Fresh checkpoint: uniform weights, zero biases, deterministic per seed."""
    rng = np.random.default_rng(seed)
    params = []
    for _, shapes in param_shapes(spec):
        w = rng.uniform(-INIT_RANGE, INIT_RANGE, size=shapes["w"]).astype(dtype)
        b = np.zeros(shapes["b"], dtype=dtype)
        params.append({"w": w, "b": b})
    return Checkpoint(spec, params, {"seed": seed})


def full_freeze_mask(spec, trainable=True):
    return [trainable] * len(param_shapes(spec))


def freeze_all_but_last_k(spec, k):
    n = len(param_shapes(spec))
    if not (1 <= k <= n):
        raise ConfigError(f"k={k} out of range for {n} parameterized layers")
    return [False] * (n - k) + [True] * k
