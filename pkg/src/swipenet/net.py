"""Running a ModelSpec + parameters forward and backward."""

import numpy as np

from . import layers
from .errors import ConfigError


def _param_index_by_layer(spec):
    idx = {}
    p = 0
    for i, l in enumerate(spec.layers):
        if l.kind in ("conv3x3", "fc"):
            idx[i] = p
            p += 1
    return idx


def forward(ckpt, x, labels=None, mode="test", rng=None,
            dropout_enabled=True, upto=None):
    """Run the network; returns a cache dict with activations and loss.

    mode="train" enables dropout (if dropout_enabled); rng must then be
    given. upto=<layer name> stops after that layer, with the activation
    in cache["out"] (used for feature extraction).
    """
    spec = ckpt.spec
    names = spec.layer_names()
    if upto is not None and upto not in names:
        raise ConfigError(f"unknown layer name {upto!r}; valid names: {names}")
    pmap = _param_index_by_layer(spec)
    acts = [x]          # acts[i] is the input of layer i
    aux = [None] * len(spec.layers)
    loss = probs = None
    out = x
    for i, l in enumerate(spec.layers):
        if l.kind == "conv3x3":
            p = ckpt.params[pmap[i]]
            out = layers.conv3x3_forward(out, p["w"], p["b"], l.bias_mode)
        elif l.kind == "maxpool2x2":
            out, aux[i] = layers.maxpool2x2_forward(out)
        elif l.kind == "relu":
            out = layers.relu_forward(out)
        elif l.kind == "flatten":
            aux[i] = out.shape
            out = layers.flatten_forward(out)
        elif l.kind == "fc":
            p = ckpt.params[pmap[i]]
            out = layers.fc_forward(out, p["w"], p["b"])
        elif l.kind == "dropout":
            m = "train" if (mode == "train" and dropout_enabled) else "test"
            out, aux[i] = layers.dropout_forward(out, l.p, m, rng)
        elif l.kind == "softmax_nll":
            if labels is not None:
                loss, probs = layers.softmax_nll_forward(out, labels)
            else:
                probs = layers.softmax(out)
            out = probs
        acts.append(out)
        if upto is not None and names[i] == upto:
            return {"out": out, "acts": acts, "aux": aux,
                    "loss": loss, "probs": probs}
    return {"out": out, "acts": acts, "aux": aux, "loss": loss, "probs": probs}


def backward(ckpt, cache, labels):
    """Gradients w.r.t. all parameters, aligned with ckpt.params."""
    spec = ckpt.spec
    pmap = _param_index_by_layer(spec)
    grads = [None] * len(ckpt.params)
    acts, aux = cache["acts"], cache["aux"]
    g = None
    for i in range(len(spec.layers) - 1, -1, -1):
        l = spec.layers[i]
        x = acts[i]
        if l.kind == "softmax_nll":
            g = layers.softmax_nll_backward(cache["probs"], labels)
        elif l.kind == "fc":
            p = ckpt.params[pmap[i]]
            g, gw, gb = layers.fc_backward(x, p["w"], g)
            grads[pmap[i]] = {"w": gw, "b": gb}
        elif l.kind == "dropout":
            g = layers.dropout_backward(g, aux[i], l.p)
        elif l.kind == "flatten":
            g = layers.flatten_backward(g, aux[i])
        elif l.kind == "relu":
            g = layers.relu_backward(x, g)
        elif l.kind == "maxpool2x2":
            g = layers.maxpool2x2_backward(g, aux[i], x.shape[2], x.shape[3])
        elif l.kind == "conv3x3":
            p = ckpt.params[pmap[i]]
            g, gw, gb = layers.conv3x3_backward(x, p["w"], p["b"], g, l.bias_mode)
            grads[pmap[i]] = {"w": gw, "b": gb}
    return grads


def predict_proba(ckpt, images, batch_size=128):
    """Class probabilities in inference mode (dropout off), batched."""
    out = []
    for s in range(0, images.shape[0], batch_size):
        cache = forward(ckpt, images[s:s + batch_size], mode="test")
        out.append(cache["probs"])
    return np.concatenate(out, axis=0)
