"""Finite-difference verification of every layer's backward pass.

Runs in 64-bit. Each check builds a scalar loss (a fixed random
projection of the layer output, or the NLL itself), computes analytic
gradients through the layer's backward, and compares against central
differences.
"""

import numpy as np

from . import layers
from .errors import ConfigError


def relative_error(a, n):
    """max over elements of |a-n| / max(1e-8, |a|+|n|)."""
    denom = np.maximum(1e-8, np.abs(a) + np.abs(n))
    return float(np.max(np.abs(a - n) / denom)) if a.size else 0.0


def fd_grad(f, arr, eps):
    """Central-difference gradient of scalar f w.r.t. arr, elementwise."""
    g = np.zeros_like(arr)
    it = np.nditer(arr, flags=["multi_index"])
    for _ in it:
        i = it.multi_index
        orig = arr[i]
        arr[i] = orig + eps
        fp = f()
        arr[i] = orig - eps
        fm = f()
        arr[i] = orig
        g[i] = (fp - fm) / (2 * eps)
    return g


def check_layer(kind, input_shape, eps=1e-3, tol=1e-4, seed=0, **kw):
    """Check one layer kind on a random instance; returns a report dict.

    kinds: conv3x3 (out_maps, bias_mode), fc (out_units), relu,
    maxpool2x2, flatten, dropout (p), softmax_nll.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(input_shape)
    errs = {}

    if kind == "conv3x3":
        out_maps = kw.get("out_maps", 3)
        bias_mode = kw.get("bias_mode", "untied")
        n, c, h, w_ = input_shape
        w = rng.standard_normal((out_maps, c, 3, 3))
        bshape = (out_maps,) if bias_mode == "tied" else (out_maps, h - 2, w_ - 2)
        b = rng.standard_normal(bshape)
        r = rng.standard_normal((n, out_maps, h - 2, w_ - 2))
        loss = lambda: float(np.sum(r * layers.conv3x3_forward(x, w, b, bias_mode)))
        gx, gw, gb = layers.conv3x3_backward(x, w, b, r, bias_mode)
        errs["input"] = relative_error(gx, fd_grad(loss, x, eps))
        errs["weights"] = relative_error(gw, fd_grad(loss, w, eps))
        errs["bias"] = relative_error(gb, fd_grad(loss, b, eps))

    elif kind == "fc":
        out_units = kw.get("out_units", 4)
        n, d = input_shape
        w = rng.standard_normal((d, out_units))
        b = rng.standard_normal(out_units)
        r = rng.standard_normal((n, out_units))
        loss = lambda: float(np.sum(r * layers.fc_forward(x, w, b)))
        gx, gw, gb = layers.fc_backward(x, w, r)
        errs["input"] = relative_error(gx, fd_grad(loss, x, eps))
        errs["weights"] = relative_error(gw, fd_grad(loss, w, eps))
        errs["bias"] = relative_error(gb, fd_grad(loss, b, eps))

    elif kind == "relu":
        # keep samples away from the kink by at least 0.1
        x = np.sign(x) * (0.1 + np.abs(x))
        r = rng.standard_normal(x.shape)
        loss = lambda: float(np.sum(r * layers.relu_forward(x)))
        gx = layers.relu_backward(x, r)
        errs["input"] = relative_error(gx, fd_grad(loss, x, eps))

    elif kind == "maxpool2x2":
        # separate window entries so eps never flips an argmax
        x = x + 0.5 * np.arange(x.size).reshape(x.shape)
        n, c, h, w_ = input_shape
        ho, wo = -(-h // 2), -(-w_ // 2)
        r = rng.standard_normal((n, c, ho, wo))
        loss = lambda: float(np.sum(r * layers.maxpool2x2_forward(x)[0]))
        _, am = layers.maxpool2x2_forward(x)
        gx = layers.maxpool2x2_backward(r, am, h, w_)
        errs["input"] = relative_error(gx, fd_grad(loss, x, eps))

    elif kind == "flatten":
        r = rng.standard_normal((input_shape[0], int(np.prod(input_shape[1:]))))
        loss = lambda: float(np.sum(r * layers.flatten_forward(x)))
        gx = layers.flatten_backward(r, x.shape)
        errs["input"] = relative_error(gx, fd_grad(loss, x, eps))

    elif kind == "dropout":
        p = kw.get("p", 0.5)
        mask = (rng.random(x.shape) >= p).astype(x.dtype)
        r = rng.standard_normal(x.shape)
        loss = lambda: float(np.sum(r * (x * mask / (1 - p))))
        gx = layers.dropout_backward(r, mask, p)
        errs["input"] = relative_error(gx, fd_grad(loss, x, eps))

    elif kind == "softmax_nll":
        n, k = input_shape
        labels = rng.integers(0, k, size=n)
        loss = lambda: float(layers.softmax_nll_forward(x, labels)[0])
        _, probs = layers.softmax_nll_forward(x, labels)
        gx = layers.softmax_nll_backward(probs, labels)
        errs["input"] = relative_error(gx, fd_grad(loss, x, eps))

    else:
        raise ConfigError(f"unknown layer kind {kind!r}")

    max_err = max(errs.values())
    return {"layer": kind, "max_rel_err": max_err, "tol": tol,
            "passed": max_err <= tol, "details": errs}
