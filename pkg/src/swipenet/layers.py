"""Forward/backward primitives for the network layers.

All functions are pure: they take arrays (N,C,H,W) plus parameters and
return new arrays. Randomness (dropout) comes from an explicit
numpy Generator.
"""

import numpy as np

from . import kernels
from .errors import ConfigError, DataError, ShapeError


def check_input(x):
    if x.ndim != 4:
        raise ShapeError(f"expected 4-D (N,C,H,W) input, got shape {x.shape}")
    if x.size == 0 or min(x.shape) < 1:
        raise DataError(f"empty tensor with shape {x.shape}")


# ---------------------------------------------------------------- conv 3x3

def conv3x3_forward(x, w, b, bias_mode="untied"):
    """Valid 3x3 cross-correlation, stride 1, plus tied or untied bias.

    x: (N,Cin,H,W); w: (Co,Cin,3,3); b: (Co,) tied or (Co,H-2,W-2) untied.
    """
    check_input(x)
    if x.shape[2] < 3 or x.shape[3] < 3:
        raise ShapeError(f"conv3x3 needs H,W >= 3, input shape is {x.shape}")
    if w.shape[1] != x.shape[1]:
        raise ShapeError(
            f"conv3x3 channel mismatch: input shape {x.shape} vs weight shape {w.shape}"
        )
    y = kernels.conv3x3_forward(x, w)
    if bias_mode == "tied":
        y += b[None, :, None, None]
    else:
        y += b[None, :, :, :]
    return y


def conv3x3_backward(x, w, b, grad_out, bias_mode="untied"):
    """Gradients of conv3x3_forward w.r.t. input, weights and bias."""
    expect = (x.shape[0], w.shape[0], x.shape[2] - 2, x.shape[3] - 2)
    if grad_out.shape != expect:
        raise ShapeError(f"grad_out shape {grad_out.shape} != forward output {expect}")
    gx = kernels.conv3x3_backward_input(grad_out, w)
    gw = kernels.conv3x3_backward_weights(x, grad_out)
    if bias_mode == "tied":
        gb = grad_out.sum(axis=(0, 2, 3))
    else:
        gb = grad_out.sum(axis=0)
    return gx, gw, gb


# ---------------------------------------------------------------- max pool

def maxpool2x2_forward(x):
    """Non-overlapping 2x2 max pool, ceil mode; returns (out, argmax).

    argmax holds linear indices into each (H,W) plane, used by backward;
    ties break toward the smallest linear index.
    """
    check_input(x)
    return kernels.maxpool2x2_forward(x)


def maxpool2x2_backward(grad_out, argmax, in_h, in_w):
    return kernels.maxpool2x2_backward(grad_out, argmax, in_h, in_w)


# ---------------------------------------------------------------- pointwise

def relu_forward(x):
    return np.maximum(x, 0)


def relu_backward(x, grad_out):
    return grad_out * (x > 0)


def flatten_forward(x):
    return x.reshape(x.shape[0], -1)


def flatten_backward(grad_out, in_shape):
    return grad_out.reshape(in_shape)


# ---------------------------------------------------------------- dense

def fc_forward(x, w, b):
    """x: (N,D); w: (D,K); b: (K,)."""
    if x.shape[1] != w.shape[0]:
        raise ShapeError(f"fc input dim {x.shape} does not match weight shape {w.shape}")
    return x @ w + b


def fc_backward(x, w, grad_out):
    gx = grad_out @ w.T
    gw = x.T @ grad_out
    gb = grad_out.sum(axis=0)
    return gx, gw, gb


# ---------------------------------------------------------------- dropout

def dropout_forward(x, p, mode, rng):
    """Inverted dropout: zero with prob p, scale survivors by 1/(1-p).

    Test mode is the identity. Returns (out, mask); mask is None when
    nothing was dropped.
    """
    if not (0 <= p < 1):
        raise ConfigError(f"dropout probability must be in [0,1), got {p}")
    if mode == "test" or p == 0:
        return x, None
    mask = (rng.random(x.shape) >= p).astype(x.dtype)
    return x * mask / (1 - p), mask


def dropout_backward(grad_out, mask, p):
    if mask is None:
        return grad_out
    return grad_out * mask / (1 - p)


# ---------------------------------------------------------------- softmax/NLL

def softmax(logits):
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def softmax_nll_forward(logits, labels):
    """Mean negative log likelihood of the correct class.

    logits: (N,K); labels: ints in [0,K). Returns (loss, probs).
    """
    labels = np.asarray(labels)
    k = logits.shape[1]
    if labels.min(initial=0) < 0 or labels.max(initial=0) >= k:
        raise DataError(f"labels must lie in [0,{k}), got range "
                        f"[{labels.min()},{labels.max()}]")
    p = softmax(logits)
    n = logits.shape[0]
    loss = -np.log(np.maximum(p[np.arange(n), labels], 1e-30)).mean()
    return loss, p


def softmax_nll_backward(probs, labels):
    n = probs.shape[0]
    g = probs.copy()
    g[np.arange(n), labels] -= 1
    return g / n
