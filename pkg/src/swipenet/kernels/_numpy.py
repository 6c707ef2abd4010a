"""Pure-numpy kernel backend (stride tricks + BLAS matmuls)."""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def conv3x3_forward(x, w):
    # x: (N,C,H,W), w: (Co,C,3,3) -> (N,Co,H-2,W-2), valid cross-correlation
    win = sliding_window_view(x, (3, 3), axis=(2, 3))  # (N,C,Ho,Wo,3,3)
    y = np.tensordot(win, w, axes=([1, 4, 5], [1, 2, 3]))  # (N,Ho,Wo,Co)
    return np.ascontiguousarray(y.transpose(0, 3, 1, 2)).astype(x.dtype, copy=False)


def conv3x3_backward_input(grad_out, w):
    # full correlation of grad_out with spatially flipped filters
    g = np.pad(grad_out, ((0, 0), (0, 0), (2, 2), (2, 2)))
    win = sliding_window_view(g, (3, 3), axis=(2, 3))  # (N,Co,H,W,3,3)
    wf = w[:, :, ::-1, ::-1]
    gx = np.tensordot(win, wf, axes=([1, 4, 5], [0, 2, 3]))  # (N,H,W,C)
    return np.ascontiguousarray(gx.transpose(0, 3, 1, 2)).astype(grad_out.dtype, copy=False)


def conv3x3_backward_weights(x, grad_out):
    win = sliding_window_view(x, (3, 3), axis=(2, 3))  # (N,C,Ho,Wo,3,3)
    gw = np.tensordot(grad_out, win, axes=([0, 2, 3], [0, 2, 3]))  # (Co,C,3,3)
    return np.ascontiguousarray(gw).astype(x.dtype, copy=False)


def maxpool2x2_forward(x):
    # ceil-mode non-overlapping 2x2; ties resolved to the smallest linear index
    n, c, h, w = x.shape
    ho, wo = -(-h // 2), -(-w // 2)
    xp = np.full((n, c, ho * 2, wo * 2), -np.inf, dtype=x.dtype)
    xp[:, :, :h, :w] = x
    # windows in (dy,dx) row-major order so argmax's first-hit rule picks
    # the smallest linear input index
    win = xp.reshape(n, c, ho, 2, wo, 2).transpose(0, 1, 2, 4, 3, 5).reshape(n, c, ho, wo, 4)
    k = np.argmax(win, axis=-1)
    y = np.take_along_axis(win, k[..., None], axis=-1)[..., 0]
    dy, dx = k // 2, k % 2
    rows = 2 * np.arange(ho)[None, None, :, None] + dy
    cols = 2 * np.arange(wo)[None, None, None, :] + dx
    argmax = (rows * w + cols).astype(np.int64)
    return np.ascontiguousarray(y), argmax


def maxpool2x2_backward(grad_out, argmax, in_h, in_w):
    n, c, ho, wo = grad_out.shape
    gx = np.zeros((n, c, in_h * in_w), dtype=grad_out.dtype)
    flat_idx = argmax.reshape(n, c, -1)
    np.put_along_axis(gx, flat_idx, grad_out.reshape(n, c, -1), axis=-1)
    return gx.reshape(n, c, in_h, in_w)
