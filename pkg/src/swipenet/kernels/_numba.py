"""Numba @njit loop-kernel backend."""

import numpy as np
from numba import njit


@njit(cache=True)
def _conv3x3_forward(x, w, y):
    n, ci, h, ww = x.shape
    co = w.shape[0]
    ho, wo = h - 2, ww - 2
    for b in range(n):
        for o in range(co):
            for i in range(ho):
                for j in range(wo):
                    acc = 0.0
                    for c in range(ci):
                        for u in range(3):
                            for v in range(3):
                                acc += x[b, c, i + u, j + v] * w[o, c, u, v]
                    y[b, o, i, j] = acc


def conv3x3_forward(x, w):
    n, ci, h, ww = x.shape
    y = np.empty((n, w.shape[0], h - 2, ww - 2), dtype=x.dtype)
    _conv3x3_forward(x, w, y)
    return y


@njit(cache=True)
def _conv3x3_backward_input(g, w, gx):
    n, co, ho, wo = g.shape
    ci = w.shape[1]
    for b in range(n):
        for c in range(ci):
            for o in range(co):
                for i in range(ho):
                    for j in range(wo):
                        gv = g[b, o, i, j]
                        for u in range(3):
                            for v in range(3):
                                gx[b, c, i + u, j + v] += gv * w[o, c, u, v]


def conv3x3_backward_input(grad_out, w):
    n, co, ho, wo = grad_out.shape
    gx = np.zeros((n, w.shape[1], ho + 2, wo + 2), dtype=grad_out.dtype)
    _conv3x3_backward_input(grad_out, w, gx)
    return gx


@njit(cache=True)
def _conv3x3_backward_weights(x, g, gw):
    n, ci, h, ww = x.shape
    co, ho, wo = g.shape[1], g.shape[2], g.shape[3]
    for o in range(co):
        for c in range(ci):
            for u in range(3):
                for v in range(3):
                    acc = 0.0
                    for b in range(n):
                        for i in range(ho):
                            for j in range(wo):
                                acc += g[b, o, i, j] * x[b, c, i + u, j + v]
                    gw[o, c, u, v] = acc


def conv3x3_backward_weights(x, grad_out):
    gw = np.empty((grad_out.shape[1], x.shape[1], 3, 3), dtype=x.dtype)
    _conv3x3_backward_weights(x, grad_out, gw)
    return gw


@njit(cache=True)
def _maxpool2x2_forward(x, y, argmax):
    n, c, h, w = x.shape
    ho, wo = y.shape[2], y.shape[3]
    for b in range(n):
        for ch in range(c):
            for i in range(ho):
                for j in range(wo):
                    best = x[b, ch, 2 * i, 2 * j]
                    bi, bj = 2 * i, 2 * j
                    for u in range(2):
                        for v in range(2):
                            ii, jj = 2 * i + u, 2 * j + v
                            if ii < h and jj < w and x[b, ch, ii, jj] > best:
                                best = x[b, ch, ii, jj]
                                bi, bj = ii, jj
                    y[b, ch, i, j] = best
                    argmax[b, ch, i, j] = bi * w + bj


def maxpool2x2_forward(x):
    n, c, h, w = x.shape
    ho, wo = -(-h // 2), -(-w // 2)
    y = np.empty((n, c, ho, wo), dtype=x.dtype)
    argmax = np.empty((n, c, ho, wo), dtype=np.int64)
    _maxpool2x2_forward(x, y, argmax)
    return y, argmax


@njit(cache=True)
def _maxpool2x2_backward(g, argmax, gx):
    n, c, ho, wo = g.shape
    for b in range(n):
        for ch in range(c):
            for i in range(ho):
                for j in range(wo):
                    gx[b, ch, argmax[b, ch, i, j]] += g[b, ch, i, j]


def maxpool2x2_backward(grad_out, argmax, in_h, in_w):
    n, c = grad_out.shape[:2]
    gx = np.zeros((n, c, in_h * in_w), dtype=grad_out.dtype)
    _maxpool2x2_backward(grad_out, argmax, gx)
    return gx.reshape(n, c, in_h, in_w)
