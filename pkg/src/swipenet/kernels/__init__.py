"""Hot inner-loop kernels with two interchangeable backends.

``numba`` (default when importable) runs @njit loop kernels; ``numpy``
is a pure-numpy im2col/stride-trick path. Select with the environment
variable ``SWIPENET_BACKEND=numba|numpy`` or :func:`use_backend`.
Both backends are sequential and bit-deterministic run to run.
"""

import os

from . import _numpy

try:
    from . import _numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAS_NUMBA = False

from ..errors import ConfigError

_BACKENDS = {"numpy": _numpy}
if HAS_NUMBA:
    _BACKENDS["numba"] = _numba

_current = os.environ.get("SWIPENET_BACKEND", "numba" if HAS_NUMBA else "numpy")
if _current not in _BACKENDS:
    raise ConfigError(
        f"SWIPENET_BACKEND={_current!r} not available; choose from {sorted(_BACKENDS)}"
    )


def backend() -> str:
    """Name of the active kernel backend."""
    return _current


def use_backend(name: str) -> None:
    """Switch the active backend ('numba' or 'numpy')."""
    global _current
    if name not in _BACKENDS:
        raise ConfigError(f"unknown backend {name!r}; choose from {sorted(_BACKENDS)}")
    _current = name


def _mod():
    return _BACKENDS[_current]


def conv3x3_forward(x, w):
    return _mod().conv3x3_forward(x, w)


def conv3x3_backward_input(grad_out, w):
    return _mod().conv3x3_backward_input(grad_out, w)


def conv3x3_backward_weights(x, grad_out):
    return _mod().conv3x3_backward_weights(x, grad_out)


def maxpool2x2_forward(x):
    return _mod().maxpool2x2_forward(x)


def maxpool2x2_backward(grad_out, argmax, in_h, in_w):
    return _mod().maxpool2x2_backward(grad_out, argmax, in_h, in_w)
