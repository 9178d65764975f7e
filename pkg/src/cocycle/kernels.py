"""Backend selection for the hot kernels.

The compiled extension ``cocycle._kernels`` is used when it imports; the
numpy/scipy versions in ``cocycle._pykernels`` are the fallback. Both
produce identical outputs, so the choice only affects speed.
"""
from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

_active = _BACKENDS.get("compiled", _pykernels)


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return "compiled" if _active is _compiled else "python"


def use_backend(name):
    """Switch the kernel backend (``"compiled"`` or ``"python"``)."""
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable backend {name!r}; available: {available_backends()}"
        ) from None


def backend(name):
    """Return the kernel module for ``name`` without activating it."""
    return _BACKENDS[name]


def fill_forward(h, v, start, coins):
    return _active.fill_forward(h, v, start, coins)


def zero_labels(h, v):
    return _active.zero_labels(h, v)


def directed_zero_depth(h, v, cap):
    return _active.directed_zero_depth(h, v, int(cap))
