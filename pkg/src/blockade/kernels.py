"""Kernel backend selection.

The compiled extension is used when it imports cleanly, unless
``BLOCKADE_PURE_PYTHON`` is set. Both backends share one contract, so
callers never branch on ``BACKEND``.
"""

import os
from array import array

from . import _pykernels

MASK_BITS = 64

if os.environ.get("BLOCKADE_PURE_PYTHON"):
    _ext = None
else:
    try:
        from . import _ckernels as _ext
    except ImportError:
        _ext = None

BACKEND = "compiled" if _ext is not None else "python"
_impl = _ext if _ext is not None else _pykernels

overflow = _impl.overflow
flow = _impl.flow
leafless = _impl.leafless
fixed_pair = _impl.fixed_pair


def int_buffer(values):
    return array("i", values)


def mask_buffer(values):
    return array("Q", values)


def independent(post, node_parent, real_masks, ranks, mask, width):
    # the compiled DP packs element sets into one machine word
    if _ext is not None and width <= MASK_BITS:
        return _ext.independent(post, node_parent, real_masks, ranks, mask)
    return _pykernels.independent(post, node_parent, real_masks, ranks, mask)


def backends():
    """Mapping of available backend name to module, for benchmarks and tests."""
    out = {"python": _pykernels}
    if _ext is not None:
        out["compiled"] = _ext
    return out
