"""Dense residue kernels with a compiled core and a pure-Python fallback.

The compiled extension is used when it imports and ``FTHRESH_PURE_PYTHON`` is
unset; both expose the same ``Box`` interface.
"""

import os

from . import _box_py

try:
    if os.environ.get("FTHRESH_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _box_c
except ImportError:
    _box_c = None

BACKEND = "cython" if _box_c is not None else "python"


def available_backends():
    return ["cython", "python"] if _box_c is not None else ["python"]


def make_box(p, widths, backend=None):
    backend = backend or BACKEND
    if backend == "cython":
        if _box_c is None:
            raise ImportError("compiled kernel is not built")
        if p < 256:
            return _box_c.Box(p, widths)
    return _box_py.Box(p, widths)
