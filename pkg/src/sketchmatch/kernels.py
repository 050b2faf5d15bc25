"""Backend selection for the hot loops.

The compiled extension is used when it was built; setting
``SKETCHMATCH_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("SKETCHMATCH_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend

BACKEND = _active.BACKEND
row_distances = _active.row_distances
argmax_increment = _active.argmax_increment


def available_backends():
    backends = {"numpy": python_backend}
    if compiled_backend is not None:
        backends["cython"] = compiled_backend
    return backends
