"""Integer matrix kernels with a compiled fast path.

The compiled extension is used when it imports; otherwise the pure-Python
module serves every call.  Setting ``MUKAIDUAL_PURE_PYTHON=1`` forces the
fallback.  Results are identical on both paths; the compiled path hands over
to Python whenever a value leaves the int64 range.
"""

import os

from . import _pykernels

try:
    if os.environ.get("MUKAIDUAL_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _kernels as _ext
except ImportError:
    _ext = None

BACKEND = "cython" if _ext is not None else "python"


def _dispatch(name):
    pyfunc = getattr(_pykernels, name)
    if _ext is None:
        return pyfunc
    cfunc = getattr(_ext, name)
    overflow = _ext.KernelOverflow

    def call(*args):
        try:
            return cfunc(*args)
        except overflow:
            return pyfunc(*args)

    call.__name__ = name
    call.__doc__ = pyfunc.__doc__
    return call


rank = _dispatch("rank")
rref = _dispatch("rref")
matmul = _dispatch("matmul")
