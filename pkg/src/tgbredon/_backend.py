"""Pick the elimination kernels at import time.

The compiled module works on int64 and raises ``OverflowError`` when an
intermediate leaves that range; we then redo the whole computation with
the arbitrary-precision Python kernel.  Set ``TGBREDON_PURE=1`` to skip the
compiled kernels entirely.
"""

import logging
import os

from . import _kernels_py

log = logging.getLogger(__name__)

_compiled = None
if not os.environ.get("TGBREDON_PURE"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_INT64_MAX = (1 << 62)


def _fits(a):
    for row in a:
        for v in row:
            if v >= _INT64_MAX or v <= -_INT64_MAX:
                return False
    return True


def snf(a, m, n):
    if _compiled is not None and _fits(a):
        try:
            return _compiled.snf(a, m, n)
        except OverflowError:
            log.debug("int64 overflow in snf (%dx%d); retrying with big ints", m, n)
    return _kernels_py.snf(a, m, n)


def column_echelon(a, m, n):
    if _compiled is not None and _fits(a):
        try:
            return _compiled.column_echelon(a, m, n)
        except OverflowError:
            log.debug("int64 overflow in echelon (%dx%d); retrying with big ints", m, n)
    return _kernels_py.column_echelon(a, m, n)
