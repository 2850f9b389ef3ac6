"""Pick the search kernel: compiled when available, pure Python otherwise.

Set ``CWLAB_PURE_PYTHON=1`` to force the fallback.  The compiled kernel
stores rows in 64-bit words, so wider instances always use Python.
"""

import os

from ._engine import (  # noqa: F401
    FC,
    PRUNE_ALL,
    PRUNE_DEF,
    PRUNE_DEF_LITERAL,
    PRUNE_LEAF,
    PRUNE_PAIR,
    PRUNE_SUPPORT,
    PSEUDO,
    SCALABLE,
    BudgetExceeded,
)
from . import _engine

_kernel = None
if not os.environ.get("CWLAB_PURE_PYTHON"):
    try:
        from . import _kernel
    except ImportError:  # pragma: no cover - depends on the build
        _kernel = None

BACKEND = "cython" if _kernel is not None else "python"
MAX_COMPILED = 64


def Solver(n, *args, **kwargs):
    if _kernel is not None and n <= MAX_COMPILED:
        return _kernel.Solver(n, *args, **kwargs)
    return _engine.Solver(n, *args, **kwargs)
