"""Selects the transduction kernel at import time.

The compiled ``_kernel`` extension is used when it was built; otherwise,
or when ``DEPTRANS_PURE_PYTHON=1`` is set, the pure-Python fallback.
"""
import os

from . import _kernel_py

if os.environ.get("DEPTRANS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

transduce = _impl.transduce
BACKEND = "compiled" if _impl is not _kernel_py else "python"

python_transduce = _kernel_py.transduce

try:
    from ._kernel import transduce as compiled_transduce
except ImportError:
    compiled_transduce = None
