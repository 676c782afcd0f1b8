"""Backend selection for the gate kernels.

Prefers the compiled extension; falls back to numpy when the extension is
missing or when ``QMOLGEN_FORCE_NUMPY=1`` is set (used by the benchmark and
the backend-agreement tests).
"""

import os

from . import _gates_py

if os.environ.get("QMOLGEN_FORCE_NUMPY") == "1":
    _impl = _gates_py
    BACKEND = "numpy"
else:
    try:
        from . import _gates as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _gates_py
        BACKEND = "numpy"

apply_rx = _impl.apply_rx
apply_rz = _impl.apply_rz
apply_rxx = _impl.apply_rxx

numpy_backend = _gates_py
