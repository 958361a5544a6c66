"""Numeric kernel backend selection.

The compiled Cython core is preferred; the pure-Python mirror is the
fallback.  Setting SH22OSC_PURE_PYTHON=1 forces the fallback (useful for
benchmarking the two side by side).
"""

import os

if os.environ.get("SH22OSC_PURE_PYTHON"):
    from . import _core_py as core

    BACKEND = "python"
else:
    try:
        from . import _core as core  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _core_py as core

        BACKEND = "python"


def backend_name() -> str:
    """Which kernel implementation is active: 'cython' or 'python'."""
    return BACKEND
