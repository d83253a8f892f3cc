"""Kernel backend selection.

Imports the compiled extension when it is available and falls back to the
pure-Python kernels otherwise.  Set PAINLEVE1_PURE_PY=1 to force the
fallback (the parity tests and benchmarks do this).
"""

from __future__ import annotations

import os

if os.environ.get("PAINLEVE1_PURE_PY") == "1":
    from painleve1 import _kern_py as _impl
else:
    try:
        from painleve1 import _kern as _impl  # type: ignore[attr-defined]
    except ImportError:
        from painleve1 import _kern_py as _impl

STATUS_OK = _impl.STATUS_OK
STATUS_BLOWUP = _impl.STATUS_BLOWUP
STATUS_STIFF = _impl.STATUS_STIFF
STATUS_NEG_BLOWUP = _impl.STATUS_NEG_BLOWUP

integrate_pi = _impl.integrate_pi
transport_arc = _impl.transport_arc
transport_ray = _impl.transport_ray


def backend_name() -> str:
    """'compiled' when the extension is in use, 'pure' otherwise."""
    return _impl.BACKEND
