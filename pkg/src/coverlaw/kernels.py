"""Backend selection for the lattice kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Set ``COVERLAW_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

if os.environ.get("COVERLAW_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"


def backends():
    """Return ``{name: module}`` for every backend importable here."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


closure = _impl.closure
meet_join_tables = _impl.meet_join_tables
order_reversal_violation = _impl.order_reversal_violation
orthomodular_violation = _impl.orthomodular_violation
covering_violation = _impl.covering_violation
