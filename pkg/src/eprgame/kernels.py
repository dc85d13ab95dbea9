"""Backend selection for the hot kernels.

The compiled extension is used when it imports; setting
``EPRGAME_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _fallback

if os.environ.get("EPRGAME_PURE_PYTHON"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND
sym_sums = _impl.sym_sums
omega = _impl.omega
ghz_prob = _impl.ghz_prob
w_prob = _impl.w_prob
ghz_dense = _impl.ghz_dense
w_dense = _impl.w_dense


def available_backends():
    """Kernel modules importable in this environment, fallback first."""
    mods = [_fallback]
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        mods.append(_kernels)
    return mods
