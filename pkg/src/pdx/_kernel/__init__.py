"""Kernel backend selection.

The compiled extension is used when available; set ``PDX_PURE_PYTHON=1`` to
force the pure-Python fallback (mainly for parity testing and environments
without a C compiler).
"""

import os

if os.environ.get("PDX_PURE_PYTHON", "") not in ("", "0"):
    from pdx._kernel import pure as _impl
else:
    try:
        from pdx._kernel import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from pdx._kernel import pure as _impl

BACKEND = _impl.BACKEND
triangulate = _impl.triangulate
orient2d_sign = _impl.orient2d_sign
incircle_sign = _impl.incircle_sign
incircle_decide = _impl.incircle_decide


def get_backend(name):
    """Return a specific backend module by name ('compiled' or 'pure')."""
    if name == "pure":
        from pdx._kernel import pure

        return pure
    if name == "compiled":
        from pdx._kernel import _core

        return _core
    raise ValueError(f"unknown backend {name!r}")
