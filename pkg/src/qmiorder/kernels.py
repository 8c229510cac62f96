"""Cost kernels used inside the ordering search.

The compiled extension is used when it was built; otherwise, or when
``QMIORDER_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
NumPy fallback is used. ``BACKEND`` names the one in effect.
"""

from __future__ import annotations

import os

_force_python = os.environ.get("QMIORDER_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

idist_perm = _impl.idist_perm
block_estimate = _impl.block_estimate
i_hat_perm = _impl.i_hat_perm
i_mps_perm = _impl.i_mps_perm
i_mps_check_perm = _impl.i_mps_check_perm
i_tree_perm = _impl.i_tree_perm

__all__ = [
    "BACKEND",
    "idist_perm",
    "block_estimate",
    "i_hat_perm",
    "i_mps_perm",
    "i_mps_check_perm",
    "i_tree_perm",
]
