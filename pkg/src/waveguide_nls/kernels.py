"""Backend selection for the hot pointwise kernels.

The compiled Cython extension is preferred when importable; a pure-numpy
fallback keeps the package functional without it. Override with
``WAVEGUIDE_NLS_KERNELS=numpy|cython`` (``cython`` raises if the extension
is missing). Reductions are performed with ``np.sum`` outside the kernels,
so diagnostics aggregate identically on both backends; last-ulp elementwise
differences between libm and numpy's vectorized trig are possible, which is
why output manifests record the active backend.
"""

import os

from . import _kernels_np

_choice = os.environ.get("WAVEGUIDE_NLS_KERNELS", "auto").lower()

if _choice == "numpy":
    _impl = _kernels_np
elif _choice == "cython":
    from . import _kernels_cy as _impl  # noqa: F401  (ImportError is the contract)
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_np

BACKEND = _impl.BACKEND

abs2 = _impl.abs2
abs4 = _impl.abs4
product_abs2 = _impl.product_abs2
cubic_pointwise = _impl.cubic_pointwise
nonlinear_phase = _impl.nonlinear_phase


def backend_name() -> str:
    return BACKEND
