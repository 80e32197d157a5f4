"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is fixed at import time. Set ``GIND_DISABLE_NUMBA=1`` (or run
without numba installed) to use the numpy implementations; both backends
expose the same functions with the same signatures.
"""

import os

import numpy as np

from . import _numpy

_FLAG = os.environ.get("GIND_DISABLE_NUMBA", "").strip().lower()
_disabled = _FLAG not in ("", "0", "false", "no")

if _disabled:
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _impl = _numpy
        BACKEND = "numpy"

dual_exponent = _impl.dual_exponent
lp_norm = _impl.lp_norm
lp_norm_rows = _impl.lp_norm_rows
dual_vec = _impl.dual_vec
multistart_ascent = _impl.multistart_ascent
phase_enum_values = _impl.phase_enum_values
power_gram = _impl.power_gram
batch_sigma_max = _impl.batch_sigma_max


def backends():
    """Return ``{name: module}`` for every importable backend."""
    out = {"numpy": _numpy}
    try:
        from . import _numba
        out["numba"] = _numba
    except ImportError:  # pragma: no cover
        pass
    return out


def warmup():
    """Trigger compilation of every kernel on tiny inputs."""
    B = np.eye(2, dtype=np.complex128)
    y = np.ones(2, dtype=np.complex128)
    for p in (1.0, 2.0, 3.0, np.inf):
        lp_norm(y, p)
        dual_vec(y, p)
    lp_norm_rows(B, 2.0)
    multistart_ascent(B, 2.0, 1.0, B.copy(), 5, 1e-10)
    phase_enum_values(B, 1.0, np.array([1.0, -1.0], dtype=np.complex128))
    power_gram(B, y.copy(), 5, 1e-10)
    batch_sigma_max(B[None], y[None, None, :].copy(), 5, 1e-10)
