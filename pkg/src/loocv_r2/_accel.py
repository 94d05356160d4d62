"""Backend selection for the numeric kernels.

Numba is used when it is importable and ``LOOCV_R2_NUMBA`` is not set to a
false value (``0``, ``false``, ``no``, ``off``). Otherwise every kernel falls
back to its pure-numpy implementation. The flag is read once, at import.
"""

import os

ENV_FLAG = "LOOCV_R2_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba ships in the dev environment
    numba = None

HAVE_NUMBA = numba is not None


def _flag_enabled(value):
    return value.strip().lower() not in {"0", "false", "no", "off"}


USE_NUMBA = HAVE_NUMBA and _flag_enabled(os.environ.get(ENV_FLAG, "1"))
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(func):
    """Compile ``func`` in nopython mode when numba is importable.

    fastmath stays off: the compensated sums rely on strict IEEE ordering.
    Without numba the plain Python function is returned unchanged.
    """
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, fastmath=False)(func)
