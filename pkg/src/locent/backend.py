"""Kernel backend selection.

The hot numeric kernels in :mod:`locent.kernels` are written once, in a
numba-compilable subset of numpy, and compiled with ``@njit`` when the numba
backend is active.  Setting the environment variable ``LOCENT_BACKEND=numpy``
before import skips compilation and runs the identical source as plain
numpy/Python -- slower, but the same arithmetic path, which makes it the
reference for equivalence tests and a fallback on hosts without a working
numba install.

The choice is made once at import time; switch backends by restarting the
interpreter (the benchmark script does this via subprocesses).
"""

from __future__ import annotations

import os

ENV_VAR = "LOCENT_BACKEND"


def _choose() -> str:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice in ("numpy", "python"):
        return "numpy"
    if choice == "numba":
        import numba  # noqa: F401  -- fail loudly if explicitly requested

        return "numba"
    if choice not in ("", "auto"):
        raise ValueError(f"{ENV_VAR} must be 'numba', 'numpy', or 'auto', got {choice!r}")
    try:
        import numba  # noqa: F401

        return "numba"
    except ImportError:
        return "numpy"


ACTIVE = _choose()

try:
    # Load the BLAS/LAPACK carriers first: threadpoolctl can only limit
    # pools of libraries already present in the process.
    import numpy  # noqa: F401
    import scipy.linalg  # noqa: F401

    from threadpoolctl import threadpool_limits

    # The kernels call LAPACK on tiny matrices thousands of times per state;
    # BLAS-internal thread pools only add dispatch and lock overhead there.
    # Keep a reference: the limiter restores the old limits when collected.
    _BLAS_LIMIT = threadpool_limits(limits=1, user_api="blas")
except ImportError:  # pragma: no cover - threadpoolctl ships with scipy stacks
    _BLAS_LIMIT = None

if ACTIVE == "numba":
    import warnings

    from numba.core.errors import NumbaWarning

    # the TBB-version notice on import is irrelevant here; another
    # threading layer is picked automatically
    warnings.filterwarnings("ignore", category=NumbaWarning)

    from numba import njit as _njit
    from numba import prange

    import numba as _numba

    # Sample-level prange parallelism is available but defaults to one
    # thread: the per-sample work is allocation- and small-LAPACK-heavy,
    # which scales poorly with threads on small hosts.  Raise via
    # set_num_threads (CLI --threads).
    _numba.set_num_threads(1)

    def jit(func):
        return _njit(cache=True)(func)

    def pjit(func):
        return _njit(cache=True, parallel=True)(func)

else:
    prange = range

    def jit(func):
        return func

    def pjit(func):
        return func


def set_num_threads(n: int) -> None:
    """Limit kernel-level parallelism (no-op on the numpy backend)."""
    if ACTIVE == "numba":
        import numba

        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))
