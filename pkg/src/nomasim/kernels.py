"""Backend selection for the batch cluster kernels.

The numba-compiled loops are the default; set NOMASIM_NO_NUMBA=1 to force
the pure-numpy fallback (also used automatically when numba is missing).
Both backends implement identical semantics; benchmarks/bench_kernels.py
compares them.
"""

from __future__ import annotations

import os

from . import _kernels_np


def _numba_disabled() -> bool:
    flag = os.environ.get("NOMASIM_NO_NUMBA", "").strip().lower()
    return flag not in ("", "0", "false", "no")


if _numba_disabled():
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_jit as _impl

        BACKEND = "numba"
    except ImportError:
        _impl = _kernels_np
        BACKEND = "numpy"

power_factor_batch = _impl.power_factor_batch
feasibility_batch = _impl.feasibility_batch
allocate_batch = _impl.allocate_batch
noma_rates_batch = _impl.noma_rates_batch
