"""Kernel backend selection.

The compiled extension is used when it imports; setting ``GRS_KIT_PURE=1``
forces the pure-Python implementations.  ``BACKEND`` names the active one.
"""

import os

from grskit import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("GRS_KIT_PURE"):
    try:
        from grskit import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_impl = compiled_backend or python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

NEG_SUM, POS_DIFF, ZERO_IFF = 1, 2, 3

sum_diff_tables = _impl.sum_diff_tables
sign_table = _impl.sign_table
axiom_violations = _impl.axiom_violations
forced_pairs = _impl.forced_pairs
sums_hit = _impl.sums_hit
zero_rows = _impl.zero_rows
