"""Select the arithmetic backend at import time.

Prefers the compiled extension, falls back to the pure-Python reference.
Set POSSUM_PURE_PYTHON=1 to force the fallback (the benchmark and the
parity tests use this to pin one side).
"""

from __future__ import annotations

import os

if os.environ.get("POSSUM_PURE_PYTHON"):
    from . import _reference as impl
else:
    try:
        from . import _speedups as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _reference as impl  # type: ignore[no-redef]

BACKEND: str = impl.BACKEND
tnorm_pair = impl.tnorm_pair
tnorm_many = impl.tnorm_many
tconorm_pair = impl.tconorm_pair
tconorm_many = impl.tconorm_many
