"""Hot-loop kernels with a compiled implementation and a pure-Python fallback.

The compiled Cython extension is preferred when it built successfully; set
``PEGSTRESS_PURE=1`` to force the fallback (used by the benchmark and the
cross-implementation tests). Both implementations produce bit-identical
results: each step reads only the minimum of the server-free-time multiset,
and both maintain that multiset exactly.
"""

import os

from . import pure as _pure

if os.environ.get("PEGSTRESS_PURE"):
    _impl = _pure
    IMPLEMENTATION = "pure"
else:
    try:
        from . import _mmc as _impl  # type: ignore[attr-defined]

        IMPLEMENTATION = "compiled"
    except ImportError:
        _impl = _pure
        IMPLEMENTATION = "pure"

fifo_wait_times = _impl.fifo_wait_times

__all__ = ["fifo_wait_times", "IMPLEMENTATION"]
