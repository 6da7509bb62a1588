"""Kernel backend selection.

The compiled extension is preferred when importable; set GALHEIGHT_PURE=1
to force the numpy fallback (used by the benchmark and the backend tests).
Both backends compute identical arrays.
"""

import os

if os.environ.get("GALHEIGHT_PURE") == "1":
    from . import _closure_py as _impl
    BACKEND = "pure"
else:
    try:
        from . import _closure as _impl
        BACKEND = "compiled"
    except ImportError:
        from . import _closure_py as _impl
        BACKEND = "pure"

mul_batch = _impl.mul_batch
conj_batch = _impl.conj_batch
