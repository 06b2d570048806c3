"""Backend selection for the sparse kernels.

The compiled ``_ckernel`` extension is used when it was built; otherwise
the pure-Python ``_pykernel`` is used.  Setting ``KELLERMAP_BACKEND=python``
forces the fallback.
"""

import os

from kellermap import _pykernel

BACKEND = "python"
mul_terms = _pykernel.mul_terms
lincomb_terms = _pykernel.lincomb_terms

if os.environ.get("KELLERMAP_BACKEND", "").lower() != "python":
    try:
        from kellermap._ckernel import lincomb_terms, mul_terms  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

__all__ = ["BACKEND", "lincomb_terms", "mul_terms"]
