"""Kernel backend selection.

The compiled Cython core is preferred when it has been built; otherwise the
pure-Python twin is used.  Set TRIQUAD_PURE_PYTHON=1 to force the fallback
(useful for the parity tests and the benchmark).
"""

from __future__ import annotations

import os

from . import pure

_impl = pure
if not os.environ.get("TRIQUAD_PURE_PYTHON"):
    try:
        from . import _core as _compiled  # type: ignore[attr-defined]

        _impl = _compiled
    except ImportError:
        pass

BACKEND = _impl.BACKEND_NAME
cf_expansion = _impl.cf_expansion
reduced_forms = _impl.reduced_forms
unit_filter = _impl.unit_filter

__all__ = ["BACKEND", "cf_expansion", "reduced_forms", "unit_filter", "pure"]
