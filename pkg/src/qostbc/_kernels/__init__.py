"""Decoder hot kernels: compiled extension with a pure-NumPy fallback.

The compiled ``_bcjr`` module is used when it imported cleanly and the
environment variable ``QOSTBC_PURE_PYTHON`` is unset; otherwise the NumPy
reference implementation takes over.  ``BACKEND`` records the choice.
"""

import os

from . import reference

if os.environ.get("QOSTBC_PURE_PYTHON"):
    bcjr_posteriors = reference.bcjr_posteriors
    BACKEND = "python"
else:
    try:
        from ._bcjr import bcjr_posteriors

        BACKEND = "compiled"
    except ImportError:  # extension not built
        bcjr_posteriors = reference.bcjr_posteriors
        BACKEND = "python"


def available_backends() -> dict:
    """Importable kernel backends, keyed by name (for tests/benchmarks)."""
    found = {"python": reference.bcjr_posteriors}
    try:
        from . import _bcjr

        found["compiled"] = _bcjr.bcjr_posteriors
    except ImportError:
        pass
    return found
