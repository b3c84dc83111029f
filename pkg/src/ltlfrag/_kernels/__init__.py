"""Hot loops, compiled when the extension is built.

The Cython module ``_core`` is used when importable; otherwise, or when the
environment variable ``LTLFRAG_PURE_PYTHON`` is set to a non-empty value,
the pure-Python ``_fallback`` is used. ``BACKEND`` names the active one.
"""
import os

from . import _fallback
from ._fallback import (  # noqa: F401
    MODE_STUTTER, MODE_SWAP, OP_ALWAYS, OP_AND, OP_EVENTUALLY, OP_FALSE,
    OP_LETTER, OP_NEXT, OP_OR, OP_RELEASE, OP_TRUE, OP_UNTIL,
)

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

if _core is not None and not os.environ.get("LTLFRAG_PURE_PYTHON"):
    BACKEND = "cython"
    _impl = _core
else:
    BACKEND = "python"
    _impl = _fallback

tableau_delta = _impl.tableau_delta
loop_product_search = _impl.loop_product_search
ef_tables = _impl.ef_tables


def backends():
    """Available kernel modules by name."""
    out = {"python": _fallback}
    if _core is not None:
        out["cython"] = _core
    return out
