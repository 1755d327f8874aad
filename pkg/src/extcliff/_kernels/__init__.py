"""Hot kernels with a compiled core and a pure-Python fallback.

The compiled module is used when it imports; otherwise the fallback is picked
silently.  ``EXTCLIFF_BACKEND=python`` forces the fallback and
``EXTCLIFF_BACKEND=cython`` makes a missing extension an import error.

Both backends expose the same four functions over packed ``uint64`` arrays:

``propagate(xs, zs, ph, ops)``
    in-place bit-sliced Pauli conjugation of many generators at once;
``kernel_basis_rows(rows, ncols)``
    null space basis over GF(2), deterministic lowest-column-first pivoting;
``rank_rows(rows, ncols)``
    GF(2) rank;
``product_phases(a_rows, b_rows, e, vecs)``
    phase exponents of ordered Pauli products selected by bit vectors.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_requested = os.environ.get("EXTCLIFF_BACKEND", "auto").lower()
if _requested == "auto":
    BACKEND = "cython" if _ckernels is not None else "python"
elif _requested in ("python", "cython"):
    if _requested not in _BACKENDS:
        raise ImportError("EXTCLIFF_BACKEND=cython but the compiled kernels are not built")
    BACKEND = _requested
else:
    raise ImportError(f"unknown EXTCLIFF_BACKEND {_requested!r}")


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend(name: str | None = None) -> ModuleType:
    """Kernel module by name; ``None`` means the import-time default."""
    name = BACKEND if name is None else name
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"backend {name!r} unavailable; have {available_backends()}"
        ) from None
