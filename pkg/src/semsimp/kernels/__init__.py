"""Hot loops behind the similarity matrices.

The compiled extension ``_ckernels`` is used when it was built; otherwise the
pure-Python ``_pykernels`` is selected.  Setting ``SEMSIMP_PURE_PYTHON=1``
forces the fallback.  Both backends produce bit-identical results.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels
from ._pykernels import NORM_AVE, NORM_GAV, NORM_MAX, NORM_MIN, norm_factor

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def available_backends() -> dict[str, ModuleType]:
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out


def get_backend(name: str) -> ModuleType:
    try:
        return available_backends()[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None


if _ckernels is not None and not os.environ.get("SEMSIMP_PURE_PYTHON"):
    BACKEND = "cython"
    _impl = _ckernels
else:
    BACKEND = "python"
    _impl = _pykernels

max_assignment = _impl.max_assignment
assignment_block = _impl.assignment_block
directed_block = _impl.directed_block

__all__ = [
    "BACKEND",
    "NORM_AVE",
    "NORM_GAV",
    "NORM_MAX",
    "NORM_MIN",
    "assignment_block",
    "available_backends",
    "directed_block",
    "get_backend",
    "max_assignment",
    "norm_factor",
]
