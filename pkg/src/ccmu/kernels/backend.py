"""Kernel backend selection.

The enumeration sweeps run either as numba-jitted loops or as pure-numpy
vector code.  Both produce identical results; the env flag CCMU_BACKEND
(auto | numba | numpy) picks the path, defaulting to numba when it
imports.  This is a performance switch only, never a semantic one.
"""

from __future__ import annotations

import os

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

_flag = os.environ.get("CCMU_BACKEND", "auto").strip().lower()
if _flag not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"CCMU_BACKEND must be auto|numba|numpy, got {_flag!r}")
if _flag == "numba" and not HAS_NUMBA:  # pragma: no cover
    raise RuntimeError("CCMU_BACKEND=numba but numba is not importable")

USE_NUMBA = HAS_NUMBA if _flag == "auto" else _flag == "numba"


def use_numba() -> bool:
    return USE_NUMBA


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
