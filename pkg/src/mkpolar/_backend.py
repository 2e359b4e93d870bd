"""Decoder backend selection.

The compiled core (``mkpolar._core``) is used when it imports; otherwise, or
when ``MKPOLAR_PURE`` is set in the environment, the numpy implementation in
:mod:`mkpolar._pycore` runs instead. Both take the same plan and return the
same results.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from . import _pycore
from .kernel import MAX_EXHAUSTIVE_SIZE
from .transform import KernelSequence

_RULE_CODES = {"T2": 2, "T3": 3, "T5": 5}

try:
    if os.environ.get("MKPOLAR_PURE"):
        raise ImportError("pure-Python backend requested")
    from . import _core
except ImportError:
    _core = None

BACKEND = "compiled" if _core is not None else "python"


@lru_cache(maxsize=64)
def make_plan(seq: KernelSequence) -> dict:
    """Flat buffer layout of the decoding tree for ``seq`` (see :mod:`mkpolar._core`)."""
    sizes = list(seq.sizes)
    for k in seq.kernels:
        if k.rule is None and k.size > MAX_EXHAUSTIVE_SIZE:
            raise ValueError(f"kernel {k.name} of size {k.size} has no rule and is too large to marginalize")
    M = [seq.N]
    for p in sizes:
        M.append(M[-1] // p)
    loff = np.concatenate([[0], np.cumsum(M)[:-1]]).tolist()
    poff = np.concatenate([[0], np.cumsum(M[:-1])[:-1]]).tolist()
    rows = [[sum(bit << c for c, bit in enumerate(r)) for r in k.rows] for k in seq.kernels]
    return {
        "sizes": sizes,
        "rules": [_RULE_CODES.get(k.rule, 0) for k in seq.kernels],
        "rows": rows,
        "M": M,
        "loff": loff,
        "poff": poff,
        "ptotal": int(sum(M[:-1])),
        "kernels": seq.kernels,
    }


def get(name: str | None = None):
    """Backend module by name (``"compiled"`` or ``"python"``); default is the active one."""
    name = name or BACKEND
    if name == "python":
        return _pycore
    if name == "compiled":
        if _core is None:
            raise RuntimeError("compiled decoder core is not available")
        return _core
    raise ValueError(f"unknown backend {name!r}")


def available() -> list[str]:
    return ["python"] + (["compiled"] if _core is not None else [])
