"""Backend selection: compiled Cython kernels when available, numpy fallback
otherwise. Override with BATCHBLEU_BACKEND=python|compiled or use_backend()."""

from __future__ import annotations

import os

from . import _py_kernels

_active = _py_kernels
_compiled = None

try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None


def available_backends() -> list[str]:
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def use_backend(name: str) -> None:
    """Switch the kernel backend; 'auto' prefers the compiled extension."""
    global _active
    if name == "auto":
        _active = _compiled if _compiled is not None else _py_kernels
    elif name == "python":
        _active = _py_kernels
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def backend_name() -> str:
    return _active.NAME


def unique_rows(rows):
    return _active.unique_rows(rows)


def segment_bincount(ids, seg_lengths, num_unique):
    return _active.segment_bincount(ids, seg_lengths, num_unique)


def clipped_numerators(ids, seg_lengths, ref_max):
    return _active.clipped_numerators(ids, seg_lengths, ref_max)


use_backend(os.environ.get("BATCHBLEU_BACKEND", "auto"))
