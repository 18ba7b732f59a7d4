"""Kernel backend selection: compiled extension when available, pure otherwise.

Set MUBFORGE_BACKEND=pure (or =compiled) to force a choice; the default
prefers the compiled extension and silently falls back.  Candidate spaces
whose index does not fit 64 bits are always routed to the pure kernel.
"""

from __future__ import annotations

import os

from . import _purekernels

try:
    from . import _kernels  # type: ignore[attr-defined]
except ImportError:
    _kernels = None


def _select():
    forced = os.environ.get("MUBFORGE_BACKEND", "").strip().lower()
    if forced == "pure":
        return _purekernels
    if forced == "compiled":
        if _kernels is None:
            raise ImportError(
                "MUBFORGE_BACKEND=compiled but the _kernels extension is not built"
            )
        return _kernels
    if forced:
        raise ValueError(f"unknown MUBFORGE_BACKEND value {forced!r}")
    return _kernels if _kernels is not None else _purekernels


def backend_name() -> str:
    return _select().NAME


def available_backends() -> tuple[str, ...]:
    return ("pure",) if _kernels is None else ("pure", "compiled")


def _kernel_for(m: int):
    kernel = _select()
    if kernel is _kernels and (m > 10 or m * (m + 1) // 2 > 63):
        return _purekernels
    return kernel


def scan_symmetric(m: int, good_polys: tuple[int, ...], start: int, stop: int) -> list[int]:
    """Dispatch the symmetric-candidate scan to the active kernel."""
    return _kernel_for(m).scan_symmetric(m, good_polys, start, stop)


def decode_symmetric(m: int, k: int) -> tuple[int, ...]:
    return _kernel_for(m).decode_symmetric(m, k)


def encode_symmetric(m: int, rows) -> int:
    return _purekernels.encode_symmetric(m, rows)
