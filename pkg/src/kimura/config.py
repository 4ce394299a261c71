"""Size caps and the memory guard.

Tensor powers grow like ``dim**m``, so every power operation consults the
active :class:`Caps` before allocating anything.
"""

from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass, replace

from .errors import CapExceeded

DEFAULT_MAX_BYTES = 512 * 1024**2
BYTES_PER_ENTRY = 32


@dataclass(frozen=True)
class Caps:
    group_n: int = 8
    power_m: int = 5
    total_dim: int = 6
    max_bytes: int = DEFAULT_MAX_BYTES


def _from_env() -> Caps:
    raw = os.environ.get("ENGINE_MAX_BYTES")
    if raw:
        try:
            return Caps(max_bytes=int(raw))
        except ValueError:
            pass
    return Caps()


_active = _from_env()


def caps() -> Caps:
    return _active


def set_caps(**changes) -> Caps:
    global _active
    _active = replace(_active, **changes)
    return _active


@contextlib.contextmanager
def override(**changes):
    global _active
    saved = _active
    _active = replace(_active, **changes)
    try:
        yield _active
    finally:
        _active = saved


def check_group(n: int) -> None:
    if n < 0:
        raise ValueError(f"negative degree {n}")
    if n > _active.group_n:
        raise CapExceeded(f"symmetric group degree {n} exceeds cap {_active.group_n}")


def check_power(total_dim: int, m: int) -> None:
    """Raise CapExceeded unless an m-th tensor power of a total_dim space is allowed."""
    check_group(m)
    if m > _active.power_m:
        raise CapExceeded(f"power {m} exceeds cap {_active.power_m}")
    if total_dim > _active.total_dim:
        raise CapExceeded(f"total dimension {total_dim} exceeds cap {_active.total_dim}")
    check_dense(total_dim**m)


def check_dense(n: int) -> None:
    """Guard a dense n×n exact matrix against the byte budget."""
    if n * n * BYTES_PER_ENTRY > _active.max_bytes:
        raise CapExceeded(
            f"dense {n}x{n} matrix exceeds memory guard of {_active.max_bytes} bytes"
        )
