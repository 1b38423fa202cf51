"""Numerical tolerances shared by every module.

The active set lives in a context variable so a CLI run (or a test) can
override values without threading keyword arguments through every call::

    with using(num=1e-8):
        ...
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-9
    idem: float = 1e-9
    num: float = 1e-9
    psd: float = 1e-10
    tr: float = 1e-10
    zero: float = 1e-12
    # relative singular-value cutoff
    rank: float = 1e-8
    group: float = 1e-8
    purity: float = 1e-9

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()
_active: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "coverlaw_tolerances", default=DEFAULT)


def current() -> Tolerances:
    return _active.get()


@contextlib.contextmanager
def using(tol: Tolerances | None = None, **overrides):
    """Temporarily replace the active tolerances."""
    base = tol if tol is not None else current()
    token = _active.set(replace(base, **overrides))
    try:
        yield _active.get()
    finally:
        _active.reset(token)
