"""Named fault injection for mutation-sensitivity checks.

The verification suites (``stieltjes verify``) must be able to demonstrate
that they would catch specific formula mutations.  Rather than editing the
source, tests activate a named fault here and the (exactly three) hook sites
consult the registry.  With the registry empty the hooks are inert and the
library behaves identically to not having them.

Faults can also be activated through the ``STIELTJES_FAULTS`` environment
variable (comma-separated names), so a subprocess running the CLI inherits
them.  This is a testing facility, not a user feature.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

#: Recognized fault names and the formula site they mutate.
KNOWN_FAULTS = {
    "c1-sign": "variation-of-parameters coefficient c1 integrand sign flip",
    "wronskian-drop-dg2": "g-Wronskian explicit form without the dg^2 term",
    "gexp-drop-jump": "g-exponential without the log(1 + p*dg) jump part",
}

_active: set[str] = set()


def _env_faults() -> set[str]:
    raw = os.environ.get("STIELTJES_FAULTS", "")
    return {name.strip() for name in raw.split(",") if name.strip()}


def active(name: str) -> bool:
    """True if the named fault is enabled (via API or environment)."""
    return name in _active or name in _env_faults()


def enable(name: str) -> None:
    if name not in KNOWN_FAULTS:
        raise ValueError(f"unknown fault {name!r}; known: {sorted(KNOWN_FAULTS)}")
    _active.add(name)


def disable_all() -> None:
    _active.clear()


@contextmanager
def injected(name: str):
    """Context manager enabling a fault for the duration of a block."""
    enable(name)
    try:
        yield
    finally:
        _active.discard(name)
