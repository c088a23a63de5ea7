"""Global numeric tolerance for rank and membership decisions.

The default of 1e-9 can be overridden per call (every public operation takes
a ``tol`` argument) or globally through the ``NCX_TOL`` environment variable.
"""

import os

DEFAULT_TOL = 1e-9

_ENV_VAR = "NCX_TOL"


def default_tol() -> float:
    raw = os.environ.get(_ENV_VAR)
    return float(raw) if raw else DEFAULT_TOL


def resolve_tol(tol: float | None) -> float:
    """Return ``tol`` unchanged, or the global default when it is None."""
    if tol is None:
        return default_tol()
    tol = float(tol)
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    return tol
