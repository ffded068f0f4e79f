"""Gamma, log-gamma and beta with strict positive-axis domains.

The evaluators wrap the platform's Lanczos-class implementations
(``math.gamma`` / ``math.lgamma``) behind domain checks suited to the rest of
the package: every caller here needs the positive real axis only, and a
nonpositive argument always indicates a logic error upstream, so it raises
instead of returning a pole value.

Gamma ratios elsewhere in the package are formed as ``exp(log_gamma(..) -
log_gamma(..))`` to avoid overflow for large arguments.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = ["gamma", "log_gamma", "beta"]


def gamma(x: float) -> float:
    """Euler Gamma(x) for x > 0.

    Raises DomainError for x <= 0 (including the poles) and OverflowError
    once Gamma(x) exceeds the double range (x > 171.62...).
    """
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0. Defined far beyond gamma's overflow."""
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def beta(x: float, y: float) -> float:
    """Euler Beta(x, y) = Gamma(x)Gamma(y)/Gamma(x+y) for x, y > 0.

    Computed in log space; exactly symmetric in its arguments.
    """
    if not (x > 0.0 and y > 0.0):
        raise DomainError(f"beta requires x > 0 and y > 0, got ({x!r}, {y!r})")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))
