"""Input coercion shared by the estimators and the functional API."""

from __future__ import annotations

import math
import numbers

from .diagram import PersistenceDiagram

__all__ = ["check_diagram", "check_diagrams", "check_order", "check_positive"]


def check_diagram(d) -> PersistenceDiagram:
    """Return ``d`` as a :class:`PersistenceDiagram`, converting (n, 2) arrays."""
    if isinstance(d, PersistenceDiagram):
        return d
    return PersistenceDiagram(d)


def check_diagrams(X) -> list:
    if isinstance(X, PersistenceDiagram):
        raise TypeError("expected a sequence of diagrams, got a single diagram")
    return [check_diagram(d) for d in X]


def check_order(p, allow_inf: bool = True):
    """Validate a matching order: a positive integer, or infinity when allowed."""
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity"):
            p = math.inf
        else:
            try:
                p = int(p)
            except ValueError:
                raise ValueError(f"invalid order {p!r}") from None
    if p == math.inf:
        if not allow_inf:
            raise ValueError("order must be finite here")
        return math.inf
    if isinstance(p, bool) or not isinstance(p, numbers.Real) or int(p) != p or p < 1:
        raise ValueError(f"order must be a positive integer or inf, got {p!r}")
    return int(p)


def check_positive(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or isinstance(value, bool) or not value > 0 or not math.isfinite(value):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)
