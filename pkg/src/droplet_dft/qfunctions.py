"""Dipolar angular-average functions Q3 and Q5.

Q_l(x) = int_0^1 (1 - x + 3 x u^2)^{l/2} du, evaluated in closed form with
y = (1 - x) / (3x). For x > 1 (y < 0) the closed form is continued onto the
principal branch, sqrt(y) = i sqrt(|y|), so that

    ln((1 + sqrt(1 + y)) / sqrt(y)) = ln((1 + sqrt(1 + y)) / sqrt(|y|)) - i pi / 2.

With this convention Im Q5 > 0 and Im Q3 < 0 for x > 1.
"""

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .models import QValue

QUADRATURE_ORDER = 64

# Below this argument the closed form loses digits; use the integral instead.
SMALL_X = 1e-6

SUPPORTED_ORDERS = (3, 5)


@lru_cache(maxsize=1)
def _unit_interval_rule() -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(QUADRATURE_ORDER)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def q_oracle(l: int, x: float) -> float:
    """Fixed-order Gauss-Legendre value of int_0^1 (1 - x + 3 x u^2)^{l/2} du.

    Only covers the real branch x in [0, 1].
    """
    if l not in SUPPORTED_ORDERS:
        raise DomainError(f"Q_l is only defined here for l in {SUPPORTED_ORDERS}, got {l}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"quadrature oracle covers x in [0, 1], got {x}")
    u, w = _unit_interval_rule()
    return float(np.dot(w, (1.0 - x + 3.0 * x * u**2) ** (0.5 * l)))


def _bracket(l: int, y: float, log_term: complex) -> complex:
    root = math.sqrt(1.0 + y)
    if l == 5:
        return (8.0 + 26.0 * y + 33.0 * y**2) * root + 15.0 * y**3 * log_term
    return (2.0 + 5.0 * y) * root + 3.0 * y**2 * log_term


def _prefactor(l: int, x: float) -> float:
    if l == 5:
        return (3.0 * x) ** 2.5 / 48.0
    return (3.0 * x) ** 1.5 / 8.0


def _closed_form(l: int, x: float) -> complex:
    y = (1.0 - x) / (3.0 * x)
    if y > 0:
        # ln((1 + sqrt(1+y)) / sqrt(y)) == asinh(1 / sqrt(y)), stable for large y
        log_term: complex = math.asinh(1.0 / math.sqrt(y))
    elif y == 0:
        log_term = 0.0
    else:
        log_term = complex(math.log((1.0 + math.sqrt(1.0 + y)) / math.sqrt(-y)), -0.5 * math.pi)
    return _prefactor(l, x) * _bracket(l, y, log_term)


def q_value(l: int, x: float) -> QValue:
    """Q_l(x) for l in {3, 5} and x >= 0."""
    if l not in SUPPORTED_ORDERS:
        raise DomainError(f"Q_l is only defined here for l in {SUPPORTED_ORDERS}, got {l}")
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"Q_{l} requires x >= 0, got {x}")
    if x == 0.0:
        return QValue(re=1.0, im=0.0)
    if x < SMALL_X:
        return QValue(re=q_oracle(l, x), im=0.0)

    value = _closed_form(l, x)
    if x <= 1.0:
        return QValue(re=value.real, im=0.0)
    return QValue(re=value.real, im=value.imag)


def q5(x: float) -> QValue:
    """Q5, the angular average entering the correlation energy."""
    return q_value(5, x)


def q3(x: float) -> QValue:
    """Q3, the angular average entering the quantum depletion."""
    return q_value(3, x)
