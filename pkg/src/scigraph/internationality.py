"""Cobb-Douglas internationality score ``y = A * prod(x_i ** alpha_i)``.

Inputs default to the four journal indicators (other-citations quotient,
international collaboration, SNIP, non-local influence quotient), but any
dimension n >= 1 is accepted.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import DimensionMismatch, NegativeElasticity, NegativeInput, NonPositiveScale, ZeroInput
from .indicators import JournalIndicators

SIMPLEX_TOL = 1e-9
DEFAULT_ALPHA = (0.25, 0.25, 0.25, 0.25)


@dataclass(frozen=True)
class ScoreParams:
    A: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.A) and self.A > 0):
            raise NonPositiveScale(f"scale A must be positive and finite, got {self.A!r}")


def _check_inputs(x: Sequence[float], alpha: Sequence[float]) -> None:
    if len(x) == 0 or len(x) != len(alpha):
        raise DimensionMismatch(f"x has {len(x)} entries, alpha has {len(alpha)}")
    for xi in x:
        if not math.isfinite(xi) or xi < 0:
            raise NegativeInput(f"inputs must be finite and >= 0, got {xi!r}")
    for ai in alpha:
        if not math.isfinite(ai) or ai < 0:
            raise NegativeElasticity(f"elasticities must be finite and >= 0, got {ai!r}")


def check_simplex(alpha: Sequence[float]) -> None:
    if any(not math.isfinite(a) or a < 0 for a in alpha):
        raise NegativeElasticity("elasticities must be finite and >= 0")
    if abs(math.fsum(alpha) - 1.0) > SIMPLEX_TOL:
        raise NegativeElasticity(f"elasticities must sum to 1, got {math.fsum(alpha)!r}")


def score(x: Sequence[float], alpha: Sequence[float], params: ScoreParams = ScoreParams()) -> float:
    """Evaluate the production function in the log domain.

    A zero input with a positive elasticity gives 0; a zero input with zero
    elasticity contributes a factor of 1.
    """
    _check_inputs(x, alpha)
    log_sum = 0.0
    for xi, ai in zip(x, alpha):
        if ai == 0:
            continue
        if xi == 0:
            return 0.0
        log_sum += ai * math.log(xi)
    return params.A * math.exp(log_sum)


def gradient(x: Sequence[float], alpha: Sequence[float], params: ScoreParams = ScoreParams()) -> list[float]:
    """Partial derivatives ``alpha_i * y / x_i``; every input must be positive."""
    _check_inputs(x, alpha)
    if any(xi == 0 for xi in x):
        raise ZeroInput("gradient requires every input to be positive")
    y = score(x, alpha, params)
    return [ai * y / xi for xi, ai in zip(x, alpha)]


def optimal_elasticities(
    x: Sequence[float], params: ScoreParams = ScoreParams()
) -> tuple[list[float], float]:
    """Maximize the score over the probability simplex of elasticities.

    ``sum(alpha_i * ln x_i)`` is linear in alpha, so the maximum sits at the
    vertex of the largest input; ties go to the lowest index.
    """
    if len(x) == 0:
        raise DimensionMismatch("x must have at least one entry")
    for xi in x:
        if not math.isfinite(xi) or xi < 0:
            raise NegativeInput(f"inputs must be finite and >= 0, got {xi!r}")
        if xi == 0:
            raise ZeroInput("optimization requires every input to be positive")
    best = max(range(len(x)), key=lambda i: (x[i], -i))
    alpha = [0.0] * len(x)
    alpha[best] = 1.0
    return alpha, score(x, alpha, params)


def score_journal(
    ind: JournalIndicators, alpha: Sequence[float] = DEFAULT_ALPHA, params: ScoreParams = ScoreParams()
) -> float:
    return score(ind.vector, alpha, params)
