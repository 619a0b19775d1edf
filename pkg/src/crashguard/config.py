"""Shared numeric tolerances.

All acceptance tolerances live in one record so library code and tests
agree on what counts as "stochastic", "a distribution", or "an integer
time exponent".
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    row_sum: float = 1e-9        # |row sum - 1| accepted before renormalizing
    distribution: float = 1e-9   # |vector sum - 1| accepted for probability vectors
    integral_time: float = 1e-9  # |t - round(t)| treated as an integer exponent


DEFAULT_TOLERANCES = Tolerances()
