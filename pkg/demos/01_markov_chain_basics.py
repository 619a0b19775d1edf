#!/usr/bin/env python3
"""Walk through the Markov chain core on a two-state chain and a lane chain.

Run from the repo root:  python3 demos/01_markov_chain_basics.py
"""

import numpy as np

from crashguard import (
    fundamental_matrix,
    limiting_matrix,
    matrix_power,
    matrix_power_real,
    mean_first_passage,
    propagate,
    stationary_distribution,
    unit_vector,
    validate_stochastic,
)
from crashguard.synthetic import banded_chain, with_rows

np.set_printoptions(precision=4, suppress=True)

# A two-state chain: leave state 1 with probability 0.3, state 2 with 0.2.
P = validate_stochastic([[0.7, 0.3], [0.2, 0.8]])
print("two-state chain P:\n", P.entries)

w = stationary_distribution(P)
print("\nstationary distribution w (analytic: [0.4, 0.6]):", w.entries)

W = limiting_matrix(P)
print("limiting matrix W (every row is w):\n", W)
print("check: max |P^100 - W| =", np.max(np.abs(matrix_power(P, 100).entries - W)))

Z = fundamental_matrix(P, W)
M = mean_first_passage(Z, w)
print("\nfundamental matrix Z:\n", Z)
print("mean first passage times (steps), diagonal exactly zero:\n", M.entries)
print("analytic check: m12 = 1/0.3 =", 1 / 0.3, " m21 = 1/0.2 =", 1 / 0.2)

# Fractional powers let us ask about non-integer horizons.
half = matrix_power_real(P, 0.5)
print("\nP^0.5 squared reproduces P:\n", half.entries @ half.entries)

# A six-lane chain: sticky lanes with adjacent-lane leakage, plus a drift
# from lane 6 toward lane 5.
lane_chain = with_rows(banded_chain(), {6: [0, 0, 0, 0, 0.18, 0.82]})
pi0 = unit_vector(6, 5)  # currently in lane 6
for t in (0, 1, 2, 4, 8):
    pi_t = propagate(pi0, lane_chain, t)
    print(f"lane distribution after t={t}: {pi_t.entries}")
