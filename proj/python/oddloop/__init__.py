"""Loop densities of the O(1) dense loop model on odd cylinders.

Exact values come back as fractions.Fraction; floating routes as float.
"""

import json
from fractions import Fraction

from . import _oddloop
from ._oddloop import CapExceeded, DomainError, Error, count_loops, dominant_eigenvalue, sample_percolation, series_csv, verify_tq

__all__ = [
    "CapExceeded",
    "DomainError",
    "Error",
    "consistency_report",
    "count_loops",
    "dominant_eigenvalue",
    "nu_even_contractible",
    "nu_finite_difference",
    "nu_from_tq",
    "nu_odd",
    "nu_stationary",
    "sample_percolation",
    "series_csv",
    "simulate_chain",
    "solve_tq",
    "stationary_state",
    "verify_tq",
]


def nu_odd(N):
    return Fraction(_oddloop.nu_odd(N))


def nu_even_contractible(N):
    return Fraction(_oddloop.nu_even_contractible(N))


def nu_from_tq(N):
    return Fraction(_oddloop.nu_from_tq(N))


def nu_stationary(L):
    return Fraction(_oddloop.nu_stationary(L))


def solve_tq(N):
    """fQ, fP, Q, P as lists of Fractions, lowest degree first."""
    return {k: [Fraction(c) for c in v] for k, v in _oddloop.solve_tq(N).items()}


def stationary_state(L):
    return [(word, defect, Fraction(p)) for word, defect, p in _oddloop.stationary_state(L)]


def nu_finite_difference(L, dgamma=1e-4, precision_bits=256):
    return float(_oddloop.nu_finite_difference(L, dgamma, precision_bits))


def simulate_chain(L, H, seed=1, burn_in=0, mode="chain", batches=20):
    """(mean, stderr) of the Monte Carlo loop density."""
    return _oddloop.simulate_chain(L, H, seed, burn_in, mode, batches)


def consistency_report(L, routes=(), mc_rows=200000, seed=1, threads=1):
    return json.loads(_oddloop.consistency_report(L, list(routes), mc_rows, seed, threads))
