import math
from fractions import Fraction

import pytest

import oddloop


def test_published_values():
    assert [oddloop.nu_odd(n) for n in range(1, 6)] == [
        Fraction(1, 12),
        Fraction(37, 400),
        Fraction(597, 6272),
        Fraction(2441, 25344),
        Fraction(78035, 805376),
    ]
    assert oddloop.nu_even_contractible(1) == Fraction(1, 8)


def test_routes_agree():
    for n in range(1, 5):
        assert oddloop.nu_from_tq(n) == oddloop.nu_odd(n)
        assert oddloop.nu_stationary(2 * n + 1) == oddloop.nu_odd(n)
    assert abs(oddloop.nu_finite_difference(5) - 37 / 400) < 1e-12


def test_tq_solution():
    sol = oddloop.solve_tq(2)
    assert sol["Q"] == [Fraction(1), Fraction(-11, 5), Fraction(1)]
    assert all(oddloop.verify_tq(4).values())


def test_stationary_sums_to_one():
    st = oddloop.stationary_state(5)
    assert sum(p for _, _, p in st) == 1
    assert all(p > 0 for _, _, p in st)


def test_spectrum():
    lam = oddloop.dominant_eigenvalue(7)
    assert abs(lam - 128) < 1e-9


def test_monte_carlo_is_reproducible():
    a = oddloop.simulate_chain(3, 50000, seed=4)
    assert a == oddloop.simulate_chain(3, 50000, seed=4)
    mean, err = a
    assert abs(mean - 1 / 12) < 4 * err
    assert oddloop.simulate_chain(1, 1000) == (0.0, 0.0)


def test_loops_and_percolation():
    out = oddloop.count_loops(2, 2, [0, 1, 1, 0])
    assert out["contractible"] == 2 and out["winding"] == 0
    p = oddloop.sample_percolation(7, 300, seed=3)
    assert p["self_dual"]
    assert p["width"] == 14 and len(p["open"]) == 14 * 300
    assert 1 <= p["spanning_clusters"] <= 2


def test_consistency_and_errors():
    rep = oddloop.consistency_report(3, mc_rows=50000)
    assert rep["passed"] and rep["schema"] == 1
    with pytest.raises(oddloop.CapExceeded):
        oddloop.consistency_report(15, routes=["links"])
    with pytest.raises(oddloop.DomainError):
        oddloop.simulate_chain(4, 1000)
    with pytest.raises(ValueError):
        oddloop.nu_odd(0)


def test_series():
    lines = oddloop.series_csv(201).strip().splitlines()
    assert len(lines) == 101
    residual = float(lines[-1].split(",")[-1])
    assert abs(residual / (35 / (144 * math.sqrt(3))) - 1) < 0.02
