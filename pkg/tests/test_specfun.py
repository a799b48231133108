import cmath
import math
import random

import pytest

from inphase.exceptions import DomainError
from inphase.specfun import (
    LogScaled,
    hermite,
    hermite_log,
    laguerre,
    laguerre_log,
    log_binomial,
    log_factorial,
    log_factorials,
    norm_factor_log,
)

# --- Factorials ---

def test_log_factorial_small_values():
    assert log_factorial(0) == 0.0
    assert log_factorial(1) == 0.0
    assert log_factorial(5) == pytest.approx(math.log(120), rel=1e-15)


def test_log_factorial_matches_sum_of_logs():
    running = 0.0
    for n in range(1, 201):
        running += math.log(n)
        assert log_factorial(n) == pytest.approx(running, rel=1e-13)


def test_log_factorial_monotone_and_vector_form():
    values = log_factorials(60)
    assert len(values) == 61
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert values[25] == pytest.approx(log_factorial(25), rel=1e-15)


def test_log_factorial_rejects_negative():
    with pytest.raises(DomainError):
        log_factorial(-1)


def test_log_binomial_outside_range_is_minus_inf():
    assert log_binomial(3, 5) == -math.inf
    assert log_binomial(6, 2) == pytest.approx(math.log(15))


def test_norm_factor_log():
    assert norm_factor_log(0) == 0.0
    assert norm_factor_log(1) == pytest.approx(0.5)
    expected = 10.0 - 10.0 * math.log(20) + 0.5 * math.log(math.factorial(20))
    assert norm_factor_log(20) == pytest.approx(expected, rel=1e-14)


# --- Hermite ---

def test_hermite_examples():
    assert hermite(0, 3.7) == 1
    assert hermite(4, 0) == pytest.approx(12)
    assert hermite(2, 1j) == pytest.approx(-6)


def test_hermite_parity():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(0, 100)
        x = rng.uniform(-20, 20)
        h_plus = hermite_log(n, x)
        h_minus = hermite_log(n, -x)
        if h_plus.is_zero():
            continue
        assert h_minus.log_magnitude == pytest.approx(h_plus.log_magnitude, rel=1e-10, abs=1e-10)
        ratio = cmath.exp(1j * (h_minus.phase - h_plus.phase))
        assert ratio == pytest.approx((-1) ** n, abs=1e-10)


def test_hermite_recurrence_identity():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 40)
        x = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        residual = hermite(n + 1, x) - 2 * x * hermite(n, x) + 2 * n * hermite(n - 1, x)
        scale = abs(hermite(n + 1, x)) + abs(2 * x * hermite(n, x)) + 1.0
        assert abs(residual) / scale < 1e-12


def test_hermite_log_survives_large_degree():
    value = hermite_log(500, 10.0)
    assert math.isfinite(value.log_magnitude)
    assert value.log_magnitude > 700  # past double range


def test_hermite_degree_guard():
    with pytest.raises(DomainError):
        hermite(501, 0.5)


def test_logscaled_round_trip():
    for value in (3 - 4j, -1e-200, 2.5e200 + 1j):
        restored = LogScaled.from_complex(value).to_complex()
        assert abs(restored - value) <= 1e-14 * abs(value)
    assert LogScaled.from_complex(0).is_zero()
    assert LogScaled.from_complex(0).to_complex() == 0


# --- Laguerre ---

def test_laguerre_examples():
    assert laguerre(0, 3, 1.7) == 1.0
    assert laguerre(1, 0, 2.0) == pytest.approx(-1.0)
    assert laguerre(2, 0, 2.0) == pytest.approx(-1.0)


def test_laguerre_at_zero_is_binomial():
    for n in range(0, 51, 7):
        for alpha in (0, 1, 4, 9):
            assert laguerre(n, alpha, 0.0) == pytest.approx(math.comb(n + alpha, n), rel=1e-12)


def test_laguerre_negative_alpha():
    # L_2^{-1}(x) = x^2/2 - x
    assert laguerre(2, -1, 3.0) == pytest.approx(1.5)
    with pytest.raises(DomainError):
        laguerre(2, -3, 1.0)


def test_laguerre_log_agrees_with_series():
    for n, alpha, x in [(10, 2, 3.0), (20, 0, 5.5), (7, 5, 0.25), (15, 1, -2.0)]:
        assert laguerre_log(n, alpha, x).to_real() == pytest.approx(laguerre(n, alpha, x), rel=1e-9, abs=1e-12)
