# inphase/specfun.py
"""
Scalar special-function building blocks.

Log-factorials, Hermite and associated Laguerre polynomials (Hermite for
complex arguments), and the Fock-circle normalisation factor. Anything of
the form a**b * e**c * sqrt(n!) is composed in log space and exponentiated
once by the caller, which is what LogScaled is for.
"""

import cmath
import logging
import math
from typing import NamedTuple, Union

import numpy as np
from scipy.special import gammaln

from inphase.exceptions import DomainError

logger = logging.getLogger("inphase.specfun")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

# --- Constants ---
MAX_HERMITE_DEGREE = 500
_RESCALE_THRESHOLD = 1e150
_EXACT_FACTORIAL_LIMIT = 20
# ln(k!) for k <= 20, built from exact integer products
_LOG_FACTORIAL_TABLE = [math.log(math.factorial(k)) for k in range(_EXACT_FACTORIAL_LIMIT + 1)]


def _principal(phase: float) -> float:
    """Wraps a phase into (-pi, pi]."""
    wrapped = math.remainder(phase, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


class LogScaled(NamedTuple):
    """A complex number held as (ln|value|, arg value)."""
    log_magnitude: float
    phase: float

    @classmethod
    def from_complex(cls, value: Union[complex, float]) -> "LogScaled":
        value = complex(value)
        if value == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(value)), _principal(cmath.phase(value)))

    @classmethod
    def from_parts(cls, log_magnitude: float, phase: float) -> "LogScaled":
        return cls(log_magnitude, _principal(phase) if math.isfinite(log_magnitude) else 0.0)

    def is_zero(self) -> bool:
        return self.log_magnitude == -math.inf

    def multiply(self, other: "LogScaled") -> "LogScaled":
        if self.is_zero() or other.is_zero():
            return LogScaled(-math.inf, 0.0)
        return LogScaled.from_parts(self.log_magnitude + other.log_magnitude, self.phase + other.phase)

    def scale(self, log_factor: float, phase: float = 0.0) -> "LogScaled":
        """Multiplies by exp(log_factor + i*phase)."""
        if self.is_zero():
            return self
        return LogScaled.from_parts(self.log_magnitude + log_factor, self.phase + phase)

    def to_complex(self) -> complex:
        if self.is_zero():
            return 0j
        # math.exp raises OverflowError past double range; callers that can
        # overflow should stay in log space.
        return cmath.rect(math.exp(self.log_magnitude), self.phase)

    def to_real(self) -> float:
        """Real part of to_complex, for quantities known to be real."""
        return self.to_complex().real


# --- Factorials ---

def log_factorial(n: int) -> float:
    """Returns ln(n!)."""
    if n < 0:
        raise DomainError("n", n, "n >= 0")
    if n <= _EXACT_FACTORIAL_LIMIT:
        return _LOG_FACTORIAL_TABLE[n]
    return float(gammaln(n + 1))


def log_factorials(n_max: int) -> np.ndarray:
    """Vector of ln(k!) for k = 0..n_max."""
    if n_max < 0:
        raise DomainError("n_max", n_max, "n_max >= 0")
    values = gammaln(np.arange(n_max + 1, dtype=float) + 1.0)
    head = min(n_max, _EXACT_FACTORIAL_LIMIT) + 1
    values[:head] = _LOG_FACTORIAL_TABLE[:head]
    return values


def log_binomial(top: int, bottom: int) -> float:
    """ln C(top, bottom) for 0 <= bottom <= top; -inf outside that range."""
    if bottom < 0 or top < 0 or bottom > top:
        return -math.inf
    return log_factorial(top) - log_factorial(bottom) - log_factorial(top - bottom)


def norm_factor_log(n: int) -> float:
    """ln of N_n = e^{n/2} n^{-n/2} sqrt(n!), the Fock-circle normalisation."""
    if n < 0:
        raise DomainError("n", n, "n >= 0")
    if n == 0:
        return 0.0
    return 0.5 * n - 0.5 * n * math.log(n) + 0.5 * log_factorial(n)


# --- Hermite ---

def _hermite_recurrence(n: int, x: complex):
    """Upward recurrence; returns (mantissa, log_scale) with H_n = mantissa * e^log_scale."""
    if n < 0 or n > MAX_HERMITE_DEGREE:
        raise DomainError("n", n, f"0 <= n <= {MAX_HERMITE_DEGREE}")
    if n == 0:
        return 1 + 0j, 0.0
    h_prev, h = 1 + 0j, 2 * x
    log_scale = 0.0
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
        magnitude = abs(h)
        if magnitude > _RESCALE_THRESHOLD:
            h_prev /= magnitude
            h /= magnitude
            log_scale += math.log(magnitude)
    return h, log_scale


def hermite(n: int, x: Union[complex, float]) -> complex:
    """
    Physicists' Hermite polynomial H_n(x) for complex x.

    Uses H_{k+1} = 2x H_k - 2k H_{k-1}. For large n the value exceeds double
    range; use hermite_log there.
    """
    mantissa, log_scale = _hermite_recurrence(n, complex(x))
    if log_scale == 0.0:
        return mantissa
    return LogScaled.from_complex(mantissa).scale(log_scale).to_complex()


def hermite_log(n: int, x: Union[complex, float]) -> LogScaled:
    """H_n(x) as a LogScaled value; never overflows for n <= 500."""
    mantissa, log_scale = _hermite_recurrence(n, complex(x))
    return LogScaled.from_complex(mantissa).scale(log_scale)


# --- Laguerre ---

def laguerre(n: int, alpha: int, x: float) -> float:
    """
    Associated Laguerre polynomial L_n^alpha(x) by its explicit finite series.

    Binomials are taken in log space. Integer alpha may be negative down to
    -n, where C(n+alpha, n-k) vanishes for n-k > n+alpha.
    """
    if n < 0:
        raise DomainError("n", n, "n >= 0")
    if alpha < -n:
        raise DomainError("alpha", alpha, f"alpha >= -n = {-n}")
    if n == 0:
        return 1.0
    top = n + alpha
    if x == 0:
        return math.exp(log_binomial(top, n)) if n <= top else 0.0
    log_abs_x = math.log(abs(x))
    negative_x = x < 0
    terms = []
    for k in range(n + 1):
        lb = log_binomial(top, n - k)
        if lb == -math.inf:
            continue
        magnitude = math.exp(lb + k * log_abs_x - log_factorial(k))
        # (-1)^k from the series times sign(x)^k
        negative = (k % 2 == 1) != (negative_x and k % 2 == 1)
        terms.append(-magnitude if negative else magnitude)
    return math.fsum(terms)


def laguerre_log(n: int, alpha: float, x: float) -> LogScaled:
    """
    L_n^alpha(x) as a LogScaled value via the forward three-term recurrence.

    Valid for alpha > -1; integer alpha <= -1 falls back to the series.
    """
    if n < 0:
        raise DomainError("n", n, "n >= 0")
    if alpha <= -1:
        return LogScaled.from_complex(laguerre(n, int(alpha), x))
    if n == 0:
        return LogScaled(0.0, 0.0)
    l_prev, l_cur = 1.0, 1.0 + alpha - x
    log_scale = 0.0
    for k in range(1, n):
        l_prev, l_cur = l_cur, ((2 * k + 1 + alpha - x) * l_cur - (k + alpha) * l_prev) / (k + 1)
        magnitude = abs(l_cur)
        if magnitude > _RESCALE_THRESHOLD:
            l_prev /= magnitude
            l_cur /= magnitude
            log_scale += math.log(magnitude)
    return LogScaled.from_complex(l_cur).scale(log_scale)
