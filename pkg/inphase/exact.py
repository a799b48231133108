# inphase/exact.py
"""
Closed-form overlaps and matrix elements.

Position-momentum overlap, the oscillator propagator, Fock wavefunctions,
displacement matrix elements (with the second Laguerre form as a
cross-check), displaced squeezed vacuum amplitudes and Fock
elements of the squeeze operator S(mu) = exp[(mu/4)(a^dag^2 - a^2)].
"""

import cmath
import logging
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from inphase.exceptions import CausticError, DomainError, UnsupportedParameterError
from inphase.specfun import LogScaled, hermite_log, laguerre, laguerre_log, log_factorial

logger = logging.getLogger("inphase.exact")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

# --- Constants ---
MAX_FOCK_INDEX = 300
MAX_WAVEFN_INDEX = 500
CAUSTIC_THRESHOLD = 1e-9
_SQRT2 = math.sqrt(2.0)


class SqueezeParam(BaseModel):
    """Squeeze parameter mu with k = e^{|mu|/2}."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    mu: float

    @property
    def k(self) -> float:
        return math.exp(0.5 * abs(self.mu))

    @property
    def t(self) -> float:
        """(k^2 - 1)/(k^2 + 1) = tanh(|mu|/2)."""
        return math.tanh(0.5 * abs(self.mu))

    @property
    def c(self) -> float:
        """(k^2 + 1)/(2k) = cosh(mu/2)."""
        return math.cosh(0.5 * self.mu)


def _guard_index(name: str, value: int, limit: int = MAX_FOCK_INDEX) -> None:
    if value < 0 or value > limit:
        raise DomainError(name, value, f"0 <= {name} <= {limit}")


# --- Position, momentum and propagator ---

def posmom_overlap(q: float, p: float) -> complex:
    """<q, pos|p, mom> = e^{iqp}/sqrt(2 pi)."""
    return cmath.exp(1j * q * p) / math.sqrt(2.0 * math.pi)


def sho_propagator(q2, q1, t: float):
    """
    <q2|e^{-iHt}|q1> for H = (p^2 + q^2)/2, vectorised over q2 and q1.

    The square root follows (2 pi i sin t)^{-1/2} continuously from t -> 0+,
    picking up e^{-i pi/2} at every caustic crossed. Scalar arguments give a
    complex; arrays broadcast.
    """
    s = math.sin(t)
    if abs(s) <= CAUSTIC_THRESHOLD:
        raise CausticError(t)
    crossings = math.floor(t / math.pi)
    amplitude = (2.0 * math.pi * abs(s)) ** -0.5
    phase = -0.25 * math.pi - 0.5 * math.pi * crossings
    q1 = np.asarray(q1, dtype=float)
    q2 = np.asarray(q2, dtype=float)
    exponent = ((q1 * q1 + q2 * q2) * math.cos(t) - 2.0 * q1 * q2) / (2.0 * s)
    value = amplitude * np.exp(1j * (phase + exponent))
    return complex(value) if value.ndim == 0 else value


def propagator_critical_point(q2: float, q1: float, t: float) -> Tuple[float, float]:
    """Momenta (p1, p2) at which the coherent-state kernel integrand is stationary."""
    s = math.sin(t)
    if abs(s) <= CAUSTIC_THRESHOLD:
        raise CausticError(t)
    cosec = 1.0 / s
    cot = math.cos(t) / s
    return q2 * cosec - q1 * cot, q2 * cot - q1 * cosec


# --- Fock wavefunctions ---

def fock_position_wavefn(n: int, q0: float) -> float:
    """<q0, pos|n> = pi^{-1/4} 2^{-n/2} (n!)^{-1/2} e^{-q0^2/2} H_n(q0)."""
    _guard_index("n", n, MAX_WAVEFN_INDEX)
    log_amplitude = -0.25 * math.log(math.pi) - 0.5 * n * math.log(2.0) - 0.5 * log_factorial(n) - 0.5 * q0 * q0
    return hermite_log(n, q0).scale(log_amplitude).to_real()


def squeezed_vacuum_wavefn(mu: float, x):
    """<x, pos|S(mu)|0> = pi^{-1/4} e^{-mu/4} exp(-e^{-mu} x^2 / 2)."""
    x = np.asarray(x, dtype=float)
    return math.pi ** -0.25 * math.exp(-0.25 * mu) * np.exp(-0.5 * math.exp(-mu) * x * x)


# --- Displacement ---

def _coherent_amplitude(n: int, z: complex) -> complex:
    if z == 0:
        return 1.0 + 0j if n == 0 else 0j
    log_mag = -0.5 * abs(z) ** 2 + n * math.log(abs(z)) - 0.5 * log_factorial(n)
    return LogScaled.from_parts(log_mag, n * cmath.phase(z)).to_complex()


def displacement_element(m: int, n: int, q: float, p: float) -> complex:
    """
    <m|D(q, p)|n> in the Laguerre form whose superscript is non-negative.

    n >= m: sqrt(m!/n!) (-z*)^{n-m} e^{-|z|^2/2} L_m^{n-m}(|z|^2)
    n <  m: sqrt(n!/m!) z^{m-n}     e^{-|z|^2/2} L_n^{m-n}(|z|^2)
    """
    _guard_index("m", m)
    _guard_index("n", n)
    z = complex(q, p) / _SQRT2
    if z == 0:
        return 1.0 + 0j if m == n else 0j
    x = abs(z) ** 2
    if n >= m:
        low, high, base = m, n, -z.conjugate()
    else:
        low, high, base = n, m, z
    power = high - low
    log_prefactor = 0.5 * (log_factorial(low) - log_factorial(high)) + power * math.log(abs(base)) - 0.5 * x
    polynomial = laguerre_log(low, power, x)
    return polynomial.scale(log_prefactor, power * cmath.phase(base)).to_complex()


def displacement_element_alternate(m: int, n: int, q: float, p: float) -> complex:
    """
    <m|D(q, p)|n> = sqrt(n!/m!) z^{m-n} e^{-|z|^2/2} L_n^{m-n}(|z|^2) for every m, n.

    For n > m the superscript is negative and the explicit series in
    specfun.laguerre carries it. Cancellation in that series grows with |z|^2,
    so this form is a cross-check, not the evaluator.
    """
    _guard_index("m", m)
    _guard_index("n", n)
    z = complex(q, p) / _SQRT2
    if z == 0:
        return 1.0 + 0j if m == n else 0j
    x = abs(z) ** 2
    power = m - n
    polynomial = laguerre(n, power, x)
    log_prefactor = 0.5 * (log_factorial(n) - log_factorial(m)) + power * math.log(abs(z)) - 0.5 * x
    return LogScaled.from_complex(polynomial).scale(log_prefactor, power * cmath.phase(z)).to_complex()


# --- Squeezing ---

def squeezed_coherent_element(n: int, sq: SqueezeParam, q: float, p: float) -> complex:
    """
    <n|D(q, p) S(mu)|0> for mu >= 0.

    i^n (2^n n!)^{-1/2} sqrt(2k/(k^2+1)) t^{n/2}
      exp[-(q - ip)(q + i k^2 p) / (2(k^2+1))] H_n[(k^2 p - iq)/sqrt(k^4 - 1)]
    with t = (k^2-1)/(k^2+1). At mu = 0 this is the coherent amplitude.
    """
    _guard_index("n", n)
    if sq.mu < 0:
        raise UnsupportedParameterError("mu", sq.mu, "mu >= 0 (negative squeezing is not implemented here)")
    if sq.mu == 0:
        return _coherent_amplitude(n, complex(q, p) / _SQRT2)
    k2 = sq.k ** 2
    exponent = -complex(q, -p) * complex(q, k2 * p) / (2.0 * (k2 + 1.0))
    argument = complex(k2 * p, -q) / math.sqrt(k2 * k2 - 1.0)
    log_mag = (
        -0.5 * n * math.log(2.0)
        - 0.5 * log_factorial(n)
        - 0.5 * math.log(sq.c)
        + 0.5 * n * math.log(sq.t)
        + exponent.real
    )
    return hermite_log(n, argument).scale(log_mag, 0.5 * math.pi * n + exponent.imag).to_complex()


def squeeze_element(n: int, sq: SqueezeParam, m: int) -> float:
    """
    <n|S(mu)|m>, a finite sum over p with the parity of m.

    i^{n-m} sqrt(m! n!) 2^{-(n+m)/2} C^{-1/2}
      sum_p (-1)^{(n-p)/2} t^{(n+m)/2-p} (2/C)^p / (p! ((n-p)/2)! ((m-p)/2)!)
    with t = tanh(|mu|/2), C = cosh(mu/2). Negative mu uses S(-mu) = S(mu)^T.
    """
    _guard_index("n", n)
    _guard_index("m", m)
    if (n - m) % 2:
        return 0.0
    if sq.mu == 0:
        return 1.0 if n == m else 0.0
    if sq.mu < 0:
        return squeeze_element(m, SqueezeParam(mu=-sq.mu), n)

    log_t = math.log(sq.t)
    log_two_over_c = math.log(2.0 / sq.c)
    log_common = 0.5 * (log_factorial(m) + log_factorial(n)) - 0.5 * (n + m) * math.log(2.0) - 0.5 * math.log(sq.c)
    terms = []
    for p in range(m % 2, min(m, n) + 1, 2):
        half_n = (n - p) // 2
        half_m = (m - p) // 2
        log_term = (
            log_common
            + (half_n + half_m) * log_t
            + p * log_two_over_c
            - log_factorial(p)
            - log_factorial(half_n)
            - log_factorial(half_m)
        )
        magnitude = math.exp(log_term)
        terms.append(-magnitude if half_n % 2 else magnitude)
    total = math.fsum(terms)
    # i^{n-m} is +-1 for even n - m
    return -total if ((n - m) // 2) % 2 else total
