# inphase/asymptotics.py
"""
Saddle-point approximations and the literature formulas they compete with.

Fock wavefunctions <q0, pos|n>: in-phase saddle form, Plancherel-Rotach and
WKB. Displacement elements <m|D(d,0)|n>: in-phase saddle form (general and
m = n), Tricomi's Laguerre asymptotics with its first correction, and the
Dowling-Schleich interfering-area WKB form. Approximations outside their
window come back as ApproxValue(valid=False) rather than raising.
"""

import logging
import math
from typing import Literal

from pydantic import BaseModel, ConfigDict

from inphase.exceptions import DomainError, NoIntersectionError
from inphase.specfun import log_factorial

logger = logging.getLogger("inphase.asymptotics")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

HermiteMethod = Literal["inphase", "plancherel_rotach", "wkb"]
DisplacementMethod = Literal["inphase", "inphase_equal", "tricomi", "dowling_wkb"]
HERMITE_METHODS = ("inphase", "plancherel_rotach", "wkb")
DISPLACEMENT_METHODS = ("inphase", "inphase_equal", "tricomi", "dowling_wkb")


class ApproxValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    valid: bool
    note: str = ""

    @classmethod
    def invalid(cls, note: str) -> "ApproxValue":
        return cls(value=math.nan, valid=False, note=note)


class SaddlePair(BaseModel):
    """Saddle angles on the circles of |m> and D(d,0)|n>."""
    model_config = ConfigDict(frozen=True)

    theta0: float
    theta0_prime: float


# --- Hermite / Fock wavefunction ---

def hermite_saddle(n: int, q0: float) -> float:
    """theta0 = arccos(q0 / sqrt(2n)) in (0, pi)."""
    if n < 1:
        raise DomainError("n", n, "n >= 1")
    radius = math.sqrt(2.0 * n)
    if abs(q0) >= radius:
        raise DomainError("q0", q0, f"|q0| < sqrt(2n) = {radius} (oscillatory region)")
    return math.acos(q0 / radius)


def _inphase_fock(n: int, q0: float) -> ApproxValue:
    try:
        theta0 = hermite_saddle(n, q0)
    except DomainError as e:
        return ApproxValue.invalid(str(e))
    phase = 0.25 * math.pi - 0.5 * theta0 + n * (0.5 * math.sin(2.0 * theta0) - theta0)
    value = (2.0 / (math.pi ** 2 * n)) ** 0.25 * math.cos(phase) / math.sqrt(math.sin(theta0))
    return ApproxValue(value=value, valid=True)


def _plancherel_rotach(n: int, q0: float) -> ApproxValue:
    radius = math.sqrt(2.0 * n + 1.0)
    if abs(q0) >= radius:
        return ApproxValue.invalid(f"|q0| >= sqrt(2n+1) = {radius}")
    theta = math.acos(q0 / radius)
    phase = 0.25 * math.pi + (n + 0.5) * (0.5 * math.sin(2.0 * theta) - theta)
    value = (2.0 / (math.pi ** 2 * n)) ** 0.25 * math.cos(phase) / math.sqrt(math.sin(theta))
    return ApproxValue(value=value, valid=True)


def _wkb_fock(n: int, q0: float) -> ApproxValue:
    momentum_squared = 2.0 * n + 1.0 - q0 * q0
    if momentum_squared <= 0.0:
        return ApproxValue.invalid(f"q0^2 >= 2n+1 = {2 * n + 1}")
    momentum = math.sqrt(momentum_squared)
    action = (n + 0.5) * math.atan2(momentum, q0) - 0.5 * q0 * momentum
    value = math.sqrt(2.0 / (math.pi * momentum)) * math.cos(action - 0.25 * math.pi)
    return ApproxValue(value=value, valid=True)


def fock_position_approx(method: HermiteMethod, n: int, q0: float) -> ApproxValue:
    """Approximations to <q0, pos|n> inside each method's own window."""
    if n < 1:
        raise DomainError("n", n, "n >= 1")
    if method == "inphase":
        return _inphase_fock(n, q0)
    if method == "plancherel_rotach":
        return _plancherel_rotach(n, q0)
    if method == "wkb":
        return _wkb_fock(n, q0)
    raise DomainError("method", method, f"one of {', '.join(HERMITE_METHODS)}")


def hermite_polynomial_approx(form: Literal["factorial", "stirling"], n: int, q0: float) -> ApproxValue:
    """
    e^{-q0^2/2} H_n(q0) from the in-phase saddle, q0 = sqrt(2n) cos(theta0).

    factorial: (2e/n)^{n/2} n! / sqrt(pi n sin theta0) cos[...]
    stirling:  sqrt(2/sin theta0) (2n)^{n/2} e^{(n/2) cos 2theta0} cos[...] e^{-q0^2/2}
    """
    try:
        theta0 = hermite_saddle(n, q0)
    except DomainError as e:
        return ApproxValue.invalid(str(e))
    sin0 = math.sin(theta0)
    cosine = math.cos(0.25 * math.pi - 0.5 * theta0 + n * (0.5 * math.sin(2.0 * theta0) - theta0))
    if form == "factorial":
        log_mag = 0.5 * n * math.log(2.0 * math.e / n) + log_factorial(n) - 0.5 * math.log(math.pi * n * sin0)
    elif form == "stirling":
        log_mag = (0.5 * math.log(2.0 / sin0) + 0.5 * n * math.log(2.0 * n)
                   + 0.5 * n * math.cos(2.0 * theta0) - 0.5 * q0 * q0)
    else:
        raise DomainError("form", form, "'factorial' or 'stirling'")
    try:
        return ApproxValue(value=math.exp(log_mag) * cosine, valid=True)
    except OverflowError:
        return ApproxValue.invalid(f"magnitude e^{log_mag:.1f} exceeds double range")


def hermite_interference_area(n: int, q0: float) -> float:
    """Area between the circle of |n> and the line q = q0: n(theta0 - sin(2 theta0)/2)."""
    theta0 = hermite_saddle(n, q0)
    return n * (theta0 - 0.5 * math.sin(2.0 * theta0))


# --- Displacement elements ---

def displacement_saddles(m: int, n: int, d: float) -> SaddlePair:
    """
    Crossing angles of the circles of radius sqrt(2m) (origin) and
    sqrt(2n) (centred at d) inside the open window |sqrt(2m) - sqrt(2n)| < d < sqrt(2m) + sqrt(2n).
    """
    if m < 0 or n < 0:
        raise DomainError("m, n", (m, n), "m, n >= 0")
    rm = math.sqrt(2.0 * m)
    rn = math.sqrt(2.0 * n)
    if not (abs(rm - rn) < d < rm + rn):
        raise NoIntersectionError(m, n, d)
    cos0 = (d * d + 2.0 * m - 2.0 * n) / (2.0 * rm * d)
    cos0_prime = (d * d + 2.0 * n - 2.0 * m) / (2.0 * rn * d)
    theta0 = math.acos(min(1.0, max(-1.0, cos0)))
    theta0_prime = math.pi - math.acos(min(1.0, max(-1.0, cos0_prime)))
    return SaddlePair(theta0=theta0, theta0_prime=theta0_prime)


def _inphase_equal(m: int, d: float) -> ApproxValue:
    if m < 1:
        return ApproxValue.invalid("m >= 1 required")
    if not 0.0 < d < 2.0 * math.sqrt(2.0 * m):
        return ApproxValue.invalid(f"d outside (0, 2 sqrt(2m)) = (0, {2.0 * math.sqrt(2.0 * m)})")
    theta0 = math.acos(d / (2.0 * math.sqrt(2.0 * m)))
    sin2 = math.sin(2.0 * theta0)
    envelope = math.exp(-0.25 * d * d + m * (1.0 + math.cos(2.0 * theta0)))
    phase = (2 * m + 1) * theta0 - (m + 0.25) * math.pi - m * sin2
    value = envelope * math.cos(phase) / math.sqrt(math.pi * m * sin2)
    return ApproxValue(value=value, valid=True)


def inphase_general_form(m: int, n: int, d: float) -> ApproxValue:
    """The general in-phase saddle form, also at m = n where displacement_approx uses inphase_equal."""
    if m < 1 or n < 1:
        return ApproxValue.invalid("m, n >= 1 required")
    try:
        saddles = displacement_saddles(m, n, d)
    except NoIntersectionError as e:
        return ApproxValue.invalid(str(e))
    gap = saddles.theta0_prime - saddles.theta0
    root_mn = math.sqrt(m * n)
    log_envelope = (-0.25 * math.log(math.pi ** 2 * m * n)
                    + 0.5 * (math.sqrt(m) - math.sqrt(n)) ** 2 - 0.25 * d * d
                    + root_mn * (1.0 - math.cos(gap)))
    phase = (m + 0.5) * saddles.theta0 - (n + 0.5) * saddles.theta0_prime + 0.25 * math.pi - root_mn * math.sin(gap)
    value = math.exp(log_envelope) * math.cos(phase) / math.sqrt(math.sin(gap))
    return ApproxValue(value=value, valid=True)


def _tricomi(m: int, n: int, d: float) -> ApproxValue:
    nu = 2.0 * (n + m + 1)
    x = 0.5 * d * d
    if not 0.0 < x < nu:
        return ApproxValue.invalid(f"d^2/2 outside (0, nu) = (0, {nu})")
    alpha = n - m
    theta = math.acos(d / (2.0 * math.sqrt(n + m + 1)))
    sin_theta = math.sin(theta)
    big_theta = 0.5 * (n + m + 1) * (2.0 * theta - math.sin(2.0 * theta)) + 0.25 * math.pi
    correction = (1.0 / 12.0) * (4.0 / (nu * math.sin(2.0 * theta))) * (
        5.0 / (4.0 * sin_theta ** 2) - (1.0 - 3.0 * alpha ** 2) * sin_theta ** 2 - 1.0
    )
    log_mag = (0.5 * (log_factorial(m) - log_factorial(n))
               + 0.25 * math.log(2.0 / (math.pi ** 2 * d * d))
               + 0.25 * (2 * n - 2 * m - 1) * math.log(0.5 * (n + m + 1))
               - 0.5 * math.log(sin_theta))
    sign = -1.0 if n % 2 else 1.0
    bracket = math.sin(big_theta) + correction * math.sin(big_theta + 1.5 * math.pi)
    return ApproxValue(value=sign * math.exp(log_mag) * bracket, valid=True)


def _dowling_wkb(m: int, n: int, d: float) -> ApproxValue:
    if d <= 0.0:
        return ApproxValue.invalid("d > 0 required")
    x_c = (m - n) / d + 0.5 * d
    radius_m = math.sqrt(2.0 * m + 1.0)
    radius_n = math.sqrt(2.0 * n + 1.0)
    if abs(x_c) >= radius_m or abs(x_c - d) >= radius_n:
        return ApproxValue.invalid(f"crossing x_c = {x_c} outside both turning-point windows")
    p_m = math.sqrt(2.0 * m + 1.0 - x_c * x_c)
    area = 1.0 / (2.0 * math.pi * d * p_m)
    action = (-(m + 0.5) * math.asin(x_c / radius_m)
              + (n + 0.5) * math.asin((x_c - d) / radius_n)
              - 0.5 * d * p_m
              - (n - m) * 0.5 * math.pi)
    return ApproxValue(value=2.0 * math.sqrt(area) * math.cos(action + 0.25 * math.pi), valid=True)


def displacement_approx(method: DisplacementMethod, m: int, n: int, d: float) -> ApproxValue:
    """Approximations to <m|D(d,0)|n>; 'inphase' hands m = n to 'inphase_equal'."""
    if m < 0 or n < 0:
        raise DomainError("m, n", (m, n), "m, n >= 0")
    if method == "inphase":
        return _inphase_equal(m, d) if m == n else inphase_general_form(m, n, d)
    if method == "inphase_equal":
        if m != n:
            return ApproxValue.invalid("inphase_equal needs m == n")
        return _inphase_equal(m, d)
    if method == "tricomi":
        return _tricomi(m, n, d)
    if method == "dowling_wkb":
        return _dowling_wkb(m, n, d)
    raise DomainError("method", method, f"one of {', '.join(DISPLACEMENT_METHODS)}")


def interference_area(m: int, n: int, d: float) -> float:
    """n pi + m theta0 - n theta0' - sqrt(mn) sin(theta0' - theta0)."""
    saddles = displacement_saddles(m, n, d)
    return (n * math.pi + m * saddles.theta0 - n * saddles.theta0_prime
            - math.sqrt(m * n) * math.sin(saddles.theta0_prime - saddles.theta0))
