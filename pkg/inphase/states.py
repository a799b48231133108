# inphase/states.py
"""
Truncated Fock-space states and discretised in-phase superpositions.

A superposition is a weighted sum over sampled coherent states along a line
or around a circle in the phase plane. superposition_terms returns the
samples and their weights (quadrature weights included), build_superposition
projects them onto |0>..|cutoff>.
"""

import cmath
import logging
import math
from typing import Dict, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.stats import poisson

from inphase.config_system import NumericsConfig
from inphase.exceptions import DomainError, TruncationError
from inphase.phasespace import (
    PhaseCurve,
    PhasePoint,
    coherent_overlap,
    pancharatnam_phase,
    polyline_geometric_phase,
    triangle_area,
)
from inphase.specfun import log_factorial, log_factorials

logger = logging.getLogger("inphase.states")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

# --- Constants ---
SAMPLE_TAIL_LIMIT = 1e-10
STATE_TAIL_LIMIT = 1e-8
# Gaussian-weighted lines are cut at this many envelope standard deviations
GAUSSIAN_EXTENT_SIGMAS = 8.0
LINE_KINDS = ("momentum_line", "position_line", "gaussian_line", "squeezed_line", "rotated_position_line")
CIRCLE_KINDS = ("fock_circle", "displaced_fock_circle")
SUPERPOSITION_KINDS = LINE_KINDS + CIRCLE_KINDS + ("coherent_pair",)

_REQUIRED_PARAMS: Dict[str, Tuple[str, ...]] = {
    "momentum_line": ("p0",),
    "position_line": ("q0",),
    "gaussian_line": ("sigma", "p0"),
    "fock_circle": ("n",),
    "displaced_fock_circle": ("n", "q", "p"),
    "squeezed_line": ("mu",),
    "rotated_position_line": ("q", "t"),
    "coherent_pair": ("q1", "p1", "q2", "p2"),
}
_OPTIONAL_PARAMS: Dict[str, Tuple[str, ...]] = {
    "momentum_line": ("line",),
    "position_line": ("line",),
    "fock_circle": ("r",),
    "squeezed_line": ("anchor",),
    "coherent_pair": ("theta",),
}
_LOG_PI = math.log(math.pi)


# --- Domain types ---

class FockVector(BaseModel):
    """Coefficients <n|psi> for n = 0..cutoff, possibly unnormalised. Read-only."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: np.ndarray

    @field_validator("coeffs", mode="before")
    @classmethod
    def _as_frozen_complex(cls, value):
        array = np.array(value, dtype=complex)
        if array.ndim != 1 or array.size == 0:
            raise ValueError("coeffs must be a non-empty one-dimensional sequence")
        if not np.all(np.isfinite(array)):
            raise ValueError("coeffs must be finite")
        array.setflags(write=False)
        return array

    @property
    def cutoff(self) -> int:
        return self.coeffs.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def tail_mass(self) -> float:
        """|coeffs[cutoff]|^2 relative to the total weight."""
        total = float(np.vdot(self.coeffs, self.coeffs).real)
        if total == 0.0:
            return 0.0
        return float(abs(self.coeffs[-1]) ** 2) / total

    def normalized(self) -> "FockVector":
        return FockVector(coeffs=self.coeffs / _require_nonzero(self))

    @classmethod
    def basis(cls, n: int, cutoff: int) -> "FockVector":
        if not 0 <= n <= cutoff:
            raise DomainError("n", n, f"0 <= n <= cutoff={cutoff}")
        coeffs = np.zeros(cutoff + 1, dtype=complex)
        coeffs[n] = 1.0
        return cls(coeffs=coeffs)


class SuperpositionSpec(BaseModel):
    """
    A discretised one-dimensional coherent-state superposition.

    params per kind:
      momentum_line p0 [line]; position_line q0 [line]; gaussian_line sigma, p0;
      fock_circle n [r]; displaced_fock_circle n, q, p; squeezed_line mu [anchor];
      rotated_position_line q, t; coherent_pair q1, p1, q2, p2 [theta].
    samples and extent fall back to the configuration (extent is ignored by circles).
    """
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    kind: str
    params: Dict[str, float] = Field(default_factory=dict)
    samples: Optional[int] = None
    extent: Optional[float] = None


class Moments(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean_q: float
    mean_p: float
    var_q: float
    var_p: float
    cov_qp: float


class InterferenceBreakdown(BaseModel):
    """Two-source Q function split into intensities and the interference phase."""
    model_config = ConfigDict(frozen=True)

    i1: float
    i2: float
    delta: float
    q_value: float


class Displace(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)
    kind: Literal["displace"] = "displace"
    q: float
    p: float


class Rotate(BaseModel):
    """e^{i t n}, an anticlockwise rotation of the phase plane by t."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)
    kind: Literal["rotate"] = "rotate"
    t: float


Transform = Union[Displace, Rotate]


def _require_nonzero(state: FockVector) -> float:
    value = state.norm()
    if value == 0.0:
        raise DomainError("state", "zero vector", "a state with non-zero norm")
    return value


# --- Coherent states in the Fock basis ---

def coherent_fock_matrix(q, p, cutoff: int) -> np.ndarray:
    """
    Rows of <n|q_j, p_j> for n = 0..cutoff, one row per sample.

    Every entry is assembled as exp(-|z|^2/2 + n ln|z| - ln(n!)/2 + i n arg z).
    """
    if cutoff < 0:
        raise DomainError("cutoff", cutoff, "cutoff >= 0")
    q = np.atleast_1d(np.asarray(q, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    z = (q + 1j * p) / math.sqrt(2.0)
    n = np.arange(cutoff + 1)
    modulus = np.abs(z)
    at_origin = modulus == 0.0
    safe_log = np.log(np.where(at_origin, 1.0, modulus))
    log_mag = -0.5 * modulus[:, None] ** 2 + n[None, :] * safe_log[:, None] - 0.5 * log_factorials(cutoff)[None, :]
    phase = n[None, :] * np.angle(z)[:, None]
    rows = np.exp(log_mag + 1j * phase)
    if np.any(at_origin):
        rows[at_origin, :] = 0.0
        rows[at_origin, 0] = 1.0
    return rows


def coherent_fock_coeffs(point: PhasePoint, cutoff: int) -> FockVector:
    """e^{-|z|^2/2} z^n / sqrt(n!) for n = 0..cutoff."""
    return FockVector(coeffs=coherent_fock_matrix([point.q], [point.p], cutoff)[0])


def coherent_tail_mass(radius_squared, cutoff: int):
    """Poisson weight of a coherent state beyond the cutoff, P(N > cutoff)."""
    radius_squared = np.asarray(radius_squared, dtype=float)
    # the vacuum has no tail; keeps the Poisson mean strictly positive
    return np.where(radius_squared > 0.0, poisson.sf(cutoff, np.maximum(radius_squared, 1e-300)), 0.0)


# --- Superpositions ---

def _trapezoid(extent: float, samples: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes = np.linspace(-extent, extent, samples)
    weights = np.full(samples, 2.0 * extent / (samples - 1))
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return nodes, weights


def _validated_params(spec: SuperpositionSpec) -> Dict[str, float]:
    if spec.kind not in SUPERPOSITION_KINDS:
        raise DomainError("kind", spec.kind, f"one of {', '.join(SUPERPOSITION_KINDS)}")
    required = _REQUIRED_PARAMS[spec.kind]
    allowed = set(required) | set(_OPTIONAL_PARAMS.get(spec.kind, ()))
    missing = [key for key in required if key not in spec.params]
    if missing:
        raise DomainError("params", spec.params, f"{spec.kind} needs {', '.join(required)}")
    unknown = sorted(set(spec.params) - allowed)
    if unknown:
        raise DomainError("params", spec.params, f"{spec.kind} accepts only {', '.join(sorted(allowed))}")
    params = dict(spec.params)
    for key in ("n",):
        if key in params:
            if params[key] < 0 or params[key] != int(params[key]):
                raise DomainError(key, params[key], "a non-negative integer")
    if spec.kind == "gaussian_line" and params["sigma"] <= 0:
        raise DomainError("sigma", params["sigma"], "sigma > 0")
    if spec.kind == "fock_circle":
        params.setdefault("r", math.sqrt(2.0 * params["n"]))
        if params["r"] <= 0:
            raise DomainError("r", params["r"], "r > 0")
    if spec.kind == "squeezed_line" and params["mu"] == 0:
        raise DomainError("mu", params["mu"], "|mu| > 0")
    return params


def _sample_count(spec: SuperpositionSpec, config: NumericsConfig) -> int:
    if spec.kind in CIRCLE_KINDS:
        samples = spec.samples if spec.samples is not None else config.circle_samples
        if samples < 8:
            raise DomainError("samples", samples, "samples >= 8 for circles")
        return samples
    samples = spec.samples if spec.samples is not None else config.line_samples
    if samples < 2:
        raise DomainError("samples", samples, "samples >= 2 for lines")
    return samples


def superposition_terms(spec: SuperpositionSpec, config: Optional[NumericsConfig] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Samples and complex weights of a discretised superposition.

    Returns (q, p, weights) with the quadrature weight, prefactor and phase
    factor of every term folded into weights, so that the state is
    sum_j weights[j] |q[j], p[j]>.
    """
    config = config or NumericsConfig()
    params = _validated_params(spec)
    kind = spec.kind

    if kind == "coherent_pair":
        q = np.array([params["q1"], params["q2"]])
        p = np.array([params["p1"], params["p2"]])
        weights = np.array([1.0, cmath.exp(1j * params.get("theta", 0.0))])
        return q, p, weights

    samples = _sample_count(spec, config)

    if kind in CIRCLE_KINDS:
        theta = 2.0 * math.pi * np.arange(samples) / samples
        n = int(params["n"])
        step = 2.0 * math.pi / samples
        if kind == "fock_circle":
            r = params["r"]
            log_prefactor = 0.25 * r * r + 0.5 * log_factorial(n) + n * math.log(math.sqrt(2.0) / r) - math.log(2.0 * math.pi)
            q = r * np.cos(theta)
            p = r * np.sin(theta)
            weights = math.exp(log_prefactor) * step * np.exp(-1j * n * theta)
        else:
            r = math.sqrt(2.0 * n)
            q0, p0 = params["q"], params["p"]
            # N_n / (2 pi), with N_n = e^{n/2} n^{-n/2} sqrt(n!)
            log_prefactor = 0.5 * log_factorial(n) - math.log(2.0 * math.pi)
            if n > 0:
                log_prefactor += 0.5 * n - 0.5 * n * math.log(n)
            q = q0 + r * np.cos(theta)
            p = p0 + r * np.sin(theta)
            phase = -n * theta + math.sqrt(n / 2.0) * (p0 * np.cos(theta) - q0 * np.sin(theta))
            weights = math.exp(log_prefactor) * step * np.exp(1j * phase)
        return q, p, weights

    eigen_norm = 1.0 / (2.0 * math.pi ** 0.75)

    if kind == "momentum_line":
        p0 = params["p0"]
        line = params.get("line", p0)
        extent = spec.extent if spec.extent is not None else config.line_extent
        q, dq = _trapezoid(extent, samples)
        p = np.full(samples, line)
        weights = eigen_norm * math.exp(0.5 * (line - p0) ** 2) * dq * np.exp(1j * q * (p0 - 0.5 * line))
    elif kind == "position_line":
        q0 = params["q0"]
        line = params.get("line", q0)
        extent = spec.extent if spec.extent is not None else config.line_extent
        p, dp = _trapezoid(extent, samples)
        q = np.full(samples, line)
        weights = eigen_norm * math.exp(0.5 * (line - q0) ** 2) * dp * np.exp(-1j * p * (q0 - 0.5 * line))
    elif kind == "rotated_position_line":
        q0, t = params["q"], params["t"]
        extent = spec.extent if spec.extent is not None else config.line_extent
        line, dp = _trapezoid(extent, samples)
        # e^{-iHt} turns the vertical line clockwise by t
        q = q0 * math.cos(t) + line * math.sin(t)
        p = line * math.cos(t) - q0 * math.sin(t)
        weights = eigen_norm * dp * np.exp(-0.5j * q0 * line - 0.5j * t)
    elif kind == "gaussian_line":
        sigma, p0 = params["sigma"], params["p0"]
        extent = spec.extent if spec.extent is not None else GAUSSIAN_EXTENT_SIGMAS / sigma
        q, dq = _trapezoid(extent, samples)
        p = np.full(samples, p0)
        weights = dq * np.exp(-0.5 * sigma ** 2 * q ** 2 + 0.5j * q * p0)
    else:  # squeezed_line
        mu = params["mu"]
        anchor = params.get("anchor", 0.0)
        k2 = math.exp(abs(mu))
        s = k2 - 1.0
        extent = spec.extent if spec.extent is not None else GAUSSIAN_EXTENT_SIGMAS * math.sqrt(s)
        line, dl = _trapezoid(extent, samples)
        prefactor = math.sqrt(math.sqrt(k2) / (2.0 * math.pi * s)) * math.exp(k2 * anchor ** 2 / (2.0 * s))
        if mu > 0:
            q, p = line, np.full(samples, anchor)
            exponent = -line * (line + 1j * (k2 + 1.0) * anchor) / (2.0 * s)
        else:
            # the mu > 0 line turned clockwise by pi/2
            q, p = np.full(samples, anchor), line
            exponent = -line * (line - 1j * (k2 + 1.0) * anchor) / (2.0 * s)
        weights = prefactor * dl * np.exp(exponent)

    return np.asarray(q, dtype=float), np.asarray(p, dtype=float), np.asarray(weights, dtype=complex)


def build_superposition(spec: SuperpositionSpec, cutoff: Optional[int] = None, config: Optional[NumericsConfig] = None) -> FockVector:
    """
    Projects a discretised superposition onto the truncated Fock space.

    Raises TruncationError when a sample that carries weight has more than
    1e-10 of its Poisson mass beyond the cutoff.
    """
    config = config or NumericsConfig()
    cutoff = config.cutoff if cutoff is None else cutoff
    q, p, weights = superposition_terms(spec, config)

    magnitudes = np.abs(weights)
    relative = (magnitudes / magnitudes.max()) ** 2
    tails = coherent_tail_mass(0.5 * (q * q + p * p), cutoff)
    worst = float(np.max(relative * tails))
    if worst > SAMPLE_TAIL_LIMIT:
        raise TruncationError(cutoff, worst, SAMPLE_TAIL_LIMIT, context=f"{spec.kind} superposition")

    logger.debug(f"Building {spec.kind} with {q.size} samples at cutoff {cutoff}")
    coeffs = weights @ coherent_fock_matrix(q, p, cutoff)
    return FockVector(coeffs=coeffs)


def term_phases(spec: SuperpositionSpec, config: Optional[NumericsConfig] = None) -> np.ndarray:
    """
    Pancharatnam phase between consecutive weighted terms, principal values.

    Near zero everywhere means the superposition is locally in phase.
    Circle kinds include the step from the last sample back to the first.
    """
    q, p, weights = superposition_terms(spec, config)
    closed = spec.kind in CIRCLE_KINDS
    if closed:
        q_next, p_next, w_next = np.roll(q, -1), np.roll(p, -1), np.roll(weights, -1)
    else:
        q_next, p_next, w_next = q[1:], p[1:], weights[1:]
        q, p, weights = q[:-1], p[:-1], weights[:-1]
    raw = np.angle(np.conj(weights) * w_next) + 0.5 * (q * p_next - q_next * p)
    return np.angle(np.exp(1j * raw))


def superposition_geometric_phase(spec: SuperpositionSpec, config: Optional[NumericsConfig] = None) -> float:
    """Unwrapped geometric phase of the sampled circle (circle kinds only)."""
    if spec.kind not in CIRCLE_KINDS:
        raise DomainError("kind", spec.kind, f"one of {', '.join(CIRCLE_KINDS)}")
    q, p, _ = superposition_terms(spec, config)
    params = _validated_params(spec)
    # Enclosed area is translation invariant; arcs are taken about the centre
    if spec.kind == "displaced_fock_circle":
        q = q - params["q"]
        p = p - params["p"]
    curve = PhaseCurve.from_arrays(q, p, closed=True)
    return polyline_geometric_phase(curve, segments="arc")


# --- Inner products ---

def _aligned(a: FockVector, b: FockVector) -> Tuple[np.ndarray, np.ndarray]:
    size = max(a.coeffs.size, b.coeffs.size)
    left = np.zeros(size, dtype=complex)
    right = np.zeros(size, dtype=complex)
    left[:a.coeffs.size] = a.coeffs
    right[:b.coeffs.size] = b.coeffs
    return left, right


def inner(a: FockVector, b: FockVector) -> complex:
    """<a|b>; vectors with different cutoffs are zero-padded."""
    left, right = _aligned(a, b)
    return complex(np.vdot(left, right))


def fidelity(a: FockVector, b: FockVector) -> float:
    """|<a|b>|^2 / (||a||^2 ||b||^2)."""
    scale = _require_nonzero(a) * _require_nonzero(b)
    return abs(inner(a, b)) ** 2 / scale ** 2


# --- Q function ---

QConvention = Literal["per_dqdp", "per_d2z_over_pi"]


def _convention_measure(convention: str) -> float:
    if convention == "per_dqdp":
        return 2.0 * math.pi
    if convention == "per_d2z_over_pi":
        return math.pi
    raise DomainError("convention", convention, "'per_dqdp' or 'per_d2z_over_pi'")


def coherent_overlaps(state: FockVector, q, p) -> np.ndarray:
    """<q_j, p_j|psi> for each sample, by the Fock series."""
    rows = coherent_fock_matrix(q, p, state.cutoff)
    return np.conj(rows) @ state.coeffs


def q_function(state: FockVector, point: PhasePoint, convention: QConvention = "per_dqdp") -> float:
    """|<z|psi>|^2 / ||psi||^2 per unit dq dp (default) or per d^2z/pi."""
    measure = _convention_measure(convention)
    scale = _require_nonzero(state)
    overlap = coherent_overlaps(state, [point.q], [point.p])[0]
    return float(abs(overlap) ** 2 / scale ** 2 / measure)


def q_function_grid(state: FockVector, q_values, p_values, convention: QConvention = "per_dqdp") -> np.ndarray:
    """Q on the grid q_values x p_values; result[i, j] is at (q_values[i], p_values[j])."""
    measure = _convention_measure(convention)
    scale = _require_nonzero(state)
    q_values = np.asarray(q_values, dtype=float)
    p_values = np.asarray(p_values, dtype=float)
    grid = np.empty((q_values.size, p_values.size))
    for i, q in enumerate(q_values):
        row = coherent_overlaps(state, np.full(p_values.size, q), p_values)
        grid[i] = np.abs(row) ** 2 / scale ** 2 / measure
    return grid


def q_closed_form(family: Literal["position", "momentum", "fock"], parameter: float, point: PhasePoint) -> float:
    """
    Closed-form Q functions per unit dq dp.

    position q0: e^{-(q-q0)^2} / (2 pi^{3/2}); momentum p0 likewise in p;
    fock n: [(q^2+p^2)/2]^n e^{-(q^2+p^2)/2} / (2 pi n!).
    """
    if family == "position":
        return math.exp(-(point.q - parameter) ** 2) / (2.0 * math.pi ** 1.5)
    if family == "momentum":
        return math.exp(-(point.p - parameter) ** 2) / (2.0 * math.pi ** 1.5)
    if family == "fock":
        n = int(parameter)
        if n < 0 or n != parameter:
            raise DomainError("n", parameter, "a non-negative integer")
        half_r2 = 0.5 * point.radius_squared
        if half_r2 == 0.0:
            return 1.0 / (2.0 * math.pi) if n == 0 else 0.0
        return math.exp(n * math.log(half_r2) - half_r2 - log_factorial(n)) / (2.0 * math.pi)
    raise DomainError("family", family, "'position', 'momentum' or 'fock'")


def two_source_q(z1: PhasePoint, z2: PhasePoint, theta: float, point: PhasePoint) -> InterferenceBreakdown:
    """
    Q of |z1> + e^{i theta}|z2> split into I1, I2 and the phase delta(z).

    delta = theta + A(0, z1, z2) + A(z1, z, z2), with A a signed triangle
    area; q_value is per d^2z/pi and normalised.
    """
    origin = PhasePoint(q=0.0, p=0.0)
    i1 = math.exp(-0.5 * ((point.q - z1.q) ** 2 + (point.p - z1.p) ** 2))
    i2 = math.exp(-0.5 * ((point.q - z2.q) ** 2 + (point.p - z2.p) ** 2))
    delta = theta + triangle_area(origin, z1, z2) + triangle_area(z1, point, z2)
    norm_squared = 2.0 + 2.0 * (cmath.exp(1j * theta) * coherent_overlap(z1, z2)).real
    q_value = (i1 + i2 + 2.0 * math.sqrt(i1 * i2) * math.cos(delta)) / (math.pi * norm_squared)
    return InterferenceBreakdown(i1=i1, i2=i2, delta=delta, q_value=max(q_value, 0.0))


# --- Moments ---

def _moments_from_ladder(mean_a: complex, mean_a2: complex, mean_n: float) -> Moments:
    sqrt2 = math.sqrt(2.0)
    mean_q = sqrt2 * mean_a.real
    mean_p = sqrt2 * mean_a.imag
    second_q = mean_a2.real + mean_n + 0.5
    second_p = -mean_a2.real + mean_n + 0.5
    symmetric_qp = mean_a2.imag
    return Moments(
        mean_q=mean_q,
        mean_p=mean_p,
        var_q=max(second_q - mean_q ** 2, 0.0),
        var_p=max(second_p - mean_p ** 2, 0.0),
        cov_qp=symmetric_qp - mean_q * mean_p,
    )


def quadrature_stats(state: FockVector) -> Moments:
    """Means, variances and symmetrised covariance of q and p from ladder actions."""
    scale = _require_nonzero(state)
    tail = state.tail_mass()
    if tail > STATE_TAIL_LIMIT:
        raise TruncationError(state.cutoff, tail, STATE_TAIL_LIMIT, context="quadrature statistics")
    c = state.coeffs / scale
    n = np.arange(c.size)
    # <a> = sum conj(c_{n-1}) sqrt(n) c_n ; <a^2> = sum conj(c_{n-2}) sqrt(n(n-1)) c_n
    mean_a = complex(np.vdot(c[:-1], np.sqrt(n[1:]) * c[1:])) if c.size > 1 else 0j
    mean_a2 = complex(np.vdot(c[:-2], np.sqrt(n[2:] * (n[2:] - 1)) * c[2:])) if c.size > 2 else 0j
    mean_n = float(np.sum(n * np.abs(c) ** 2))
    return _moments_from_ladder(mean_a, mean_a2, mean_n)


def two_source_moments(z1: PhasePoint, z2: PhasePoint, theta: float) -> Moments:
    """Moments of |z1> + e^{i theta}|z2> from coherent-state algebra alone."""
    points = (z1, z2)
    weights = (1.0 + 0j, cmath.exp(1j * theta))
    norm_squared = 0j
    mean_a = 0j
    mean_a2 = 0j
    mean_n = 0j
    for wi, zi in zip(weights, points):
        for wj, zj in zip(weights, points):
            factor = wi.conjugate() * wj * coherent_overlap(zi, zj)
            norm_squared += factor
            mean_a += factor * zj.z
            mean_a2 += factor * zj.z ** 2
            mean_n += factor * zi.z.conjugate() * zj.z
    if abs(norm_squared) == 0.0:
        raise DomainError("theta", theta, "a superposition with non-zero norm")
    n2 = norm_squared.real
    return _moments_from_ladder(mean_a / n2, mean_a2 / n2, (mean_n / n2).real)


# --- Evolution ---

def evolve(state: FockVector, transform: Transform) -> FockVector:
    """Applies e^{i t n} (Rotate) or the truncated D(q, p) (Displace)."""
    if isinstance(transform, Rotate):
        phases = np.exp(1j * transform.t * np.arange(state.coeffs.size))
        return FockVector(coeffs=state.coeffs * phases)
    if isinstance(transform, Displace):
        # Imported locally to avoid a circular dependency with the oracle module
        from inphase.oracle import operator_matrix, DisplacementOperator

        tail = state.tail_mass()
        if tail > STATE_TAIL_LIMIT:
            raise TruncationError(state.cutoff, tail, STATE_TAIL_LIMIT, context="displacement input")
        matrix = operator_matrix(DisplacementOperator(q=transform.q, p=transform.p), state.cutoff)
        result = FockVector(coeffs=matrix.entries @ state.coeffs)
        tail = result.tail_mass()
        if tail > STATE_TAIL_LIMIT:
            raise TruncationError(state.cutoff, tail, STATE_TAIL_LIMIT, context="displaced state")
        return result
    raise DomainError("transform", transform, "Displace or Rotate")
