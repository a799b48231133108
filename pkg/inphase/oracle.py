# inphase/oracle.py
"""
Brute-force reference values.

Adaptive tensor-product Gauss-Legendre quadrature of the phase-space double
integrals, operator matrices on the truncated Fock space by matrix
exponential, and direct summation of the normal-ordered displacement series
in extended precision. Nothing here uses the closed forms in inphase.exact
for values, apart from the propagator kernel that propagator_coherent_sandwich
integrates so it can be set against the Fock-space rotation.
"""

import logging
import math
from typing import Callable, Literal, Optional, Tuple, Union

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel, ConfigDict, field_validator
from scipy.linalg import expm

from inphase.config_system import NumericsConfig
from inphase.exact import propagator_critical_point, sho_propagator
from inphase.exceptions import CausticError, DomainError, QuadratureError, TruncationError
from inphase.phasespace import PhasePoint, coherent_wavefunction
from inphase.states import FockVector, coherent_fock_coeffs, coherent_overlaps

logger = logging.getLogger("inphase.oracle")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

# --- Constants ---
GAUSSIAN_WIDTHS = 10.0
START_NODES = 32
HEADROOM_MARGIN = 40
SERIES_INDEX_LIMIT = 100
SERIES_DIGITS = 60
_SQRT2 = math.sqrt(2.0)


# --- Integral descriptions ---

class PosMomIntegral(BaseModel):
    """<q, pos|p, mom> as a double integral over the two in-phase lines."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)
    kind: Literal["posmom"] = "posmom"
    q: float
    p: float


class PropagatorIntegral(BaseModel):
    """<q2|e^{-iHt}|q1> as a double integral over the momenta of both lines."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)
    kind: Literal["propagator"] = "propagator"
    q1: float
    q2: float
    t: float


class ResolutionIntegral(BaseModel):
    """<bra|ket> through the coherent-state resolution of the identity."""
    model_config = ConfigDict(frozen=True)
    kind: Literal["resolution"] = "resolution"
    bra: FockVector
    ket: FockVector


PhaseSpaceIntegral = Union[PosMomIntegral, PropagatorIntegral, ResolutionIntegral]
Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]
Box = Tuple[float, float, float, float]


# --- Operators ---

class DisplacementOperator(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)
    kind: Literal["displacement"] = "displacement"
    q: float
    p: float


class SqueezeOperator(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)
    kind: Literal["squeeze"] = "squeeze"
    mu: float


class RotationOperator(BaseModel):
    """e^{i t n}."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)
    kind: Literal["rotation"] = "rotation"
    t: float


OperatorKind = Union[DisplacementOperator, SqueezeOperator, RotationOperator]


class OperatorMatrix(BaseModel):
    """Dense (cutoff+1) x (cutoff+1) operator on the truncated Fock space. Read-only."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    kind_tag: str

    @field_validator("entries", mode="before")
    @classmethod
    def _as_frozen_square(cls, value):
        array = np.array(value, dtype=complex)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError("entries must be a square matrix")
        array.setflags(write=False)
        return array

    @property
    def cutoff(self) -> int:
        return self.entries.shape[0] - 1

    def unitarity_defect(self) -> float:
        """max |M^dag M - I| over the leading half block, where truncation is negligible."""
        half = max(1, (self.cutoff + 1) // 2)
        block = self.entries[:, :half]
        gram = block.conj().T @ block
        return float(np.max(np.abs(gram - np.eye(half))))

    def apply(self, state: FockVector) -> FockVector:
        if state.cutoff != self.cutoff:
            raise DomainError("state", f"cutoff {state.cutoff}", f"cutoff {self.cutoff} to match the operator")
        return FockVector(coeffs=self.entries @ state.coeffs)


# --- Quadrature engine ---

def _tensor_gauss_legendre(integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
                           box: Tuple[float, float, float, float], nodes: int) -> complex:
    x_lo, x_hi, y_lo, y_hi = box
    abscissae, weights = leggauss(nodes)
    half_x = 0.5 * (x_hi - x_lo)
    half_y = 0.5 * (y_hi - y_lo)
    xs = half_x * (abscissae + 1.0) + x_lo
    ys = half_y * (abscissae + 1.0) + y_lo
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    values = integrand(grid_x, grid_y)
    return complex(np.sum(weights[:, None] * weights[None, :] * values) * half_x * half_y)


def adaptive_quad_2d(integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
                     box: Tuple[float, float, float, float],
                     tolerance: float = 1e-10, max_nodes: int = 1024) -> complex:
    """
    Integrates over a rectangle, doubling Gauss-Legendre nodes per axis
    until successive estimates differ by less than tolerance.
    """
    nodes = START_NODES
    previous = _tensor_gauss_legendre(integrand, box, nodes)
    delta = math.inf
    while nodes < max_nodes:
        nodes *= 2
        current = _tensor_gauss_legendre(integrand, box, nodes)
        delta = abs(current - previous)
        logger.debug(f"Quadrature with {nodes} nodes per axis: {current} (change {delta:.3e})")
        if delta < tolerance:
            return current
        previous = current
    raise QuadratureError(previous, delta, nodes)


def _centred_box(centre_x: float, centre_y: float, half_width: float) -> Tuple[float, float, float, float]:
    return centre_x - half_width, centre_x + half_width, centre_y - half_width, centre_y + half_width


def _overlap_grid(qa, pa, qb, pb) -> np.ndarray:
    """<qa, pa|qb, pb> elementwise."""
    exponent = -0.25 * ((qa - qb) ** 2 + (pa - pb) ** 2) - 0.5j * (qb * pa - pb * qa)
    return np.exp(exponent)


def _integrand_and_box(integral: PhaseSpaceIntegral) -> Tuple[Integrand, Box]:
    """
    Integrand and integration box of one of the phase-space double integrals.

    posmom: (4 pi^{3/2})^{-1} int dq' dp' e^{iqp'/2} e^{iq'p/2} <q,p'|q',p>
    propagator: e^{-it/2} (4 pi^{3/2})^{-1} int dp1 dp2
        e^{i(q2 p2 - q1 p1)/2} <q2,p2|(q1,p1) rotated clockwise by t>
    resolution: (2 pi)^{-1} int dq dp <bra|q,p><q,p|ket>
    """
    width = GAUSSIAN_WIDTHS * _SQRT2
    prefactor = 1.0 / (4.0 * math.pi ** 1.5)

    if isinstance(integral, PosMomIntegral):
        q, p = integral.q, integral.p

        def integrand(q_line, p_line):
            phase = np.exp(0.5j * q * p_line + 0.5j * q_line * p)
            return prefactor * phase * _overlap_grid(q, p_line, q_line, p)

        # variables are (q', p'); the envelope peaks at q' = q, p' = p
        box = _centred_box(q, p, width)
    elif isinstance(integral, PropagatorIntegral):
        q1, q2, t = integral.q1, integral.q2, integral.t
        s = math.sin(t)
        if abs(s) <= 1e-9:
            raise CausticError(t)
        cos_t, sin_t = math.cos(t), s
        p1_star, p2_star = propagator_critical_point(q2, q1, t)

        def integrand(p1, p2):
            q_rot = q1 * cos_t + p1 * sin_t
            p_rot = p1 * cos_t - q1 * sin_t
            phase = np.exp(0.5j * (q2 * p2 - q1 * p1) - 0.5j * t)
            return prefactor * phase * _overlap_grid(q2, p2, q_rot, p_rot)

        box = _centred_box(p1_star, p2_star, width / abs(s))
    elif isinstance(integral, ResolutionIntegral):
        bra, ket = integral.bra, integral.ket
        for label, state in (("bra", bra), ("ket", ket)):
            if state.tail_mass() > 1e-10:
                raise TruncationError(state.cutoff, state.tail_mass(), 1e-10, context=f"resolution {label}")
        largest = max(bra.cutoff, ket.cutoff)
        half_width = math.sqrt(2.0 * largest + 1.0) + width

        def integrand(q_grid, p_grid):
            values = np.empty(q_grid.shape, dtype=complex)
            # row by row keeps the coherent-state matrices small
            for row in range(q_grid.shape[0]):
                left = np.conj(coherent_overlaps(bra, q_grid[row], p_grid[row]))
                right = coherent_overlaps(ket, q_grid[row], p_grid[row])
                values[row] = left * right
            return values / (2.0 * math.pi)

        box = (-half_width, half_width, -half_width, half_width)
    else:
        raise DomainError("integral", integral, "PosMomIntegral, PropagatorIntegral or ResolutionIntegral")
    return integrand, box


def quad_overlap_2d(integral: PhaseSpaceIntegral, config: Optional[NumericsConfig] = None) -> complex:
    """Evaluates one of the phase-space double integrals by adaptive quadrature."""
    config = config or NumericsConfig()
    integrand, box = _integrand_and_box(integral)
    logger.debug(f"Quadrature for {integral.kind} over box {tuple(round(b, 3) for b in box)}")
    return adaptive_quad_2d(integrand, box, tolerance=config.quad_tolerance, max_nodes=config.quad_max_nodes)


def fixed_quad_overlap_2d(integral: PhaseSpaceIntegral, nodes: int) -> complex:
    """The same integral with a fixed number of Gauss-Legendre nodes per axis."""
    if nodes < 1:
        raise DomainError("nodes", nodes, "nodes >= 1")
    integrand, box = _integrand_and_box(integral)
    return _tensor_gauss_legendre(integrand, box, nodes)


def propagator_coherent_sandwich(z_out: PhasePoint, z_in: PhasePoint, t: float,
                                 config: Optional[NumericsConfig] = None) -> complex:
    """
    <z_out|e^{-iHt}|z_in> by integrating the closed-form kernel against the
    coherent-state wavefunctions over (q2, q1).
    """
    config = config or NumericsConfig()

    def integrand(q2, q1):
        bra = np.conj(coherent_wavefunction(z_out, q2))
        ket = coherent_wavefunction(z_in, q1)
        return sho_propagator(q2, q1, t) * bra * ket

    half_width = GAUSSIAN_WIDTHS
    box = (z_out.q - half_width, z_out.q + half_width, z_in.q - half_width, z_in.q + half_width)
    logger.debug(f"Coherent sandwich at t={t} ({math.floor(t / math.pi)} caustics crossed)")
    return adaptive_quad_2d(integrand, box, tolerance=config.quad_tolerance, max_nodes=config.quad_max_nodes)


def rotation_sandwich(z_out: PhasePoint, z_in: PhasePoint, t: float, cutoff: int) -> complex:
    """e^{-it/2} <z_out|e^{-itn}|z_in> in the truncated Fock space."""
    rotation = operator_matrix(RotationOperator(t=-t), cutoff)
    ket = rotation.apply(coherent_fock_coeffs(z_in, cutoff))
    bra = coherent_fock_coeffs(z_out, cutoff)
    return complex(np.exp(-0.5j * t) * np.vdot(bra.coeffs, ket.coeffs))


# --- Operator matrices ---

def oracle_cutoff(index_max: int, radius_squared: float = 0.0, mu: float = 0.0) -> int:
    """
    A cutoff that clears the classical turning point of the transformed
    |index_max> with a tail margin: D(z) shifts the radius by |z|, S(mu)
    stretches one quadrature by e^{|mu|/2}.
    """
    reach = (math.sqrt(index_max + 0.5) + math.sqrt(radius_squared)) ** 2 * math.exp(abs(mu))
    spread = math.sqrt(reach)
    required = int(math.ceil(reach + 12.0 * spread + HEADROOM_MARGIN))
    return max(required, _headroom(radius_squared, mu))


def _headroom(radius_squared: float, mu: float) -> int:
    return int(math.ceil(4.0 * (radius_squared + 4.0 * math.sinh(0.5 * mu) ** 2) + HEADROOM_MARGIN))


def _annihilation(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)


def operator_matrix(kind: OperatorKind, cutoff: int) -> OperatorMatrix:
    """
    D(z), S(mu) or e^{itn} on |0>..|cutoff>.

    D and S are matrix exponentials (Pade scaling and squaring) of the
    truncated generators z a^dag - z* a and (mu/4)(a^dag^2 - a^2).
    """
    if cutoff < 0:
        raise DomainError("cutoff", cutoff, "cutoff >= 0")
    if isinstance(kind, RotationOperator):
        return OperatorMatrix(entries=np.diag(np.exp(1j * kind.t * np.arange(cutoff + 1))), kind_tag=f"rotation(t={kind.t})")

    if isinstance(kind, DisplacementOperator):
        z = complex(kind.q, kind.p) / _SQRT2
        required = _headroom(abs(z) ** 2, 0.0)
        tag = f"displacement(q={kind.q}, p={kind.p})"
    elif isinstance(kind, SqueezeOperator):
        required = _headroom(0.0, kind.mu)
        tag = f"squeeze(mu={kind.mu})"
    else:
        raise DomainError("kind", kind, "DisplacementOperator, SqueezeOperator or RotationOperator")

    if cutoff < required:
        raise TruncationError(cutoff, context=tag, required_cutoff=required)

    a = _annihilation(cutoff)
    a_dag = a.conj().T
    if isinstance(kind, DisplacementOperator):
        generator = z * a_dag - z.conjugate() * a
    else:
        generator = 0.25 * kind.mu * (a_dag @ a_dag - a @ a)
    matrix = OperatorMatrix(entries=expm(generator), kind_tag=tag)
    defect = matrix.unitarity_defect()
    logger.debug(f"{tag} at cutoff {cutoff}: unitarity defect {defect:.2e}")
    if defect > 1e-9:
        logger.warning(f"{tag} at cutoff {cutoff} has unitarity defect {defect:.2e} on the leading block")
    return matrix


# --- Series oracle ---

def series_displacement_element(m: int, n: int, q: float, p: float) -> complex:
    """
    <m|e^{z a^dag} e^{-z* a}|n> e^{-|z|^2/2}, summed term by term.

    Terms run over j annihilations then m - n + j creations through |n - j>;
    the alternating sum is carried at SERIES_DIGITS significant digits.
    """
    for name, value in (("m", m), ("n", n)):
        if value < 0 or value > SERIES_INDEX_LIMIT:
            raise DomainError(name, value, f"0 <= {name} <= {SERIES_INDEX_LIMIT}")
    ctx = mpmath.MPContext()
    ctx.dps = SERIES_DIGITS
    z = ctx.mpc(q, p) / ctx.sqrt(2)
    minus_z_conj = -ctx.conj(z)
    sqrt_factorials = ctx.sqrt(ctx.factorial(m) * ctx.factorial(n))
    total = ctx.mpc(0)
    for j in range(max(0, n - m), n + 1):
        i = m - n + j
        k = n - j
        total += z ** i * minus_z_conj ** j * sqrt_factorials / (ctx.factorial(i) * ctx.factorial(j) * ctx.factorial(k))
    total *= ctx.exp(-abs(z) ** 2 / 2)
    return complex(total)
