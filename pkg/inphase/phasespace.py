# inphase/phasespace.py
"""
Coherent-state geometry on the (q, p) plane.

Labels, overlaps, the displacement composition phase, signed areas,
Pancharatnam and Bargmann phases, and geometric phases of discretised
coherent-state curves. Areas are counted positive for anticlockwise vertex
order with element dq dp.
"""

import logging
import math
from typing import List, Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from inphase.exceptions import DomainError

logger = logging.getLogger("inphase.phasespace")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

SQRT2 = math.sqrt(2.0)
# Segment phase increments this large are unlikely to unwrap correctly
SEGMENT_WARNING_THRESHOLD = 0.5 * math.pi

SegmentModel = Literal["chord", "arc"]


class PhasePoint(BaseModel):
    """Coherent-state label |q, p>, equivalently z = (q + ip)/sqrt(2)."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    q: float
    p: float

    @property
    def z(self) -> complex:
        return complex(self.q, self.p) / SQRT2

    @classmethod
    def from_z(cls, z: complex) -> "PhasePoint":
        return cls(q=SQRT2 * z.real, p=SQRT2 * z.imag)

    @property
    def radius_squared(self) -> float:
        return self.q * self.q + self.p * self.p


class PhaseCurve(BaseModel):
    """Ordered coherent-state labels; a closed curve does not repeat its first point."""
    model_config = ConfigDict(frozen=True)

    points: List[PhasePoint]
    closed: bool = False

    @classmethod
    def from_arrays(cls, q: Sequence[float], p: Sequence[float], closed: bool = False) -> "PhaseCurve":
        return cls(points=[PhasePoint(q=float(a), p=float(b)) for a, b in zip(q, p)], closed=closed)

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        q = np.array([pt.q for pt in self.points], dtype=float)
        p = np.array([pt.p for pt in self.points], dtype=float)
        return q, p


# --- Overlaps and phases ---

def coherent_overlap(a: PhasePoint, b: PhasePoint) -> complex:
    """<a|b> for two coherent states."""
    dq = a.q - b.q
    dp = a.p - b.p
    exponent = complex(-0.25 * (dq * dq + dp * dp), -0.5 * (b.q * a.p - b.p * a.q))
    return complex(np.exp(exponent))


def displacement_compose(first_applied: PhasePoint, second_applied: PhasePoint) -> Tuple[PhasePoint, float]:
    """
    Composes D(q',p') D(q,p) = e^{i phi} D(q+q', p+p').

    Returns the summed label and phi = (q p' - p q')/2.
    """
    q, p = first_applied.q, first_applied.p
    q2, p2 = second_applied.q, second_applied.p
    return PhasePoint(q=q + q2, p=p + p2), 0.5 * (q * p2 - p * q2)


def triangle_area(v0: PhasePoint, v1: PhasePoint, v2: PhasePoint) -> float:
    """Signed area of the triangle v0 v1 v2, positive when anticlockwise."""
    return 0.5 * ((v1.q - v0.q) * (v2.p - v0.p) - (v2.q - v0.q) * (v1.p - v0.p))


def pancharatnam_phase(a: PhasePoint, b: PhasePoint) -> float:
    """Phase of <a|b>: the signed area of the triangle (origin, a, b)."""
    return 0.5 * (a.q * b.p - b.q * a.p)


def bargmann_phase(a: PhasePoint, b: PhasePoint, c: PhasePoint) -> float:
    """arg(<a|b><b|c><c|a>), which for coherent states is the area of triangle abc."""
    return triangle_area(a, b, c)


def swept_areas(q: np.ndarray, p: np.ndarray, closed: bool, segments: SegmentModel = "chord") -> np.ndarray:
    """
    Area swept by the radius vector along each segment of a polyline.

    "chord" treats segments as straight lines (triangle with the origin);
    "arc" treats them as arcs about the origin with radius interpolated
    geometrically, 1/2 r_i r_{i+1} dtheta.
    """
    q_next = np.roll(q, -1) if closed else q[1:]
    p_next = np.roll(p, -1) if closed else p[1:]
    q_here = q if closed else q[:-1]
    p_here = p if closed else p[:-1]
    if segments == "chord":
        return 0.5 * (q_here * p_next - q_next * p_here)
    if segments == "arc":
        r_here = np.hypot(q_here, p_here)
        r_next = np.hypot(q_next, p_next)
        dtheta = np.angle(np.exp(1j * (np.arctan2(p_next, q_next) - np.arctan2(p_here, q_here))))
        return 0.5 * r_here * r_next * dtheta
    raise DomainError("segments", segments, "'chord' or 'arc'")


def polyline_geometric_phase(curve: PhaseCurve, segments: SegmentModel = "chord") -> float:
    """
    Geometric phase of a discretised coherent-state curve, not reduced mod 2 pi.

    Closed curves give minus the enclosed area (the closing segment is
    included). Open curves give the Pancharatnam phase of the end point
    relative to the start minus the swept area.
    """
    required = 3 if curve.closed else 2
    if len(curve.points) < required:
        raise DomainError(
            "curve", f"{len(curve.points)} points",
            f">= {required} points for a {'closed' if curve.closed else 'open'} curve",
        )
    q, p = curve.as_arrays()
    swept = swept_areas(q, p, curve.closed, segments)
    largest = float(np.max(np.abs(swept)))
    if largest >= SEGMENT_WARNING_THRESHOLD:
        logger.warning(f"Segment phase increment {largest:.3f} >= pi/2; refine the curve before trusting the unwrapped sum.")
    dynamical = math.fsum(swept.tolist())
    if curve.closed:
        return -dynamical
    return pancharatnam_phase(curve.points[0], curve.points[-1]) - dynamical


# --- Wavefunctions ---

def coherent_wavefunction(point: PhasePoint, x, representation: Literal["position", "momentum"] = "position"):
    """<x, pos|q,p> or <y, mom|q,p>, vectorised over x."""
    x = np.asarray(x, dtype=float)
    norm = math.pi ** -0.25
    if representation == "position":
        return norm * np.exp(-0.5 * (x - point.q) ** 2 + 1j * point.p * (x - 0.5 * point.q))
    if representation == "momentum":
        return norm * np.exp(-0.5 * (x - point.p) ** 2 - 1j * point.q * (x - 0.5 * point.p))
    raise DomainError("representation", representation, "'position' or 'momentum'")
