# inphase/verify.py
"""
Named verification checks and the suite runner.

Each check is registered under '<module>/<check>' and measures one
deviation against a tolerance. 'fast' samples fewer parameters than
'full' (indices capped at 30, cutoffs at 128 except where an oracle needs
headroom); both levels run the same set of checks.
"""

import cmath
import io
import logging
import math
import time
from typing import Callable, Dict, Iterable, List, Literal, NamedTuple, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from inphase.asymptotics import displacement_approx, fock_position_approx, inphase_general_form, interference_area
from inphase.config_system import NumericsConfig, compile_check_selector
from inphase.exceptions import DomainError
from inphase.exact import (
    SqueezeParam,
    displacement_element,
    displacement_element_alternate,
    fock_position_wavefn,
    posmom_overlap,
    sho_propagator,
    squeeze_element,
    squeezed_coherent_element,
)
from inphase.harness import (
    TABLE_I_INDICES,
    TABLE_II_INDICES,
    TABLE_III_PAIRS,
    CurveSpec,
    emit_curve,
    rmse_table,
    table_grid,
    table_interval,
)
from inphase.oracle import (
    DisplacementOperator,
    PosMomIntegral,
    PropagatorIntegral,
    ResolutionIntegral,
    RotationOperator,
    SqueezeOperator,
    fixed_quad_overlap_2d,
    operator_matrix,
    oracle_cutoff,
    propagator_coherent_sandwich,
    quad_overlap_2d,
    rotation_sandwich,
    series_displacement_element,
)
from inphase.phasespace import (
    SQRT2,
    PhaseCurve,
    PhasePoint,
    bargmann_phase,
    coherent_overlap,
    coherent_wavefunction,
    displacement_compose,
    pancharatnam_phase,
    polyline_geometric_phase,
    triangle_area,
)
from inphase.specfun import hermite, laguerre, log_factorial, norm_factor_log
from inphase.states import (
    Displace,
    FockVector,
    Rotate,
    SuperpositionSpec,
    build_superposition,
    coherent_fock_coeffs,
    coherent_fock_matrix,
    evolve,
    fidelity,
    q_closed_form,
    q_function,
    q_function_grid,
    quadrature_stats,
    superposition_geometric_phase,
    term_phases,
    two_source_moments,
    two_source_q,
)

logger = logging.getLogger("inphase.verify")
if not logger.handlers and not logging.getLogger().handlers:
    logging.basicConfig(level=logging.INFO, format='%(levelname)s:%(name)s:%(message)s')

Level = Literal["fast", "full"]

# Reference RMSE values, in method order (inphase, plancherel_rotach | tricomi, wkb | dowling_wkb)
TABLE_I_REFERENCE = {
    20: (0.0089, 0.0053, 0.0048),
    30: (0.0065, 0.0041, 0.0038),
    40: (0.0052, 0.0035, 0.0033),
    50: (0.0044, 0.0030, 0.0029),
}
TABLE_II_REFERENCE = {
    20: (0.0048, 0.0009, 0.0036),
    30: (0.0032, 0.0006, 0.0025),
    40: (0.0023, 0.0005, 0.0018),
    50: (0.0018, 0.0004, 0.0013),
}
TABLE_III_REFERENCE = {
    (30, 20): (0.0036, 0.0143, 0.0015),
    (40, 30): (0.0024, 0.0099, 0.0011),
    (50, 40): (0.0017, 0.0076, 0.0008),
    (30, 10): (0.0068, 0.1198, 0.0024),
}
RMSE_TOLERANCE = 5e-4
LOOSE_RMSE_TOLERANCE = 5e-3


class Measurement(NamedTuple):
    deviation: float
    tolerance: float
    detail: str = ""


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    deviation: float
    tolerance: float
    seconds: float
    detail: str = ""


class VerifyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    level: Level
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]

    def format(self) -> str:
        width = max((len(result.name) for result in self.results), default=10)
        lines = []
        for result in self.results:
            status = "PASS" if result.passed else "FAIL"
            line = (f"{status}  {result.name:<{width}}  deviation {result.deviation:.3e}  "
                    f"tolerance {result.tolerance:.1e}  ({result.seconds:.2f} s)")
            if result.detail:
                line += f"  {result.detail}"
            lines.append(line)
        failed = len(self.failures)
        lines.append(f"{len(self.results)} checks, {len(self.results) - failed} passed, {failed} failed (level {self.level})")
        return "\n".join(lines)


CheckFunction = Callable[[Level, NumericsConfig], Measurement]
CHECKS: Dict[str, CheckFunction] = {}


def check(name: str) -> Callable[[CheckFunction], CheckFunction]:
    def register(function: CheckFunction) -> CheckFunction:
        CHECKS[name] = function
        return function
    return register


def _pick(level: Level, fast, full):
    return fast if level == "fast" else full


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1.0)


# --- specfun ---

@check("specfun/log_factorial")
def _check_log_factorial(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for n in range(1, 201):
        direct = math.fsum(math.log(k) for k in range(2, n + 1))
        worst = max(worst, abs(log_factorial(n) - direct) / max(direct, 1.0))
    return Measurement(worst, 1e-13)


@check("specfun/hermite_parity")
def _check_hermite_parity(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for n in range(_pick(level, 31, 101)):
        for x in np.linspace(-20.0, 20.0, _pick(level, 21, 81)):
            value = hermite(n, x)
            mirrored = hermite(n, -x)
            sign = -1.0 if n % 2 else 1.0
            worst = max(worst, _relative(mirrored, sign * value))
    return Measurement(worst, 1e-10)


@check("specfun/hermite_recurrence")
def _check_hermite_recurrence(level: Level, config: NumericsConfig) -> Measurement:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(_pick(level, 200, 2000)):
        n = int(rng.integers(1, _pick(level, 30, 100)))
        x = complex(rng.uniform(-5.0, 5.0), rng.uniform(-2.0, 2.0))
        upper, middle, lower = hermite(n + 1, x), hermite(n, x), hermite(n - 1, x)
        residual = upper - 2.0 * x * middle + 2.0 * n * lower
        scale = max(abs(upper), abs(2.0 * x * middle), abs(2.0 * n * lower), 1.0)
        worst = max(worst, abs(residual) / scale)
    return Measurement(worst, 1e-12)


@check("specfun/laguerre_at_zero")
def _check_laguerre_zero(level: Level, config: NumericsConfig) -> Measurement:
    limit = _pick(level, 30, 50)
    worst = 0.0
    for n in range(limit + 1):
        for alpha in range(0, limit + 1, _pick(level, 3, 1)):
            worst = max(worst, _relative(laguerre(n, alpha, 0.0), float(math.comb(n + alpha, n))))
    return Measurement(worst, 1e-12)


@check("specfun/worked_values")
def _check_specfun_values(level: Level, config: NumericsConfig) -> Measurement:
    pairs = [
        (hermite(4, 0.0), 12.0),
        (hermite(2, 1j), -6.0),
        (laguerre(1, 0, 2.0), -1.0),
        (laguerre(2, 0, 2.0), -1.0),
        (norm_factor_log(1), 0.5),
        (log_factorial(5), math.log(120.0)),
    ]
    return Measurement(max(abs(a - b) for a, b in pairs), 1e-12)


# --- phasespace ---

def _random_points(rng: np.random.Generator, count: int, scale: float) -> List[PhasePoint]:
    return [PhasePoint(q=float(rng.uniform(-scale, scale)), p=float(rng.uniform(-scale, scale))) for _ in range(count)]


@check("phasespace/composition_law")
def _check_composition(level: Level, config: NumericsConfig) -> Measurement:
    rng = np.random.default_rng(5)
    block = 20
    worst = 0.0
    for _ in range(_pick(level, 3, 10)):
        first, second = _random_points(rng, 2, 1.5)
        total, phi = displacement_compose(first, second)
        # |z|^2 = (q^2 + p^2)/2
        reach = 0.5 * max(point.radius_squared for point in (first, second, total))
        cutoff = oracle_cutoff(block, reach)
        product = operator_matrix(DisplacementOperator(q=second.q, p=second.p), cutoff).entries @ \
            operator_matrix(DisplacementOperator(q=first.q, p=first.p), cutoff).entries
        combined = cmath.exp(1j * phi) * operator_matrix(DisplacementOperator(q=total.q, p=total.p), cutoff).entries
        worst = max(worst, float(np.max(np.abs(product[:block, :block] - combined[:block, :block]))))
    return Measurement(worst, 1e-9, f"leading {block}x{block} block")


@check("phasespace/overlap_modulus")
def _check_overlap_modulus(level: Level, config: NumericsConfig) -> Measurement:
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(_pick(level, 200, 2000)):
        a, b = _random_points(rng, 2, 4.0)
        expected = math.exp(-0.25 * ((a.q - b.q) ** 2 + (a.p - b.p) ** 2))
        worst = max(worst, abs(abs(coherent_overlap(a, b)) - expected))
    return Measurement(worst, 1e-14)


@check("phasespace/pancharatnam_antisymmetry")
def _check_pancharatnam(level: Level, config: NumericsConfig) -> Measurement:
    rng = np.random.default_rng(15)
    worst = 0.0
    for _ in range(_pick(level, 200, 2000)):
        a, b = _random_points(rng, 2, 4.0)
        worst = max(worst, abs(pancharatnam_phase(a, b) + pancharatnam_phase(b, a)))
    return Measurement(worst, 1e-15)


@check("phasespace/bargmann_symmetry")
def _check_bargmann_symmetry(level: Level, config: NumericsConfig) -> Measurement:
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(_pick(level, 200, 2000)):
        a, b, c = _random_points(rng, 3, 3.0)
        phase = bargmann_phase(a, b, c)
        summed = pancharatnam_phase(a, b) + pancharatnam_phase(b, c) + pancharatnam_phase(c, a)
        worst = max(
            worst,
            abs(bargmann_phase(b, c, a) - phase),
            abs(bargmann_phase(c, a, b) - phase),
            abs(bargmann_phase(b, a, c) + phase),
            abs(summed - phase),
        )
    return Measurement(worst, 1e-12, "cyclic, transposed and Pancharatnam-sum forms")


@check("phasespace/chord_refinement")
def _check_chord_refinement(level: Level, config: NumericsConfig) -> Measurement:
    radius = math.sqrt(10.0)
    worst = 0.0
    for samples in _pick(level, (100, 200, 400, 800), (100, 200, 400, 800, 1600, 3200)):
        angles = 2.0 * math.pi * np.arange(samples) / samples
        circle = PhaseCurve.from_arrays(radius * np.cos(angles), radius * np.sin(angles), closed=True)
        error = polyline_geometric_phase(circle) + math.pi * radius ** 2
        leading = 2.0 * math.pi ** 3 * radius ** 2 / (3.0 * samples ** 2)
        worst = max(worst, abs(error / leading - 1.0))
    return Measurement(worst, 1e-3, "chord error against 2 pi^3 r^2 / (3 N^2)")


@check("phasespace/bargmann_area")
def _check_bargmann(level: Level, config: NumericsConfig) -> Measurement:
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(_pick(level, 50, 500)):
        a, b, c = (PhasePoint(q=rng.uniform(-1, 1), p=rng.uniform(-1, 1)) for _ in range(3))
        product = coherent_overlap(a, b) * coherent_overlap(b, c) * coherent_overlap(c, a)
        worst = max(worst, abs(cmath.phase(product) - bargmann_phase(a, b, c)))
    return Measurement(worst, 1e-12)


@check("phasespace/polygon_phase")
def _check_polygon(level: Level, config: NumericsConfig) -> Measurement:
    square = PhaseCurve.from_arrays([0, 1, 1, 0], [0, 0, 1, 1], closed=True)
    closed_error = abs(polyline_geometric_phase(square) + 1.0)
    # a straight segment has no geometric phase however it is subdivided
    line = PhaseCurve.from_arrays(np.linspace(-1.0, 2.0, 31), np.linspace(0.5, -1.5, 31))
    open_error = abs(polyline_geometric_phase(line))
    return Measurement(max(closed_error, open_error), 1e-12)


# --- states ---

@check("states/fock_circle_fidelity")
def _check_fock_circle(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for radius in (math.sqrt(10.0), 5.0):
        spec = SuperpositionSpec(kind="fock_circle", params={"n": 5, "r": radius}, samples=500)
        state = build_superposition(spec, cutoff=64, config=config)
        worst = max(worst, 1.0 - fidelity(state, FockVector.basis(5, 64)))
    return Measurement(worst, 1e-8, "n=5, N=500, r in {sqrt(10), 5}")


@check("states/circle_null")
def _check_circle_null(level: Level, config: NumericsConfig) -> Measurement:
    samples = 1024
    theta = 2.0 * math.pi * np.arange(samples) / samples
    rows = coherent_fock_matrix(2.0 * np.cos(theta), 2.0 * np.sin(theta), 64)
    worst = 0.0
    for m in range(1, 6):
        vector = (np.exp(1j * m * theta) * (2.0 * math.pi / samples)) @ rows
        worst = max(worst, float(np.linalg.norm(vector)))
    return Measurement(worst, 1e-10)


@check("states/bohr_sommerfeld")
def _check_bohr_sommerfeld(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for n in (1, 5, 20):
        phase = superposition_geometric_phase(SuperpositionSpec(kind="fock_circle", params={"n": n}), config)
        worst = max(worst, abs(phase + 2.0 * math.pi * n))
    return Measurement(worst, 1e-4)


@check("states/in_phase_steps")
def _check_in_phase_steps(level: Level, config: NumericsConfig) -> Measurement:
    samples = config.circle_samples
    step = 2.0 * math.pi / samples
    on_orbit = term_phases(SuperpositionSpec(kind="fock_circle", params={"n": 5}, samples=samples), config)
    off_orbit = term_phases(SuperpositionSpec(kind="fock_circle", params={"n": 5, "r": 5.0}, samples=samples), config)
    deviation = max(float(np.max(np.abs(on_orbit))), float(np.max(np.abs(off_orbit - (12.5 - 5.0) * step))))
    return Measurement(deviation, step * step, "per-step phase vs (r^2/2 - n) dtheta")


@check("states/q_radial_argmax")
def _check_q_argmax(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for n in (1, 5, 20):
        radii = np.arange(0.0, 2.0 * math.sqrt(2.0 * n) + 2.0, 0.01)
        values = [q_closed_form("fock", n, PhasePoint(q=float(r), p=0.0)) for r in radii]
        worst = max(worst, abs(radii[int(np.argmax(values))] - math.sqrt(2.0 * n)))
    circle = build_superposition(SuperpositionSpec(kind="fock_circle", params={"n": 5}), cutoff=64, config=config)
    radii = np.arange(0.0, 6.0 + 1e-9, 0.01)
    circle_q = q_function_grid(circle, radii, [0.0])[:, 0]
    worst = max(worst, abs(radii[int(np.argmax(circle_q))] - math.sqrt(10.0)))
    return Measurement(worst, 0.01 + 1e-12, "grid step 0.01")


@check("states/q_line_argmax")
def _check_q_line_argmax(level: Level, config: NumericsConfig) -> Measurement:
    step = 0.01
    axis = np.arange(-6.0, 6.0 + 0.5 * step, step)
    worst = 0.0
    for centre in (-1.3, 0.0, 2.45):
        across_q = [q_closed_form("position", centre, PhasePoint(q=float(x), p=0.7)) for x in axis]
        across_p = [q_closed_form("momentum", centre, PhasePoint(q=-0.4, p=float(x))) for x in axis]
        worst = max(
            worst,
            abs(axis[int(np.argmax(across_q))] - centre),
            abs(axis[int(np.argmax(across_p))] - centre),
        )
    return Measurement(worst, step + 1e-12, "position and momentum families, grid step 0.01")


def _cat_reference(q0: float, theta: float) -> Dict[str, float]:
    c = math.exp(-0.25 * q0 * q0)
    n2 = 2.0 * (1.0 + c ** 4 * math.cos(theta))
    return {
        "mean_q": 0.0,
        "var_q": 0.5 + 2.0 * q0 * q0 / n2,
        "mean_p": 2.0 * q0 * c ** 4 * math.sin(theta) / n2,
        "var_p": 0.5 - (2.0 * q0 * c * c / n2) ** 2 * (c ** 4 + math.cos(theta)),
        "cov_qp": 0.0,
    }


def _cat_state(q0: float, theta: float, config: NumericsConfig) -> FockVector:
    spec = SuperpositionSpec(kind="coherent_pair", params={"q1": -q0, "p1": 0.0, "q2": q0, "p2": 0.0, "theta": theta})
    return build_superposition(spec, cutoff=64, config=config)


@check("states/cat_variances")
def _check_cat_variances(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for q0 in (0.4, 1.0):
        for theta in (0.0, 0.5 * math.pi, math.pi):
            moments = quadrature_stats(_cat_state(q0, theta, config))
            reference = _cat_reference(q0, theta)
            worst = max(worst, max(abs(getattr(moments, key) - value) for key, value in reference.items()))
    return Measurement(worst, 1e-10)


@check("states/cat_squeezing")
def _check_cat_squeezing(level: Level, config: NumericsConfig) -> Measurement:
    mismatches = 0
    for q0 in (0.4, 1.0):
        c4 = math.exp(-q0 * q0)
        for theta in np.linspace(0.0, math.pi, _pick(level, 13, 61)):
            if abs(math.cos(theta) + c4) < 1e-9:
                continue
            moments = two_source_moments(PhasePoint(q=-q0, p=0.0), PhasePoint(q=q0, p=0.0), float(theta))
            if (moments.var_p < 0.5) != (math.cos(theta) > -c4):
                mismatches += 1
    return Measurement(float(mismatches), 0.0, "count of theta where squeezing disagrees with cos(theta) > -c^4")


@check("states/two_source_q")
def _check_two_source_q(level: Level, config: NumericsConfig) -> Measurement:
    z1, z2, theta = PhasePoint(q=-1.0, p=0.5), PhasePoint(q=0.8, p=-0.3), 0.7
    spec = SuperpositionSpec(kind="coherent_pair", params={"q1": z1.q, "p1": z1.p, "q2": z2.q, "p2": z2.p, "theta": theta})
    state = build_superposition(spec, cutoff=64, config=config)
    worst = 0.0
    for q in np.linspace(-3.0, 3.0, _pick(level, 7, 25)):
        for p in np.linspace(-3.0, 3.0, _pick(level, 7, 25)):
            point = PhasePoint(q=float(q), p=float(p))
            direct = q_function(state, point, convention="per_d2z_over_pi")
            worst = max(worst, abs(direct - two_source_q(z1, z2, theta, point).q_value))
    return Measurement(worst, 1e-12)


@check("states/fringe_spacing")
def _check_fringes(level: Level, config: NumericsConfig) -> Measurement:
    q0, step = 0.4, 0.01
    sink = io.BytesIO()
    spec = CurveSpec(kind="two_source_fringes", params={"q0": q0, "theta": 0.0, "pmin": -20.0, "pmax": 20.0}, points=4001)
    emit_curve(spec, sink, config)
    table = np.genfromtxt(io.StringIO(sink.getvalue().decode("utf-8")), delimiter=",", names=True)
    fringe = table["fringe"]
    peaks = [i for i in range(1, fringe.size - 1) if fringe[i] >= fringe[i - 1] and fringe[i] > fringe[i + 1]]
    if len(peaks) < 2:
        return Measurement(math.inf, step, "fewer than two fringe maxima")
    spacing = np.diff(table["p"][peaks])
    deviation = float(np.max(np.abs(spacing - 2.0 * math.pi / q0)))
    return Measurement(deviation, step + 1e-12, f"{len(peaks)} maxima")


@check("states/constructive_segment")
def _check_segment(level: Level, config: NumericsConfig) -> Measurement:
    origin = PhasePoint(q=0.0, p=0.0)
    z1, z2 = PhasePoint(q=-1.0, p=0.5), PhasePoint(q=1.5, p=1.0)
    theta = -triangle_area(origin, z1, z2)
    worst = 0.0
    for s in np.linspace(0.0, 1.0, 11):
        point = PhasePoint(q=z1.q + s * (z2.q - z1.q), p=z1.p + s * (z2.p - z1.p))
        worst = max(worst, abs(two_source_q(z1, z2, theta, point).delta))
    return Measurement(worst, 1e-12)


@check("states/evolve_unitarity")
def _check_evolve(level: Level, config: NumericsConfig) -> Measurement:
    cutoff = 64
    point = PhasePoint(q=1.0, p=0.5)
    coherent = coherent_fock_coeffs(point, cutoff)
    t = 0.9
    rotated = evolve(coherent, Rotate(t=t))
    target = coherent_fock_coeffs(PhasePoint.from_z(point.z * cmath.exp(1j * t)), cutoff)
    rotation_error = 1.0 - fidelity(rotated, target)
    displaced = evolve(FockVector.basis(0, cutoff), Displace(q=point.q, p=point.p))
    displacement_error = float(np.max(np.abs(displaced.coeffs - coherent.coeffs)))
    norm_error = abs(rotated.norm() - coherent.norm())
    return Measurement(max(rotation_error, displacement_error, norm_error), 1e-10)


@check("states/gaussian_line_variance")
def _check_gaussian_line(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for sigma in (0.5, 1.0, 2.0):
        state = build_superposition(SuperpositionSpec(kind="gaussian_line", params={"sigma": sigma, "p0": 0.0}), config=config)
        expected = 1.0 / (2.0 * (1.0 + 1.0 / sigma ** 2))
        worst = max(worst, abs(quadrature_stats(state).var_p - expected))
    return Measurement(worst, 1e-8)


# --- exact ---

@check("exact/posmom_quadrature")
def _check_posmom(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    axis = np.linspace(-2.0, 2.0, 5)
    for q in axis:
        for p in axis:
            numeric = quad_overlap_2d(PosMomIntegral(q=float(q), p=float(p)), config)
            worst = max(worst, abs(numeric - posmom_overlap(float(q), float(p))))
    return Measurement(worst, 1e-8)


PROPAGATOR_TIMES = (0.3, 0.5 * math.pi, 2.0)


@check("exact/propagator_quadrature")
def _check_propagator_quadrature(level: Level, config: NumericsConfig) -> Measurement:
    pairs = _pick(level, [(0.5, -1.0), (3.0, 2.0)], [(0.5, -1.0), (3.0, 2.0), (-3.0, 1.5), (0.0, 0.0), (2.5, -3.0)])
    worst = 0.0
    for q2, q1 in pairs:
        for t in PROPAGATOR_TIMES:
            numeric = quad_overlap_2d(PropagatorIntegral(q1=q1, q2=q2, t=t), config)
            worst = max(worst, abs(numeric - sho_propagator(q2, q1, t)))
    return Measurement(worst, 1e-6)


@check("exact/propagator_rotation")
def _check_propagator_rotation(level: Level, config: NumericsConfig) -> Measurement:
    pairs = _pick(level, [((1.0, -0.5), (0.5, 1.0))], [((1.0, -0.5), (0.5, 1.0)), ((-2.0, 0.3), (1.5, -1.0)), ((0.0, 0.0), (2.0, 2.0))])
    worst = 0.0
    for (q_out, p_out), (q_in, p_in) in pairs:
        z_out, z_in = PhasePoint(q=q_out, p=p_out), PhasePoint(q=q_in, p=p_in)
        for t in PROPAGATOR_TIMES:
            kernel = propagator_coherent_sandwich(z_out, z_in, t, config)
            worst = max(worst, abs(kernel - rotation_sandwich(z_out, z_in, t, cutoff=64)))
    return Measurement(worst, 1e-6)


@check("exact/displacement_oracles")
def _check_displacement(level: Level, config: NumericsConfig) -> Measurement:
    indices = list(range(0, 31, _pick(level, 3, 1)))
    worst = 0.0
    for d in (0.5, 2.0, 5.0, 8.0):
        matrix = operator_matrix(DisplacementOperator(q=d, p=0.0), oracle_cutoff(30, 0.5 * d * d)).entries
        for m in indices:
            for n in indices:
                closed = displacement_element(m, n, d, 0.0)
                worst = max(worst, abs(closed - series_displacement_element(m, n, d, 0.0)), abs(closed - matrix[m, n]))
    return Measurement(worst, 1e-9, f"m, n in 0..30 step {indices[1] - indices[0]}, d in 0.5, 2, 5, 8")


@check("exact/squeeze_oracle")
def _check_squeeze(level: Level, config: NumericsConfig) -> Measurement:
    indices = list(range(0, 31, _pick(level, 3, 1)))
    worst = 0.0
    for mu in (0.1, 0.5, 1.0, 2.0):
        sq = SqueezeParam(mu=mu)
        matrix = operator_matrix(SqueezeOperator(mu=mu), oracle_cutoff(30, 0.0, mu)).entries
        if squeeze_element(0, sq, 0) <= 0.0:
            return Measurement(math.inf, 1e-9, f"<0|S({mu})|0> is not positive")
        for n in indices:
            for m in indices:
                value = squeeze_element(n, sq, m)
                if (n - m) % 2 and value != 0.0:
                    return Measurement(math.inf, 1e-9, f"<{n}|S({mu})|{m}> should vanish")
                worst = max(worst, abs(value - matrix[n, m]))
    return Measurement(worst, 1e-9)


@check("exact/squeezed_coherent_oracle")
def _check_squeezed_coherent(level: Level, config: NumericsConfig) -> Measurement:
    points = _pick(level, [(0.5, -0.3), (1.2, 2.0)], [(0.5, -0.3), (1.2, 2.0), (-2.0, 1.0), (0.0, -2.8)])
    worst = 0.0
    for mu in _pick(level, (0.3, 1.0), (0.1, 0.3, 0.6, 1.0)):
        for q, p in points:
            radius_squared = 0.5 * (q * q + p * p)
            cutoff = oracle_cutoff(20, radius_squared, mu)
            squeezed = operator_matrix(SqueezeOperator(mu=mu), cutoff).entries[:, 0]
            column = operator_matrix(DisplacementOperator(q=q, p=p), cutoff).entries @ squeezed
            for n in range(21):
                worst = max(worst, abs(squeezed_coherent_element(n, SqueezeParam(mu=mu), q, p) - column[n]))
    return Measurement(worst, 1e-8)


@check("exact/fock_wavefn_norm")
def _check_fock_norm(level: Level, config: NumericsConfig) -> Measurement:
    grid = np.linspace(-14.0, 14.0, 4001)
    step = grid[1] - grid[0]
    worst = 0.0
    for n in _pick(level, (0, 5, 20, 30), (0, 1, 5, 20, 30, 50, 80)):
        values = np.array([fock_position_wavefn(n, float(x)) for x in grid])
        worst = max(worst, abs(float(np.sum(values * values)) * step - 1.0))
    return Measurement(worst, 1e-10)


def _label(modulus: float, angle: float) -> PhasePoint:
    """(q, p) with |z| = modulus."""
    return PhasePoint(q=SQRT2 * modulus * math.cos(angle), p=SQRT2 * modulus * math.sin(angle))


@check("exact/displacement_unitarity")
def _check_displacement_rows(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for modulus, angle in ((0.5, 0.3), (1.7, 2.0), (3.0, -1.1)):
        point = _label(modulus, angle)
        n_max = oracle_cutoff(20, modulus * modulus)
        for m in range(0, 21, _pick(level, 5, 1)):
            total = math.fsum(abs(displacement_element(m, n, point.q, point.p)) ** 2 for n in range(n_max + 1))
            worst = max(worst, abs(total - 1.0))
    return Measurement(worst, 1e-10, "rows m <= 20, |z| <= 3")


@check("exact/displacement_hermiticity")
def _check_displacement_hermiticity(level: Level, config: NumericsConfig) -> Measurement:
    indices = range(0, 31, _pick(level, 5, 1))
    worst = 0.0
    for q, p in ((1.2, -0.7), (-2.5, 3.0), (4.0, 0.0)):
        for m in indices:
            for n in indices:
                forward = displacement_element(m, n, q, p)
                backward = displacement_element(n, m, -q, -p).conjugate()
                worst = max(worst, abs(forward - backward))
    return Measurement(worst, 1e-12)


@check("exact/laguerre_forms")
def _check_laguerre_forms(level: Level, config: NumericsConfig) -> Measurement:
    limit = _pick(level, 20, 30)
    indices = range(0, limit + 1, _pick(level, 2, 1))
    worst = 0.0
    # |z|^2 <= 1 keeps the negative-superscript series clear of cancellation
    for q, p in ((0.3, -0.2), (0.6, 0.8), (-1.0, 0.98)):
        for m in indices:
            for n in indices:
                worst = max(worst, _relative(displacement_element_alternate(m, n, q, p), displacement_element(m, n, q, p)))
    return Measurement(worst, 1e-11, f"m, n <= {limit}")


@check("exact/propagator_composition")
def _check_propagator_composition(level: Level, config: NumericsConfig) -> Measurement:
    grid = np.linspace(-12.0, 12.0, 1201)
    step = grid[1] - grid[0]
    packet = coherent_wavefunction(PhasePoint(q=1.0, p=0.5), grid)
    window = np.abs(grid) <= 4.0
    rows, columns = grid[:, None], grid[None, :]
    worst = 0.0
    for t1, t2 in _pick(level, [(0.5, 0.8), (2.0, 1.6)], [(0.5, 0.8), (1.2, 1.4), (2.0, 1.6), (2.5, 1.3)]):
        halfway = sho_propagator(rows, columns, t2) @ packet * step
        composed = sho_propagator(rows, columns, t1) @ halfway * step
        direct = sho_propagator(rows, columns, t1 + t2) @ packet * step
        worst = max(worst, float(np.max(np.abs(composed[window] - direct[window]))))
    return Measurement(worst, 1e-8, "kernels applied to a coherent packet, |q| <= 4")


@check("exact/squeeze_normalisation")
def _check_squeeze_normalisation(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for mu in _pick(level, (0.5, 2.0), (0.1, 0.5, 1.0, 1.5, 2.0)):
        sq = SqueezeParam(mu=mu)
        total = math.fsum(squeeze_element(n, sq, 0) ** 2 for n in range(0, 129, 2))
        worst = max(worst, abs(total - 1.0))
    return Measurement(worst, 1e-9, "photon numbers up to 128")


# --- asymptotics ---

def _table_deviation(rows, reference, key, loose=None) -> float:
    worst = 0.0
    by_entry: Dict[object, List[float]] = {}
    for row in rows:
        by_entry.setdefault(key(row), []).append(row.rmse)
    for entry, printed in reference.items():
        for index, (measured, expected) in enumerate(zip(by_entry[entry], printed)):
            tolerance = loose.get((entry, index), RMSE_TOLERANCE) if loose else RMSE_TOLERANCE
            # normalise to the common tolerance so one number summarises the table
            worst = max(worst, abs(measured - expected) * RMSE_TOLERANCE / tolerance)
    return worst


@check("asymptotics/table_I")
def _check_table_i(level: Level, config: NumericsConfig) -> Measurement:
    rows = rmse_table("I", config)
    return Measurement(_table_deviation(rows, TABLE_I_REFERENCE, lambda row: row.m), RMSE_TOLERANCE)


@check("asymptotics/table_II")
def _check_table_ii(level: Level, config: NumericsConfig) -> Measurement:
    deviations = {}
    for table_range in ("caption", "text"):
        rows = rmse_table("II", config.with_overrides({"table_range": table_range}))
        deviations[table_range] = _table_deviation(rows, TABLE_II_REFERENCE, lambda row: row.m)
    chosen = min(deviations, key=deviations.get)
    return Measurement(deviations[chosen], RMSE_TOLERANCE, f"matched with the {chosen} range")


@check("asymptotics/table_III")
def _check_table_iii(level: Level, config: NumericsConfig) -> Measurement:
    rows = rmse_table("III", config)
    loose = {((30, 10), 1): LOOSE_RMSE_TOLERANCE}
    deviation = _table_deviation(rows, TABLE_III_REFERENCE, lambda row: (row.m, row.n), loose)
    return Measurement(deviation, RMSE_TOLERANCE, "tricomi at (30, 10) scaled to its 5e-3 tolerance")


@check("asymptotics/windows")
def _check_windows(level: Level, config: NumericsConfig) -> Measurement:
    outside = [
        fock_position_approx("inphase", 20, 7.0),
        fock_position_approx("wkb", 20, -6.5),
        displacement_approx("inphase", 30, 20, 0.2),
        displacement_approx("inphase_equal", 20, 20, 13.0),
        displacement_approx("tricomi", 20, 20, 13.0),
        displacement_approx("dowling_wkb", 30, 10, 0.5),
    ]
    inside = [fock_position_approx("plancherel_rotach", 20, 1.0), displacement_approx("inphase", 30, 20, 6.0)]
    wrong = sum(1 for value in outside if value.valid or not math.isnan(value.value))
    wrong += sum(1 for value in inside if not value.valid)
    return Measurement(float(wrong), 0.0, "window flags")


def _sign_changes(grid: np.ndarray, values: Sequence[float]) -> np.ndarray:
    """Linearly interpolated zero crossings of values sampled on grid."""
    values = np.asarray(values, dtype=float)
    index = np.nonzero(values[:-1] * values[1:] < 0.0)[0]
    slope = (values[index + 1] - values[index]) / (grid[index + 1] - grid[index])
    return grid[index] - values[index] / slope


@check("asymptotics/hermite_sign_changes")
def _check_hermite_zeros(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    matched = []
    for n in _pick(level, (20, 30), (20, 30, 50, 80)):
        # an even point count keeps q0 = 0 off the grid
        grid = np.linspace(-(math.sqrt(2.0 * n) - 0.5), math.sqrt(2.0 * n) - 0.5, 6000)
        exact = _sign_changes(grid, [fock_position_wavefn(n, float(x)) for x in grid])
        gaps = np.diff(exact)
        inner = [i for i, zero in enumerate(exact) if abs(zero) <= math.sqrt(2.0 * n) - 1.0]
        for method in ("inphase", "plancherel_rotach"):
            approx = _sign_changes(grid, [fock_position_approx(method, n, float(x)).value for x in grid])
            if approx.size == 0:
                return Measurement(math.inf, 1.0, f"{method} has no sign change for n={n}")
            for i in inner:
                spacing = min(gaps[j] for j in (i - 1, i) if 0 <= j < gaps.size)
                nearest = float(np.min(np.abs(approx - exact[i])))
                worst = max(worst, nearest / (0.5 * spacing))
        matched.append(f"n={n}: {len(inner)} zeros")
    return Measurement(worst, 1.0, "offset over half the local zero spacing; " + ", ".join(matched))


@check("asymptotics/envelope_ratio")
def _check_envelope_ratio(level: Level, config: NumericsConfig) -> Measurement:
    deviations = []
    for n in (20, 40, 80, 160):
        ratio = fock_position_approx("inphase", n, 0.0).value / fock_position_wavefn(n, 0.0)
        deviations.append(abs(ratio - 1.0))
    increases = sum(1 for earlier, later in zip(deviations, deviations[1:]) if later >= earlier)
    return Measurement(float(increases), 0.0, "|ratio - 1| at q0 = 0: " + ", ".join(f"{d:.1e}" for d in deviations))


@check("asymptotics/inphase_equal_specialises")
def _check_inphase_equal(level: Level, config: NumericsConfig) -> Measurement:
    worst = 0.0
    for m in range(1, 31, _pick(level, 4, 1)):
        upper = 2.0 * math.sqrt(2.0 * m)
        for d in np.linspace(0.3, upper - 0.3, _pick(level, 9, 33)):
            equal = displacement_approx("inphase_equal", m, m, float(d))
            candidates = (displacement_approx("inphase", m, m, float(d)), inphase_general_form(m, m, float(d)))
            for candidate in candidates:
                if not (equal.valid and candidate.valid):
                    return Measurement(math.inf, 1e-12, f"invalid at m={m}, d={d}: {candidate.note or equal.note}")
                worst = max(worst, _relative(candidate.value, equal.value))
    return Measurement(worst, 1e-12, "general saddle form at m = n")


@check("asymptotics/interference_area_exchange")
def _check_area_exchange(level: Level, config: NumericsConfig) -> Measurement:
    rng = np.random.default_rng(19)
    worst = 0.0
    for _ in range(_pick(level, 200, 2000)):
        m, n = (int(k) for k in rng.integers(1, 31, size=2))
        root_m, root_n = math.sqrt(2.0 * m), math.sqrt(2.0 * n)
        d = float(rng.uniform(abs(root_m - root_n), root_m + root_n))
        if not abs(root_m - root_n) < d < root_m + root_n:
            continue
        worst = max(worst, abs(interference_area(m, n, d) - interference_area(n, m, d)))
    return Measurement(worst, 1e-10, "area(m, n, d) = area(n, m, d)")


# --- oracle ---

@check("oracle/resolution_identity")
def _check_resolution(level: Level, config: NumericsConfig) -> Measurement:
    bra = FockVector.basis(2, 8)
    ket = coherent_fock_coeffs(PhasePoint(q=0.5, p=0.3), 30)
    numeric = quad_overlap_2d(ResolutionIntegral(bra=bra, ket=ket), config)
    return Measurement(abs(numeric - ket.coeffs[2]), 1e-8)


@check("oracle/unitarity")
def _check_unitarity(level: Level, config: NumericsConfig) -> Measurement:
    defects = [
        operator_matrix(DisplacementOperator(q=2.0, p=1.0), 64).unitarity_defect(),
        operator_matrix(SqueezeOperator(mu=1.0), 64).unitarity_defect(),
    ]
    return Measurement(max(defects), 1e-9)


@check("oracle/quadrature_order")
def _check_quadrature_order(level: Level, config: NumericsConfig) -> Measurement:
    floor = 1e-11
    worst = 0.0
    doublings = 0
    for q, p in _pick(level, [(0.0, 0.0), (1.5, -1.0)], [(0.0, 0.0), (1.5, -1.0), (-2.0, 2.0), (2.0, 0.5)]):
        exact = posmom_overlap(q, p)
        errors = [abs(fixed_quad_overlap_2d(PosMomIntegral(q=q, p=p), nodes) - exact) for nodes in (16, 32, 64, 128)]
        for coarse, fine in zip(errors, errors[1:]):
            if coarse <= floor:
                continue
            doublings += 1
            worst = max(worst, fine / coarse)
    if doublings == 0:
        return Measurement(math.inf, 0.1, "every rule already at the floor")
    return Measurement(worst, 0.1, f"error ratio per node doubling over {doublings} doublings")


@check("oracle/rotation_composition")
def _check_rotation_composition(level: Level, config: NumericsConfig) -> Measurement:
    cutoff = 128
    worst = 0.0
    for t1, t2 in _pick(level, [(0.4, 1.1), (2.5, -4.0)], [(0.4, 1.1), (2.5, -4.0), (3.0, 3.5), (-1.7, 0.2)]):
        product = operator_matrix(RotationOperator(t=t1), cutoff).entries @ operator_matrix(RotationOperator(t=t2), cutoff).entries
        combined = operator_matrix(RotationOperator(t=t1 + t2), cutoff).entries
        worst = max(worst, float(np.max(np.abs(product - combined))))
    return Measurement(worst, 1e-12)


# --- harness ---

@check("harness/determinism")
def _check_determinism(level: Level, config: NumericsConfig) -> Measurement:
    spec = CurveSpec(kind="fock_wavefn", params={"n": 20}, points=_pick(level, 64, 512))
    outputs = []
    for workers in (1, 4):
        sink = io.BytesIO()
        emit_curve(spec, sink, config.with_overrides({"workers": workers}))
        outputs.append(sink.getvalue())
    lines = outputs[0].count(b"\n")
    mismatch = 0.0 if outputs[0] == outputs[1] else 1.0
    if lines != spec.points + 1:
        mismatch += 1.0
    return Measurement(mismatch, 0.0, f"{lines} lines")


@check("harness/table_grid_endpoints")
def _check_table_endpoints(level: Level, config: NumericsConfig) -> Measurement:
    expected = {}
    for m in TABLE_I_INDICES:
        expected[("I", m, None, "caption")] = (-math.sqrt(2.0 * m) + 0.3, math.sqrt(2.0 * m) - 0.3)
    for m in TABLE_II_INDICES:
        expected[("II", m, m, "caption")] = (0.3, 2.0 * math.sqrt(2.0 * m) - 0.3)
        expected[("II", m, m, "text")] = (0.3, 2.0 * math.sqrt(2.0 * m) + 0.3)
    for m, n in TABLE_III_PAIRS:
        expected[("III", m, n, "caption")] = (math.sqrt(2.0 * m) - math.sqrt(2.0 * n) + 5.0, math.sqrt(2.0 * m) + math.sqrt(2.0 * n) - 0.3)
    mismatches = 0
    for (table, m, n, table_range), (lo, hi) in expected.items():
        interval = table_interval(table, m, n, table_range)
        grid = table_grid(*interval, 512)
        if interval != (lo, hi) or grid[0] != lo or grid[-1] != hi or grid.size != 512:
            logger.debug(f"Table {table} ({m}, {n}) {table_range}: {interval} against {(lo, hi)}")
            mismatches += 1
    return Measurement(float(mismatches), 0.0, f"{len(expected)} intervals, 512 points each")


# --- Runner ---

def check_names() -> List[str]:
    return sorted(CHECKS)


def select_checks(patterns: Optional[Sequence[str]] = None) -> List[str]:
    selector = compile_check_selector(patterns or [])
    return [name for name in check_names() if selector.match_file(name)]


def _run_one(name: str, level: Level, config: NumericsConfig) -> CheckResult:
    started = time.perf_counter()
    try:
        measurement = CHECKS[name](level, config)
    except Exception as e:
        logger.debug(f"Check {name} raised", exc_info=True)
        measurement = Measurement(math.inf, math.nan, f"{type(e).__name__}: {e}")
    elapsed = time.perf_counter() - started
    passed = bool(math.isfinite(measurement.deviation) and measurement.deviation <= measurement.tolerance)
    if not passed:
        logger.warning(f"Check {name} failed: deviation {measurement.deviation:.3e} > {measurement.tolerance:.1e} {measurement.detail}")
    return CheckResult(
        name=name, passed=passed, deviation=measurement.deviation,
        tolerance=measurement.tolerance, seconds=elapsed, detail=measurement.detail,
    )


def verify_suite(level: Level = "fast", patterns: Optional[Iterable[str]] = None,
                 config: Optional[NumericsConfig] = None) -> VerifyReport:
    """Runs the selected checks in name order and reports each measured deviation."""
    if level not in ("fast", "full"):
        raise DomainError("level", level, "'fast' or 'full'")
    config = config or NumericsConfig()
    names = select_checks(list(patterns or []))
    logger.info(f"Running {len(names)} checks at level {level}")
    results = [_run_one(name, level, config) for name in names]
    return VerifyReport(level=level, results=results)
