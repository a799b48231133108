import cmath
import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.stats import poisson

from inphase.config_system import NumericsConfig
from inphase.exact import SqueezeParam, fock_position_wavefn, squeeze_element
from inphase.exceptions import DomainError, TruncationError
from inphase.phasespace import PhasePoint, triangle_area
from inphase.states import (
    Displace,
    FockVector,
    Rotate,
    SuperpositionSpec,
    build_superposition,
    coherent_fock_coeffs,
    coherent_tail_mass,
    evolve,
    fidelity,
    inner,
    q_closed_form,
    q_function,
    q_function_grid,
    quadrature_stats,
    superposition_geometric_phase,
    term_phases,
    two_source_moments,
    two_source_q,
)

# Eigenstate lines at the default extent reach |z|^2 ~ 72
LINE_CUTOFF = 160


def _cat(q0: float, theta: float, cutoff: int = 64) -> FockVector:
    spec = SuperpositionSpec(kind="coherent_pair", params={"q1": -q0, "p1": 0.0, "q2": q0, "p2": 0.0, "theta": theta})
    return build_superposition(spec, cutoff=cutoff)


# --- FockVector ---

def test_basis_vector_and_tail():
    state = FockVector.basis(3, 10)
    assert state.cutoff == 10
    assert state.norm() == 1.0
    assert state.tail_mass() == 0.0
    assert FockVector.basis(10, 10).tail_mass() == 1.0
    with pytest.raises(DomainError):
        FockVector.basis(11, 10)


def test_fock_vector_is_read_only():
    state = FockVector(coeffs=[1, 2j])
    with pytest.raises(ValueError):
        state.coeffs[0] = 5.0


def test_fock_vector_validation():
    with pytest.raises(ValidationError):
        FockVector(coeffs=[])
    with pytest.raises(ValidationError):
        FockVector(coeffs=[[1, 0], [0, 1]])
    with pytest.raises(ValidationError):
        FockVector(coeffs=[1.0, math.inf])


def test_normalized_and_zero_vector():
    state = FockVector(coeffs=[3.0, 4.0j])
    assert state.normalized().norm() == pytest.approx(1.0)
    with pytest.raises(DomainError):
        FockVector(coeffs=[0.0, 0.0]).normalized()


def test_inner_pads_different_cutoffs():
    assert inner(FockVector.basis(2, 5), FockVector.basis(2, 10)) == 1.0
    assert fidelity(FockVector.basis(2, 5), FockVector.basis(3, 10)) == 0.0


# --- Coherent states ---

def test_coherent_coefficients_are_poisson():
    point = PhasePoint(q=2.0, p=-1.0)
    state = coherent_fock_coeffs(point, 80)
    mean = 0.5 * point.radius_squared
    probabilities = np.abs(state.coeffs) ** 2
    assert probabilities == pytest.approx(poisson.pmf(np.arange(81), mean), rel=1e-10, abs=1e-300)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_coherent_phase_follows_argument():
    point = PhasePoint(q=0.0, p=1.0)  # z = i / sqrt(2)
    state = coherent_fock_coeffs(point, 6)
    for n in range(1, 7):
        ratio = state.coeffs[n] / state.coeffs[0]
        assert ratio / abs(ratio) == pytest.approx(1j ** n, abs=1e-12)


def test_vacuum_label_gives_vacuum():
    state = coherent_fock_coeffs(PhasePoint(q=0.0, p=0.0), 5)
    assert state.coeffs.tolist() == [1, 0, 0, 0, 0, 0]


def test_coherent_tail_mass_matches_missing_weight():
    mean = 4.0
    state = coherent_fock_coeffs(PhasePoint(q=math.sqrt(2 * mean), p=0.0), 10)
    missing = 1.0 - float(np.sum(np.abs(state.coeffs) ** 2))
    assert float(coherent_tail_mass(mean, 10)) == pytest.approx(missing, rel=1e-9)
    assert float(coherent_tail_mass(0.0, 0)) == 0.0


# --- Circle superpositions ---

@pytest.mark.parametrize("radius", [math.sqrt(10.0), 5.0])
def test_fock_circle_reproduces_number_state(radius):
    spec = SuperpositionSpec(kind="fock_circle", params={"n": 5, "r": radius}, samples=500)
    state = build_superposition(spec, cutoff=64)
    assert state.coeffs[5] == pytest.approx(1.0, abs=1e-10)
    off_diagonal = np.delete(state.coeffs, 5)
    assert float(np.max(np.abs(off_diagonal))) < 1e-10
    assert fidelity(state, FockVector.basis(5, 64)) == pytest.approx(1.0, abs=1e-12)


def test_displaced_fock_circle_matches_displaced_number_state():
    spec = SuperpositionSpec(kind="displaced_fock_circle", params={"n": 3, "q": 1.0, "p": 0.5}, samples=500)
    state = build_superposition(spec, cutoff=64)
    reference = evolve(FockVector.basis(3, 64), Displace(q=1.0, p=0.5))
    assert np.max(np.abs(state.coeffs[:30] - reference.coeffs[:30])) < 1e-9


def test_fock_circle_terms_are_in_phase_only_on_the_orbit():
    config = NumericsConfig()
    step = 2 * math.pi / config.circle_samples
    on_orbit = term_phases(SuperpositionSpec(kind="fock_circle", params={"n": 5}), config)
    assert on_orbit.size == config.circle_samples
    assert float(np.max(np.abs(on_orbit))) < step ** 2
    off_orbit = term_phases(SuperpositionSpec(kind="fock_circle", params={"n": 5, "r": 5.0}), config)
    assert off_orbit == pytest.approx(np.full(off_orbit.size, 7.5 * step), abs=step ** 2)


@pytest.mark.parametrize("kind, params", [
    ("fock_circle", {"n": 4}),
    ("displaced_fock_circle", {"n": 4, "q": 2.0, "p": -1.0}),
])
def test_circle_geometric_phase_is_bohr_sommerfeld(kind, params):
    phase = superposition_geometric_phase(SuperpositionSpec(kind=kind, params=params))
    assert phase == pytest.approx(-2 * math.pi * 4, abs=1e-8)


def test_geometric_phase_only_for_circles():
    with pytest.raises(DomainError):
        superposition_geometric_phase(SuperpositionSpec(kind="momentum_line", params={"p0": 0.0}))


# --- Line superpositions ---

def test_position_line_gives_position_eigenfunction():
    state = build_superposition(SuperpositionSpec(kind="position_line", params={"q0": 0.7}), cutoff=LINE_CUTOFF)
    for n in range(9):
        assert state.coeffs[n] == pytest.approx(fock_position_wavefn(n, 0.7), abs=1e-8)


def test_momentum_line_gives_momentum_eigenfunction():
    state = build_superposition(SuperpositionSpec(kind="momentum_line", params={"p0": -0.4}), cutoff=LINE_CUTOFF)
    for n in range(9):
        assert state.coeffs[n] == pytest.approx(1j ** n * fock_position_wavefn(n, -0.4), abs=1e-8)


def test_rotated_position_line_picks_up_energy_phases():
    t = 0.6
    state = build_superposition(SuperpositionSpec(kind="rotated_position_line", params={"q": 0.7, "t": t}), cutoff=LINE_CUTOFF)
    for n in range(9):
        expected = cmath.exp(-1j * (n + 0.5) * t) * fock_position_wavefn(n, 0.7)
        assert state.coeffs[n] == pytest.approx(expected, abs=1e-8)


def test_momentum_line_terms_in_phase_on_the_line_only():
    config = NumericsConfig(line_samples=401)
    on_line = term_phases(SuperpositionSpec(kind="momentum_line", params={"p0": 1.0}), config)
    assert float(np.max(np.abs(on_line))) < 1e-12
    off_line = term_phases(SuperpositionSpec(kind="momentum_line", params={"p0": 1.0, "line": 0.5}), config)
    step = 2 * config.line_extent / (config.line_samples - 1)
    assert off_line == pytest.approx(np.full(off_line.size, 0.5 * step), abs=1e-12)


@pytest.mark.parametrize("mu", [1.0, -1.0])
def test_squeezed_line_gives_squeezed_vacuum(mu):
    state = build_superposition(SuperpositionSpec(kind="squeezed_line", params={"mu": mu}))
    sq = SqueezeParam(mu=mu)
    expected = np.array([squeeze_element(n, sq, 0) for n in range(30)])
    assert np.max(np.abs(state.coeffs[:30] - expected)) < 1e-9


def test_eigenstate_line_needs_headroom():
    with pytest.raises(TruncationError) as excinfo:
        build_superposition(SuperpositionSpec(kind="momentum_line", params={"p0": 0.0}), cutoff=40)
    assert "Increase the cutoff" in str(excinfo.value)


@pytest.mark.parametrize("spec", [
    SuperpositionSpec(kind="spiral", params={}),
    SuperpositionSpec(kind="fock_circle", params={}),
    SuperpositionSpec(kind="fock_circle", params={"n": 2.5}),
    SuperpositionSpec(kind="fock_circle", params={"n": 2, "q0": 1.0}),
    SuperpositionSpec(kind="fock_circle", params={"n": 2}, samples=4),
    SuperpositionSpec(kind="gaussian_line", params={"sigma": 0.0, "p0": 0.0}),
    SuperpositionSpec(kind="squeezed_line", params={"mu": 0.0}),
])
def test_invalid_superpositions(spec):
    with pytest.raises(DomainError):
        build_superposition(spec, cutoff=32)


# --- Q function ---

def test_q_function_conventions_for_coherent_state():
    point = PhasePoint(q=1.0, p=-0.5)
    state = coherent_fock_coeffs(point, 40)
    assert q_function(state, point) == pytest.approx(1 / (2 * math.pi), rel=1e-12)
    assert q_function(state, point, convention="per_d2z_over_pi") == pytest.approx(1 / math.pi, rel=1e-12)
    with pytest.raises(DomainError):
        q_function(state, point, convention="per_dxdy")


def test_q_grid_of_number_state_matches_closed_form():
    state = FockVector.basis(4, 4)
    axis = np.linspace(-4, 4, 9)
    grid = q_function_grid(state, axis, axis)
    for i, q in enumerate(axis):
        for j, p in enumerate(axis):
            closed = q_closed_form("fock", 4, PhasePoint(q=float(q), p=float(p)))
            assert grid[i, j] == pytest.approx(closed, rel=1e-10, abs=1e-300)


def test_q_closed_form_values():
    assert q_closed_form("fock", 0, PhasePoint(q=0, p=0)) == pytest.approx(1 / (2 * math.pi))
    assert q_closed_form("fock", 3, PhasePoint(q=0, p=0)) == 0.0
    assert q_closed_form("position", 1.0, PhasePoint(q=1.0, p=5.0)) == pytest.approx(1 / (2 * math.pi ** 1.5))
    with pytest.raises(DomainError):
        q_closed_form("fock", 1.5, PhasePoint(q=0, p=0))


@pytest.mark.parametrize("centre", [-1.3, 0.0, 2.45])
def test_q_closed_form_peaks_on_the_line(centre):
    step = 0.01
    axis = np.arange(-6.0, 6.0 + 0.5 * step, step)
    across_q = [q_closed_form("position", centre, PhasePoint(q=float(x), p=0.7)) for x in axis]
    across_p = [q_closed_form("momentum", centre, PhasePoint(q=-0.4, p=float(x))) for x in axis]
    assert axis[int(np.argmax(across_q))] == pytest.approx(centre, abs=step)
    assert axis[int(np.argmax(across_p))] == pytest.approx(centre, abs=step)


@pytest.mark.parametrize("n", [1, 5, 20])
def test_q_closed_form_peaks_on_the_circle(n):
    radii = np.arange(0.0, 2 * math.sqrt(2 * n) + 2.0, 0.01)
    values = [q_closed_form("fock", n, PhasePoint(q=float(r), p=0.0)) for r in radii]
    assert radii[int(np.argmax(values))] == pytest.approx(math.sqrt(2 * n), abs=0.01)


def test_two_source_q_matches_fock_series():
    z1, z2, theta = PhasePoint(q=-1.0, p=0.5), PhasePoint(q=0.8, p=-0.3), 0.7
    spec = SuperpositionSpec(kind="coherent_pair", params={"q1": z1.q, "p1": z1.p, "q2": z2.q, "p2": z2.p, "theta": theta})
    state = build_superposition(spec, cutoff=64)
    for q, p in [(0.0, 0.0), (1.2, -2.0), (-2.5, 1.0)]:
        point = PhasePoint(q=q, p=p)
        parts = two_source_q(z1, z2, theta, point)
        assert parts.q_value == pytest.approx(q_function(state, point, convention="per_d2z_over_pi"), abs=1e-12)


def test_interference_vanishes_along_segment_for_matching_phase():
    origin = PhasePoint(q=0.0, p=0.0)
    z1, z2 = PhasePoint(q=-1.0, p=0.5), PhasePoint(q=1.5, p=1.0)
    theta = -triangle_area(origin, z1, z2)
    for s in np.linspace(0, 1, 5):
        point = PhasePoint(q=z1.q + s * (z2.q - z1.q), p=z1.p + s * (z2.p - z1.p))
        assert two_source_q(z1, z2, theta, point).delta == pytest.approx(0.0, abs=1e-12)


def test_fringe_phase_runs_linearly_in_p():
    q0 = 0.4
    z1, z2 = PhasePoint(q=-q0, p=0.0), PhasePoint(q=q0, p=0.0)
    first = two_source_q(z1, z2, 0.0, PhasePoint(q=0.0, p=0.0)).delta
    later = two_source_q(z1, z2, 0.0, PhasePoint(q=0.0, p=2 * math.pi / q0)).delta
    assert abs(later - first) == pytest.approx(2 * math.pi)


# --- Moments ---

@pytest.mark.parametrize("q0", [0.4, 1.0])
@pytest.mark.parametrize("theta", [0.0, 0.5 * math.pi, math.pi])
def test_cat_state_moments(q0, theta):
    c = math.exp(-0.25 * q0 * q0)
    n2 = 2 * (1 + c ** 4 * math.cos(theta))
    moments = quadrature_stats(_cat(q0, theta))
    assert moments.mean_q == pytest.approx(0.0, abs=1e-12)
    assert moments.var_q == pytest.approx(0.5 + 2 * q0 * q0 / n2, abs=1e-10)
    assert moments.mean_p == pytest.approx(2 * q0 * c ** 4 * math.sin(theta) / n2, abs=1e-10)
    assert moments.var_p == pytest.approx(0.5 - (2 * q0 * c * c / n2) ** 2 * (c ** 4 + math.cos(theta)), abs=1e-10)
    assert moments.cov_qp == pytest.approx(0.0, abs=1e-10)

    algebraic = two_source_moments(PhasePoint(q=-q0, p=0.0), PhasePoint(q=q0, p=0.0), theta)
    assert algebraic.var_p == pytest.approx(moments.var_p, abs=1e-10)
    assert algebraic.var_q == pytest.approx(moments.var_q, abs=1e-10)


def test_even_cat_is_squeezed_and_odd_cat_is_not():
    assert quadrature_stats(_cat(0.4, 0.0)).var_p < 0.5
    assert quadrature_stats(_cat(0.4, math.pi)).var_p > 0.5


def test_coherent_state_is_minimum_uncertainty():
    moments = quadrature_stats(coherent_fock_coeffs(PhasePoint(q=1.5, p=-2.0), 64))
    assert (moments.mean_q, moments.mean_p) == pytest.approx((1.5, -2.0), abs=1e-12)
    assert (moments.var_q, moments.var_p) == pytest.approx((0.5, 0.5), abs=1e-12)


def test_quadrature_stats_refuses_truncated_state():
    with pytest.raises(TruncationError):
        quadrature_stats(coherent_fock_coeffs(PhasePoint(q=8.0, p=0.0), 20))


# --- Evolution ---

def test_rotation_turns_coherent_label_anticlockwise():
    point = PhasePoint(q=1.0, p=0.5)
    rotated = evolve(coherent_fock_coeffs(point, 64), Rotate(t=0.9))
    target = coherent_fock_coeffs(PhasePoint.from_z(point.z * cmath.exp(0.9j)), 64)
    assert np.max(np.abs(rotated.coeffs - target.coeffs)) < 1e-12


def test_displacing_vacuum_gives_coherent_state():
    displaced = evolve(FockVector.basis(0, 64), Displace(q=1.0, p=0.5))
    expected = coherent_fock_coeffs(PhasePoint(q=1.0, p=0.5), 64)
    assert np.max(np.abs(displaced.coeffs - expected.coeffs)) < 1e-10
    assert displaced.norm() == pytest.approx(1.0, abs=1e-10)


def test_displacement_needs_headroom():
    with pytest.raises(TruncationError):
        evolve(FockVector.basis(0, 20), Displace(q=4.0, p=0.0))
