import cmath
import math

import numpy as np
import pytest

from inphase.config_system import NumericsConfig
from inphase.exact import SqueezeParam, displacement_element, posmom_overlap, sho_propagator, squeeze_element
from inphase.exceptions import CausticError, DomainError, QuadratureError, TruncationError
from inphase.oracle import (
    DisplacementOperator,
    OperatorMatrix,
    PosMomIntegral,
    PropagatorIntegral,
    ResolutionIntegral,
    RotationOperator,
    SqueezeOperator,
    adaptive_quad_2d,
    fixed_quad_overlap_2d,
    operator_matrix,
    oracle_cutoff,
    propagator_coherent_sandwich,
    quad_overlap_2d,
    rotation_sandwich,
    series_displacement_element,
)
from inphase.phasespace import PhasePoint, displacement_compose
from inphase.states import FockVector, coherent_fock_coeffs

# --- Quadrature engine ---

def test_adaptive_quadrature_on_gaussian():
    value = adaptive_quad_2d(lambda x, y: np.exp(-x * x - y * y), (-6.0, 6.0, -6.0, 6.0))
    assert value == pytest.approx(math.pi, abs=1e-10)


def test_adaptive_quadrature_reports_non_convergence():
    with pytest.raises(QuadratureError) as excinfo:
        adaptive_quad_2d(lambda x, y: np.cos(400.0 * x) + 0 * y, (0.0, 10.0, 0.0, 1.0), tolerance=1e-14, max_nodes=64)
    assert excinfo.value.nodes == 64


@pytest.mark.parametrize("q, p", [(0.0, 0.0), (0.5, -1.0), (-1.5, 2.0)])
def test_posmom_double_integral(q, p):
    numeric = quad_overlap_2d(PosMomIntegral(q=q, p=p))
    assert numeric == pytest.approx(posmom_overlap(q, p), abs=1e-8)


@pytest.mark.parametrize("t", [0.3, 0.5 * math.pi, 2.0])
def test_propagator_double_integral(t):
    numeric = quad_overlap_2d(PropagatorIntegral(q1=0.5, q2=-1.0, t=t))
    assert numeric == pytest.approx(sho_propagator(-1.0, 0.5, t), abs=1e-6)


def test_propagator_double_integral_refuses_caustic():
    with pytest.raises(CausticError):
        quad_overlap_2d(PropagatorIntegral(q1=0.0, q2=0.0, t=math.pi))


@pytest.mark.parametrize("q, p", [(0.0, 0.0), (1.5, -1.0)])
def test_fixed_rule_error_drops_tenfold_per_doubling(q, p):
    exact = posmom_overlap(q, p)
    errors = [abs(fixed_quad_overlap_2d(PosMomIntegral(q=q, p=p), nodes) - exact) for nodes in (16, 32, 64)]
    assert errors[1] <= 0.1 * errors[0]
    assert errors[2] <= max(0.1 * errors[1], 1e-11)


def test_fixed_rule_needs_a_node():
    with pytest.raises(DomainError):
        fixed_quad_overlap_2d(PosMomIntegral(q=0.0, p=0.0), 0)


def test_resolution_of_identity():
    ket = coherent_fock_coeffs(PhasePoint(q=0.5, p=0.3), 30)
    numeric = quad_overlap_2d(ResolutionIntegral(bra=FockVector.basis(2, 8), ket=ket))
    assert numeric == pytest.approx(ket.coeffs[2], abs=1e-8)


def test_resolution_refuses_truncated_states():
    ket = coherent_fock_coeffs(PhasePoint(q=6.0, p=0.0), 12)
    with pytest.raises(TruncationError):
        quad_overlap_2d(ResolutionIntegral(bra=FockVector.basis(0, 4), ket=ket))


def test_coherent_sandwich_matches_fock_rotation():
    z_out, z_in = PhasePoint(q=1.0, p=-0.5), PhasePoint(q=0.5, p=1.0)
    for t in (0.3, 2.0):
        kernel = propagator_coherent_sandwich(z_out, z_in, t)
        assert kernel == pytest.approx(rotation_sandwich(z_out, z_in, t, cutoff=64), abs=1e-6)
    with pytest.raises(CausticError):
        propagator_coherent_sandwich(z_out, z_in, 0.0)


def test_rotation_sandwich_closed_form():
    # e^{-it/2} <z_out|z_in e^{-it}>
    z_out, z_in, t = PhasePoint(q=0.2, p=0.9), PhasePoint(q=-0.4, p=0.3), 1.1
    rotated = PhasePoint.from_z(z_in.z * cmath.exp(-1j * t))
    overlap = complex(np.vdot(coherent_fock_coeffs(z_out, 60).coeffs, coherent_fock_coeffs(rotated, 60).coeffs))
    assert rotation_sandwich(z_out, z_in, t, cutoff=60) == pytest.approx(cmath.exp(-0.5j * t) * overlap, abs=1e-14)


def test_quadrature_respects_configured_limits():
    config = NumericsConfig(quad_tolerance=1e-300, quad_max_nodes=64)
    with pytest.raises(QuadratureError):
        quad_overlap_2d(PosMomIntegral(q=0.5, p=0.5), config)


# --- Operator matrices ---

def test_oracle_cutoff_grows_with_reach():
    base = oracle_cutoff(30)
    assert base > 30
    assert oracle_cutoff(30, radius_squared=8.0) > base
    assert oracle_cutoff(30, mu=1.0) > base
    assert oracle_cutoff(0, radius_squared=32.0) >= 4 * 32 + 40


def test_rotation_matrix_is_diagonal_phase():
    matrix = operator_matrix(RotationOperator(t=0.4), 6)
    assert matrix.cutoff == 6
    assert np.diag(matrix.entries) == pytest.approx(np.exp(0.4j * np.arange(7)))
    assert matrix.unitarity_defect() < 1e-15


def test_displacement_matrix_matches_closed_form():
    q, p = 1.2, -0.8
    matrix = operator_matrix(DisplacementOperator(q=q, p=p), oracle_cutoff(20, 0.5 * (q * q + p * p)))
    for m in range(0, 21, 4):
        for n in range(0, 21, 5):
            assert matrix.entries[m, n] == pytest.approx(displacement_element(m, n, q, p), abs=1e-10)
    assert matrix.unitarity_defect() < 1e-9


def test_squeeze_matrix_matches_closed_form():
    mu = 0.9
    matrix = operator_matrix(SqueezeOperator(mu=mu), oracle_cutoff(20, 0.0, mu))
    sq = SqueezeParam(mu=mu)
    for n in range(0, 21, 3):
        for m in range(0, 21, 2):
            assert matrix.entries[n, m] == pytest.approx(squeeze_element(n, sq, m), abs=1e-10)


@pytest.mark.parametrize("t1, t2", [(0.4, 1.1), (2.5, -4.0)])
def test_rotation_matrices_compose(t1, t2):
    product = operator_matrix(RotationOperator(t=t1), 128).entries @ operator_matrix(RotationOperator(t=t2), 128).entries
    combined = operator_matrix(RotationOperator(t=t1 + t2), 128).entries
    assert np.max(np.abs(product - combined)) < 1e-12


def test_displacement_matrices_compose_with_phase():
    rng = np.random.default_rng(5)
    block = 20
    for _ in range(3):
        first, second = (PhasePoint(q=rng.uniform(-1.5, 1.5), p=rng.uniform(-1.5, 1.5)) for _ in range(2))
        total, phi = displacement_compose(first, second)
        reach = 0.5 * max(point.radius_squared for point in (first, second, total))
        cutoff = oracle_cutoff(block, reach)
        product = operator_matrix(DisplacementOperator(q=second.q, p=second.p), cutoff).entries @ \
            operator_matrix(DisplacementOperator(q=first.q, p=first.p), cutoff).entries
        combined = cmath.exp(1j * phi) * operator_matrix(DisplacementOperator(q=total.q, p=total.p), cutoff).entries
        # truncation only reaches the far corner
        assert np.max(np.abs(product[:block, :block] - combined[:block, :block])) < 1e-9


def test_operator_headroom_guard():
    with pytest.raises(TruncationError) as excinfo:
        operator_matrix(DisplacementOperator(q=5.0, p=0.0), 30)
    assert excinfo.value.required_cutoff > 30


def test_operator_matrix_apply():
    matrix = operator_matrix(DisplacementOperator(q=0.5, p=0.5), 64)
    shifted = matrix.apply(FockVector.basis(0, 64))
    expected = coherent_fock_coeffs(PhasePoint(q=0.5, p=0.5), 64)
    assert np.max(np.abs(shifted.coeffs - expected.coeffs)) < 1e-10
    with pytest.raises(DomainError):
        matrix.apply(FockVector.basis(0, 10))


def test_operator_matrix_is_read_only_and_square():
    matrix = operator_matrix(RotationOperator(t=1.0), 3)
    with pytest.raises(ValueError):
        matrix.entries[0, 0] = 2.0
    with pytest.raises(ValueError):
        OperatorMatrix(entries=np.zeros((2, 3)), kind_tag="bad")


# --- Series oracle ---

@pytest.mark.parametrize("m, n, d", [(0, 0, 1.0), (5, 3, 2.0), (3, 5, 2.0), (20, 20, 4.0), (30, 10, 6.0)])
def test_series_matches_laguerre_form(m, n, d):
    series = series_displacement_element(m, n, d, 0.3)
    assert series == pytest.approx(displacement_element(m, n, d, 0.3), abs=1e-12)


def test_series_index_guard():
    with pytest.raises(DomainError):
        series_displacement_element(101, 0, 1.0, 0.0)
