# -*- coding: utf-8 -*-
"""
generator: モーメント方程式の組み立て
"""

import math

import numpy as np
import pytest

from src.core.bath import BathParams, CoeffSchedule, CoeffSet, coeffs_markovian, coeffs_nonmarkovian, renormalize
from src.core.errors import SimulationConfigError
from src.core.generator import (
    BathTopology,
    MomentGenerator,
    assemble_matrices,
    build,
    build_common,
    build_separate,
    build_time_dependent,
    hamiltonian_drift,
    mode_block_rates,
)
from src.core.model import SIGN_FLIP, CovarianceMatrix, decoupling_weights
from src.core.propagator import evolve
from tests.conftest import FIG9_BATH, make_params
from tests.fock_oracle import FockOracle, random_low_photon_state, two_mode_squeezed_ket

# 係数が十分大きく、検証に効く浴
STRONG_BATH = BathParams(gamma=0.05, cutoff=5.0, kT=1.0)


def zero_coeffs() -> CoeffSet:
    zeros = np.zeros((2, 2))
    return CoeffSet(eps2=zeros, D=zeros, F=zeros, Gamma=zeros, time=None)


def test_topology_validation():
    with pytest.raises(SimulationConfigError):
        BathTopology('shared')
    with pytest.raises(SimulationConfigError):
        BathTopology('common', 1.0, 0.5)
    with pytest.raises(SimulationConfigError):
        BathTopology.weighted_common(0.0, 0.0)


def test_topology_gram():
    np.testing.assert_array_equal(BathTopology.separate(2.0, 3.0).gram, np.diag([4.0, 9.0]))
    np.testing.assert_array_equal(BathTopology.common().gram, np.ones((2, 2)))
    np.testing.assert_array_equal(
        BathTopology.weighted_common(1.0, -2.0).gram, np.array([[1.0, -2.0], [-2.0, 4.0]])
    )
    assert BathTopology.weighted_common(0.5, 1.0).label() == 'weighted_common(0.5,1)'


def test_hamiltonian_drift_layout():
    p, _ = make_params(1.3, 0.4)
    m = hamiltonian_drift(p)
    assert m[0, 1] == 1.0 and m[2, 3] == 1.0
    assert m[1, 0] == -1.0
    assert m[3, 2] == pytest.approx(-1.69)
    assert m[1, 2] == m[3, 0] == -0.4


def test_zero_coupling_is_hamiltonian():
    p, _ = make_params(1.2, 0.3)
    g = build(zero_coeffs(), p, BathTopology.separate())
    np.testing.assert_array_equal(g.M, hamiltonian_drift(p))
    np.testing.assert_array_equal(g.N, np.zeros((4, 4)))


def test_separate_baths_without_coupling_are_block_diagonal():
    p, modes = make_params(1.3, 0.0)
    g = build_separate(coeffs_markovian(modes, STRONG_BATH), p)
    cross = np.ix_([0, 1], [2, 3])
    np.testing.assert_array_equal(g.M[cross], np.zeros((2, 2)))
    np.testing.assert_array_equal(g.N[cross], np.zeros((2, 2)))
    assert g.N[1, 1] > 0 and g.N[3, 3] > 0


def test_matrices_are_read_only():
    p, modes = make_params(1.0, 0.2)
    g = build_separate(coeffs_markovian(modes, STRONG_BATH), p)
    with pytest.raises(ValueError):
        g.M[0, 0] = 1.0


@pytest.mark.parametrize('omega2, lam', [(1.0, 0.3), (1.5, 0.4), (0.8, 0.1)])
def test_separate_sign_flip_symmetry(omega2, lam):
    p_pos, m_pos = make_params(omega2, lam)
    p_neg, m_neg = make_params(omega2, -lam)
    g_pos = build_separate(coeffs_markovian(m_pos, STRONG_BATH), p_pos)
    g_neg = build_separate(coeffs_markovian(m_neg, STRONG_BATH), p_neg)
    np.testing.assert_allclose(g_neg.M, SIGN_FLIP @ g_pos.M @ SIGN_FLIP, atol=1e-13)
    np.testing.assert_allclose(g_neg.N, SIGN_FLIP @ g_pos.N @ SIGN_FLIP, atol=1e-13)


def test_weighted_common_sign_flip_symmetry():
    p_pos, m_pos = make_params(1.2, 0.3)
    p_neg, m_neg = make_params(1.2, -0.3)
    g_pos = build_common(coeffs_markovian(m_pos, STRONG_BATH), p_pos, BathTopology.weighted_common(0.8, 0.6))
    g_neg = build_common(coeffs_markovian(m_neg, STRONG_BATH), p_neg, BathTopology.weighted_common(0.8, -0.6))
    np.testing.assert_allclose(g_neg.M, SIGN_FLIP @ g_pos.M @ SIGN_FLIP, atol=1e-13)
    np.testing.assert_allclose(g_neg.N, SIGN_FLIP @ g_pos.N @ SIGN_FLIP, atol=1e-13)


def test_topologies_with_equal_gram_agree():
    p, modes = make_params(1.1, 0.2)
    c = coeffs_markovian(modes, STRONG_BATH)

    single = build(c, p, BathTopology.separate(1.0, 0.0))
    weighted = build(c, p, BathTopology.weighted_common(1.0, 0.0))
    np.testing.assert_array_equal(single.M, weighted.M)
    np.testing.assert_array_equal(single.N, weighted.N)

    common = build_common(c, p, BathTopology.common())
    unit = build_common(c, p, BathTopology.weighted_common(1.0, 1.0))
    np.testing.assert_array_equal(common.M, unit.M)
    np.testing.assert_array_equal(common.N, unit.N)


def test_builders_check_topology():
    p, modes = make_params()
    c = coeffs_markovian(modes, STRONG_BATH)
    with pytest.raises(SimulationConfigError):
        build_separate(c, p, BathTopology.common())
    with pytest.raises(SimulationConfigError):
        build_common(c, p, BathTopology.separate())


def test_common_bath_at_resonance_leaves_relative_mode_free():
    p, modes = make_params(1.0, 0.3)
    assert modes.theta == pytest.approx(math.pi / 4)
    g = build_common(coeffs_markovian(modes, STRONG_BATH), p, BathTopology.common())
    rates = mode_block_rates(g, modes)
    scale = rates['plus']['damping'] + rates['plus']['diffusion']
    assert scale > 0
    assert rates['minus']['damping'] < 1e-12 * scale
    assert rates['minus']['diffusion'] < 1e-12 * scale


def test_decoupling_weights_free_upper_mode():
    p, modes = make_params(1.5, 0.3)
    c1, c2 = decoupling_weights(modes)
    g = build_common(coeffs_markovian(modes, STRONG_BATH), p, BathTopology.weighted_common(c1, c2))
    rates = mode_block_rates(g, modes)
    scale = rates['minus']['damping'] + rates['minus']['diffusion']
    assert scale > 0
    assert rates['plus']['damping'] < 1e-12 * scale
    assert rates['plus']['diffusion'] < 1e-12 * scale


def test_separate_baths_damp_both_modes():
    p, modes = make_params(1.0, 0.3)
    g = build_separate(coeffs_markovian(modes, STRONG_BATH), p)
    rates = mode_block_rates(g, modes)
    assert rates['minus']['damping'] > 0 and rates['plus']['damping'] > 0


def test_time_dependent_generator_follows_schedule():
    p, modes = make_params(1.0, 0.2)
    topology = BathTopology.separate()
    schedule = CoeffSchedule(modes, FIG9_BATH, horizon=5.0)
    g = build_time_dependent(schedule, p, topology)
    assert g.time_dependent

    m_early, n_early = g.at(0.5)
    m_ref, n_ref = assemble_matrices(schedule.coeffs(0.5), p, topology)
    np.testing.assert_array_equal(m_early, m_ref)
    np.testing.assert_array_equal(n_early, n_ref)

    m_late, n_late = g.at(schedule.memory_time + 1.0)
    np.testing.assert_allclose(m_late, g.M, atol=1e-15)
    np.testing.assert_allclose(n_late, g.N, atol=1e-15)


def test_time_dependent_requires_source():
    with pytest.raises(SimulationConfigError):
        MomentGenerator(M=np.zeros((4, 4)), N=np.zeros((4, 4)), time_dependent=True)


def test_rhs_is_symmetric():
    p, modes = make_params(1.4, -0.5)
    g = build(coeffs_markovian(modes, STRONG_BATH), p, BathTopology.weighted_common(0.7, 0.2))
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4))
    out = g.rhs(0.0, a @ a.T + np.eye(4))
    np.testing.assert_array_equal(out, out.T)


# =====================================
# Fock 空間のマスター方程式との比較
# =====================================

TOPOLOGIES = [
    BathTopology.separate(),
    BathTopology.separate(0.8, 1.3),
    BathTopology.common(),
    BathTopology.weighted_common(0.9, -0.4),
]


def _coeff_sets(modes):
    markov = coeffs_markovian(modes, STRONG_BATH)
    transient = coeffs_nonmarkovian(0.7, modes, STRONG_BATH)
    return {
        'markov': markov,
        'transient': transient,
        'renormalized': renormalize(transient, markov),
    }


@pytest.mark.parametrize('topology', TOPOLOGIES, ids=lambda t: t.label())
@pytest.mark.parametrize('kind', ['markov', 'transient', 'renormalized'])
def test_moment_equations_match_master_equation(topology, kind):
    p, modes = make_params(1.2, 0.35)
    c = _coeff_sets(modes)[kind]
    oracle = FockOracle(c, p, topology, n_max=10)
    g = build(c, p, topology)

    for seed in range(3):
        rho = random_low_photon_state(10, support=3, seed=seed)
        expected = oracle.moments(oracle.liouvillian(rho))
        got = g.rhs(0.0, oracle.moments(rho))
        np.testing.assert_allclose(got, expected, atol=1e-10)


@pytest.mark.slow
@pytest.mark.parametrize('topology', [BathTopology.separate(), BathTopology.common()], ids=lambda t: t.label())
def test_trajectory_matches_master_equation(topology):
    p, modes = make_params(1.2, 0.2)
    bath = BathParams(gamma=0.05, cutoff=5.0, kT=0.5)
    c = renormalize(coeffs_markovian(modes, bath), coeffs_markovian(modes, bath))
    # 最上位準位の占有は tanh(0.5)^(2(n_max−1)) ≈ 1e-9 程度
    n_max = 14
    oracle = FockOracle(c, p, topology, n_max=n_max)

    psi = two_mode_squeezed_ket(0.5, n_max)
    rho0 = np.outer(psi, psi.conj())
    horizon = 10.0 * math.pi
    times = np.linspace(0.0, horizon, 11)
    expected = oracle.evolve(rho0, times)
    assert oracle.max_edge_population < 1e-7

    trajectory = evolve(build(c, p, topology), CovarianceMatrix(expected[0]), horizon, math.pi)
    assert len(trajectory) == len(times)
    for got, ref in zip(trajectory.states, expected):
        scale = np.max(np.abs(ref))
        np.testing.assert_allclose(got.sigma, ref, rtol=1e-3, atol=1e-3 * scale)


def test_truncation_error_shrinks_with_larger_fock_space():
    # 最上位準位に占有があると [x, p] = i が崩れ、モーメントの時間微分がずれる
    p, _ = make_params(1.2, 0.2)
    c = zero_coeffs()
    topology = BathTopology.separate()
    g = build(c, p, topology)

    small = FockOracle(c, p, topology, n_max=6)
    large = FockOracle(c, p, topology, n_max=12)
    errors = []
    for oracle in (small, large):
        psi = two_mode_squeezed_ket(0.8, oracle.n_max)
        rho = np.outer(psi, psi.conj())
        expected = oracle.moments(oracle.liouvillian(rho))
        got = g.rhs(0.0, oracle.moments(rho))
        errors.append(np.max(np.abs(got - expected)))
        assert oracle.edge_population(rho) > 0

    assert errors[1] < 0.1 * errors[0]
