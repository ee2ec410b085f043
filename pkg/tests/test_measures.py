# -*- coding: utf-8 -*-
"""
measures: シンプレクティック固有値、E_N、双子相関、消失時刻
"""

import math

import numpy as np
import pytest

from src.core.errors import EmptyTrajectory, NonPhysicalState, SimulationConfigError
from src.core.measures import (
    DeathTimeResult,
    death_time,
    last_nonclassical_time,
    log_negativity,
    mode_occupations,
    purity,
    symplectic_eigenvalues,
    twin_correlation,
)
from src.core.model import CovarianceMatrix, thermal_covariance, tms_covariance, vacuum_covariance
from src.core.propagator import Trajectory


@pytest.mark.parametrize('r', [0.0, 0.5, 1.0, 2.0])
def test_log_negativity_of_tms(r):
    assert log_negativity(tms_covariance(r)) == pytest.approx(2.0 * r / math.log(2.0), abs=1e-9)


def test_log_negativity_reference_value():
    assert log_negativity(tms_covariance(2.0)) == pytest.approx(5.7708, abs=1e-4)


@pytest.mark.parametrize('r', [0.0, 0.5, 1.0, 2.0])
def test_twin_correlation_of_tms(r):
    mu = math.tanh(r) ** 2
    assert twin_correlation(tms_covariance(r), 1.0, 1.0) == pytest.approx(-2.0 * mu / (1.0 - mu), abs=1e-9)


@pytest.mark.parametrize('r', [0.5, 2.0])
def test_tms_occupations(r):
    n1, n2 = mode_occupations(tms_covariance(r), 1.0, 1.0)
    assert n1 == pytest.approx(math.sinh(r) ** 2)
    assert n2 == pytest.approx(math.sinh(r) ** 2)


def test_partial_transpose_eigenvalue_of_tms():
    nu_minus, nu_plus = symplectic_eigenvalues(tms_covariance(1.0), partial_transpose=True)
    assert nu_minus == pytest.approx(math.exp(-2.0) / 2, rel=1e-10)
    assert nu_plus == pytest.approx(math.exp(2.0) / 2, rel=1e-10)


def _local_symplectic(r1, phi1, r2, phi2):
    def single(r, phi):
        rot = np.array([[math.cos(phi), math.sin(phi)], [-math.sin(phi), math.cos(phi)]])
        return rot @ np.diag([math.exp(-r), math.exp(r)])
    s = np.zeros((4, 4))
    s[:2, :2] = single(r1, phi1)
    s[2:, 2:] = single(r2, phi2)
    return s


def test_log_negativity_is_local_symplectic_invariant():
    sigma = CovarianceMatrix(0.7 * tms_covariance(1.3).sigma + 0.3 * thermal_covariance(0.4, 0.9).sigma)
    s = _local_symplectic(0.4, 0.3, -0.7, 1.1)
    assert log_negativity(sigma.transformed(s)) == pytest.approx(log_negativity(sigma), abs=1e-9)
    assert purity(sigma.transformed(s)) == pytest.approx(purity(sigma), rel=1e-10)


def test_separable_states_have_zero_negativity():
    assert log_negativity(vacuum_covariance()) == 0.0
    assert log_negativity(thermal_covariance(3.0, 0.5, 1.0, 1.7)) == 0.0


@pytest.mark.parametrize('n', [0.0, 0.3, 2.0])
def test_twin_correlation_of_thermal_product(n):
    # 熱的状態は古典的（d = 2n² ≥ 0）
    assert twin_correlation(thermal_covariance(n, n), 1.0, 1.0) == pytest.approx(2.0 * n ** 2)


def test_twin_correlation_uses_local_frequencies():
    sigma = thermal_covariance(0.0, 0.0, 1.0, 1.5)
    assert twin_correlation(sigma, 1.0, 1.5) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(SimulationConfigError):
        twin_correlation(sigma, 0.0, 1.0)


def test_non_physical_state_is_rejected():
    with pytest.raises(NonPhysicalState):
        symplectic_eigenvalues(CovarianceMatrix(np.diag([1.0, 1.0, 1.0, -1.0])))


# =====================================
# 消失時刻
# =====================================

def _trajectory(states, dt=1.0):
    return Trajectory(times=dt * np.arange(len(states)), states=list(states))


def test_death_time_never_entangled():
    traj = _trajectory([vacuum_covariance()] * 11)
    result = death_time(traj, settle_window=2.0)
    assert result.kind == 'never_entangled'
    assert math.isnan(result.value)
    assert not result.is_finite and not result.is_censored


def test_death_time_censored_at_horizon():
    traj = _trajectory([tms_covariance(1.0)] * 11)
    result = death_time(traj, settle_window=2.0)
    assert result.is_censored
    assert result.value == math.inf
    assert result.horizon == 10.0


def test_death_time_finite_is_bisected_between_samples():
    states = [tms_covariance(0.5)] * 5 + [vacuum_covariance()] * 6
    result = death_time(_trajectory(states), settle_window=2.0)
    assert result.is_finite
    assert 4.0 < result.t_F < 5.0
    # 線形補間した σ の E_N が閾値を切る点
    sigma = CovarianceMatrix(
        (1 - (result.t_F - 4.0)) * tms_covariance(0.5).sigma + (result.t_F - 4.0) * vacuum_covariance().sigma
    )
    assert log_negativity(sigma) == pytest.approx(0.0, abs=1e-2)


def test_death_time_late_entanglement_is_censored():
    states = [vacuum_covariance()] * 10 + [tms_covariance(0.5)]
    result = death_time(_trajectory(states), settle_window=2.0)
    assert result.is_censored


def test_death_time_validation():
    traj = _trajectory([tms_covariance(1.0)] * 3)
    with pytest.raises(SimulationConfigError):
        death_time(traj, threshold=0.0, settle_window=1.0)
    with pytest.raises(SimulationConfigError):
        death_time(traj, settle_window=5.0)
    with pytest.raises(EmptyTrajectory):
        death_time(Trajectory(times=np.zeros(0), states=[]))


def test_last_nonclassical_time():
    states = [tms_covariance(0.5)] * 3 + [thermal_covariance(0.5, 0.5)] * 8
    result = last_nonclassical_time(_trajectory(states), 1.0, 1.0, settle_window=2.0)
    assert result.is_finite
    assert 2.0 < result.t_F < 3.0


def test_death_time_result_constructors():
    assert DeathTimeResult.finite(3.0, 10.0).value == 3.0
    assert DeathTimeResult.censored(10.0).kind == 'censored'
    assert DeathTimeResult.never(10.0).kind == 'never_entangled'
