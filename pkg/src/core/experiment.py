# -*- coding: utf-8 -*-
"""
実験設定から1本の軌道を計算するまでの共通処理
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .bath import CoeffSchedule, coeffs_markovian, renormalize
from .config_loader import ExperimentConfig
from .errors import SimulationConfigError
from .generator import BathTopology, MomentGenerator, build, build_time_dependent
from .measures import (
    DeathTimeResult,
    death_time,
    last_nonclassical_time,
    log_negativity,
    mode_occupations,
    purity,
    symplectic_eigenvalues,
    twin_correlation,
)
from .model import (
    CovarianceMatrix,
    NormalModeData,
    ValidatedParams,
    decoupling_weights,
    normal_mode_squeezed_covariance,
    normal_modes,
    thermal_covariance,
    tms_covariance,
    vacuum_covariance,
    validate_params,
)
from .propagator import Trajectory, evolve

logger = logging.getLogger(__name__)

# 弱結合近似の目安（γᵢ = cᵢ²γ が ω₁ の 5% を超えたら警告）
WEAK_COUPLING_LIMIT = 0.05

# 共分散行列の上三角（出力列）
SIGMA_LABELS = ('x1', 'p1', 'x2', 'p2')
SIGMA_COLUMNS = [
    f"s_{SIGMA_LABELS[i]}{SIGMA_LABELS[j]}"
    for i in range(4) for j in range(i, 4)
]


@dataclass
class Simulation:
    """1本の軌道とその構成"""
    config: ExperimentConfig
    params: ValidatedParams
    modes: NormalModeData
    topology: BathTopology
    generator: MomentGenerator
    sigma0: CovarianceMatrix
    trajectory: Trajectory


def resolve_topology(cfg: ExperimentConfig, modes: NormalModeData) -> BathTopology:
    """TopologySpec を BathTopology にする（decoupled は点ごとの重み）"""
    spec = cfg.topology
    if spec.variant == 'separate':
        return BathTopology.separate(spec.c1, spec.c2)
    if spec.variant == 'common':
        return BathTopology.common()
    if spec.decoupled:
        return BathTopology.weighted_common(*decoupling_weights(modes))
    return BathTopology.weighted_common(spec.c1, spec.c2)


def initial_covariance(cfg: ExperimentConfig, modes: NormalModeData) -> CovarianceMatrix:
    """設定の初期状態を共分散行列にする"""
    init = cfg.initial
    if init.state == 'tms':
        return tms_covariance(init.r, init.omega_ref)
    if init.state == 'normal_mode':
        return normal_mode_squeezed_covariance(init.r, modes, init.omega_ref)
    if init.state == 'vacuum':
        return vacuum_covariance(cfg.system.omega1, cfg.system.omega2)
    if init.state == 'thermal':
        return thermal_covariance(init.n1, init.n2, cfg.system.omega1, cfg.system.omega2)
    raise SimulationConfigError(f"不明な初期状態: {init.state}")


def twin_frequencies(cfg: ExperimentConfig) -> Tuple[float, float]:
    """双子相関の数演算子を定義する周波数（既定は各振動子の ωᵢ）"""
    if cfg.dynamics.twin_frequencies == 'reference':
        return cfg.initial.omega_ref, cfg.initial.omega_ref
    return cfg.system.omega1, cfg.system.omega2


def build_generator(
    cfg: ExperimentConfig,
    params: ValidatedParams,
    modes: NormalModeData,
    topology: BathTopology
) -> Tuple[MomentGenerator, Optional[float]]:
    """
    生成子と初期ステップ幅を作る

    マルコフではくりこみ済み極限係数（ε² = 0）、非マルコフでは係数スケジュール。
    """
    if cfg.dynamics.markovian:
        c_inf = coeffs_markovian(modes, cfg.bath)
        return build(renormalize(c_inf, c_inf), params, topology), None
    schedule = CoeffSchedule(modes, cfg.bath, cfg.dynamics.horizon, mode=cfg.dynamics.coefficients)
    return build_time_dependent(schedule, params, topology), schedule.initial_step


def weak_coupling_notes(cfg: ExperimentConfig, topology: BathTopology) -> List[str]:
    """弱結合近似の範囲外になる結合の注意書き"""
    notes = []
    for k, weight in enumerate((topology.c1, topology.c2), start=1):
        effective = weight ** 2 * cfg.bath.gamma
        if effective > WEAK_COUPLING_LIMIT * cfg.system.omega1:
            notes.append(f"γ{k} = {effective:.4g} は弱結合の目安 {WEAK_COUPLING_LIMIT}ω₁ を超えています")
    return notes


def low_temperature_notes(cfg: ExperimentConfig, modes: NormalModeData) -> List[str]:
    """
    マルコフ係数を低温で使うときの注意書き

    k_BT < Ω₋ では D/(ΓΩ) = coth(Ω/2k_BT) が 1 に近く、F による初期滑りで
    シンプレクティック固有値が 1/2 をわずかに下回ることがある。
    """
    if not cfg.dynamics.markovian or cfg.bath.gamma == 0:
        return []
    if cfg.bath.kT >= modes.omega_minus:
        return []
    return [
        f"k_BT = {cfg.bath.kT:.4g} < Ω₋ = {modes.omega_minus:.4g} のマルコフ係数は"
        f"不確定性関係 ν ≥ 1/2 を初期に破ることがあります"
    ]


def validity_notes(cfg: ExperimentConfig, modes: NormalModeData, topology: BathTopology) -> List[str]:
    """近似の有効範囲についての注意書き（弱結合と低温）"""
    return weak_coupling_notes(cfg, topology) + low_temperature_notes(cfg, modes)


def simulate(cfg: ExperimentConfig) -> Simulation:
    """
    設定から軌道を計算する

    Raises:
        SimulationConfigError: パラメータが不正
        NumericalError: 積分・係数計算の失敗
    """
    params = validate_params(cfg.system)
    modes = normal_modes(params)
    topology = resolve_topology(cfg, modes)
    for note in validity_notes(cfg, modes, topology):
        logger.warning(note)

    generator, first_step = build_generator(cfg, params, modes, topology)
    sigma0 = initial_covariance(cfg, modes)
    trajectory = evolve(
        generator,
        sigma0,
        cfg.dynamics.horizon,
        cfg.dynamics.sample_dt,
        rtol=cfg.dynamics.rtol,
        atol=cfg.dynamics.atol,
        first_step=first_step,
    )
    return Simulation(cfg, params, modes, topology, generator, sigma0, trajectory)


def sample_record(sigma: CovarianceMatrix, omegas: Tuple[float, float]) -> Dict[str, Any]:
    """1サンプルの物理量（E_N, d, ν₋, 純度, 占有数, σ の成分）"""
    nu_minus, _ = symplectic_eigenvalues(sigma, partial_transpose=True)
    n1, n2 = mode_occupations(sigma, *omegas)
    record = {
        'E_N': log_negativity(sigma),
        'd': twin_correlation(sigma, *omegas),
        'nu_minus': nu_minus,
        'purity': purity(sigma),
        'n1': n1,
        'n2': n2,
    }
    s = sigma.sigma
    k = 0
    for i in range(4):
        for j in range(i, 4):
            record[SIGMA_COLUMNS[k]] = float(s[i, j])
            k += 1
    return record


def trajectory_records(sim: Simulation) -> List[Dict[str, Any]]:
    """軌道の全サンプルのレコード"""
    omegas = twin_frequencies(sim.config)
    records = []
    for t, sigma in zip(sim.trajectory.times, sim.trajectory.states):
        record = {'t': float(t)}
        record.update(sample_record(sigma, omegas))
        records.append(record)
    return records


@dataclass(frozen=True)
class TrajectorySummary:
    """軌道の要約（t_F, E_N の最大値, d の最後の負の時刻）"""
    death: DeathTimeResult
    peak_E_N: float
    twin_death: DeathTimeResult


def summarize(sim: Simulation) -> TrajectorySummary:
    """軌道から t_F などを求める"""
    dyn = sim.config.dynamics
    values = np.array([log_negativity(s) for s in sim.trajectory.states])
    omegas = twin_frequencies(sim.config)
    return TrajectorySummary(
        death=death_time(sim.trajectory, dyn.threshold, dyn.settle_window),
        peak_E_N=float(values.max()),
        twin_death=last_nonclassical_time(sim.trajectory, *omegas, dyn.threshold, dyn.settle_window),
    )
