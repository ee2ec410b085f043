# -*- coding: utf-8 -*-
"""
モーメント方程式の時間発展と定常状態
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.integrate import solve_ivp, OdeSolution
from scipy.linalg import solve_continuous_lyapunov

from .errors import (
    SimulationConfigError,
    StepSizeUnderflow,
    NonFiniteState,
    NotDissipative,
    EmptyTrajectory,
)
from .generator import MomentGenerator
from .model import CovarianceMatrix

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12
INTEGRATOR = 'DOP853'

# M の固有値の実部がこれ以上なら散逸的でない
HURWITZ_MARGIN = -1e-12


@dataclass
class Trajectory:
    """
    共分散行列の時系列

    dense は積分器の連続出力（OdeSolution）。sigma_at(t) で任意の時刻を評価できる。
    """
    times: np.ndarray
    states: List[CovarianceMatrix]
    meta: Dict[str, Any] = field(default_factory=dict)
    dense: Optional[OdeSolution] = field(default=None, repr=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.states):
            raise SimulationConfigError("時刻とサンプル数が一致しません")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise SimulationConfigError("時刻は狭義単調増加である必要があります")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def horizon(self) -> float:
        if len(self.times) == 0:
            raise EmptyTrajectory("空の軌道です")
        return float(self.times[-1])

    def sigma_array(self) -> np.ndarray:
        """(サンプル数, 4, 4) の配列"""
        return np.array([s.sigma for s in self.states])

    def sigma_at(self, t: float) -> CovarianceMatrix:
        """
        時刻 t の共分散行列

        連続出力があればそれを使い、なければサンプル間を線形補間する。
        """
        if len(self.times) == 0:
            raise EmptyTrajectory("空の軌道です")
        if not self.times[0] <= t <= self.times[-1]:
            raise SimulationConfigError(f"t={t} は軌道の範囲外です")
        if self.dense is not None:
            return CovarianceMatrix(self.dense(t).reshape(4, 4))
        k = int(np.searchsorted(self.times, t))
        if k == 0 or self.times[k] == t:
            return self.states[k]
        t0, t1 = self.times[k - 1], self.times[k]
        w = (t - t0) / (t1 - t0)
        return CovarianceMatrix((1.0 - w) * self.states[k - 1].sigma + w * self.states[k].sigma)


def sample_times(horizon: float, sample_dt: float) -> np.ndarray:
    """0 から horizon までの等間隔サンプル時刻（端点は必ず含む）"""
    count = int(np.floor(horizon / sample_dt + 1e-9))
    times = sample_dt * np.arange(count + 1)
    if horizon - times[-1] > 1e-9 * sample_dt:
        times = np.append(times, horizon)
    else:
        times[-1] = horizon
    return times


def evolve(
    g: MomentGenerator,
    sigma0: CovarianceMatrix,
    horizon: float,
    sample_dt: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    first_step: Optional[float] = None
) -> Trajectory:
    """
    モーメント方程式を適応刻み Runge-Kutta (DOP853, 8(5,3)次) で積分する

    Args:
        g: 生成子
        sigma0: 初期共分散行列
        horizon: 終了時刻
        sample_dt: サンプル間隔
        rtol, atol: 局所誤差の許容値
        first_step: 初期ステップ幅（非マルコフでは ≤ 1/(10Λ) を渡す）

    Returns:
        サンプル時刻ごとの共分散行列と連続出力を持つ Trajectory

    Raises:
        StepSizeUnderflow: ステップ幅がアンダーフローした
        NonFiniteState: 共分散行列に NaN / inf が現れた
    """
    if not horizon > 0:
        raise SimulationConfigError(f"horizon は正である必要があります: {horizon}")
    if not sample_dt > 0:
        raise SimulationConfigError(f"sample_dt は正である必要があります: {sample_dt}")

    times = sample_times(horizon, sample_dt)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return g.rhs(t, y.reshape(4, 4)).ravel()

    options = {}
    if first_step is not None:
        options['first_step'] = min(first_step, horizon)

    result = solve_ivp(
        rhs,
        (0.0, horizon),
        sigma0.sigma.ravel(),
        method=INTEGRATOR,
        t_eval=times,
        dense_output=True,
        rtol=rtol,
        atol=atol,
        **options
    )

    if result.status < 0:
        if result.y.size and not np.all(np.isfinite(result.y)):
            raise NonFiniteState(f"共分散行列が発散しました: {result.message}")
        raise StepSizeUnderflow(f"積分に失敗しました (t ≈ {result.t[-1] if result.t.size else 0.0}): {result.message}")
    if not np.all(np.isfinite(result.y)):
        raise NonFiniteState("共分散行列に有限でない値が現れました")

    states = [sigma0]
    for k in range(1, result.t.size):
        states.append(CovarianceMatrix(result.y[:, k].reshape(4, 4)))

    steps = np.diff(result.sol.ts) if result.sol is not None else np.zeros(0)
    meta = {
        'integrator': INTEGRATOR,
        'steps': int(steps.size),
        'nfev': int(result.nfev),
        'min_step': float(steps.min()) if steps.size else 0.0,
        'max_step': float(steps.max()) if steps.size else 0.0,
        'rtol': rtol,
        'atol': atol,
    }
    logger.info(
        f"積分完了: {meta['steps']} ステップ, {meta['nfev']} 回評価, "
        f"刻み [{meta['min_step']:.3g}, {meta['max_step']:.3g}]"
    )
    return Trajectory(times=result.t, states=states, meta=meta, dense=result.sol)


def is_dissipative(g: MomentGenerator) -> bool:
    """M の全固有値の実部が負か"""
    return float(np.max(np.linalg.eigvals(g.M).real)) < HURWITZ_MARGIN


def steady_state(g: MomentGenerator) -> CovarianceMatrix:
    """
    マルコフ生成子の定常状態 Mσ + σMᵀ + N = 0 を Lyapunov 方程式として解く

    Raises:
        NotDissipative: M が Hurwitz でない（共鳴した共通浴など、減衰しないモードがある）
    """
    if g.time_dependent:
        raise SimulationConfigError("定常状態は時間非依存の生成子に対してのみ定義されます")
    max_real = float(np.max(np.linalg.eigvals(g.M).real))
    if max_real >= HURWITZ_MARGIN:
        logger.warning(f"ドリフト行列が散逸的でありません (max Re λ = {max_real:.3e})")
        raise NotDissipative(f"ドリフト行列の固有値の実部が負になりません: max Re λ = {max_real:.3e}")
    sigma = solve_continuous_lyapunov(g.M, -g.N)
    return CovarianceMatrix(sigma)
