# -*- coding: utf-8 -*-
"""
共分散行列からの物理量

- シンプレクティック固有値（部分転置あり/なし）
- 対数ネガティビティ E_N、純度
- 各振動子の占有数と双子相関 d = ⟨:(n₁−n₂)²:⟩
- エンタングルメントの消失時刻 t_F（最後に E_N > threshold となる時刻）
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import NonPhysicalState, EmptyTrajectory, SimulationConfigError
from .model import CovarianceMatrix
from .propagator import Trajectory

# 部分転置: p₂ → −p₂
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])

DEFAULT_THRESHOLD = 1e-10
DEFAULT_SETTLE_WINDOW = 50.0
TIME_RESOLUTION = 1e-3

FINITE = 'finite'
CENSORED = 'censored'
NEVER = 'never_entangled'


@dataclass(frozen=True)
class DeathTimeResult:
    """
    消失時刻の判定結果

    kind: 'finite'（t_F あり）| 'censored'（終端まで残る）| 'never_entangled'
    """
    kind: str
    t_F: Optional[float] = None
    horizon: Optional[float] = None

    @classmethod
    def finite(cls, t_F: float, horizon: float) -> 'DeathTimeResult':
        return cls(FINITE, t_F, horizon)

    @classmethod
    def censored(cls, horizon: float) -> 'DeathTimeResult':
        return cls(CENSORED, None, horizon)

    @classmethod
    def never(cls, horizon: float) -> 'DeathTimeResult':
        return cls(NEVER, None, horizon)

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def is_censored(self) -> bool:
        return self.kind == CENSORED

    @property
    def value(self) -> float:
        """出力用の数値（censored は inf、never_entangled は NaN）"""
        if self.kind == FINITE:
            return self.t_F
        if self.kind == CENSORED:
            return math.inf
        return math.nan


def _check_physical(sigma: np.ndarray):
    if float(np.min(np.linalg.eigvalsh(sigma))) <= 0:
        raise NonPhysicalState("共分散行列が正定値ではありません")


def symplectic_eigenvalues(
    sigma: CovarianceMatrix,
    partial_transpose: bool = False
) -> Tuple[float, float]:
    """
    シンプレクティック固有値 (ν₋, ν₊)

    2モードの不変量 Δ = det A + det B + 2 det C から
    ν±² = (Δ ± √(Δ² − 4 det σ))/2。部分転置は det C の符号を反転する。

    Raises:
        NonPhysicalState: σ が正定値でない
    """
    s = sigma.sigma
    _check_physical(s)
    det_a = float(np.linalg.det(s[:2, :2]))
    det_b = float(np.linalg.det(s[2:, 2:]))
    det_c = float(np.linalg.det(s[:2, 2:]))
    if partial_transpose:
        det_c = -det_c
    det_s = float(np.linalg.det(s))
    delta = det_a + det_b + 2.0 * det_c
    disc = math.sqrt(max(delta ** 2 - 4.0 * det_s, 0.0))
    nu_plus = math.sqrt(max(0.5 * (delta + disc), 0.0))
    # ν₋ = √det σ / ν₊ は小さい固有値の相殺誤差を避ける
    nu_minus = math.sqrt(max(det_s, 0.0)) / nu_plus
    return nu_minus, nu_plus


def log_negativity(sigma: CovarianceMatrix) -> float:
    """E_N = max(0, −log₂ 2ν̃₋)（ν̃₋ は部分転置後の最小シンプレクティック固有値）"""
    nu_minus, _ = symplectic_eigenvalues(sigma, partial_transpose=True)
    return max(0.0, -math.log2(2.0 * nu_minus))


def purity(sigma: CovarianceMatrix) -> float:
    """Tr ρ² = 1/(4√det σ)"""
    det_s = sigma.determinant
    if det_s <= 0:
        raise NonPhysicalState(f"det σ が正ではありません: {det_s}")
    return 1.0 / (4.0 * math.sqrt(det_s))


def _occupation(sxx: float, spp: float, omega: float) -> float:
    return 0.5 * (omega * sxx + spp / omega) - 0.5


def mode_occupations(sigma: CovarianceMatrix, omega_a: float, omega_b: float) -> Tuple[float, float]:
    """周波数 ω_a, ω_b で定義した各振動子の ⟨a†a⟩"""
    s = sigma.sigma
    return _occupation(s[0, 0], s[1, 1], omega_a), _occupation(s[2, 2], s[3, 3], omega_b)


def twin_correlation(sigma: CovarianceMatrix, omega_a: float, omega_b: float) -> float:
    """
    双子相関 d = ⟨:(n₁ − n₂)²:⟩

    ガウス状態の4次モーメントを Wick 分解して
    d = 2n₁² + |m₁|² + 2n₂² + |m₂|² − 2(n₁n₂ + |c|² + |s|²)
    ここで m = ⟨a²⟩, c = ⟨a₁†a₂⟩, s = ⟨a₁a₂⟩。負なら非古典的。
    """
    if not (omega_a > 0 and omega_b > 0):
        raise SimulationConfigError(f"周波数は正である必要があります: {omega_a}, {omega_b}")
    s = sigma.sigma
    n1, n2 = mode_occupations(sigma, omega_a, omega_b)
    m1 = complex(0.5 * (omega_a * s[0, 0] - s[1, 1] / omega_a), s[0, 1])
    m2 = complex(0.5 * (omega_b * s[2, 2] - s[3, 3] / omega_b), s[2, 3])

    geo = math.sqrt(omega_a * omega_b)
    ratio = math.sqrt(omega_a / omega_b)
    c = 0.5 * complex(geo * s[0, 2] + s[1, 3] / geo, ratio * s[0, 3] - s[1, 2] / ratio)
    pair = 0.5 * complex(geo * s[0, 2] - s[1, 3] / geo, ratio * s[0, 3] + s[1, 2] / ratio)

    return (
        2.0 * n1 ** 2 + abs(m1) ** 2
        + 2.0 * n2 ** 2 + abs(m2) ** 2
        - 2.0 * (n1 * n2 + abs(c) ** 2 + abs(pair) ** 2)
    )


# =====================================
# 消失時刻
# =====================================

def _last_crossing(
    traj: Trajectory,
    quantity: Callable[[CovarianceMatrix], float],
    threshold: float,
    settle_window: float
) -> DeathTimeResult:
    """quantity > threshold となる最後の時刻を求める"""
    if len(traj) == 0:
        raise EmptyTrajectory("空の軌道です")
    if not threshold > 0:
        raise SimulationConfigError(f"threshold は正である必要があります: {threshold}")
    horizon = traj.horizon
    if len(traj) > 1 and not settle_window < horizon:
        raise SimulationConfigError(f"settle_window ({settle_window}) は horizon ({horizon}) より短い必要があります")

    values = np.array([quantity(s) for s in traj.states])
    above = np.flatnonzero(values > threshold)
    if above.size == 0:
        return DeathTimeResult.never(horizon)

    last = int(above[-1])
    if traj.times[last] >= horizon - settle_window:
        return DeathTimeResult.censored(horizon)

    # 連続出力上で二分法
    lo, hi = float(traj.times[last]), float(traj.times[last + 1])
    while hi - lo > TIME_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if quantity(traj.sigma_at(mid)) > threshold:
            lo = mid
        else:
            hi = mid
    return DeathTimeResult.finite(0.5 * (lo + hi), horizon)


def death_time(
    traj: Trajectory,
    threshold: float = DEFAULT_THRESHOLD,
    settle_window: float = DEFAULT_SETTLE_WINDOW
) -> DeathTimeResult:
    """
    エンタングルメント消失時刻 t_F

    最後に E_N > threshold となるサンプルから次のサンプルまでを二分法で 1e-3 まで詰める。
    終端の settle_window 内に E_N > threshold があれば CensoredAtHorizon。

    Raises:
        EmptyTrajectory: サンプルがない
    """
    return _last_crossing(traj, log_negativity, threshold, settle_window)


def last_nonclassical_time(
    traj: Trajectory,
    omega_a: float,
    omega_b: float,
    threshold: float = DEFAULT_THRESHOLD,
    settle_window: float = DEFAULT_SETTLE_WINDOW
) -> DeathTimeResult:
    """max(0, −d) > threshold となる最後の時刻（death_time と同じ判定）"""
    return _last_crossing(
        traj,
        lambda s: max(0.0, -twin_correlation(s, omega_a, omega_b)),
        threshold,
        settle_window,
    )
