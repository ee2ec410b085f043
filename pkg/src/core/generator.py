# -*- coding: utf-8 -*-
"""
2次モーメント方程式の生成

dσ/dt = Mσ + σMᵀ + N をマスター方程式の係数から組み立てる。

浴の接続は結合重み行列 W（行 = 浴、列 = 振動子）で表し、
浴 k の結合演算子は Σ_a W_ka·x_a。全ての浴が同じスペクトルを持つので、
有効係数は G·X（G = WᵀW、X は CoeffSet の 2×2 行列）になる。

- 別々の浴: W = diag(c₁, c₂)
- 共通の浴: W = [[c₁, c₂]]（Common は c₁ = c₂ = 1）

マスター方程式（有効係数 E, D, Γ, F）:
    dρ/dt = −i[H, ρ] − ½Σ_ab { iE_ab[x_a,{x_b,ρ}] + D_ab[x_a,[x_b,ρ]]
                              + iΓ_ab[x_a,{p_b,ρ}] − F_ab[x_a,[p_b,ρ]] }
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .errors import SimulationConfigError
from .bath import CoeffSet, CoeffSchedule
from .model import NormalModeData, ValidatedParams, X_INDEX, P_INDEX, potential_matrix

logger = logging.getLogger(__name__)

SEPARATE = 'separate'
COMMON = 'common'
WEIGHTED_COMMON = 'weighted_common'


@dataclass(frozen=True)
class BathTopology:
    """
    浴の接続形態

    variant: 'separate' | 'common' | 'weighted_common'
    c1, c2: 結合重み（実効的な γᵢ = cᵢ²γ）
    """
    variant: str = SEPARATE
    c1: float = 1.0
    c2: float = 1.0

    def __post_init__(self):
        if self.variant not in (SEPARATE, COMMON, WEIGHTED_COMMON):
            raise SimulationConfigError(f"不明な浴の接続形態: {self.variant}")
        if self.variant == COMMON and (self.c1, self.c2) != (1.0, 1.0):
            raise SimulationConfigError("Common は重み (1, 1) 固定です。weighted_common を使用してください")
        if not self.c1 ** 2 + self.c2 ** 2 > 0:
            raise SimulationConfigError(f"結合重みが全て 0 です: ({self.c1}, {self.c2})")

    @classmethod
    def separate(cls, c1: float = 1.0, c2: float = 1.0) -> 'BathTopology':
        return cls(SEPARATE, c1, c2)

    @classmethod
    def common(cls) -> 'BathTopology':
        return cls(COMMON, 1.0, 1.0)

    @classmethod
    def weighted_common(cls, c1: float, c2: float) -> 'BathTopology':
        return cls(WEIGHTED_COMMON, c1, c2)

    @property
    def is_common(self) -> bool:
        return self.variant != SEPARATE

    @property
    def weights(self) -> np.ndarray:
        """結合重み行列 W（浴 × 振動子）"""
        if self.is_common:
            return np.array([[self.c1, self.c2]])
        return np.diag([self.c1, self.c2])

    @property
    def gram(self) -> np.ndarray:
        """G = WᵀW"""
        w = self.weights
        return w.T @ w

    def label(self) -> str:
        if self.variant == WEIGHTED_COMMON:
            return f"{self.variant}({self.c1:g},{self.c2:g})"
        return self.variant


@dataclass(frozen=True)
class MomentGenerator:
    """
    モーメント方程式 dσ/dt = Mσ + σMᵀ + N

    time_dependent のとき coeff_source(t) から (M, N) を組み立て直す。
    M, N にはマルコフ極限（時間依存でないとき）または t → ∞ の値を保持する。
    """
    M: np.ndarray
    N: np.ndarray
    time_dependent: bool = False
    coeff_source: Optional[Callable[[float], CoeffSet]] = None
    params: Optional[ValidatedParams] = None
    topology: Optional[BathTopology] = None
    coeffs: Optional[CoeffSet] = field(default=None, repr=False)

    def __post_init__(self):
        for name in ('M', 'N'):
            value = np.array(getattr(self, name), dtype=float, copy=True)
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        if self.time_dependent and self.coeff_source is None:
            raise SimulationConfigError("時間依存の生成子には係数の供給元が必要です")

    def at(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        """時刻 t の (M, N)"""
        if not self.time_dependent:
            return self.M, self.N
        return assemble_matrices(self.coeff_source(t), self.params, self.topology)

    def rhs(self, t: float, sigma: np.ndarray) -> np.ndarray:
        """Mσ + σMᵀ + N（対称化して返す）"""
        m, n = self.at(t)
        drift = m @ sigma
        out = drift + drift.T + n
        return 0.5 * (out + out.T)


def hamiltonian_drift(p: ValidatedParams, shift: Optional[np.ndarray] = None) -> np.ndarray:
    """
    閉じた系のドリフト行列

    dx_c/dt = p_c,  dp_c/dt = −Σ_b (V + shift)_cb x_b
    """
    v = potential_matrix(p)
    if shift is not None:
        v = v + shift
    m = np.zeros((4, 4))
    for c in range(2):
        m[X_INDEX[c], P_INDEX[c]] = 1.0
        for b in range(2):
            m[P_INDEX[c], X_INDEX[b]] = -v[c, b]
    return m


def assemble_matrices(
    c: CoeffSet,
    p: ValidatedParams,
    topology: BathTopology
) -> Tuple[np.ndarray, np.ndarray]:
    """
    係数セットと接続形態から (M, N) を組み立てる

    有効係数 Ẽ = G·ε², D̃ = G·D, Γ̃ = G·Γ, F̃ = G·F について:
    - dp_c/dt の x_b 係数に −Ẽ_cb、p_b 係数に −Γ̃_cb
    - N[p_i, p_j] = (D̃_ij + D̃_ji)/2
    - N[x_i, p_j] = N[p_j, x_i] = F̃_ji/2
    """
    g = topology.gram
    eps2 = g @ c.eps2
    diff = g @ c.D
    fric = g @ c.F
    damp = g @ c.Gamma

    m = hamiltonian_drift(p, eps2)
    for a in range(2):
        for b in range(2):
            m[P_INDEX[a], P_INDEX[b]] = -damp[a, b]

    n = np.zeros((4, 4))
    sym_d = 0.5 * (diff + diff.T)
    for i in range(2):
        for j in range(2):
            n[P_INDEX[i], P_INDEX[j]] = sym_d[i, j]
            n[X_INDEX[i], P_INDEX[j]] = 0.5 * fric[j, i]
            n[P_INDEX[j], X_INDEX[i]] = 0.5 * fric[j, i]
    return m, n


def build(c: CoeffSet, p: ValidatedParams, topology: BathTopology) -> MomentGenerator:
    """
    任意の接続形態の生成子を組み立てる（時間非依存）

    Args:
        c: 係数セット（通常はくりこみ済み）
        p: 検証済みパラメータ
        topology: 浴の接続形態
    """
    m, n = assemble_matrices(c, p, topology)
    return MomentGenerator(M=m, N=n, params=p, topology=topology, coeffs=c)


def build_separate(
    c: CoeffSet,
    p: ValidatedParams,
    topology: Optional[BathTopology] = None
) -> MomentGenerator:
    """別々の浴（既定は重み (1, 1)）の生成子"""
    topology = topology or BathTopology.separate()
    if topology.is_common:
        raise SimulationConfigError(f"build_separate に共通浴の接続形態が渡されました: {topology.variant}")
    return build(c, p, topology)


def build_common(c: CoeffSet, p: ValidatedParams, w: BathTopology) -> MomentGenerator:
    """共通の浴（Common / WeightedCommon）の生成子"""
    if not w.is_common:
        raise SimulationConfigError("build_common には Common または WeightedCommon が必要です")
    return build(c, p, w)


def build_time_dependent(
    schedule: CoeffSchedule,
    p: ValidatedParams,
    topology: BathTopology
) -> MomentGenerator:
    """
    非マルコフ係数スケジュールから時間依存の生成子を作る

    M, N には記憶時間以降の値（くりこみ済みマルコフ極限）を入れておく。
    """
    c_late = schedule.coeffs(schedule.memory_time)
    m, n = assemble_matrices(c_late, p, topology)
    return MomentGenerator(
        M=m,
        N=n,
        time_dependent=True,
        coeff_source=schedule.coeffs,
        params=p,
        topology=topology,
        coeffs=c_late,
    )


def mode_block_rates(g: MomentGenerator, modes: NormalModeData, t: Optional[float] = None) -> Dict[str, Dict[str, float]]:
    """
    基準モード Q₋, Q₊ が浴から受ける散逸とゆらぎの大きさ

    散逸部分 M − M_H と N を基準モード座標 (Q₋, P₋, Q₊, P₊) に回転し、
    各モードの運動量の行（damping）と、そのモードの周辺ブロックの N（diffusion）の最大絶対値を返す。
    θ = π/4 のとき Q± は x± = (x₁ ± x₂)/√2 に一致する。

    Returns:
        {'minus': {'damping', 'diffusion'}, 'plus': {...}}
    """
    m, n = g.at(t) if t is not None else (g.M, g.N)
    dissipative = m - hamiltonian_drift(g.params)
    # 周波数シフトは除く
    for c in range(2):
        for b in range(2):
            dissipative[P_INDEX[c], X_INDEX[b]] = 0.0

    rot = modes.rotation
    t_mat = np.zeros((4, 4))
    t_mat[np.ix_(X_INDEX, X_INDEX)] = rot
    t_mat[np.ix_(P_INDEX, P_INDEX)] = rot
    m_modes = t_mat @ dissipative @ t_mat.T
    n_modes = t_mat @ n @ t_mat.T

    rates = {}
    for k, name in enumerate(('minus', 'plus')):
        rows = [X_INDEX[k], P_INDEX[k]]
        rates[name] = {
            'damping': float(np.max(np.abs(m_modes[P_INDEX[k], :]))),
            'diffusion': float(np.max(np.abs(n_modes[np.ix_(rows, rows)]))),
        }
    return rates
