# -*- coding: utf-8 -*-
"""
結合振動子モデル

2つの位置結合した調和振動子のパラメータ検証、基準モード（θ, Ω±, Q±）、
初期ガウス状態の共分散行列を扱う。

単位系: ω₁ = ħ = m = 1。全ての量は ω₁ に対する比で与える。
位相空間の並びは z = (x₁, p₁, x₂, p₂)。
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import UnstablePotential, NonPositiveFrequency, NonPhysicalState

# z = (x₁, p₁, x₂, p₂) の添字
X_INDEX = (0, 2)
P_INDEX = (1, 3)

# 正準変換 U: x₂ → −x₂, p₂ → −p₂
SIGN_FLIP = np.diag([1.0, 1.0, -1.0, -1.0])

# シンプレクティック形式 Σ（モードごとに [[0,1],[-1,0]]）
SYMPLECTIC_FORM = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])


def _frozen(array) -> np.ndarray:
    """読み取り専用の float 配列コピーを返す"""
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SystemParams:
    """
    振動子系のパラメータ

    omega1 は規約により 1.0。lam は結合定数 λ（単位 ω₁²）。
    """
    omega1: float = 1.0
    omega2: float = 1.0
    lam: float = 0.0
    mass: float = 1.0


@dataclass(frozen=True)
class ValidatedParams(SystemParams):
    """validate_params を通過したパラメータ"""


@dataclass(frozen=True)
class NormalModeData:
    """
    基準モードのデータ

    rotation は (x₁, x₂) → (Q₋, Q₊) の直交行列。
    """
    theta: float
    omega_plus: float
    omega_minus: float
    rotation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'rotation', _frozen(self.rotation))


@dataclass(frozen=True)
class CovarianceMatrix:
    """
    2モードガウス状態の共分散行列

    σ_ab = ⟨{z_a, z_b}⟩/2（平均ゼロ）。生成時に対称化し、読み取り専用にする。
    """
    sigma: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.shape != (4, 4):
            raise NonPhysicalState(f"共分散行列は 4×4 である必要があります: {sigma.shape}")
        if not np.all(np.isfinite(sigma)):
            raise NonPhysicalState("共分散行列に有限でない要素があります")
        object.__setattr__(self, 'sigma', _frozen(0.5 * (sigma + sigma.T)))

    def transformed(self, matrix: np.ndarray) -> 'CovarianceMatrix':
        """S σ Sᵀ を返す"""
        return CovarianceMatrix(matrix @ self.sigma @ matrix.T)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.sigma))


# =====================================
# パラメータ
# =====================================

def validate_params(p: SystemParams) -> ValidatedParams:
    """
    パラメータを検証する

    Args:
        p: 振動子系のパラメータ

    Returns:
        検証済みパラメータ（値は変更しない）

    Raises:
        NonPositiveFrequency: ω₁ ≤ 0 または ω₂ ≤ 0
        UnstablePotential: |λ| ≥ ω₁ω₂（Ω₋ が虚数）
    """
    if isinstance(p, ValidatedParams):
        return p
    if not (p.omega1 > 0) or not (p.omega2 > 0):
        raise NonPositiveFrequency(
            f"周波数は正である必要があります: ω₁={p.omega1}, ω₂={p.omega2}"
        )
    if abs(p.lam) >= p.omega1 * p.omega2:
        raise UnstablePotential(
            f"|λ|={abs(p.lam)} が ω₁ω₂={p.omega1 * p.omega2} 以上です（軌道が発散します）"
        )
    return ValidatedParams(omega1=p.omega1, omega2=p.omega2, lam=p.lam, mass=p.mass)


def potential_matrix(p: SystemParams) -> np.ndarray:
    """ポテンシャル行列 V = [[ω₁², λ], [λ, ω₂²]]"""
    return np.array([
        [p.omega1 ** 2, p.lam],
        [p.lam, p.omega2 ** 2],
    ])


def normal_modes(p: ValidatedParams) -> NormalModeData:
    """
    基準モードを計算する

    θ = ½·atan2(2λ, ω₂²−ω₁²) とすることで ω₁ = ω₂ でも定義でき、
    λ > 0 では θ = π/4 になる。
    Q₊ = cosθ·x₂ + sinθ·x₁,  Q₋ = cosθ·x₁ − sinθ·x₂

    Args:
        p: 検証済みパラメータ

    Returns:
        基準モードのデータ
    """
    p = validate_params(p)
    w1sq, w2sq = p.omega1 ** 2, p.omega2 ** 2
    theta = 0.5 * math.atan2(2.0 * p.lam, w2sq - w1sq)

    mean = 0.5 * (w1sq + w2sq)
    half_split = 0.5 * math.sqrt(4.0 * p.lam ** 2 + (w2sq - w1sq) ** 2)
    omega_plus = math.sqrt(mean + half_split)
    # Ω₋² = det V / Ω₊² は相殺誤差を避ける
    omega_minus = math.sqrt((w1sq * w2sq - p.lam ** 2) / (mean + half_split))

    c, s = math.cos(theta), math.sin(theta)
    rotation = np.array([
        [c, -s],   # Q₋
        [s, c],    # Q₊
    ])
    return NormalModeData(
        theta=theta,
        omega_plus=omega_plus,
        omega_minus=omega_minus,
        rotation=rotation,
    )


def decoupling_weights(modes: NormalModeData) -> Tuple[float, float]:
    """
    共通浴で Q₊ を浴から切り離す結合重み (c₁, c₂) を返す

    c₁x₁ + c₂x₂ = (c₁cosθ − c₂sinθ)Q₋ + (c₁sinθ + c₂cosθ)Q₊ なので
    (c₁, c₂) = (cosθ, −sinθ) で Q₊ の係数が消え、cosθ = c₁/√(c₁²+c₂²) を満たす。
    """
    return math.cos(modes.theta), -math.sin(modes.theta)


# =====================================
# 初期状態
# =====================================

def _squeezed_along(axes: np.ndarray, r: float, omega_ref: float) -> CovarianceMatrix:
    """
    直交する2軸に沿って一方をスクイーズ、他方を伸長した純粋状態

    Args:
        axes: 2×2 直交行列。行0がスクイーズ軸、行1が伸長軸（x₁, x₂ 成分）
        r: スクイーズ量
        omega_ref: 真空を定義する周波数
    """
    if not omega_ref > 0:
        raise NonPositiveFrequency(f"omega_ref は正である必要があります: {omega_ref}")
    x_diag = np.diag([math.exp(-2.0 * r), math.exp(2.0 * r)]) / (2.0 * omega_ref)
    p_diag = np.diag([math.exp(2.0 * r), math.exp(-2.0 * r)]) * (omega_ref / 2.0)
    x_block = axes.T @ x_diag @ axes
    p_block = axes.T @ p_diag @ axes

    sigma = np.zeros((4, 4))
    sigma[np.ix_(X_INDEX, X_INDEX)] = x_block
    sigma[np.ix_(P_INDEX, P_INDEX)] = p_block
    return CovarianceMatrix(sigma)


def tms_covariance(r: float, omega_ref: float = 1.0) -> CovarianceMatrix:
    """
    2モードスクイーズド状態の共分散行列

    x₊ = (x₁+x₂)/√2 を e^(−2r) でスクイーズ、x₋ = (x₁−x₂)/√2 を e^(2r) で伸長する。
    運動量は共役に変換される。r = 0 で omega_ref の真空。

    Args:
        r: スクイーズ量（負なら役割が入れ替わる）
        omega_ref: モード演算子を定義する周波数

    Returns:
        純粋状態の共分散行列
    """
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    axes = np.array([
        [inv_sqrt2, inv_sqrt2],    # x₊
        [inv_sqrt2, -inv_sqrt2],   # x₋
    ])
    return _squeezed_along(axes, r, omega_ref)


def normal_mode_squeezed_covariance(
    r: float,
    modes: NormalModeData,
    omega_ref: float = 1.0
) -> CovarianceMatrix:
    """
    基準モード軸に沿ったスクイーズド状態

    Q₊ をスクイーズ、Q₋ を伸長する。共鳴（θ = π/4）では tms_covariance と一致する。
    Q₊ を浴から切り離したとき、切り離されたモードが純粋状態のまま残る。
    """
    axes = np.array([
        modes.rotation[1],   # Q₊
        modes.rotation[0],   # Q₋
    ])
    return _squeezed_along(axes, r, omega_ref)


def vacuum_covariance(omega_a: float = 1.0, omega_b: float = 1.0) -> CovarianceMatrix:
    """各振動子の周波数で定義した真空状態"""
    return thermal_covariance(0.0, 0.0, omega_a, omega_b)


def thermal_covariance(
    n1: float,
    n2: float,
    omega_a: float = 1.0,
    omega_b: float = 1.0
) -> CovarianceMatrix:
    """
    熱的状態の直積

    Args:
        n1, n2: 各振動子の平均占有数
        omega_a, omega_b: 各振動子の周波数
    """
    if not (omega_a > 0 and omega_b > 0):
        raise NonPositiveFrequency(f"周波数は正である必要があります: {omega_a}, {omega_b}")
    a = n1 + 0.5
    b = n2 + 0.5
    return CovarianceMatrix(np.diag([a / omega_a, a * omega_a, b / omega_b, b * omega_b]))


def sign_flip(sigma: CovarianceMatrix) -> CovarianceMatrix:
    """正準変換 U（x₂, p₂ の符号反転）を共分散行列に適用する"""
    return sigma.transformed(SIGN_FLIP)
