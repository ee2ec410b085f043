# -*- coding: utf-8 -*-
"""
オーミック浴（Lorentz-Drude カットオフ）とマスター方程式係数

機能:
- スペクトル密度 J(Ω) = (2γ/π)·Ω·Λ²/(Λ²+Ω²)
- 浴相関関数 C^C(τ), C^A(τ)（松原展開 / 指数積分 / 直接数値積分）
- 有限時間（非マルコフ）係数 ε², D, F, Γ とそのマルコフ極限
- カウンター項による周波数くりこみ
- 伝搬用の係数スケジュール（格子上の事前計算 + 3次スプライン）

係数はモード周波数 Ω ごとのスカラー関数 f(Ω, t) の組として計算し、
行列 X = Rᵀ·diag(f(Ω₋), f(Ω₊))·R に組み立てる（R は基準モード回転）。
"""

import math
import logging
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import integrate, special
from scipy.interpolate import CubicSpline

from .errors import (
    SimulationConfigError,
    NegativeFrequency,
    MismatchedParams,
    QuadratureFailure,
    MatsubaraNonconvergence,
)
from .model import NormalModeData

logger = logging.getLogger(__name__)

# 松原級数の打ち切り
MATSUBARA_RTOL = 1e-10
MATSUBARA_NMAX = 10 ** 6
MATSUBARA_CHUNK = 4096

# 適応積分の許容誤差
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-9
QUAD_LIMIT = 400

# 係数の種類（CoeffSet のフィールド順）
COEFF_KINDS = ('eps2', 'D', 'F', 'Gamma')


@dataclass(frozen=True)
class BathParams:
    """
    浴のパラメータ（単位 ω₁）

    gamma: 結合強度 γ、cutoff: カットオフ Λ、kT: 温度 k_BT
    """
    gamma: float = 0.001
    cutoff: float = 50.0
    kT: float = 10.0

    def __post_init__(self):
        if not self.gamma >= 0:
            raise SimulationConfigError(f"gamma は 0 以上である必要があります: {self.gamma}")
        if not self.cutoff > 0:
            raise SimulationConfigError(f"cutoff は正である必要があります: {self.cutoff}")
        if not self.kT >= 0:
            raise SimulationConfigError(f"kT は 0 以上である必要があります: {self.kT}")

    @property
    def nu1(self) -> float:
        """最初の松原周波数 ν₁ = 2πk_BT"""
        return 2.0 * math.pi * self.kT


@dataclass(frozen=True)
class CoeffSet:
    """
    マスター方程式の係数（1つの浴あたり、2×2 行列 ×4）

    time が None のときマルコフ極限。source は (θ, Ω₊, Ω₋, γ, Λ, k_BT)。
    """
    eps2: np.ndarray
    D: np.ndarray
    F: np.ndarray
    Gamma: np.ndarray
    time: Optional[float]
    source: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        for name in COEFF_KINDS:
            value = np.array(getattr(self, name), dtype=float, copy=True)
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def is_markovian(self) -> bool:
        return self.time is None

    def scaled(self, factor: float) -> 'CoeffSet':
        """全係数を factor 倍した係数セット"""
        return CoeffSet(
            eps2=self.eps2 * factor,
            D=self.D * factor,
            F=self.F * factor,
            Gamma=self.Gamma * factor,
            time=self.time,
            source=self.source,
        )


def _source_key(m: NormalModeData, b: BathParams) -> Tuple[float, ...]:
    return (m.theta, m.omega_plus, m.omega_minus, b.gamma, b.cutoff, b.kT)


# =====================================
# スペクトル密度と相関関数
# =====================================

def spectral_density(Omega, b: BathParams):
    """
    Lorentz-Drude オーミックスペクトル密度

    Args:
        Omega: 周波数（スカラーまたは配列、0 以上）
        b: 浴のパラメータ

    Returns:
        J(Ω)（単位 ω₁²）

    Raises:
        NegativeFrequency: Ω < 0
    """
    omega = np.asarray(Omega, dtype=float)
    if np.any(omega < 0):
        raise NegativeFrequency(f"負の周波数でスペクトル密度は定義されません: {Omega}")
    lam2 = b.cutoff ** 2
    value = (2.0 * b.gamma / math.pi) * omega * lam2 / (lam2 + omega ** 2)
    return float(value) if value.ndim == 0 else value


def _effective_kT(b: BathParams) -> float:
    """
    松原周波数 ν_n がカットオフ Λ と一致する場合は k_BT をわずかにずらす

    一致点では cot(Λ/2k_BT) と ν_n 項の極が打ち消し合うが、個別には発散する。
    """
    if b.kT == 0:
        return 0.0
    ratio = b.cutoff / b.nu1
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) < 1e-9 * ratio:
        shifted = b.kT * (1.0 + 1e-7)
        logger.warning(
            f"ν_{nearest} = Λ の極が重なるため k_BT を {b.kT} → {shifted} に補正しました"
        )
        return shifted
    return b.kT


def matsubara_terms(b: BathParams, n_terms: int) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    C^A(τ) の指数分解 C^A(τ) = A₀e^(−Λτ) + Σₙ Aₙe^(−νₙτ)

    A₀ = γΛ²cot(Λ/2k_BT),  Aₙ = 4γk_BTΛ²νₙ/(νₙ²−Λ²),  νₙ = 2πnk_BT

    Args:
        b: 浴のパラメータ（k_BT > 0）
        n_terms: 松原項の数

    Returns:
        (A₀, νₙ 配列, Aₙ 配列)
    """
    kT = _effective_kT(b)
    if kT <= 0:
        raise SimulationConfigError("松原展開は k_BT > 0 でのみ定義されます")
    lam = b.cutoff
    a0 = b.gamma * lam ** 2 / math.tan(lam / (2.0 * kT))
    n = np.arange(1, n_terms + 1, dtype=float)
    nu = 2.0 * math.pi * kT * n
    amps = 4.0 * b.gamma * kT * lam ** 2 * nu / (nu ** 2 - lam ** 2)
    return a0, nu, amps


def kernel_cc(tau: float, b: BathParams) -> complex:
    """
    C^C(τ) = −i∫J(Ω)sinΩτ dΩ = −iγΛ²e^(−Λτ)（Lorentz-Drude の閉形式）
    """
    if tau < 0:
        raise SimulationConfigError(f"τ は 0 以上である必要があります: {tau}")
    return -1j * b.gamma * b.cutoff ** 2 * math.exp(-b.cutoff * tau)


def _kernel_ca_zero_temperature(tau):
    """
    k_BT = 0 の C^A(τ)/(γΛ²/π) を x = Λτ の関数として返す（x > 0）

    −[e^(−x)Ei(x) − e^(x)E₁(x)]。大きな x では代数的な裾 −2/x² − 12/x⁴ − … を使う。
    """
    x = np.asarray(tau, dtype=float)
    out = np.empty_like(x)
    large = x > 200.0
    xs = x[~large]
    out[~large] = -(np.exp(-xs) * special.expi(xs) - np.exp(xs) * special.exp1(xs))
    xl = x[large]
    inv2 = 1.0 / xl ** 2
    out[large] = -2.0 * inv2 * (1.0 + inv2 * (6.0 + inv2 * (120.0 + inv2 * (5040.0 + 362880.0 * inv2))))
    return out


def kernel_ca(tau: float, b: BathParams) -> float:
    """
    C^A(τ) = ∫J(Ω)cosΩτ·coth(Ω/2k_BT) dΩ

    k_BT > 0 では松原展開を使う。Aₙ ~ (2γΛ²/π)/n の主要部は
    −(2γΛ²/π)·ln(1 − e^(−2πk_BTτ)) として解析的に和をとり、
    ~ 1/n³ の残差を相対裾 < 1e-10 まで足す（小さな τ でも収束する）。
    k_BT = 0 では指数積分による閉形式（代数的減衰 ~ −2γ/(πτ²)）。
    τ = 0 では対数発散するので inf を返す。

    Raises:
        MatsubaraNonconvergence: N_max 項で収束しない
    """
    if tau < 0:
        raise SimulationConfigError(f"τ は 0 以上である必要があります: {tau}")
    if tau == 0:
        return math.inf
    prefactor = b.gamma * b.cutoff ** 2
    if b.kT == 0:
        return float(prefactor / math.pi * _kernel_ca_zero_temperature(np.array([b.cutoff * tau]))[0])

    kT = _effective_kT(b)
    lam2 = b.cutoff ** 2
    a0, _, _ = matsubara_terms(b, 1)
    x = 2.0 * math.pi * kT * tau
    leading = 2.0 * prefactor / math.pi
    total = a0 * math.exp(-b.cutoff * tau) - leading * math.log(-math.expm1(-x))
    q = math.exp(-x)
    start = 1
    while start <= MATSUBARA_NMAX:
        stop = min(start + MATSUBARA_CHUNK, MATSUBARA_NMAX + 1)
        n = np.arange(start, stop, dtype=float)
        nu = 2.0 * math.pi * kT * n
        residual = leading / n * lam2 / (nu ** 2 - lam2) * np.exp(-nu * tau)
        total += float(np.sum(residual))
        # 等比（e^(−x)）と 1/n³ の裾のうち小さい方で抑える
        ratio = q / (1.0 - q) if q < 1.0 else math.inf
        tail = abs(residual[-1]) * min(ratio, n[-1] / 2.0)
        if tail <= MATSUBARA_RTOL * abs(total):
            return total
        start = stop
    raise MatsubaraNonconvergence(f"C^A(τ={tau}) の松原級数が {MATSUBARA_NMAX} 項で収束しません")


def _quad(func: Callable[[float], float], lower: float, upper: float, **kwargs) -> float:
    """scipy.integrate.quad の薄いラッパー（警告を QuadratureFailure に変換）"""
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(
                func, lower, upper,
                epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, **kwargs
            )
        except integrate.IntegrationWarning as e:
            raise QuadratureFailure(f"適応積分が収束しません [{lower}, {upper}]: {e}")
    return value


def kernel_ca_quadrature(tau: float, b: BathParams) -> float:
    """
    C^A(τ) を定義式の直接数値積分で評価する（検証用オラクル）

    Raises:
        QuadratureFailure: 適応積分が収束しない
    """
    if tau <= 0:
        raise SimulationConfigError(f"直接積分は τ > 0 でのみ評価できます: {tau}")
    lam2 = b.cutoff ** 2
    prefactor = 2.0 * b.gamma / math.pi

    def weight(omega: float) -> float:
        # Ω·coth(Ω/2k_BT)、Ω → 0 で 2k_BT
        if b.kT == 0:
            thermal = omega
        elif omega < 1e-8 * b.kT:
            thermal = 2.0 * b.kT
        else:
            thermal = omega / math.tanh(omega / (2.0 * b.kT))
        return prefactor * thermal * lam2 / (lam2 + omega ** 2)

    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(weight, 0.0, np.inf, weight='cos', wvar=tau, limlst=200)
        except integrate.IntegrationWarning as e:
            raise QuadratureFailure(f"C^A(τ={tau}) の直接積分が収束しません: {e}")
    return value


# =====================================
# 周波数ごとの係数関数 f(Ω, t)
# =====================================

def _cos_tail(a, omega: float, t):
    """∫_t^∞ e^(−aτ)cosΩτ dτ"""
    return np.exp(-a * t) * (a * np.cos(omega * t) - omega * np.sin(omega * t)) / (a ** 2 + omega ** 2)


def _sin_tail(a, omega: float, t):
    """∫_t^∞ e^(−aτ)sinΩτ dτ"""
    return np.exp(-a * t) * (a * np.sin(omega * t) + omega * np.cos(omega * t)) / (a ** 2 + omega ** 2)


def _markovian_d(omega: float, b: BathParams) -> float:
    """D の極限: (π/2)·J(Ω)·coth(Ω/2k_BT)（デルタ関数の恒等式）"""
    thermal = 1.0 if b.kT == 0 else 1.0 / math.tanh(omega / (2.0 * b.kT))
    return 0.5 * math.pi * spectral_density(omega, b) * thermal


def _markovian_f(omega: float, b: BathParams) -> float:
    """
    F の極限: 主値積分 P∫J(Ω')coth(Ω'/2k_BT)/(Ω²−Ω'²) dΩ'

    k_BT > 0 では松原展開 A₀/(Λ²+Ω²) + Σ Aₙ/(νₙ²+Ω²) を評価する。
    Aₙ/(νₙ²+Ω²) ~ C/n³ の漸近部分は ζ(3) で解析的に和をとり、残差を相対増分 < 1e-10 まで足す。
    k_BT = 0 では閉形式 (2γΛ²/π)·ln(Ω/Λ)/(Λ²+Ω²)。
    """
    lam2 = b.cutoff ** 2
    if b.kT == 0:
        return 2.0 * b.gamma * lam2 / math.pi * math.log(omega / b.cutoff) / (lam2 + omega ** 2)

    kT = _effective_kT(b)
    a0, _, _ = matsubara_terms(b, 1)
    leading = 4.0 * b.gamma * kT * lam2 / (2.0 * math.pi * kT) ** 3
    total = a0 / (lam2 + omega ** 2) + leading * float(special.zeta(3.0, 1.0))

    start = 1
    while start <= MATSUBARA_NMAX:
        stop = min(start + MATSUBARA_CHUNK, MATSUBARA_NMAX + 1)
        n = np.arange(start, stop, dtype=float)
        nu = 2.0 * math.pi * kT * n
        amps = 4.0 * b.gamma * kT * lam2 * nu / (nu ** 2 - lam2)
        residual = amps / (nu ** 2 + omega ** 2) - leading / n ** 3
        total += float(np.sum(residual))
        # 残差 ~ 1/n⁵ の裾は最後の項 × n/4 で抑えられる
        tail = abs(residual[-1]) * n[-1] / 4.0
        if abs(residual[-1]) <= MATSUBARA_RTOL * abs(total) and tail <= MATSUBARA_RTOL * abs(total):
            return total
        start = stop
    raise MatsubaraNonconvergence(f"F(Ω={omega}) の松原級数が {MATSUBARA_NMAX} 項で収束しません")


def markovian_frequency_coeffs(omega: float, b: BathParams) -> Dict[str, float]:
    """
    1つのモード周波数 Ω に対する係数関数のマルコフ極限

    Returns:
        {'eps2', 'D', 'F', 'Gamma'} の辞書
    """
    lam = b.cutoff
    denom = lam ** 2 + omega ** 2
    return {
        'eps2': -b.gamma * lam ** 3 / denom,
        'D': _markovian_d(omega, b),
        'F': _markovian_f(omega, b),
        'Gamma': b.gamma * lam ** 2 / denom,
    }


def _matsubara_remainders(omega: float, t: np.ndarray, b: BathParams, scale: float):
    """
    Σₙ Aₙ·∫_t^∞ e^(−νₙτ)cosΩτ dτ と sin 版を t 配列（全て > 0）について返す

    収束は e^(−ν₁t) の等比で抑えられる。最小の t で裾が scale の 1e-10 未満になるまで足す。
    """
    kT = _effective_kT(b)
    lam2 = b.cutoff ** 2
    t_min = float(np.min(t))
    q = math.exp(-2.0 * math.pi * kT * t_min)
    cos_sum = np.zeros_like(t)
    sin_sum = np.zeros_like(t)

    start = 1
    chunk = max(16, min(MATSUBARA_CHUNK, int(2e6 // max(t.size, 1))))
    while start <= MATSUBARA_NMAX:
        stop = min(start + chunk, MATSUBARA_NMAX + 1)
        nu = 2.0 * math.pi * kT * np.arange(start, stop, dtype=float)
        amps = 4.0 * b.gamma * kT * lam2 * nu / (nu ** 2 - lam2)
        nu_col = nu[np.newaxis, :]
        t_row = t[:, np.newaxis]
        cos_terms = amps * _cos_tail(nu_col, omega, t_row)
        sin_terms = amps * _sin_tail(nu_col, omega, t_row)
        cos_sum += cos_terms.sum(axis=1)
        sin_sum += sin_terms.sum(axis=1)
        last = max(np.max(np.abs(cos_terms[:, -1])), np.max(np.abs(sin_terms[:, -1])) / omega)
        tail = last * q / (1.0 - q) if q < 1.0 else math.inf
        if tail <= MATSUBARA_RTOL * scale:
            return cos_sum, sin_sum
        start = stop
    raise MatsubaraNonconvergence(
        f"t={t_min} の係数の松原級数が {MATSUBARA_NMAX} 項で収束しません"
    )


def _zero_temperature_integrals(omega: float, t: np.ndarray, b: BathParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    k_BT = 0 の ∫₀ᵗ C^A(τ)cosΩτ dτ と ∫₀ᵗ C^A(τ)sinΩτ/Ω dτ

    区間ごとに quad_vec で積分し累積する（τ = 0 の対数特異性は最初の区間のみ）。
    """
    prefactor = b.gamma * b.cutoff ** 2 / math.pi

    def integrand(tau: float) -> np.ndarray:
        kernel = prefactor * _kernel_ca_zero_temperature(np.array([b.cutoff * tau]))[0]
        return kernel * np.array([math.cos(omega * tau), math.sin(omega * tau) / omega])

    order = np.argsort(t)
    edges = np.concatenate(([0.0], t[order]))
    cumulative = np.zeros(2)
    out = np.zeros((t.size, 2))
    for k in range(t.size):
        lo, hi = edges[k], edges[k + 1]
        if hi > lo:
            value, error = integrate.quad_vec(
                integrand, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT
            )
            if not np.all(np.isfinite(value)):
                raise QuadratureFailure(f"k_BT=0 の係数積分が発散しました [{lo}, {hi}]")
            cumulative = cumulative + value
        out[order[k]] = cumulative
    return out[:, 0], out[:, 1]


def frequency_coeffs_series(omega: float, t, b: BathParams) -> Dict[str, np.ndarray]:
    """
    有限時間の係数関数 f(Ω, t)（t はスカラーまたは配列）

    ε², Γ は C^C の閉形式。D, F は極限値から ∫_t^∞ の残差を引く
    （k_BT > 0 は松原展開、k_BT = 0 は数値積分）。t = 0 では全て 0。

    Returns:
        {'eps2', 'D', 'F', 'Gamma'} → t と同じ形の配列
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise SimulationConfigError("t は 0 以上である必要があります")
    lam = b.cutoff
    limit = markovian_frequency_coeffs(omega, b)

    eps2 = -b.gamma * lam ** 2 * (lam / (lam ** 2 + omega ** 2) - _cos_tail(lam, omega, t))
    gamma = b.gamma * lam ** 2 / omega * (omega / (lam ** 2 + omega ** 2) - _sin_tail(lam, omega, t))

    d_coef = np.zeros_like(t)
    f_coef = np.zeros_like(t)
    positive = t > 0
    if np.any(positive) and b.gamma > 0:
        tp = t[positive]
        if b.kT == 0:
            d_coef[positive], f_coef[positive] = _zero_temperature_integrals(omega, tp, b)
        else:
            a0, _, _ = matsubara_terms(b, 1)
            scale = max(abs(limit['D']), abs(limit['F']), 1e-300)
            cos_sum, sin_sum = _matsubara_remainders(omega, tp, b, scale)
            d_coef[positive] = limit['D'] - a0 * _cos_tail(lam, omega, tp) - cos_sum
            f_coef[positive] = limit['F'] - (a0 * _sin_tail(lam, omega, tp) + sin_sum) / omega

    eps2 = np.where(positive, eps2, 0.0)
    gamma = np.where(positive, gamma, 0.0)
    return {'eps2': eps2, 'D': d_coef, 'F': f_coef, 'Gamma': gamma}


def frequency_coeffs_quadrature(omega: float, t: float, b: BathParams) -> Dict[str, float]:
    """
    f(Ω, t) を相関関数 × 三角関数の重みの直接数値積分で評価する（低速な検証モード）

    Raises:
        QuadratureFailure: 適応積分が収束しない
    """
    if t < 0:
        raise SimulationConfigError(f"t は 0 以上である必要があります: {t}")
    if t == 0:
        return {name: 0.0 for name in COEFF_KINDS}

    def cc(tau: float) -> float:
        # C^C = −iK(τ)
        return kernel_cc(tau, b).imag * -1.0

    return {
        'eps2': -_quad(lambda tau: cc(tau) * math.cos(omega * tau), 0.0, t),
        'Gamma': _quad(lambda tau: cc(tau) * math.sin(omega * tau) / omega, 0.0, t),
        'D': _quad(lambda tau: kernel_ca(tau, b) * math.cos(omega * tau), 0.0, t),
        'F': _quad(lambda tau: kernel_ca(tau, b) * math.sin(omega * tau) / omega, 0.0, t),
    }


# =====================================
# 係数セット
# =====================================

def assemble_coeffs(
    m: NormalModeData,
    minus: Dict[str, float],
    plus: Dict[str, float],
    time: Optional[float],
    source: Tuple[float, ...]
) -> CoeffSet:
    """
    周波数ごとの係数関数から 2×2 行列を組み立てる

    X = Rᵀ·diag(f(Ω₋), f(Ω₊))·R は付録の α, β の三角関数の重みそのもので、
    X₂₂(θ) = X₁₁(π/2−θ), X₂₁ = X₁₂ を構造的に満たす。
    """
    rot = m.rotation
    matrices = {
        name: rot.T @ np.diag([float(minus[name]), float(plus[name])]) @ rot
        for name in COEFF_KINDS
    }
    return CoeffSet(time=time, source=source, **matrices)


def coeffs_markovian(m: NormalModeData, b: BathParams) -> CoeffSet:
    """
    係数のマルコフ極限（t → ∞）

    D は (π/2)J(Ω±)coth(Ω±/2k_BT)、Γ は (π/2)J(Ω±)/Ω±、F は松原展開による主値積分。
    ε² も計算して返す（くりこみで落とすかは renormalize が決める）。

    Raises:
        MatsubaraNonconvergence: 松原級数が収束しない
    """
    if not m.omega_minus > 0:
        raise SimulationConfigError(f"Ω₋ は正である必要があります: {m.omega_minus}")
    minus = markovian_frequency_coeffs(m.omega_minus, b)
    plus = markovian_frequency_coeffs(m.omega_plus, b)
    return assemble_coeffs(m, minus, plus, None, _source_key(m, b))


def coeffs_nonmarkovian(
    t: float,
    m: NormalModeData,
    b: BathParams,
    method: str = 'series'
) -> CoeffSet:
    """
    時刻 t の係数（ε²ᵢⱼ = −i∫₀ᵗ αᵢⱼC^C など）

    Args:
        t: 時刻（0 以上）
        m: 基準モード
        b: 浴のパラメータ
        method: 'series'（閉形式 + 松原級数）または 'quadrature'（直接数値積分）

    Raises:
        QuadratureFailure, MatsubaraNonconvergence
    """
    if method == 'series':
        minus = {k: v[0] for k, v in frequency_coeffs_series(m.omega_minus, t, b).items()}
        plus = {k: v[0] for k, v in frequency_coeffs_series(m.omega_plus, t, b).items()}
    elif method == 'quadrature':
        minus = frequency_coeffs_quadrature(m.omega_minus, t, b)
        plus = frequency_coeffs_quadrature(m.omega_plus, t, b)
    else:
        raise SimulationConfigError(f"不明な係数評価法: {method}")
    return assemble_coeffs(m, minus, plus, float(t), _source_key(m, b))


def renormalize(c: CoeffSet, c_inf: CoeffSet) -> CoeffSet:
    """
    カウンター項によるくりこみ ε²(t) → ε²(t) − ε²(∞)

    D, F, Γ は変更しない。マルコフ極限同士なら ε² = 0 になる。

    Raises:
        MismatchedParams: 異なる構成の係数セット
    """
    if c.source != c_inf.source:
        raise MismatchedParams(f"係数セットの構成が一致しません: {c.source} != {c_inf.source}")
    return CoeffSet(
        eps2=c.eps2 - c_inf.eps2,
        D=c.D,
        F=c.F,
        Gamma=c.Gamma,
        time=c.time,
        source=c.source,
    )


# =====================================
# 伝搬用の係数スケジュール
# =====================================

class CoeffSchedule:
    """
    くりこみ済みの非マルコフ係数 CoeffSet(t) を供給するクラス

    機能:
    - 2区間の t 格子上で係数関数を事前計算し 3次スプラインで補間
      （t < 40/Λ は間隔 min(1/Λ, 1/Ω₊)/20、その先は (1/Ω₊)/20）
    - 記憶時間を過ぎたらマルコフ値を返す
      （k_BT > 0: 残差 ~ e^(−min(Λ,ν₁)t) なので 40/min(Λ,ν₁)、k_BT = 0: 代数減衰なので horizon まで）
    - mode='direct' では呼び出しごとに直接数値積分（検証用）
    """

    def __init__(
        self,
        modes: NormalModeData,
        bath: BathParams,
        horizon: float,
        mode: str = 'spline'
    ):
        """
        初期化

        Args:
            modes: 基準モード
            bath: 浴のパラメータ
            horizon: 伝搬の終了時刻
            mode: 'spline' または 'direct'
        """
        if mode not in ('spline', 'direct'):
            raise SimulationConfigError(f"不明なスケジュールモード: {mode}")
        self.modes = modes
        self.bath = bath
        self.mode = mode
        self.markovian = coeffs_markovian(modes, bath)
        self.memory_time = self._memory_time(horizon)
        self.initial_step = 1.0 / (10.0 * bath.cutoff)

        self._spline = None
        self.grid = np.zeros(0)
        if mode == 'spline' and self.memory_time > 0:
            self._build_spline()

    def _memory_time(self, horizon: float) -> float:
        b = self.bath
        if b.gamma == 0:
            return 0.0
        if b.kT == 0:
            return float(horizon)
        return float(min(horizon, 40.0 / min(b.cutoff, b.nu1)))

    def _build_grid(self) -> np.ndarray:
        fine_end = min(40.0 / self.bath.cutoff, self.memory_time)
        fine_step = min(1.0 / self.bath.cutoff, 1.0 / self.modes.omega_plus) / 20.0
        coarse_step = max(fine_step, 1.0 / (20.0 * self.modes.omega_plus))
        fine = np.linspace(0.0, fine_end, int(math.ceil(fine_end / fine_step)) + 1)
        if self.memory_time <= fine_end:
            return fine
        count = int(math.ceil((self.memory_time - fine_end) / coarse_step))
        coarse = np.linspace(fine_end, self.memory_time, count + 1)[1:]
        return np.concatenate((fine, coarse))

    def _build_spline(self):
        self.grid = self._build_grid()
        columns = []
        for omega in (self.modes.omega_minus, self.modes.omega_plus):
            table = frequency_coeffs_series(omega, self.grid, self.bath)
            limit = markovian_frequency_coeffs(omega, self.bath)
            for name in COEFF_KINDS:
                values = table[name]
                if name == 'eps2':
                    # くりこみ済みの ε²(t) − ε²(∞) を補間する
                    values = np.where(self.grid > 0, values, 0.0) - limit['eps2']
                columns.append(values)
        self._spline = CubicSpline(self.grid, np.column_stack(columns), axis=0)
        logger.info(
            f"非マルコフ係数を {self.grid.size} 点で事前計算しました (記憶時間 {self.memory_time:.4g})"
        )

    def coeffs(self, t: float) -> CoeffSet:
        """時刻 t のくりこみ済み係数"""
        if t >= self.memory_time:
            return CoeffSet(
                eps2=np.zeros((2, 2)),
                D=self.markovian.D,
                F=self.markovian.F,
                Gamma=self.markovian.Gamma,
                time=float(t),
                source=self.markovian.source,
            )
        if self.mode == 'direct':
            raw = coeffs_nonmarkovian(t, self.modes, self.bath, method='quadrature')
            return renormalize(raw, self.markovian)

        row = self._spline(t)
        n = len(COEFF_KINDS)
        minus = dict(zip(COEFF_KINDS, row[:n]))
        plus = dict(zip(COEFF_KINDS, row[n:]))
        return assemble_coeffs(self.modes, minus, plus, float(t), self.markovian.source)

    __call__ = coeffs
