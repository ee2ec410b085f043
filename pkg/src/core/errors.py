# -*- coding: utf-8 -*-
"""
シミュレーション例外の定義

設定・入力の誤り（終了コード1）と数値計算の失敗（終了コード2）を
2系統の基底クラスで区別する。
"""


class SimulationConfigError(ValueError):
    """設定・パラメータの誤り（CLI 終了コード 1）"""


class NumericalError(RuntimeError):
    """数値計算の失敗（CLI 終了コード 2）"""


# =====================================
# パラメータ検証
# =====================================

class UnstablePotential(SimulationConfigError):
    """|λ| ≥ ω₁ω₂ で Ω₋ が虚数になる（軌道が発散する）"""


class NonPositiveFrequency(SimulationConfigError):
    """振動子の周波数が 0 以下"""


class NegativeFrequency(SimulationConfigError):
    """スペクトル密度を負の周波数で評価しようとした"""


class MismatchedParams(SimulationConfigError):
    """異なる (モード, 浴) 構成から得た係数セットを組み合わせた"""


# =====================================
# 数値計算
# =====================================

class QuadratureFailure(NumericalError):
    """適応積分が要求精度に収束しなかった"""


class MatsubaraNonconvergence(NumericalError):
    """松原級数が N_max 項以内に収束しなかった"""


class StepSizeUnderflow(NumericalError):
    """積分器のステップ幅がアンダーフローした（硬い・不安定な構成）"""


class NonFiniteState(NumericalError):
    """共分散行列に NaN / inf が現れた"""


class NotDissipative(NumericalError):
    """ドリフト行列が Hurwitz でなく定常状態が存在しない"""


class NonPhysicalState(NumericalError):
    """共分散行列が正定値でない"""


class EmptyTrajectory(NumericalError):
    """サンプルを1つも含まない軌道"""
