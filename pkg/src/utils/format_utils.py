# -*- coding: utf-8 -*-
"""
数値の書式化用のユーティリティ関数
"""

import math
from typing import Any, Dict


def format_float(value: Any) -> str:
    """
    結果ファイル用の数値文字列

    float は repr（往復可能な最短表記）で書き、実行ごとにバイト単位で一致させる。
    inf / nan は 'inf' / 'nan'。

    Args:
        value: 数値・真偽値・文字列

    Returns:
        フォーマット済み文字列
    """
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return repr(value)
    return str(value)


def json_safe(value: Any) -> Any:
    """JSON に書けない inf / nan を文字列にする"""
    if isinstance(value, float) and (math.isinf(value) or math.isnan(value)):
        return format_float(value)
    return value


def format_point(values: Dict[str, float]) -> str:
    """
    グリッド点の表示用文字列

    Args:
        values: 軸名 → 値

    Returns:
        例: "omega2=1.5, lam=0.3"
    """
    return ", ".join(f"{name}={value:.6g}" for name, value in values.items())


def format_duration(seconds: float) -> str:
    """
    経過時間を人間が読みやすい形式に変換

    Args:
        seconds: 秒数

    Returns:
        フォーマット済み文字列（例: "1分 05.2秒"）
    """
    if seconds < 60.0:
        return f"{seconds:.1f}秒"
    minutes, rest = divmod(seconds, 60.0)
    if minutes < 60:
        return f"{int(minutes)}分 {rest:04.1f}秒"
    hours, minutes = divmod(int(minutes), 60)
    return f"{hours}時間 {minutes}分"
