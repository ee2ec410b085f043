# -*- coding: utf-8 -*-
"""
ユーティリティモジュール
"""

from .colors import Colors
from .format_utils import format_float, json_safe, format_point, format_duration

__all__ = [
    'Colors',
    'format_float',
    'json_safe',
    'format_point',
    'format_duration',
]
