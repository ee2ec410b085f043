# -*- coding: utf-8 -*-
"""
バージョン情報
"""

__version__ = "0.3.0"
__commit__ = "共通浴の重み付き結合と非マルコフ係数スケジュールを追加"
