# -*- coding: utf-8 -*-
"""
ハンドラーモジュール
"""

from .run_handler import RunModeHandler, run_single
from .scan_handler import ScanModeHandler, run_scan
from .compare_handler import CompareModeHandler, run_compare

__all__ = [
    'RunModeHandler',
    'ScanModeHandler',
    'CompareModeHandler',
    'run_single',
    'run_scan',
    'run_compare',
]
