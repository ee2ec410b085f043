# -*- coding: utf-8 -*-
"""
コアモジュール

物理エンジン（model, bath, generator, propagator, measures）と
実行基盤（設定、ログ、グリッド展開、プレビュー、結果ファイル）。
"""

from .logger import SimLogger
from .config_loader import ConfigLoader, PresetMeta, ExperimentConfig
from .grid_scanner import GridScanner
from .preview_generator import PreviewGenerator, GridPoint, PlannedRun
from .record_writer import RecordWriter

__all__ = [
    'SimLogger',
    'ConfigLoader',
    'PresetMeta',
    'ExperimentConfig',
    'GridScanner',
    'PreviewGenerator',
    'GridPoint',
    'PlannedRun',
    'RecordWriter',
]
