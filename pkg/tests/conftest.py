# -*- coding: utf-8 -*-
"""
テスト共通のフィクスチャ
"""

import copy
from pathlib import Path

import pytest

from src.core.bath import BathParams
from src.core.config_loader import ConfigLoader
from src.core.model import SystemParams, normal_modes, validate_params

PRESETS_DIR = Path(__file__).resolve().parents[1] / 'configs' / 'presets'

# 高温・弱結合の浴（k_BT = 10, γ = 0.001, Λ = 50）
FIG1_BATH = BathParams(gamma=0.001, cutoff=50.0, kT=10.0)

# 非マルコフ比較の浴（γ = 0.01·2/π, Λ = 20, k_BT = 10）
FIG9_BATH = BathParams(gamma=0.02 / 3.141592653589793, cutoff=20.0, kT=10.0)


def make_params(omega2: float = 1.0, lam: float = 0.0):
    """検証済みパラメータと基準モード"""
    p = validate_params(SystemParams(omega2=omega2, lam=lam))
    return p, normal_modes(p)


def base_config(mode: str = 'Run', **sections) -> dict:
    """
    ConfigLoader.parse に渡す最小の設定辞書

    sections の各セクションは既定値に上書きマージする。
    """
    config = {
        'meta': {'name': 'test', 'mode': mode, 'icon': '🧪', 'description': 'テスト'},
        'settings': {'enable_logging': False, 'logging': {'log_directory': 'logs'}},
        'system': {'omega2': 1.0, 'lam': 0.0},
        'bath': {'gamma': 0.001, 'cutoff': 50.0, 'kT': 10.0},
        'topology': {'variant': 'separate'},
        'initial': {'state': 'tms', 'r': 2.0},
        'dynamics': {'horizon': 500.0, 'sample_dt': 0.05, 'settle_window': 50.0},
    }
    for name, values in sections.items():
        if isinstance(values, dict) and isinstance(config.get(name), dict):
            merged = copy.deepcopy(config[name])
            merged.update(values)
            config[name] = merged
        else:
            config[name] = values
    return config


def parse_config(mode: str = 'Run', **sections):
    """base_config を ExperimentConfig にする"""
    return ConfigLoader(str(PRESETS_DIR)).parse(base_config(mode, **sections))


@pytest.fixture
def fig1_bath() -> BathParams:
    return FIG1_BATH


@pytest.fixture
def loader() -> ConfigLoader:
    return ConfigLoader(str(PRESETS_DIR))
