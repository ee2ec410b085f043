# -*- coding: utf-8 -*-
"""
Compare モードの処理ハンドラー
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple
from tqdm import tqdm

from ..core.config_loader import ExperimentConfig
from ..core.experiment import (
    Simulation,
    TrajectorySummary,
    sample_record,
    simulate,
    summarize,
    twin_frequencies,
)
from ..core.logger import SimLogger
from ..core.preview_generator import PlannedRun
from ..core.record_writer import RecordWriter

COMPARE_COLUMNS = [
    't',
    'E_N_markov', 'E_N_nonmarkov',
    'd_markov', 'd_nonmarkov',
    'nu_minus_markov', 'nu_minus_nonmarkov',
    'purity_markov', 'purity_nonmarkov',
]


@dataclass
class ComparisonResult:
    """マルコフ / 非マルコフの軌道の組と要約"""
    markov: Simulation
    nonmarkov: Simulation
    markov_summary: TrajectorySummary
    nonmarkov_summary: TrajectorySummary

    @classmethod
    def from_simulations(cls, markov: Simulation, nonmarkov: Simulation) -> 'ComparisonResult':
        """2本の軌道から要約を計算して組にする"""
        return cls(
            markov=markov,
            nonmarkov=nonmarkov,
            markov_summary=summarize(markov),
            nonmarkov_summary=summarize(nonmarkov),
        )

    def records(self) -> List[Dict[str, Any]]:
        """共通のサンプル時刻ごとのレコード"""
        omegas = twin_frequencies(self.markov.config)
        rows = []
        pairs = zip(self.markov.trajectory.times, self.markov.trajectory.states, self.nonmarkov.trajectory.states)
        for t, sigma_m, sigma_n in pairs:
            m = sample_record(sigma_m, omegas)
            n = sample_record(sigma_n, omegas)
            rows.append({
                't': float(t),
                'E_N_markov': m['E_N'], 'E_N_nonmarkov': n['E_N'],
                'd_markov': m['d'], 'd_nonmarkov': n['d'],
                'nu_minus_markov': m['nu_minus'], 'nu_minus_nonmarkov': n['nu_minus'],
                'purity_markov': m['purity'], 'purity_nonmarkov': n['purity'],
            })
        return rows

    def summary(self) -> Dict[str, Any]:
        """Δt_F と Δmax E_N（非マルコフ − マルコフ）"""
        t_m = self.markov_summary.death.value
        t_n = self.nonmarkov_summary.death.value
        delta_t = t_n - t_m if math.isfinite(t_m) and math.isfinite(t_n) else math.nan
        rel_t = delta_t / t_m if t_m > 0 and math.isfinite(delta_t) else math.nan
        peak_m = self.markov_summary.peak_E_N
        peak_n = self.nonmarkov_summary.peak_E_N
        return {
            't_F_markov': t_m,
            't_F_nonmarkov': t_n,
            'delta_t_F': delta_t,
            'relative_delta_t_F': rel_t,
            'max_E_N_markov': peak_m,
            'max_E_N_nonmarkov': peak_n,
            'delta_max_E_N': peak_n - peak_m,
            'ratio_max_E_N': peak_n / peak_m if peak_m > 0 else math.inf,
        }


def run_compare(cfg: ExperimentConfig) -> ComparisonResult:
    """
    同じ設定でマルコフ・非マルコフの2本の軌道を計算する

    サンプル時刻は共通（同じ horizon と sample_dt）。
    """
    return ComparisonResult.from_simulations(
        simulate(cfg.with_markovian(True)),
        simulate(cfg.with_markovian(False)),
    )


class CompareModeHandler:
    """
    Compare モードの処理を行うクラス

    機能:
    - マルコフ / 非マルコフの軌道を共通の時刻で計算
    - 並べた時系列と差分サマリーの書き出し
    """

    def __init__(self, config: ExperimentConfig, logger: SimLogger):
        """
        初期化

        Args:
            config: 実験設定（Compare モード）
            logger: ロガー
        """
        self.config = config
        self.logger = logger
        self.result = None

    def plan_runs(self) -> List[PlannedRun]:
        """マルコフ・非マルコフの2本"""
        return [
            PlannedRun(label='markov', config=self.config.with_markovian(True)),
            PlannedRun(label='nonmarkov', config=self.config.with_markovian(False)),
        ]

    def execute_runs(self, runs: List[PlannedRun], writer: RecordWriter) -> Tuple[int, int]:
        """
        2本の軌道を計算して書き出す

        Returns:
            (成功数, 失敗数)
        """
        sims = {}
        for run in tqdm(runs, desc="計算中", unit="runs"):
            sims[run.label] = simulate(run.config)

        self.result = ComparisonResult.from_simulations(sims['markov'], sims['nonmarkov'])
        for record in self.result.records():
            writer.write(record)
        summary = self.result.summary()
        writer.write_summary(summary)
        self.logger.info(f"比較完了: {summary}")
        return len(sims), 0
