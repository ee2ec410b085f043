# -*- coding: utf-8 -*-
"""
Run モードの処理ハンドラー
"""

from typing import Any, Dict, Iterator, List, Tuple
from tqdm import tqdm

from ..core.config_loader import ExperimentConfig
from ..core.errors import NumericalError
from ..core.experiment import (
    SIGMA_COLUMNS,
    Simulation,
    resolve_topology,
    simulate,
    summarize,
    trajectory_records,
    validity_notes,
)
from ..core.logger import SimLogger
from ..core.model import normal_modes, validate_params
from ..core.preview_generator import PlannedRun
from ..core.record_writer import RecordWriter

RUN_COLUMNS = ['label', 't', 'E_N', 'd', 'nu_minus', 'purity', 'n1', 'n2'] + SIGMA_COLUMNS


def expand_variants(cfg: ExperimentConfig) -> List[Tuple[str, ExperimentConfig]]:
    """variants をラベル付きの設定の列に展開する（指定がなければ設定そのもの）"""
    if not cfg.variants:
        return [(cfg.name, cfg)]
    return [(v.label, cfg.with_overrides(v.overrides)) for v in cfg.variants]


def labelled_records(label: str, sim: Simulation) -> Iterator[Dict[str, Any]]:
    """1本の軌道の時系列レコードに variant のラベルを付けて返す"""
    for record in trajectory_records(sim):
        record['label'] = label
        yield record


def run_single(cfg: ExperimentConfig) -> Iterator[Dict[str, Any]]:
    """
    時系列レコードを順に返す

    各 variant について sample_dt ごとに (t, E_N, d, ν₋, 純度, σ の成分) を1行。
    """
    for label, variant_cfg in expand_variants(cfg):
        yield from labelled_records(label, simulate(variant_cfg))


class RunModeHandler:
    """
    Run モードの処理を行うクラス

    機能:
    - variants（fig1a の A〜D など）の展開
    - 軌道ごとの計算と時系列の書き出し
    - t_F の要約表示
    """

    def __init__(self, config: ExperimentConfig, logger: SimLogger):
        """
        初期化

        Args:
            config: 実験設定
            logger: ロガー
        """
        self.config = config
        self.logger = logger
        self.summaries: Dict[str, Any] = {}

    def plan_runs(self) -> List[PlannedRun]:
        """
        実行する軌道を計画

        Returns:
            軌道のリスト
        """
        runs = []
        for label, cfg in expand_variants(self.config):
            modes = normal_modes(validate_params(cfg.system))
            notes = validity_notes(cfg, modes, resolve_topology(cfg, modes))
            runs.append(PlannedRun(label=label, config=cfg, notes=notes))
        return runs

    def execute_runs(self, runs: List[PlannedRun], writer: RecordWriter) -> Tuple[int, int]:
        """
        軌道を計算して書き出す

        数値計算の失敗は記録して次の軌道へ進む。

        Returns:
            (成功数, 失敗数)
        """
        success_count = 0
        failure_count = 0

        for run in tqdm(runs, desc="計算中", unit="runs"):
            try:
                sim = simulate(run.config)
                for record in labelled_records(run.label, sim):
                    writer.write(record)
                summary = summarize(sim)
                self.summaries[run.label] = summary
                self.logger.info(
                    f"[{run.label}] t_F={summary.death.value} ({summary.death.kind}), "
                    f"max E_N={summary.peak_E_N:.6g}"
                )
                success_count += 1

            except NumericalError as e:
                self.logger.failure(run.label, e)
                failure_count += 1

        for label, summary in self.summaries.items():
            writer.write_summary({
                f"{label}.t_F": summary.death.value,
                f"{label}.censored": summary.death.is_censored,
                f"{label}.max_E_N": summary.peak_E_N,
            })

        return success_count, failure_count
