# -*- coding: utf-8 -*-
"""
Scan モードの処理ハンドラー
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple
from tqdm import tqdm

from ..core.config_loader import ExperimentConfig
from ..core.errors import NumericalError
from ..core.experiment import simulate, summarize
from ..core.grid_scanner import GridScanner
from ..core.logger import SimLogger
from ..core.preview_generator import GridPoint
from ..core.record_writer import RecordWriter

RESULT_COLUMNS = ['status', 't_F', 'censored', 'peak_E_N', 't_d', 'error']

PointResult = Tuple[Dict[str, Any], Optional[NumericalError]]


def scan_columns(cfg: ExperimentConfig) -> List[str]:
    """スキャン結果の列名（軸名 + 結果）"""
    return ['index'] + [axis.name for axis in cfg.grid] + RESULT_COLUMNS


def evaluate_point(point: GridPoint) -> PointResult:
    """
    1つのグリッド点を計算してレコードにする

    スキップ点と数値計算の失敗は status に記録し、例外は送出しない。
    ワーカープロセスでも呼ばれるので、失敗のログは呼び出し側が書く。

    Returns:
        (レコード, 数値計算の失敗（なければ None）)
    """
    record: Dict[str, Any] = {'index': point.index}
    record.update(point.values)

    if point.skipped:
        record.update(status='skipped', error=point.skip_reason)
        return record, None

    try:
        summary = summarize(simulate(point.config))
    except NumericalError as e:
        record.update(status='failed', error=type(e).__name__)
        return record, e

    record.update(
        status=summary.death.kind,
        t_F=summary.death.value,
        censored=summary.death.is_censored,
        peak_E_N=summary.peak_E_N,
        t_d=summary.twin_death.value,
    )
    return record, None


def evaluate_points(
    points: List[GridPoint],
    workers: int = 1,
    logger: Optional[SimLogger] = None,
    progress: bool = False
) -> Iterator[Dict[str, Any]]:
    """
    グリッド点を計算し、グリッド順にレコードを返す

    workers > 1 では点をワーカープロセスに分配する。結果の順序は workers によらない。
    """
    def collect(results: Iterable[PointResult]) -> Iterator[Dict[str, Any]]:
        if progress:
            results = tqdm(results, total=len(points), desc="スキャン中", unit="points")
        for point, (record, error) in zip(points, results):
            if error is not None and logger:
                logger.failure(f"#{point.index} {point.values}", error)
            yield record

    if workers <= 1:
        yield from collect(map(evaluate_point, points))
        return
    with ProcessPoolExecutor(max_workers=workers) as executor:
        yield from collect(executor.map(evaluate_point, points))


def run_scan(
    cfg: ExperimentConfig,
    threads: int = 1,
    logger: Optional[SimLogger] = None,
    progress: bool = False
) -> Iterator[Dict[str, Any]]:
    """
    グリッドの全点について t_F を求め、グリッド順にレコードを返す

    threads は並列に計算するワーカープロセスの数（1 なら同じプロセスで順に計算）。
    """
    points = GridScanner(cfg, logger).scan_points()
    yield from evaluate_points(points, threads, logger, progress)


class ScanModeHandler:
    """
    Scan モードの処理を行うクラス

    機能:
    - グリッド点の展開と検証（GridScanner）
    - ワーカープロセスでの並列計算（出力はグリッド順）
    - 点ごとの失敗を記録して続行
    """

    def __init__(self, config: ExperimentConfig, logger: SimLogger, threads: int = 1):
        """
        初期化

        Args:
            config: 実験設定（Scan モード）
            logger: ロガー
            threads: ワーカープロセス数
        """
        self.config = config
        self.logger = logger
        self.threads = threads
        self.scanner = GridScanner(config, logger)
        self.status_counts: Dict[str, int] = {}

    def plan_points(self) -> List[GridPoint]:
        """
        計算するグリッド点を計画

        Returns:
            グリッド点のリスト（スキップ点を含む）
        """
        return self.scanner.scan_points()

    def execute_points(self, points: List[GridPoint], writer: RecordWriter) -> Tuple[int, int]:
        """
        グリッド点を計算して書き出す

        Returns:
            (成功数, 失敗数)（スキップ点はどちらにも数えない）
        """
        success_count = 0
        failure_count = 0
        self.status_counts = {}

        for record in evaluate_points(points, self.threads, self.logger, progress=True):
            writer.write(record)
            status = record['status']
            self.status_counts[status] = self.status_counts.get(status, 0) + 1
            if status == 'failed':
                failure_count += 1
            elif status != 'skipped':
                success_count += 1

        self.logger.info(f"スキャン完了: {self.status_counts}")
        return success_count, failure_count
