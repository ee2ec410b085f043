# -*- coding: utf-8 -*-
"""
パラメータグリッドの展開と検証
"""

import itertools
from typing import List, Optional

from .config_loader import ExperimentConfig
from .errors import SimulationConfigError
from .model import validate_params
from .preview_generator import GridPoint


class GridScanner:
    """
    スキャン設定のグリッド軸を点の列に展開するクラス

    機能:
    - 軸の直積（最初の軸が最も遅く変化する順）
    - 点ごとのパラメータ検証（|λ| ≥ ω₁ω₂ などはスキップ）
    - スキップした点の記録
    """

    def __init__(self, config: ExperimentConfig, logger: Optional['SimLogger'] = None):
        """
        初期化

        Args:
            config: 実験設定（Scan モード）
            logger: ロガー
        """
        if not config.grid:
            raise SimulationConfigError("グリッド軸が指定されていません")
        self.config = config
        self.logger = logger
        self.skipped_points: List[GridPoint] = []

    @property
    def axis_names(self) -> List[str]:
        return [axis.name for axis in self.config.grid]

    def scan_points(self) -> List[GridPoint]:
        """
        全グリッド点を展開する

        Returns:
            グリッド順の点のリスト（スキップ点を含む）
        """
        points = []
        self.skipped_points = []
        value_lists = [axis.values for axis in self.config.grid]

        for index, values in enumerate(itertools.product(*value_lists)):
            assignment = dict(zip(self.axis_names, values))
            point = GridPoint(index=index, values=assignment)
            try:
                point_config = self.config.with_point(assignment)
                validate_params(point_config.system)
                point.config = point_config
            except SimulationConfigError as e:
                point.skip_reason = f"{type(e).__name__}: {e}"
                self.skipped_points.append(point)
                if self.logger:
                    self.logger.warning(f"グリッド点をスキップします {assignment}: {e}")
            points.append(point)

        return points
