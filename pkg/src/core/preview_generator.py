# -*- coding: utf-8 -*-
"""
プレビュー表示生成
"""

from typing import Any, Dict, List, Optional
from dataclasses import dataclass, field

from ..utils.colors import Colors
from ..utils.format_utils import format_point


@dataclass
class GridPoint:
    """スキャンの1点を表すデータクラス"""
    index: int
    values: Dict[str, float]
    config: Optional[Any] = None        # ExperimentConfig（スキップ時は None）
    skip_reason: Optional[str] = None

    @property
    def skipped(self) -> bool:
        return self.skip_reason is not None


@dataclass
class PlannedRun:
    """Run / Compare モードで実行する1本の軌道"""
    label: str
    config: Any
    notes: List[str] = field(default_factory=list)


class PreviewGenerator:
    """
    実行計画のプレビュー表示を生成するクラス

    機能:
    - head/tail/both/all モード対応
    - 有効点とスキップ点のグループ化表示
    - 件数サマリー
    """

    def __init__(
        self,
        preview_mode: str = "both",
        preview_count: int = 3
    ):
        """
        初期化

        Args:
            preview_mode: プレビューモード（head/tail/both/all）
            preview_count: 表示件数（head/tail/bothの場合）
        """
        self.preview_mode = preview_mode
        self.preview_count = preview_count

    def _header(self) -> List[str]:
        return [
            f"{Colors.NEON_CYAN}╔════════════════════════════════════════════╗",
            f"{Colors.NEON_BLUE}║  📋 実行計画プレビュー                    ║",
            f"{Colors.NEON_CYAN}╠════════════════════════════════════════════╣{Colors.RESET}",
            "",
        ]

    def generate_scan_preview(self, points: List[GridPoint]) -> str:
        """
        スキャンのプレビュー文字列を生成

        Args:
            points: グリッド点のリスト

        Returns:
            プレビュー文字列
        """
        if not points:
            return f"{Colors.NEON_YELLOW}グリッド点がありません{Colors.RESET}"

        valid = [p for p in points if not p.skipped]
        skipped = [p for p in points if p.skipped]

        preview_lines = self._header()

        preview_lines.append(f"{Colors.NEON_CYAN}🧮 計算する点 ({len(valid)}件){Colors.RESET}")
        shown = self._select_items_to_show(valid)
        for point in shown:
            preview_lines.append(
                f"{Colors.NEON_BLUE}  ├─ #{point.index} {format_point(point.values)}{Colors.RESET}"
            )
        omitted = len(valid) - len(shown)
        if omitted > 0:
            preview_lines.append(f"{Colors.NEON_BLUE}  └─ ... 他{omitted}件{Colors.RESET}")
        preview_lines.append("")

        # スキップ点は常に全件表示
        if skipped:
            preview_lines.append(f"{Colors.NEON_RED}⏭️  スキップする点 ({len(skipped)}件){Colors.RESET}")
            for point in skipped:
                preview_lines.append(
                    f"{Colors.NEON_RED}  ├─ #{point.index} {format_point(point.values)}: {point.skip_reason}{Colors.RESET}"
                )
            preview_lines.append("")

        # サマリー
        preview_lines.append(f"{Colors.CYAN}{'─' * 44}{Colors.RESET}")
        preview_lines.append(
            f"{Colors.NEON_YELLOW}合計: {len(points)}件（計算 {len(valid)}件 / スキップ {len(skipped)}件）{Colors.RESET}"
        )
        preview_lines.append("")

        return "\n".join(preview_lines)

    def generate_run_preview(self, runs: List[PlannedRun]) -> str:
        """
        Run / Compare のプレビュー文字列を生成

        Args:
            runs: 実行する軌道のリスト
        """
        if not runs:
            return f"{Colors.NEON_YELLOW}実行する軌道がありません{Colors.RESET}"

        preview_lines = self._header()
        for run in self._select_items_to_show(runs):
            cfg = run.config
            preview_lines.append(f"{Colors.NEON_CYAN}🌀 {run.label}{Colors.RESET}")
            preview_lines.append(
                f"{Colors.NEON_BLUE}  ├─ ω₂={cfg.system.omega2:g}, λ={cfg.system.lam:g}, "
                f"γ={cfg.bath.gamma:g}, Λ={cfg.bath.cutoff:g}, kT={cfg.bath.kT:g}{Colors.RESET}"
            )
            preview_lines.append(
                f"{Colors.NEON_BLUE}  ├─ {cfg.topology.variant}, 初期状態 {cfg.initial.state}(r={cfg.initial.r:g}), "
                f"{'マルコフ' if cfg.dynamics.markovian else '非マルコフ'}{Colors.RESET}"
            )
            for note in run.notes:
                preview_lines.append(f"{Colors.NEON_YELLOW}  ├─ ⚠️  {note}{Colors.RESET}")
            preview_lines.append(
                f"{Colors.NEON_BLUE}  └─ t ∈ [0, {cfg.dynamics.horizon:g}], Δt={cfg.dynamics.sample_dt:g}{Colors.RESET}"
            )
            preview_lines.append("")

        preview_lines.append(f"{Colors.CYAN}{'─' * 44}{Colors.RESET}")
        preview_lines.append(f"{Colors.NEON_YELLOW}合計: {len(runs)}本{Colors.RESET}")
        preview_lines.append("")
        return "\n".join(preview_lines)

    def _select_items_to_show(self, items: List[Any]) -> List[Any]:
        """
        表示する項目を選択（preview_modeに基づく）

        Args:
            items: 項目のリスト

        Returns:
            表示対象の項目リスト
        """
        if self.preview_mode == "all":
            return items

        count = len(items)

        if self.preview_mode == "head":
            return items[:self.preview_count]

        elif self.preview_mode == "tail":
            return items[-self.preview_count:]

        elif self.preview_mode == "both":
            if count <= self.preview_count * 2:
                return items
            else:
                return items[:self.preview_count] + items[-self.preview_count:]

        return items
