#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Twin Oscillator Entanglement - 散逸環境中の2振動子エンタングルメントシミュレータ
位置結合した2つの調和振動子のガウス状態を、オーミック浴（別々 / 共通）のもとで時間発展させ、
対数ネガティビティ・双子相関・エンタングルメント消失時刻を計算するバッチツール

Author: YoyogiPinball
License: Free to use for personal and commercial purposes
"""

import sys
import time
import argparse
from pathlib import Path
from typing import List, Optional

# サードパーティライブラリ
try:
    import yaml
    from colorama import init
except ImportError as e:
    # coloramaがインポートできない場合もあるので直接ANSIコードを使用
    print(f"\033[91m必要なライブラリがインストールされていません: {e}\033[0m")
    print(f"\033[93mpip install -r requirements.txt を実行してください\033[0m")
    sys.exit(1)

# 自作モジュール
from src.__version__ import __version__, __commit__
from src.utils.colors import Colors
from src.utils.format_utils import format_duration
from src.core.config_loader import ConfigLoader, ExperimentConfig
from src.core.errors import SimulationConfigError, NumericalError
from src.core.logger import SimLogger
from src.core.preview_generator import PreviewGenerator
from src.core.record_writer import RecordWriter
from src.handlers.run_handler import RunModeHandler, RUN_COLUMNS
from src.handlers.scan_handler import ScanModeHandler, scan_columns
from src.handlers.compare_handler import CompareModeHandler, COMPARE_COLUMNS

# Windows環境でのUTF-8出力対応
if sys.platform == 'win32':
    sys.stdout.reconfigure(encoding='utf-8')

# 終了コード
EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_ERROR = 2

COMMAND_MODES = {'run': 'Run', 'scan': 'Scan', 'compare': 'Compare'}


# =====================================
# SimulationManager - メイン管理クラス
# =====================================

class SimulationManager:
    """
    シミュレーションのメイン管理クラス

    機能:
    - 設定ファイル / プリセットの解決
    - モード別処理の実行
    - プレビュー → 実行 → 結果ファイルのフロー制御
    """

    def __init__(self, configs_dir: str = "configs/presets"):
        """初期化"""
        self.config_loader = ConfigLoader(configs_dir)

    def list_presets(self):
        """プリセット一覧を表示"""
        presets = self.config_loader.discover_presets()

        if not presets:
            print(f"{Colors.NEON_RED}エラー: {self.config_loader.configs_dir} にプリセットが見つかりません{Colors.RESET}")
            return

        print(f"{Colors.NEON_CYAN}{'─' * 44}{Colors.RESET}")
        print(f"{Colors.NEON_YELLOW}📋 プリセット一覧{Colors.RESET}")
        print(f"{Colors.NEON_CYAN}{'─' * 44}{Colors.RESET}")
        for preset in presets:
            name = Path(preset.file_path).stem
            print(f"{preset.icon} {name} [{preset.mode}] {Colors.CYAN}{preset.description}{Colors.RESET}")

    def load(self, command: str, config_path: Optional[str], preset: Optional[str]) -> ExperimentConfig:
        """
        コマンドに対応する設定を読み込む

        Raises:
            SimulationConfigError: 設定とコマンドのモードが一致しない
        """
        if preset:
            config_path = self.config_loader.resolve_preset(preset)
        if not config_path:
            raise SimulationConfigError("設定ファイルか --preset を指定してください")

        config = self.config_loader.load_config(config_path)
        if config.mode != COMMAND_MODES[command]:
            raise SimulationConfigError(
                f"{config_path} は {config.mode} モードの設定です（'{command}' では実行できません）"
            )
        return config

    def execute(
        self,
        command: str,
        config: ExperimentConfig,
        output: Optional[str] = None,
        threads: Optional[int] = None,
        output_format: Optional[str] = None
    ) -> int:
        """
        設定を実行

        Args:
            command: run / scan / compare
            config: 実験設定
            output: 出力パス（設定より優先）
            threads: ワーカープロセス数（設定より優先）
            output_format: csv / jsonl / both（設定より優先）

        Returns:
            失敗した軌道の数（scan の点ごとの失敗は結果ファイルに記録するので数えない）
        """
        print()
        print(f"{Colors.NEON_CYAN}{'=' * 44}")
        print(f"{Colors.NEON_BLUE}{config.icon} {config.name}")
        print(f"{Colors.NEON_CYAN}{'=' * 44}{Colors.RESET}")
        print()

        settings = config.settings

        # ロガー初期化
        logger = SimLogger(
            log_directory=settings['logging']['log_directory'],
            enable_logging=settings.get('enable_logging', True),
            level=settings['logging'].get('level', 'INFO')
        )

        preview_gen = PreviewGenerator(
            preview_mode=settings['preview']['mode'],
            preview_count=settings['preview']['count']
        )

        # モード別処理
        if command == 'scan':
            handler = ScanModeHandler(config, logger, threads or settings.get('threads', 1))
            plan = handler.plan_points()
            print(preview_gen.generate_scan_preview(plan))
            columns = scan_columns(config)
            execute = handler.execute_points
        elif command == 'compare':
            handler = CompareModeHandler(config, logger)
            plan = handler.plan_runs()
            print(preview_gen.generate_run_preview(plan))
            columns = COMPARE_COLUMNS
            execute = handler.execute_runs
        else:
            handler = RunModeHandler(config, logger)
            plan = handler.plan_runs()
            print(preview_gen.generate_run_preview(plan))
            columns = RUN_COLUMNS
            execute = handler.execute_runs

        output_path = output or config.output_path or f"results/{config.name}.csv"
        metadata = {
            'tool': f"twin-oscillator-entanglement {__version__}",
            'mode': config.mode,
            'rtol': config.dynamics.rtol,
            'atol': config.dynamics.atol,
            'threshold': config.dynamics.threshold,
            'config': config.raw,
        }
        logger.log_experiment(config.name, config.mode, metadata['tool'], output_path)

        started = time.perf_counter()
        try:
            with RecordWriter(output_path, columns, metadata, output_format or config.output_format) as writer:
                success, failure = execute(plan, writer)
        finally:
            logger.close()
        elapsed = time.perf_counter() - started

        # 結果サマリー
        print()
        print(f"{Colors.NEON_GREEN}完了: {success}件成功 ({format_duration(elapsed)}){Colors.RESET}")
        if failure > 0:
            print(f"{Colors.NEON_RED}失敗: {failure}件（詳細はログを参照）{Colors.RESET}")

        if command == 'scan':
            for status, count in handler.status_counts.items():
                print(f"{Colors.for_status(status)}  {status}: {count}件{Colors.RESET}")
        elif command == 'compare' and handler.result is not None:
            for key, value in handler.result.summary().items():
                print(f"{Colors.NEON_YELLOW}  {key} = {value:.6g}{Colors.RESET}")
        else:
            for label, summary in handler.summaries.items():
                color = Colors.for_status(summary.death.kind)
                print(f"{color}  {label}: t_F = {summary.death.value:.6g} ({summary.death.kind}){Colors.RESET}")

        print(f"{Colors.NEON_CYAN}出力: {output_path}{Colors.RESET}")
        return 0 if command == 'scan' else failure


# =====================================
# メイン処理
# =====================================

def build_parser() -> argparse.ArgumentParser:
    """コマンドライン引数のパーサー"""
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="散逸環境中の2振動子エンタングルメントシミュレータ"
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest='command', required=True)

    for command, help_text in (
        ('run', '単一パラメータの時系列を計算'),
        ('scan', 'パラメータグリッド上の t_F を計算'),
        ('compare', 'マルコフ / 非マルコフの比較'),
    ):
        sub = subparsers.add_parser(command, help=help_text)
        sub.add_argument('config', nargs='?', help='設定ファイル（YAML）')
        sub.add_argument('--preset', help='configs/presets/ のプリセット名（例: fig1a, fig2, fig9a）')
        sub.add_argument('--output', help='出力ファイルのパス')
        sub.add_argument('--threads', type=int, help='ワーカープロセス数（scan）')
        sub.add_argument('--format', dest='output_format', choices=['csv', 'jsonl', 'both'], help='出力形式')
        if command != 'compare':
            sub.add_argument(
                '--markovian',
                action=argparse.BooleanOptionalAction,
                default=None,
                help='マルコフ近似の有無を上書き（--markovian / --non-markovian）'
            )

    subparsers.add_parser('list', help='プリセット一覧を表示')
    return parser


def _normalize_argv(argv: List[str]) -> List[str]:
    """--non-markovian を --no-markovian として受け付ける"""
    return ['--no-markovian' if a == '--non-markovian' else a for a in argv]


def main(argv: Optional[List[str]] = None) -> int:
    """メインエントリポイント"""
    # colorama初期化（Windows対応）
    init(autoreset=True)

    parser = build_parser()
    args = parser.parse_args(_normalize_argv(sys.argv[1:] if argv is None else argv))

    print(f"{Colors.NEON_CYAN}╔════════════════════════════════════════════╗")
    print(f"{Colors.NEON_BLUE}║  🌀 Twin Oscillator Entanglement           ║")
    print(f"{Colors.NEON_CYAN}║  v{__version__} (commit: {__commit__})")
    print(f"{Colors.NEON_CYAN}╚════════════════════════════════════════════╝{Colors.RESET}")

    manager = SimulationManager()

    if args.command == 'list':
        manager.list_presets()
        return EXIT_OK

    try:
        config = manager.load(args.command, args.config, args.preset)
        if getattr(args, 'markovian', None) is not None:
            config = config.with_markovian(args.markovian)
        failures = manager.execute(
            args.command,
            config,
            output=args.output,
            threads=args.threads,
            output_format=args.output_format,
        )

    except (SimulationConfigError, FileNotFoundError, yaml.YAMLError) as e:
        print(f"{Colors.NEON_RED}設定エラー: {e}{Colors.RESET}")
        return EXIT_CONFIG_ERROR

    except NumericalError as e:
        print(f"{Colors.NEON_RED}数値計算エラー: {type(e).__name__}: {e}{Colors.RESET}")
        return EXIT_NUMERICAL_ERROR

    return EXIT_NUMERICAL_ERROR if failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
