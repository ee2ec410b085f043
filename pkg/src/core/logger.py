# -*- coding: utf-8 -*-
"""
ログ管理クラス
"""

import logging
from pathlib import Path
from datetime import datetime
from typing import Optional

# エンジンの各モジュールは logging.getLogger(__name__) で src.* のロガーを使う
PACKAGE_LOGGER = 'src'

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


class SimLogger:
    """
    シミュレーションのログ

    src.* の全モジュールのログを日付ごとのファイル（logs/YYYY-MM-DD.log）に集約する。
    結果ファイルには何も書かない。
    """

    def __init__(self, log_directory: str, enable_logging: bool = True, level: str = 'INFO'):
        """
        Args:
            log_directory: ログ保存ディレクトリ
            enable_logging: ログ記録の有効/無効
            level: DEBUG / INFO / WARNING / ERROR
        """
        if level not in LOG_LEVELS:
            raise ValueError(f"不明なログレベル: {level}")
        self.log_directory = Path(log_directory)
        self.enable_logging = enable_logging
        self.level = getattr(logging, level)
        self.logger = logging.getLogger(PACKAGE_LOGGER)
        self.log_filepath: Optional[Path] = None

        if self.enable_logging:
            self._attach_file_handler()

    def _attach_file_handler(self):
        self.log_directory.mkdir(parents=True, exist_ok=True)
        self.log_filepath = self.log_directory / f"{datetime.now().strftime('%Y-%m-%d')}.log"

        # 同じプロセスで複数回実行しても二重に書かない
        self.close()
        self.logger.setLevel(self.level)

        file_handler = logging.FileHandler(self.log_filepath, encoding='utf-8')
        file_handler.setLevel(self.level)
        file_handler.setFormatter(logging.Formatter(
            '%(asctime)s [%(levelname)s] %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        self.logger.addHandler(file_handler)

    def close(self):
        """ファイルハンドラを閉じる"""
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)
        self.logger.setLevel(logging.NOTSET)

    def __enter__(self) -> 'SimLogger':
        return self

    def __exit__(self, *exc_info):
        self.close()

    def log_experiment(self, name: str, mode: str, tool: str, output_path: str):
        """実行の開始を1行で記録"""
        self.info(f"===== {name} ({mode}) / {tool} -> {output_path}")

    def failure(self, context: str, error: Exception):
        """数値計算の失敗を例外クラス名つきで記録"""
        self.error(f"[エラー] {context}: {type(error).__name__}: {error}")

    def info(self, message: str):
        if self.enable_logging:
            self.logger.info(message)

    def warning(self, message: str):
        if self.enable_logging:
            self.logger.warning(message)

    def error(self, message: str):
        if self.enable_logging:
            self.logger.error(message)
