# -*- coding: utf-8 -*-
"""
結果ファイルの書き出し（CSV と JSON Lines）
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import yaml

from ..utils.format_utils import format_float, json_safe

logger = logging.getLogger(__name__)


class RecordWriter:
    """
    レコード列を CSV（と任意で JSON Lines）に書き出すクラス

    CSV の構成:
    - `#` で始まるヘッダーブロック（ツールのバージョン、設定全体、許容誤差）
    - 列名の行と1レコード1行のデータ（float は repr で書く）
    - `# summary:` で始まるフッター（Compare の差分など）

    時刻などの実行ごとに変わる値は書かないので、同じ設定からは同じバイト列になる。
    """

    def __init__(
        self,
        path: str,
        columns: List[str],
        metadata: Dict[str, Any],
        output_format: str = 'csv'
    ):
        """
        初期化

        Args:
            path: 出力先（CSV のパス。JSON Lines は拡張子を .jsonl にしたパス）
            columns: 列名
            metadata: ヘッダーに記録する情報（'config' は YAML として展開する）
            output_format: csv | jsonl | both
        """
        self.path = Path(path)
        self.columns = list(columns)
        self.metadata = metadata
        self.output_format = output_format
        self.records_written = 0

        self._csv_file: Optional[TextIO] = None
        self._csv_writer = None
        self._jsonl_file: Optional[TextIO] = None

    @property
    def csv_path(self) -> Path:
        return self.path.with_suffix('.csv')

    @property
    def jsonl_path(self) -> Path:
        return self.path.with_suffix('.jsonl')

    def __enter__(self) -> 'RecordWriter':
        self.open()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()

    def open(self):
        """ファイルを開いてヘッダーを書く"""
        self.path.parent.mkdir(parents=True, exist_ok=True)

        if self.output_format in ('csv', 'both'):
            self._csv_file = open(self.csv_path, 'w', encoding='utf-8', newline='')
            self._write_csv_header()
            self._csv_writer = csv.writer(self._csv_file, lineterminator='\n')
            self._csv_writer.writerow(self.columns)

        if self.output_format in ('jsonl', 'both'):
            self._jsonl_file = open(self.jsonl_path, 'w', encoding='utf-8', newline='')
            header = {'header': {k: v for k, v in self.metadata.items()}}
            self._jsonl_file.write(json.dumps(header, ensure_ascii=False, sort_keys=True, default=str) + '\n')

    def _write_csv_header(self):
        for key, value in self.metadata.items():
            if key == 'config':
                self._csv_file.write("# config:\n")
                dumped = yaml.safe_dump(value, allow_unicode=True, sort_keys=True, default_flow_style=False)
                for line in dumped.splitlines():
                    self._csv_file.write(f"#   {line}\n")
            else:
                self._csv_file.write(f"# {key}: {format_float(value) if isinstance(value, float) else value}\n")

    def write(self, record: Dict[str, Any]):
        """
        1レコードを書く

        Args:
            record: 列名 → 値（存在しない列は空欄）
        """
        unknown = set(record) - set(self.columns)
        if unknown:
            raise KeyError(f"未定義の列です: {sorted(unknown)}")
        if self._csv_writer is not None:
            self._csv_writer.writerow([format_float(record.get(c)) for c in self.columns])
        if self._jsonl_file is not None:
            ordered = {c: json_safe(record.get(c)) for c in self.columns if c in record}
            self._jsonl_file.write(json.dumps(ordered, ensure_ascii=False) + '\n')
        self.records_written += 1

    def write_summary(self, summary: Dict[str, Any]):
        """フッターにサマリーを書く"""
        if self._csv_file is not None:
            for key, value in summary.items():
                self._csv_file.write(f"# summary: {key}={format_float(value)}\n")
        if self._jsonl_file is not None:
            payload = {'summary': {k: json_safe(v) for k, v in summary.items()}}
            self._jsonl_file.write(json.dumps(payload, ensure_ascii=False) + '\n')

    def close(self):
        """ファイルを閉じる"""
        for handle in (self._csv_file, self._jsonl_file):
            if handle is not None:
                handle.close()
        self._csv_file = None
        self._csv_writer = None
        self._jsonl_file = None
        logger.info(f"{self.records_written} 件のレコードを書き出しました: {self.path}")
