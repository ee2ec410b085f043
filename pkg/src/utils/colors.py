# -*- coding: utf-8 -*-
"""
カラーテーマ定義
Cyberpunk 2077風のカラースキーム
"""

from colorama import Fore, Style


class Colors:
    """カラーパレット - Corpo風（Cyberpunk風）"""

    # ネオンカラー
    NEON_CYAN = Fore.CYAN + Style.BRIGHT        # ボーダー、フレーム
    NEON_BLUE = Fore.BLUE + Style.BRIGHT        # タイトル、ヘッダー
    NEON_YELLOW = Fore.YELLOW + Style.BRIGHT    # 打ち切り、警告
    NEON_GREEN = Fore.GREEN + Style.BRIGHT      # 成功メッセージ、有限の t_F
    NEON_RED = Fore.RED + Style.BRIGHT          # エラーメッセージ、失敗した点

    # 通常カラー
    CYAN = Fore.CYAN
    YELLOW = Fore.YELLOW

    # リセット
    RESET = Style.RESET_ALL

    @classmethod
    def for_status(cls, status: str) -> str:
        """レコードの状態（finite / censored / never_entangled / skipped / failed）に対応する色"""
        return {
            'finite': cls.NEON_GREEN,
            'censored': cls.NEON_YELLOW,
            'never_entangled': cls.CYAN,
            'skipped': cls.YELLOW,
            'failed': cls.NEON_RED,
        }.get(status, cls.RESET)
