#!/usr/bin/env python3
"""
smtrange - 球面平均変換の値域条件 数値検証ツール
メインエントリーポイント
"""

import logging
import sys
from pathlib import Path

# リポジトリのルートをパスに追加
sys.path.insert(0, str(Path(__file__).parent))

from src.ui.cli import main as cli_main


def main():
    """メイン関数"""
    logger = logging.getLogger(__name__)
    try:
        sys.exit(cli_main())
    except Exception as e:
        logger.error(f"アプリケーション実行エラー: {e}", exc_info=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
