#!/usr/bin/env python3
"""
SANDMAN 直接运行入口
未安装时从源码目录运行：python src/main.py agent run --mock --out out/agent
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from sandman.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
