"""
SANDMAN - 人格驱动的欺骗型智能体仿真引擎

通过固定的提示词模式向语言模型注入大五人格特质，生成并执行每日任务日程，
并对不同人格下的日程行为进行统计检验。
"""

__version__ = "1.0.0"
__author__ = "SANDMAN Team"
__license__ = "MIT"


def main() -> int:
    """主入口函数"""
    try:
        from .cli import main as cli_main
    except ImportError as e:
        print(f"导入错误: {e}")
        print("请确保已安装所需依赖: pip install -e .")
        return 1

    return cli_main()


__all__ = ["main"]
