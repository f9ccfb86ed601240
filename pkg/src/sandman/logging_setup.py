"""日志配置"""

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(verbose: bool = False) -> logging.Logger:
    """为 sandman 日志器安装唯一的输出处理器"""
    logger = logging.getLogger("sandman")
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)

    # 重复调用时不叠加处理器
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt="%H:%M:%S"))
    logger.addHandler(handler)
    logger.propagate = False
    return logger
