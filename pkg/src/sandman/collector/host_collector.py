#!/usr/bin/env python3
"""
运行环境收集器
记录主机静态信息与本进程的资源消耗，写入运行目录的 provenance.json
"""

import logging
import platform
import sys
from datetime import datetime
from typing import Any, Dict, Optional

import psutil

logger = logging.getLogger(__name__)


class HostCollector:
    """主机与进程信息收集器"""

    def __init__(self, process: Optional[psutil.Process] = None):
        self.process = process or psutil.Process()
        self.host_info = self._get_static_host_info()

    def _get_static_host_info(self) -> Dict[str, Any]:
        """获取静态主机信息"""
        try:
            return {
                'platform': platform.system(),
                'platform_release': platform.release(),
                'architecture': platform.machine(),
                'python': platform.python_version(),
                'implementation': sys.implementation.name,
                'cpu_count': psutil.cpu_count(logical=False),
                'cpu_count_logical': psutil.cpu_count(logical=True),
                'memory_total': psutil.virtual_memory().total,
            }
        except Exception as e:
            logger.warning("获取主机信息时出错: %s", e)
            return {}

    def collect_process_usage(self) -> Dict[str, Any]:
        """收集本进程的 CPU 时间、内存与线程数"""
        try:
            with self.process.oneshot():
                cpu_times = self.process.cpu_times()
                memory = self.process.memory_info()
                return {
                    'cpu_user_s': cpu_times.user,
                    'cpu_system_s': cpu_times.system,
                    'memory_rss': memory.rss,
                    'memory_vms': memory.vms,
                    'threads': self.process.num_threads(),
                }
        except (psutil.NoSuchProcess, psutil.AccessDenied) as e:
            logger.warning("收集进程资源信息时出错: %s", e)
            return {'error': str(e)}

    def provenance(self, wall_time_s: Optional[float] = None) -> Dict[str, Any]:
        """一次运行的环境记录"""
        from .. import __version__

        record: Dict[str, Any] = {
            'sandman_version': __version__,
            'recorded_at': datetime.now().isoformat(timespec='seconds'),
            'host': self.host_info,
            'process': self.collect_process_usage(),
        }
        if wall_time_s is not None:
            record['wall_time_s'] = round(wall_time_s, 3)
        return record
