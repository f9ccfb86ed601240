"""
运行环境收集模块
记录实验与智能体运行所在主机和进程的资源使用情况
"""

from .host_collector import HostCollector

__all__ = ['HostCollector']
