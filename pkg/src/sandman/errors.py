"""
异常定义
所有模块共享的异常层次结构，命令行根据异常族映射退出码
"""


class SandmanError(Exception):
    """SANDMAN 基础异常"""


class ConfigError(SandmanError):
    """配置或数据文件无效"""


class ProviderError(SandmanError):
    """语言模型提供方调用失败"""


class AuthError(ProviderError):
    """凭据缺失或无效"""


class RateLimited(ProviderError):
    """限流且重试预算已耗尽"""


class TransportError(ProviderError):
    """网络错误、超时或脚本记录耗尽"""


class MalformedResponse(ProviderError):
    """响应无法解码"""


class UnparseableAnswer(SandmanError):
    """模型回答中找不到选项字母"""


class StatsError(SandmanError):
    """统计计算的前置条件不满足"""


class InsufficientData(StatsError):
    """样本量不足"""


class EmptySample(StatsError):
    """空样本"""


class DegenerateTable(StatsError):
    """列联表存在期望频数为零的单元格"""


class UndefinedCorrelation(StatsError):
    """常量序列无法计算相关系数"""


class StatsDomainError(StatsError):
    """自由度等参数超出定义域"""


class ControlMissing(SandmanError):
    """存储中缺少对照组或对照组样本不足"""


class VersionError(SandmanError):
    """存储格式版本与当前程序不一致"""


class BootstrapFailed(SandmanError):
    """引导任务在重试预算内未能生成有效日程"""


class ChannelUnbound(SandmanError):
    """任务没有绑定的通道"""


class TaskStateError(SandmanError):
    """任务状态转换非法"""
