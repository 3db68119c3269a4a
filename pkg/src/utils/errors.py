"""Exception hierarchy shared by every toolkit module."""


class RhpToolkitError(Exception):
    """工具包所有异常的基类"""


class ConfigError(RhpToolkitError, ValueError):
    """配置无效（CLI 退出码 2）"""


class ContourError(RhpToolkitError, ValueError):
    """网格或围道构造参数越界"""


class CauchyError(RhpToolkitError):
    """Cauchy 变换无法在给定位置以可控精度求值"""


class PhaseError(RhpToolkitError, ValueError):
    """相位无法分类"""


class FactorizationError(RhpToolkitError, ValueError):
    """跳跃矩阵分解的前提条件不满足"""


class SolveError(RhpToolkitError):
    """Beals-Coifman 方程求解失败（CLI 退出码 3）"""


class ExtrapolationError(RhpToolkitError):
    """Richardson 外推未收敛"""


class SingularMatrixError(RhpToolkitError, ArithmeticError):
    """2×2 矩阵行列式过小，无法求逆"""
