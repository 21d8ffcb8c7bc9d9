"""例外定義"""


class BmPoissonError(Exception):
    """bm-poisson の基底例外"""

    pass


class PartitionError(BmPoissonError, ValueError):
    """分割・ε列の入力エラー（交差、外側シングルトン、非許容列など）"""

    pass


class ConeError(BmPoissonError, ValueError):
    """錐の指定・格子点のエラー"""

    pass


class PatternError(BmPoissonError, ValueError):
    """bm独立性チェックの点配置が条件に合わない"""

    pass


class InfeasibleError(BmPoissonError):
    """計算量の上限超過"""

    def __init__(self, message: str, estimate: int, cap: int):
        super().__init__(f"{message} (見積り {estimate} > 上限 {cap})")
        self.estimate = estimate
        self.cap = cap


class PoleError(BmPoissonError, ValueError):
    """変換の極での評価"""

    def __init__(self, message: str, poles: tuple[complex, ...]):
        super().__init__(message)
        self.poles = poles


class OracleMismatchError(BmPoissonError):
    """独立な計算経路同士の不一致"""

    pass
