class CallnetError(Exception):
    """パイプライン全体の基底例外"""


class DataError(CallnetError, ValueError):
    """入力データの不正・不整合"""

    def __init__(self, reason: str, row: int | None = None) -> None:
        self.reason = reason
        self.row = row
        message = reason if row is None else f"row {row}: {reason}"
        super().__init__(message)


class ParseError(DataError):
    """1行分のパース失敗"""


class DuplicateKeyError(DataError):
    """結合キーの重複"""

    def __init__(self, key: str, source: str) -> None:
        self.key = key
        super().__init__(f"duplicate customer_id in {source}: {key}")


class MissingCutoffError(DataError):
    """3ヶ月以上延滞した顧客が存在せず、カットオフを決められない"""


class ConvergenceError(CallnetError, RuntimeError):
    """反復計算が収束しなかった"""

    def __init__(self, message: str, iterations: int, residual: float) -> None:
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")


class StageError(CallnetError):
    """パイプラインのステージ失敗。原因の例外を保持する"""

    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
