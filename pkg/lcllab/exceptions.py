from typing import Optional


class LclLabError(Exception):
    pass


class ConfigError(LclLabError):
    pass


class ProblemSyntaxError(LclLabError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{location}{message}")


class UnknownLabelError(ProblemSyntaxError):
    pass


class DuplicateLabelError(ProblemSyntaxError):
    pass


class InstanceError(LclLabError):
    def __init__(self, message: str, node: Optional[int] = None):
        self.node = node
        location = f"node {node}: " if node is not None else ""
        super().__init__(f"{location}{message}")


class BlockError(LclLabError):
    pass


class DimensionMismatchError(LclLabError):
    pass


class NotNoInputError(LclLabError):
    pass


class CapExceededError(LclLabError):
    pass


class BudgetExceededError(LclLabError):
    pass


class CertificateError(LclLabError):
    pass


class SimulationError(LclLabError):
    pass


class InconsistencyError(LclLabError):
    pass


class ReportError(LclLabError):
    pass
