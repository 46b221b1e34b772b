"""
Exception hierarchy for Ihara Lab.

Input problems also subclass ValueError so library callers can treat them
the usual way; numerical failures do not.
"""


class IharaLabError(Exception):
    """Base class for every error raised by the library"""


class ConfigError(IharaLabError, ValueError):
    """Invalid setting, config key or tolerance"""


class GraphParseError(IharaLabError, ValueError):
    """Edge-list text could not be parsed"""

    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphValidationError(IharaLabError, ValueError):
    """Graph violates one of the standing hypotheses"""

    def __init__(self, report):
        self.report = report
        failed = [c.detail for c in report.checks if not c.passed]
        super().__init__("graph failed validation: " + "; ".join(failed))


class SeriesError(IharaLabError, ValueError):
    """Precondition of a formal power series operation is violated"""


class SymbolError(IharaLabError, ValueError):
    """Symbol not in the oriented edge alphabet"""


class DomainError(IharaLabError, ValueError):
    """Argument outside [0, 1/lambda)"""


class ParameterWindowError(IharaLabError, ValueError):
    """Entropy parameters outside the admissible window"""


class DistributionError(IharaLabError, ValueError):
    """Probability distribution is malformed"""


class ResourceGuardError(IharaLabError):
    """Enumeration would exceed the configured work bound"""


class SpectralMismatchError(IharaLabError):
    """Power iteration and polynomial root disagree on lambda"""

    def __init__(self, power_value: float, root_value: float, tolerance: float):
        self.power_value = power_value
        self.root_value = root_value
        self.tolerance = tolerance
        super().__init__(
            f"Perron root routes disagree: power iteration {power_value!r} "
            f"vs polynomial root {root_value!r} (relative tolerance {tolerance})"
        )


class RootFindingError(IharaLabError):
    """Bisection could not bracket or certify a root"""

    def __init__(self, message: str, diagnostics: dict = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class UnsupportedOrderError(IharaLabError, ValueError):
    """Requested series order exceeds what the supplied data determines"""
