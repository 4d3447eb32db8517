"""Exception hierarchy shared by the geometry, bounds and harness layers."""


class TubeError(Exception):
    """Base class for all library errors."""


class BaseMismatchError(TubeError):
    """Tangent vectors based at different points were combined."""


class ChartExitError(TubeError):
    """A point, geodesic or curve left the domain of its chart."""


class CapabilityError(TubeError):
    """The scene cannot provide the requested quantity."""


class InputError(TubeError):
    """Invalid argument (negative radius, empty sampler, short curve, ...)."""


class RankError(TubeError):
    """A parametrization derivative is degenerate."""


class DegeneracyError(TubeError):
    """The linear system defining the Moser vector field is ill-conditioned."""

    def __init__(self, message: str, hypothesis: str = "rK1(r) <= e") -> None:
        super().__init__(
            f"{message} (radius hypothesis {hypothesis!r} likely violated)"
        )
        self.hypothesis = hypothesis


class FlowExitError(TubeError):
    """An integral curve left the tube before t = 1."""

    def __init__(self, message: str, exit_time: float) -> None:
        super().__init__(f"{message} at t={exit_time:.6g}")
        self.exit_time = exit_time


class DivergenceError(TubeError):
    """Picard iteration failed to contract."""


class HypothesisError(TubeError):
    """A radius certificate required by an operation does not hold."""

    def __init__(self, message: str, certificate: str) -> None:
        super().__init__(message)
        self.certificate = certificate


class ConfigError(TubeError):
    """Scene configuration could not be parsed or validated."""

    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        key: str | None = None,
    ) -> None:
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if key is not None:
            where.append(f"key {key!r}")
        suffix = f" ({'; '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")
        self.line = line
        self.column = column
        self.key = key
