"""Exception hierarchy.

Everything raised deliberately by the library derives from
:class:`FavardLabError`; the CLI maps :class:`StageError` subclasses to exit
code 2 and input problems to exit code 1.
"""


class FavardLabError(Exception):
    pass


class ValidationError(FavardLabError, ValueError):
    """Input geometry or configuration is malformed."""


class ParseError(FavardLabError, ValueError):
    def __init__(self, message, line=None, column=None, field=None):
        self.line = line
        self.column = column
        self.field = field
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)


class StageError(FavardLabError):
    """A numerical or pipeline stage could not deliver its contract."""

    stage = "unknown"


class CollinearOverlap(StageError):
    stage = "line_set_intersection"


class QuadratureNotConverged(StageError):
    stage = "quadrature"

    def __init__(self, message, value=None, error_estimate=None, panels=None):
        self.value = value
        self.error_estimate = error_estimate
        self.panels = panels
        super().__init__(message)


class DegenerateInput(StageError):
    stage = "besicovitch_alternative"


class EmptyResult(StageError):
    stage = "two_cones_extract"


class AssumptionViolated(StageError):
    stage = "cover_by_single_graph"


class InsufficientBuckets(StageError):
    stage = "case_split"


class WitnessFailed(StageError):
    def __init__(self, stage, message):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


class DegeneratePair(StageError):
    stage = "connecting_angle"


class CurvesTooClose(StageError):
    stage = "pair_line_measure_formula"
