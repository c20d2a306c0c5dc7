"""Exception types shared across the toolkit."""


class FoilmorphError(Exception):
    """Base class for all domain errors."""


class MalformedFile(FoilmorphError):
    """Coordinate file could not be parsed into enough numeric pairs."""


class AmbiguousTopology(FoilmorphError):
    """Upper/lower surface split of a raw coordinate set is ambiguous."""


class DimensionMismatch(FoilmorphError):
    """Two shape vectors have different station counts."""


class DegenerateNormalization(FoilmorphError):
    """Sum of morphing weights is (numerically) zero."""


class InfeasibleShape(FoilmorphError):
    """A shape could not be made free of self-intersections."""


class MissingBaseline(FoilmorphError):
    """A named baseline airfoil is absent from the catalog."""

    def __init__(self, missing):
        self.missing = list(missing) if not isinstance(missing, str) else [missing]
        super().__init__(f"missing baseline(s): {', '.join(self.missing)}")


class ConfigError(FoilmorphError):
    """Invalid optimizer or run configuration."""


class DomainError(FoilmorphError):
    """Argument outside the mathematical domain of an operation."""


class OutOfRange(FoilmorphError):
    """A normalized control input left the [0, 1] interval."""


class IllConditioned(FoilmorphError):
    """A linear solve for shape coefficients is singular or near-singular."""


class EvaluatorUnavailable(FoilmorphError):
    """The external aerodynamic evaluator cannot be executed."""


class EmptyPolar(FoilmorphError):
    """No angle of attack in the sweep produced a converged sample."""


class InsufficientPolar(FoilmorphError):
    """Too few converged polar points to extract objectives."""


class ProtocolError(FoilmorphError):
    """Malformed message or action in the environment protocol."""
