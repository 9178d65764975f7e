"""Exception types raised across the package."""


class CocycleError(Exception):
    """Base class for all package errors."""


class DomainError(CocycleError, ValueError):
    """A parameter lies outside its admissible range (e.g. p not in (0, 1))."""


class CocycleViolation(CocycleError):
    """A configuration fails the plaquette identity where a valid one is required."""

    def __init__(self, plaquette, residual=None):
        self.plaquette = tuple(plaquette)
        self.residual = residual
        msg = f"cocycle identity fails at plaquette {self.plaquette}"
        if residual is not None:
            msg += f" (residual {residual})"
        super().__init__(msg)


class PathOutOfWindow(CocycleError, ValueError):
    """A lattice path leaves the configuration window or is not nearest-neighbour."""


class ConvergenceFailure(CocycleError):
    """Stationary distribution could not be computed to tolerance."""


class DegenerateMarginals(CocycleError, ValueError):
    """Marginals equal to 0 or 1 make the balance direction undefined."""


class FConstancyViolation(CocycleError):
    """Two vertices of one 0-cluster carry different height values."""


class NoVerticalEdges(CocycleError, ValueError):
    """The cluster has no vertical 0-edge, so it has no left boundary."""


class ParseError(CocycleError, ValueError):
    """Malformed COCY document."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
