"""Exception hierarchy shared by all modules."""


class EllAYBEError(Exception):
    """Base class for library errors."""


class ParameterError(EllAYBEError, ValueError):
    """Invalid discrete or modular parameters, shapes or indices."""


class PrecisionError(EllAYBEError, ArithmeticError):
    """A series did not converge within its term budget."""


class PoleError(EllAYBEError, ArithmeticError):
    """An argument lies within the pole-proximity threshold of the lattice.

    ``lattice_point`` is the nearest point ``m + k*tau`` and ``index`` an
    optional ``(k, l)`` label of the offending term.
    """

    def __init__(self, message, lattice_point=None, index=None, distance=None):
        super().__init__(message)
        self.lattice_point = lattice_point
        self.index = index
        self.distance = distance


class DegeneracyError(EllAYBEError, ArithmeticError):
    """A linear map that should be invertible is (numerically) singular."""


class SelectionError(EllAYBEError, RuntimeError):
    """No candidate passed where exactly one was expected."""
