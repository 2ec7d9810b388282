"""Exception types shared across the package."""


class HsicSelectError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(HsicSelectError, ValueError):
    """An argument is out of range or otherwise unusable."""


class ShapeError(HsicSelectError, ValueError):
    """Matrix or vector dimensions do not match."""


class ConventionError(HsicSelectError, ValueError):
    """A kernel matrix has the wrong diagonal convention for the operation."""


class SampleSizeError(HsicSelectError, ValueError):
    """Too few samples for the requested estimator or algorithm."""


class DegenerateLabelsError(HsicSelectError, ValueError):
    """Labels cannot support the requested label kernel (e.g. one class)."""
