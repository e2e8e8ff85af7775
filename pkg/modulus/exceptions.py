from geometry.exceptions import LabError


class InvalidNestingError(LabError):
    """Sub-annuli are not disjoint or do not separate the boundary components"""
    pass


class NoInformationError(LabError):
    """The modulus is too small for the chaining argument to say anything"""
    pass


class DegenerateShapeError(LabError):
    """Shape has zero area but more than one point"""
    pass


class MapEvaluationError(LabError):
    """Map could not be evaluated on the sampled points"""
    pass
