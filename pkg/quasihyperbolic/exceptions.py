from geometry.exceptions import LabError


class ResolutionInsufficientError(LabError):
    """Truncated cube graph does not connect the requested points"""
    pass
