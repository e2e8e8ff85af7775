from geometry.exceptions import LabError


class WordBudgetExceeded(LabError):
    """Word expansion would produce more maps than the configured budget"""
    pass


class ExtensionError(LabError):
    """Map does not respect the circles or the point is outside the named copy"""
    pass
