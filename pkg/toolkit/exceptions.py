from geometry.exceptions import LabError


class InfeasiblePackingError(LabError):
    """Disks could not be placed under the gap constraints within the retry budget"""
    pass


class SpecReadError(LabError):
    """Spec file is missing, unreadable or not a JSON document"""
    pass


class UnknownCommandError(LabError):
    """Batch command name is not one of the lab commands"""
    pass
