class LabError(Exception):
    """Base class for schottky-lab errors"""
    pass


class PoleError(LabError):
    """The image of the point is the point at infinity"""
    pass


class DomainMembershipError(LabError):
    """Point does not lie in D = B(0,R) ∩ Ω"""
    pass


class ConfigValidationError(LabError):
    """Circle domain configuration violates its invariants"""

    def __init__(self, violations):
        self.violations = list(violations)
        summary = '; '.join(v.message for v in self.violations)
        super().__init__(f"Invalid configuration: {summary}")
