from geometry.exceptions import LabError


class DilatationSingularError(LabError):
    """∂_z f vanishes, so the Beltrami coefficient is undefined"""
    pass
