from geometry.exceptions import LabError


class ChainError(LabError):
    """Path cannot be decomposed into a transboundary chain"""
    pass


class GeometryReachError(LabError):
    """Ray or circle leaves the region where the estimate is defined"""
    pass


class CorrespondenceError(LabError):
    """No image component supplied for a disk of the chain"""
    pass
