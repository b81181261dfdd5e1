from .points import DualPoint, GroupPoint, Window
from .spec import Cyclic, GroupSpec, Torus
from .tools import character, haar_integrate, negate, translate

__all__ = [
    "Cyclic",
    "DualPoint",
    "GroupPoint",
    "GroupSpec",
    "Torus",
    "Window",
    "character",
    "haar_integrate",
    "negate",
    "translate",
]
