"""harmonic_nav, oriented harmonic potential fields and task planning
for a unicycle robot in partially known planar worlds."""

__version__ = '1.0.0'

from .fitter import get_fitter
from .shapes import Circle, Squircle, shape_from_document
from .world import ForestWorld, Region
