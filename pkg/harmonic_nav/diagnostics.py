"""Warning categories emitted by harmonic_nav.

Diagnostics are reported through :py:mod:`warnings` so that callers can
filter them per category, e.g.::

    warnings.simplefilter('ignore', FitDeferredWarning)
"""


class NavigationWarning(UserWarning):
    """Base class for all harmonic_nav warnings."""


class FitDeferredWarning(NavigationWarning):
    """A point cluster was kept pending instead of becoming an obstacle."""


class RecursionFallbackWarning(NavigationWarning):
    """The recursive update hit a degenerate point and the batch value
    was used instead."""


class ModelSphereOverlapWarning(NavigationWarning):
    """Two model spheres of the star world intersect."""


class StallWarning(NavigationWarning):
    """The robot made no progress for the configured stall period."""


class ObstacleRejectedWarning(NavigationWarning):
    """A fitted obstacle could not be inserted into the belief world."""
