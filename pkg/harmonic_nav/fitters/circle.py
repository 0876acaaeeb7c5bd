"""Algebraic least-squares circle fitting."""

import math

import numpy as np

from ..fitter import AbstractFitter, FitDiverged, register
from ..shapes import Circle


@register('circle')
class CircleFitter(AbstractFitter):
    """Fits ``x**2 + y**2 = 2 cx x + 2 cy y + c`` in closed form and
    reads the center ``(cx, cy)`` and radius ``sqrt(c + cx**2 + cy**2)``
    off the solution."""

    min_points = 6

    def __init__(self, tolerance=1e-3, max_residual=0.05):
        self.tolerance = tolerance
        self.max_residual = max_residual

    def estimate(self, points):
        design = np.column_stack([2.0 * points, np.ones(len(points))])
        target = (points ** 2).sum(axis=1)
        solution, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
        if rank < 3:
            raise FitDiverged('collinear points cannot be fitted with a circle')
        cx, cy, c = solution
        squared = c + cx * cx + cy * cy
        if squared <= 0.0:
            raise FitDiverged('circle fit produced a non-positive radius')
        shape = Circle((cx, cy), math.sqrt(squared))
        distances = np.hypot(points[:, 0] - cx, points[:, 1] - cy)
        residual = float(np.sqrt(np.mean((distances - shape.radius) ** 2)))
        return shape, residual
