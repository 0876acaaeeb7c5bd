"""Levenberg-Marquardt squircle fitting."""

import numpy as np
from scipy import optimize
from scipy.special import expit, logit

from ..fitter import AbstractFitter, FitDiverged, register
from ..shapes import Squircle, unit_ray_lengths


def radial_residuals(parameters, points):
    """Signed distance, along the ray from the center, between each
    point and the squircle boundary."""
    center = parameters[:2]
    widths = np.exp(parameters[2:4])
    kappa = expit(parameters[4])
    offset = points - center
    distance = np.hypot(offset[:, 0], offset[:, 1])
    scaled = offset / widths
    scaled_length = np.maximum(np.hypot(scaled[:, 0], scaled[:, 1]), 1e-12)
    angles = np.arctan2(scaled[:, 1], scaled[:, 0])
    return distance * (1.0 - unit_ray_lengths(angles, kappa) / scaled_length)


@register('squircle')
class SquircleFitter(AbstractFitter):
    """Fits center, half widths and squareness of an axis-aligned
    squircle, starting from the bounding box of the points."""

    min_points = 12

    def __init__(self, tolerance=1e-3, max_residual=0.05, initial_kappa=0.8, max_evaluations=2000):
        self.tolerance = tolerance
        self.max_residual = max_residual
        self.initial_kappa = initial_kappa
        self.max_evaluations = max_evaluations

    def estimate(self, points):
        lower, upper = points.min(axis=0), points.max(axis=0)
        widths = np.maximum(0.5 * (upper - lower), 1e-3)
        start = np.concatenate([0.5 * (lower + upper), np.log(widths), [logit(self.initial_kappa)]])
        result = optimize.least_squares(radial_residuals, start, args=(points,), method='lm',
                                        xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                        max_nfev=self.max_evaluations)
        if result.status < 0 or not np.all(np.isfinite(result.x)):
            raise FitDiverged('squircle fit did not converge: %s' % result.message)
        center = result.x[:2]
        shape = Squircle(center, np.exp(result.x[2:4]), float(expit(result.x[4])))
        residual = float(np.sqrt(np.mean(result.fun ** 2)))
        return shape, residual
