"""Shape fitters that turn clusters of Lidar points into obstacles."""

from abc import ABC, abstractmethod
import importlib
import pkgutil

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted


class FitDiverged(RuntimeError):
    """No acceptable shape could be fitted to a cluster."""


class AbstractFitter(ABC, BaseEstimator):
    """An abstract base class for *fitters* that estimate an obstacle
    shape from boundary points.

    After :py:meth:`fit`, ``shape_`` holds the fitted shape,
    ``residual_`` its root-mean-square radial residual in metres and
    ``provisional_`` whether the residual exceeds *tolerance*.
    Provisional fits may be overridden by a fit from a fitter that
    comes later in the order."""

    min_points = 3

    @abstractmethod
    def estimate(self, points):
        """Return ``(shape, residual)`` for an ``(n, 2)`` array of
        *points*."""
        pass

    def fit(self, points):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2:
            raise ValueError('expected an (n, 2) array of points, got shape %s' % (points.shape,))
        if len(points) < self.min_points:
            raise FitDiverged('%s needs at least %d points, got %d' % (
                type(self).__name__, self.min_points, len(points)))
        shape, residual = self.estimate(points)
        if not np.isfinite(residual) or residual > self.max_residual:
            raise FitDiverged('%s residual %.3g exceeds %.3g' % (
                type(self).__name__, residual, self.max_residual))
        self.shape_ = shape
        self.residual_ = float(residual)
        self.provisional_ = self.residual_ > self.tolerance
        return self

    def predict(self, points):
        """Obstacle function of the fitted shape at *points*."""
        check_is_fitted(self, 'shape_')
        return self.shape_.beta(np.asarray(points, dtype=float))


class FitterCollection(object):
    """Tries several fitters in order and keeps the first fit that is
    not provisional, or else the provisional fit with the smallest
    residual."""

    def __init__(self, fitters=None):
        self.fitters = fitters if fitters else []

    def fit(self, points):
        best = None
        failures = []
        for fitter_name, fitter in self.fitters:
            try:
                fitter.fit(points)
            except FitDiverged as err:
                failures.append(str(err))
                continue
            result = (fitter_name, fitter.shape_, fitter.residual_, fitter.provisional_)
            if not fitter.provisional_:
                return self._accept(result)
            if best is None or result[2] < best[2]:
                best = result
        if best is None:
            raise FitDiverged('; '.join(failures) or 'no fitters configured')
        return self._accept(best)

    def _accept(self, result):
        self.method_, self.shape_, self.residual_, self.provisional_ = result
        return self


### Fitter importation functions.
known_fitters = {}


def register(name):
    """Return a decorator that registers the decorated class as a
    fitter with the given *name*."""
    def decorator(class_):
        if name in known_fitters:
            raise ValueError('duplicate fitter name "%s"' % name)
        known_fitters[name] = class_
        return class_
    return decorator


def load_fitters(modules=None):
    from . import fitters as builtin_fitters
    for module in [builtin_fitters] + list(modules or []):
        for _, name, _ in pkgutil.iter_modules(module.__path__):
            importlib.import_module(module.__name__ + '.' + name)


def get_fitter(order=None, options=None, modules=None):
    """Return a :py:class:`FitterCollection`.  The *order* argument, if
    given, should be a list of fitter names; fits from fitters named
    earlier are preferred.  The *options* argument passes keyword
    arguments to individual fitters::

        {'squircle': {'max_residual': 0.02}}

    The *modules* argument names additional packages to search for
    fitters."""
    load_fitters(modules)
    if order is None:
        order = ('circle', 'squircle')
    else:
        order = tuple(order)
    if options is None:
        options = {}
    fitters = []
    for fitter_name in order:
        if fitter_name not in known_fitters:
            raise ValueError('unknown fitter name "%s"' % fitter_name)
        fitters.append((fitter_name, known_fitters[fitter_name](**options.get(fitter_name, {}))))
    return FitterCollection(fitters)
