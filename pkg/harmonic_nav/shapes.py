"""Analytic planar shapes (circles and axis-aligned squircles), their
obstacle functions and their JSON representation."""

from abc import ABC, abstractmethod
import json
import math

import numpy as np
from scipy import integrate, optimize

KAPPA_MIN = 1e-6
KAPPA_MAX = 1.0 - 1e-6


def clamp_kappa(kappa):
    return min(max(float(kappa), KAPPA_MIN), KAPPA_MAX)


def unit_ray_length(direction, kappa):
    """Return the distance from the origin to the boundary of the unit
    squircle with parameter *kappa* along the unit vector *direction*.

    The boundary satisfies ``y1**2 + y2**2 - kappa**2 * y1**2 * y2**2 = 1``,
    which gives the closed form used here."""
    kappa = clamp_kappa(kappa)
    dx, dy = direction
    sin2 = 2.0 * dx * dy
    return math.sqrt(2.0 / (1.0 + math.sqrt(max(0.0, 1.0 - kappa * kappa * sin2 * sin2))))


def unit_ray_lengths(angles, kappa):
    """Vectorized :py:func:`unit_ray_length` over direction *angles*."""
    sin2 = np.sin(2.0 * angles)
    return np.sqrt(2.0 / (1.0 + np.sqrt(np.clip(1.0 - kappa * kappa * sin2 * sin2, 0.0, None))))


class AbstractShape(ABC):
    """An obstacle described by an implicit function *beta* that is
    negative inside, zero on the boundary and positive outside."""

    kind = None
    """The ``type`` of this shape in scenario documents."""

    def __init__(self, center, boundary=False):
        self.center = np.asarray(center, dtype=float).reshape(2)
        """The geometric center of the shape."""
        self.boundary = bool(boundary)
        """True if this shape is the outer boundary of a workspace."""

    @abstractmethod
    def beta(self, points):
        """Evaluate the obstacle function at an array of *points* with
        shape ``(..., 2)``.  A single point yields a float."""
        pass

    @abstractmethod
    def beta_xy(self, x, y):
        """Scalar fast path of :py:meth:`beta`."""
        pass

    @abstractmethod
    def ray_length(self, direction):
        """Distance from the center to the boundary along the unit
        vector *direction*."""
        pass

    @abstractmethod
    def inflated(self, margin):
        """Return a copy grown by *margin* metres."""
        pass

    @abstractmethod
    def boundary_angles_to_points(self, angles):
        pass

    @abstractmethod
    def half_extent(self):
        """Half widths of the axis-aligned bounding box."""
        pass

    @abstractmethod
    def area(self):
        pass

    @abstractmethod
    def to_document(self):
        pass

    def boundary_points(self, count=512):
        """Return *count* points on the boundary."""
        angles = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        return self.boundary_angles_to_points(angles)

    def bounding_box(self):
        extent = self.half_extent()
        return self.center - extent, self.center + extent

    def contains(self, points):
        return np.asarray(self.beta(points)) <= 0.0

    def model_radius(self, samples=4096):
        """Radius of the largest disk about the center that fits in the
        shape; its model sphere never reaches outside it."""
        points = self.boundary_points(samples) - self.center
        return float(np.min(np.hypot(points[:, 0], points[:, 1])))

    def circumradius(self, samples=4096):
        """Largest distance from the center to the boundary."""
        points = self.boundary_points(samples) - self.center
        return float(np.max(np.hypot(points[:, 0], points[:, 1])))

    def exit_distance(self, origin, direction):
        """Distance from *origin*, which must lie inside the shape, to the
        boundary along the unit vector *direction*."""
        origin = np.asarray(origin, dtype=float)
        start = self.beta_xy(origin[0], origin[1])
        if start >= 0.0:
            raise ValueError('ray origin %s is not inside the shape' % (origin,))
        far = float(np.hypot(*(origin - self.center))) + 1.01 * float(np.hypot(*self.half_extent())) + 1e-9

        def along(t):
            return self.beta_xy(origin[0] + t * direction[0], origin[1] + t * direction[1])
        return optimize.brentq(along, 0.0, far, xtol=1e-14, rtol=1e-14, maxiter=200)

    def __eq__(self, other):
        return type(self) is type(other) and self.to_document() == other.to_document()

    def __hash__(self):
        return hash(json.dumps(self.to_document(), sort_keys=True))


### Shape registry, used to decode the ``type`` field of documents.
known_shapes = {}


def register_shape(name):
    """Return a decorator that registers the decorated class as the
    shape with document type *name*."""
    def decorator(class_):
        if name in known_shapes:
            raise ValueError('duplicate shape type "%s"' % name)
        known_shapes[name] = class_
        class_.kind = name
        return class_
    return decorator


def shape_from_document(document, **kwargs):
    """Build a shape from a decoded JSON object such as
    ``{"type": "circle", "center": [1, 2], "radius": 0.5}``."""
    kind = document.get('type')
    if kind not in known_shapes:
        raise ValueError('unknown shape type "%s"' % kind)
    return known_shapes[kind].from_document(document, **kwargs)


@register_shape('circle')
class Circle(AbstractShape):
    """A disk of the given *radius*.  Its obstacle function is
    ``|q - c|**2 / radius**2 - 1``."""

    def __init__(self, center, radius, boundary=False):
        super(Circle, self).__init__(center, boundary)
        self.radius = float(radius)
        if self.radius <= 0.0:
            raise ValueError('circle radius must be positive, got %r' % radius)

    @classmethod
    def from_document(cls, document, **kwargs):
        return cls(document['center'], document['radius'], **kwargs)

    def beta(self, points):
        offset = np.asarray(points, dtype=float) - self.center
        value = (offset[..., 0] ** 2 + offset[..., 1] ** 2) / self.radius ** 2 - 1.0
        return float(value) if value.ndim == 0 else value

    def beta_xy(self, x, y):
        dx = x - self.center[0]
        dy = y - self.center[1]
        return (dx * dx + dy * dy) / (self.radius * self.radius) - 1.0

    def ray_length(self, direction):
        return self.radius

    def exit_distance(self, origin, direction):
        offset = np.asarray(origin, dtype=float) - self.center
        along = float(np.dot(direction, offset))
        inside = float(np.dot(offset, offset)) - self.radius ** 2
        if inside >= 0.0:
            raise ValueError('ray origin %s is not inside the shape' % (origin,))
        return -along + math.sqrt(along * along - inside)

    def inflated(self, margin):
        return Circle(self.center, self.radius + margin, self.boundary)

    def boundary_angles_to_points(self, angles):
        return self.center + self.radius * np.stack([np.cos(angles), np.sin(angles)], axis=-1)

    def half_extent(self):
        return np.array([self.radius, self.radius])

    def area(self):
        return math.pi * self.radius ** 2

    def model_radius(self, samples=None):
        return self.radius

    def circumradius(self, samples=None):
        return self.radius

    def to_document(self):
        return {'type': self.kind, 'center': [float(c) for c in self.center],
                'radius': self.radius}

    def __repr__(self):
        return 'Circle(center=(%g, %g), radius=%g)' % (self.center[0], self.center[1], self.radius)


@register_shape('squircle')
class Squircle(AbstractShape):
    """An axis-aligned squircle with half widths *half_widths* and
    squareness *kappa* in (0, 1).

    Points are first moved to the unit squircle through
    ``y = (q - center) / half_widths`` and then evaluated with
    ``(|y|**2 + sqrt(|y|**4 - 4 kappa**2 (y1 y2)**2)) / 2 - 1``."""

    def __init__(self, center, half_widths, kappa, boundary=False):
        super(Squircle, self).__init__(center, boundary)
        self.half_widths = np.asarray(half_widths, dtype=float).reshape(2)
        if np.any(self.half_widths <= 0.0):
            raise ValueError('squircle half widths must be positive, got %r' % (half_widths,))
        self.kappa = clamp_kappa(kappa)
        self._area = None

    @classmethod
    def from_document(cls, document, **kwargs):
        return cls(document['center'], document['half_widths'], document.get('kappa', 0.9), **kwargs)

    def beta(self, points):
        scaled = (np.asarray(points, dtype=float) - self.center) / self.half_widths
        y1, y2 = scaled[..., 0], scaled[..., 1]
        norm2 = y1 * y1 + y2 * y2
        disc = np.clip(norm2 * norm2 - 4.0 * self.kappa ** 2 * (y1 * y2) ** 2, 0.0, None)
        value = 0.5 * (norm2 + np.sqrt(disc)) - 1.0
        return float(value) if value.ndim == 0 else value

    def beta_xy(self, x, y):
        y1 = (x - self.center[0]) / self.half_widths[0]
        y2 = (y - self.center[1]) / self.half_widths[1]
        norm2 = y1 * y1 + y2 * y2
        disc = norm2 * norm2 - 4.0 * self.kappa * self.kappa * (y1 * y2) ** 2
        return 0.5 * (norm2 + math.sqrt(max(disc, 0.0))) - 1.0

    def ray_length(self, direction):
        scaled = np.asarray(direction, dtype=float) / self.half_widths
        length = float(np.hypot(*scaled))
        return unit_ray_length(scaled / length, self.kappa) / length

    def inflated(self, margin):
        return Squircle(self.center, self.half_widths + margin, self.kappa, self.boundary)

    def boundary_angles_to_points(self, angles):
        radii = unit_ray_lengths(angles, self.kappa)
        unit = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=-1)
        return self.center + unit * self.half_widths

    def half_extent(self):
        return self.half_widths.copy()

    def model_radius(self, samples=None):
        """The smaller half width; the unit squircle holds the unit disk."""
        return float(np.min(self.half_widths))

    def area(self):
        if self._area is None:
            kappa = self.kappa
            unit, _ = integrate.quad(
                lambda angle: 0.5 * unit_ray_lengths(np.array(angle), kappa) ** 2,
                0.0, 2.0 * np.pi, limit=200)
            self._area = float(unit * self.half_widths[0] * self.half_widths[1])
        return self._area

    def to_document(self):
        return {'type': self.kind, 'center': [float(c) for c in self.center],
                'half_widths': [float(a) for a in self.half_widths],
                'kappa': self.kappa}

    def __repr__(self):
        return 'Squircle(center=(%g, %g), half_widths=(%g, %g), kappa=%g)' % (
            self.center[0], self.center[1], self.half_widths[0], self.half_widths[1], self.kappa)


def piecewise_ray_length(parent, origin, direction):
    """Length of the ray from *origin* along the unit vector *direction*
    to the boundary of *parent*, using the piecewise scaling matrix that
    shifts each half width by the offset between *origin* and the parent
    center.  The result is exact on the coordinate axes through *origin*
    and when *origin* is the parent center."""
    if isinstance(parent, Circle):
        widths, kappa = np.array([parent.radius, parent.radius]), KAPPA_MIN
    else:
        widths, kappa = parent.half_widths, parent.kappa
    offset = parent.center - np.asarray(origin, dtype=float)
    signs = np.where(np.asarray(direction) >= 0.0, 1.0, -1.0)
    shifted = widths + signs * offset
    scaled = np.asarray(direction, dtype=float) / shifted
    length = float(np.hypot(*scaled))
    return unit_ray_length(scaled / length, kappa) / length


class ShapeEncoder(json.JSONEncoder):
    """JSON encoder supporting shapes and numpy values."""

    def default(self, obj):
        if isinstance(obj, AbstractShape):
            return obj.to_document()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        return json.JSONEncoder.default(self, obj)
