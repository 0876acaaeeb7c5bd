"""The chain of diffeomorphisms that carries a forest of stars to a
point world, and the harmonic navigation function built on top of it.

A point ``q`` of the belief world is mapped by

1. :py:meth:`AbstractPotential.forest_to_star`, which purges every
   non-root obstacle into its parent, leaf by leaf;
2. :py:meth:`AbstractPotential.star_to_sphere`, which scales each
   remaining star onto its model sphere;
3. :py:meth:`AbstractPotential.sphere_to_point`, which contracts each
   sphere to its center and blows the bounded disk up to the plane.

The navigation function is a squashed harmonic potential evaluated at
the resulting point-world image.
"""

from abc import ABC, abstractmethod
import math
import warnings

import numpy as np

from .diagnostics import ModelSphereOverlapWarning
from .shapes import Circle, piecewise_ray_length


GATE_LIMIT = 300.0
EXP_LIMIT = 700.0
RAY_LENGTHS = ('exact', 'piecewise')


class PsiSingularity(ArithmeticError):
    """The sphere-world point lies on or beyond the outer model sphere."""


class LogSingularity(ArithmeticError):
    """The point-world image coincides with the goal or an obstacle
    point."""

    def __init__(self, message, goal=False):
        super(LogSingularity, self).__init__(message)
        self.goal = goal
        """True if the singular point is the goal image."""


class TransformParams(object):
    """Tuning parameters of the transform chain and the potential."""

    def __init__(self, **kwargs):
        self.lam = 1.0
        """Base gain of the star-to-sphere switches."""
        self.K = 2.0
        """Base weight of the point-world potential; each independent
        star raises it by one."""
        self.mu = 1.0
        """Upper bound of the squashed potential."""
        self.delta = 1.0
        """Ramp width, in obstacle-function units, of the sphere
        contraction."""
        self.ray_length = 'exact'
        """How the purging ray length to the parent is computed:
        ``'exact'`` or ``'piecewise'``."""

        for k, v in kwargs.items():
            if not hasattr(self, k):
                raise ValueError('unknown transform parameter "%s"' % k)
            setattr(self, k, v)

        self.lam = float(self.lam)
        self.K = float(self.K)
        self.mu = float(self.mu)
        self.delta = float(self.delta)
        if self.lam <= 0.0 or self.delta <= 0.0:
            raise ValueError('lam and delta must be positive')
        if self.K < 1.0:
            raise ValueError('K must be at least 1, got %g' % self.K)
        if self.mu < 1.0:
            raise ValueError('mu must be at least 1, got %g' % self.mu)
        if self.ray_length not in RAY_LENGTHS:
            raise ValueError('unknown ray length method "%s"' % self.ray_length)

    def switch_gain(self, count):
        """Switch gain used with *count* independent stars."""
        return self.lam * (count + 1)

    def harmonic_gain(self, count):
        """Potential weight used with *count* point obstacles."""
        return self.K + count

    def to_document(self):
        return dict(self.__dict__)

    def __repr__(self):
        return 'TransformParams(%s)' % ', '.join(
            '%s=%r' % item for item in sorted(self.__dict__.items()))


def proximity(beta):
    """Saturated obstacle function ``beta / (1 + |beta|)`` used in
    switch products."""
    return beta / (1.0 + abs(beta))


def gate(beta):
    """Gating term of a switch; zero on the obstacle boundary and
    exponentially large away from it."""
    return math.expm1(min(beta, GATE_LIMIT))


def switch(gamma, product, gain, gating):
    """The analytic switch ``gamma*B / (gamma*B + gain*gating)`` where
    *gating* is the :py:func:`gate` of the switched obstacle."""
    numerator = gamma * product
    denominator = numerator + gain * gating
    if denominator == 0.0:
        return 0.0
    return numerator / denominator


def smoothstep(t):
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    return t * t * (3.0 - 2.0 * t)


def squash(z, mu=1.0):
    """Logistic map of the exponentiated potential ``z = exp(phi)`` onto
    ``[0, mu]``: ``mu * (2 / (1 + exp(-z)) - 1)``, zero at the goal."""
    return mu * math.tanh(0.5 * z)


def squash_derivative(z, mu=1.0):
    t = math.tanh(0.5 * z)
    return 0.5 * mu * (1.0 - t * t)


def exponentiate(phi):
    """``exp(phi)``, infinite once it overflows."""
    if phi > EXP_LIMIT:
        return math.inf
    return math.exp(phi)


def log_distance(x, point, goal=False):
    """The primitive harmonic function ``ln |x - point|**2``."""
    squared = float((x[0] - point[0]) ** 2 + (x[1] - point[1]) ** 2)
    if squared == 0.0:
        raise LogSingularity('point-world image coincides with %s' % (
            'the goal' if goal else 'an obstacle'), goal=goal)
    return math.log(squared)


def _norm(v):
    return math.hypot(v[0], v[1])


def contraction(q, center, radius, width):
    """Displacement of *q* towards *center* by a sphere contracted with
    ramp *width*; the whole offset inside the sphere, none outside the
    ramp."""
    offset = q - center
    beta = (offset[0] ** 2 + offset[1] ** 2) / radius ** 2 - 1.0
    return (1.0 - smoothstep(beta / width)) * (center - q)


def _excluded_products(values):
    """For each index i, the product of all *values* except the i-th."""
    count = len(values)
    before = [1.0] * (count + 1)
    after = [1.0] * (count + 1)
    for i in range(count):
        before[i + 1] = before[i] * values[i]
        after[count - 1 - i] = after[count - i] * values[count - 1 - i]
    return [before[i] * after[i + 1] for i in range(count)]


class PurgeRecord(object):
    """What purging one non-root node needs: the node, its parent's
    shape and the other obstacles of the node's stage."""

    def __init__(self, node, parent, others, leaves):
        self.node = node
        self.parent = parent
        """Shape of the parent obstacle."""
        self.others = others
        """Shapes of the stage except the node and its parent."""
        self.leaves = leaves
        """Shapes of the stage leaves except the node."""


class StarTerms(object):
    """Per-point quantities of the star-to-sphere stage.  Index 0 is
    the workspace, index ``i`` the ``i``-th independent star."""

    def __init__(self, gamma, proximities, gates, rays, carrier):
        self.gamma = gamma
        self.proximities = proximities
        self.gates = gates
        self.rays = rays
        """Radial displacements ``(v_i - 1)(q - q_i)``."""
        self.carrier = carrier
        """Vector that carries the workspace switch along the
        recursion; the workspace ray unless the boundary is a circle."""


class AbstractPotential(ABC):
    """Harmonic navigation function of a belief
    :py:class:`~harmonic_nav.world.ForestWorld` towards *goal*."""

    def __init__(self, world, goal, params=None):
        self.world = world
        self.goal = np.asarray(goal, dtype=float).reshape(2)
        self.params = params if params is not None else TransformParams()
        boundary = world.boundary
        self.passive = isinstance(boundary, Circle)
        """A circular boundary is its own model sphere."""
        self.workspace_center = boundary.center.copy()
        self.workspace_radius = boundary.circumradius()
        self.goal_scale = self.workspace_radius ** 2
        self.stars = []
        """Independent stars (roots) in insertion order."""
        self.records = []
        """:py:class:`PurgeRecord` per non-root, in insertion order."""
        self.sphere_centers = []
        self.sphere_radii = []
        self.nearest_gaps = []
        self.ramp_widths = []
        self.points = []
        """Point-world obstacles."""
        self.goal_terms = []
        """Contraction displacement of the goal by each sphere."""
        self.goal_shift = np.zeros(2)
        self.goal_image = None

    @abstractmethod
    def star_displacement(self, q):
        """Displacement that carries the star-world point *q* to the
        sphere world."""
        pass

    @abstractmethod
    def phi_point(self, x):
        """Harmonic potential of the point world at *x*."""
        pass

    ### World bookkeeping

    def purge_record(self, node):
        members, leaves = self.world.stage(node)
        others = [member.shape for member in members
                  if member.id not in (node.id, node.parent)]
        return PurgeRecord(node, self.world.nodes[node.parent].shape, others,
                           [leaf.shape for leaf in leaves if leaf.id != node.id])

    def ramp_width(self, radius, nearest):
        """Contraction ramp width of a sphere of *radius* whose nearest
        positive gap to another sphere or the wall is *nearest*."""
        width = self.params.delta
        if math.isfinite(nearest):
            allowed = 0.45 * nearest / radius
            width = min(width, (1.0 + allowed) ** 2 - 1.0)
        return width

    def refresh_spheres(self):
        """Recompute the model spheres, the contraction ramps and the
        point-world obstacles from :py:attr:`stars`."""
        self.sphere_centers, self.sphere_radii = [], []
        self.nearest_gaps, self.ramp_widths, self.points = [], [], []
        self.goal_terms, self.goal_shift = [], np.zeros(2)
        for star in self.stars:
            self.append_sphere(star)
        self.refresh_goal()

    def append_sphere(self, star):
        """Add the model sphere of *star*, updating the ramps of the
        spheres it comes closest to and the goal contraction terms of
        every changed ramp.  Call :py:meth:`place_goal` afterwards."""
        center, radius = star.shape.center.copy(), star.shape.model_radius()
        nearest = math.inf
        overlap = False
        gaps = [self.workspace_radius - _norm(center - self.workspace_center) - radius]
        for j in range(len(self.sphere_centers)):
            gap = _norm(center - self.sphere_centers[j]) - radius - self.sphere_radii[j]
            gaps.append(gap)
            if gap <= 0.0:
                warnings.warn('model sphere of obstacle %d intersects another sphere' % self.stars[j].id,
                              ModelSphereOverlapWarning)
            elif gap < self.nearest_gaps[j]:
                self.nearest_gaps[j] = gap
                width = self.ramp_width(self.sphere_radii[j], gap)
                if width != self.ramp_widths[j]:
                    self.ramp_widths[j] = width
                    term = contraction(self.goal, self.sphere_centers[j], self.sphere_radii[j], width)
                    self.goal_shift += term - self.goal_terms[j]
                    self.goal_terms[j] = term
        for gap in gaps:
            if gap <= 0.0:
                overlap = True
            else:
                nearest = min(nearest, gap)
        if overlap:
            warnings.warn('model sphere of obstacle %d intersects another sphere' % star.id,
                          ModelSphereOverlapWarning)
        self.sphere_centers.append(center)
        self.sphere_radii.append(radius)
        self.nearest_gaps.append(nearest)
        width = self.ramp_width(radius, nearest)
        self.ramp_widths.append(width)
        self.points.append(self.psi(center))
        term = contraction(self.goal, center, radius, width)
        self.goal_terms.append(term)
        self.goal_shift += term

    def place_goal(self):
        """Point-world goal image from the running contraction terms."""
        self.goal_image = self.psi(self.goal + self.goal_shift)

    def refresh_goal(self):
        self.goal_terms = [contraction(self.goal, center, radius, width) for center, radius, width
                           in zip(self.sphere_centers, self.sphere_radii, self.ramp_widths)]
        self.goal_shift = np.sum(self.goal_terms, axis=0) if self.goal_terms else np.zeros(2)
        self.place_goal()

    ### Forest to star

    def gamma(self, q):
        """Saturated squared distance to the goal, ``r**2 / (r**2 + R**2)``
        with ``R`` the radius of the outer model sphere; zero at the goal
        and below one everywhere."""
        distance = float((q[0] - self.goal[0]) ** 2 + (q[1] - self.goal[1]) ** 2)
        return distance / (distance + self.goal_scale)

    def workspace_value(self, q):
        return -self.world.boundary.beta_xy(q[0], q[1])

    def purge_ray_length(self, record, direction):
        if self.params.ray_length == 'piecewise':
            return piecewise_ray_length(record.parent, record.node.center, direction)
        return record.parent.exit_distance(record.node.center, direction)

    def purge_terms(self, record, q):
        """Return ``(gamma, product, gate, ray)`` of the purging switch
        of *record* at *q*."""
        node = record.node
        leaf_beta = node.shape.beta_xy(q[0], q[1])
        parent_beta = record.parent.beta_xy(q[0], q[1])
        offset = q - node.center
        distance = _norm(offset)
        twice = 2.0 * node.margin
        deforming = parent_beta + (leaf_beta - twice) + math.hypot(parent_beta, leaf_beta - twice)
        blend = parent_beta + (twice - leaf_beta) + math.hypot(parent_beta, twice - leaf_beta)
        if distance == 0.0:
            ray = np.zeros(2)
        else:
            length = self.purge_ray_length(record, offset / distance)
            ray = (length * (1.0 + leaf_beta * deforming) / distance - 1.0) * offset
        product = proximity(self.workspace_value(q)) * proximity(blend)
        for shape in record.others:
            product *= proximity(shape.beta_xy(q[0], q[1]))
        for shape in record.leaves:
            product *= proximity(shape.beta_xy(q[0], q[1]))
        return self.gamma(q), product, gate(leaf_beta), ray

    def purge_displacement(self, record, q):
        """``sigma * r`` of the purging transformation of *record*."""
        gamma, product, gating, ray = self.purge_terms(record, q)
        return switch(gamma, product, record.node.gain, gating) * ray

    def purge_leaf(self, record, q):
        """Purge the leaf of *record*: its boundary is carried onto the
        boundary of its parent."""
        q = np.asarray(q, dtype=float)
        return q + self.purge_displacement(record, q)

    def forest_to_star(self, q):
        """Purge every non-root, latest first."""
        q = np.asarray(q, dtype=float)
        for record in reversed(self.records):
            q = q + self.purge_displacement(record, q)
        return q

    ### Star to sphere

    def star_terms(self, q):
        gamma = self.gamma(q)
        inside = self.workspace_value(q)
        proximities = [proximity(inside)]
        gates = [gate(inside)]
        offset = q - self.workspace_center
        distance = _norm(offset)
        if self.passive or distance == 0.0:
            workspace_ray = np.zeros(2)
        else:
            workspace_ray = (self.workspace_radius * (1.0 - inside) / distance - 1.0) * offset
        rays = [workspace_ray]
        for star, center, radius in zip(self.stars, self.sphere_centers, self.sphere_radii):
            beta = star.shape.beta_xy(q[0], q[1])
            proximities.append(proximity(beta))
            gates.append(gate(beta))
            offset = q - center
            distance = _norm(offset)
            if distance == 0.0:
                rays.append(np.zeros(2))
            else:
                rays.append((radius * (1.0 + beta) / distance - 1.0) * offset)
        carrier = np.array([1.0, 0.0]) if self.passive else workspace_ray
        return StarTerms(gamma, proximities, gates, rays, carrier)

    def batch_star_displacement(self, q, terms=None):
        """Star-to-sphere displacement summed directly over all switches."""
        if terms is None:
            terms = self.star_terms(q)
        gain = self.params.switch_gain(len(self.stars))
        products = _excluded_products(terms.proximities)
        displacement = np.zeros(2)
        for i, (product, gating, ray) in enumerate(zip(products, terms.gates, terms.rays)):
            if i == 0 and self.passive:
                continue
            displacement += switch(terms.gamma, product, gain, gating) * ray
        return displacement

    def star_to_sphere(self, q):
        q = np.asarray(q, dtype=float)
        return q + self.star_displacement(q)

    ### Sphere to point

    def contract(self, q):
        """Collapse each model sphere onto its center."""
        q = np.asarray(q, dtype=float)
        result = q.copy()
        for center, radius, width in zip(self.sphere_centers, self.sphere_radii, self.ramp_widths):
            result += contraction(q, center, radius, width)
        return result

    def psi(self, q):
        """Map the open outer model sphere onto the whole plane."""
        offset = np.asarray(q, dtype=float) - self.workspace_center
        distance = _norm(offset)
        if distance >= self.workspace_radius:
            raise PsiSingularity('point %s is outside the outer model sphere' % (q,))
        return self.workspace_center + self.workspace_radius / (self.workspace_radius - distance) * offset

    def sphere_to_point(self, q):
        return self.psi(self.contract(q))

    def point_image(self, q):
        """Image of the belief-world point *q* in the point world."""
        return self.sphere_to_point(self.star_to_sphere(self.forest_to_star(q)))

    ### Potential

    def log_potential(self, q):
        """The point-world potential pulled back to *q*; same level sets
        as :py:meth:`nf_eval` without its saturation."""
        return self.phi_point(self.point_image(q))

    def nf_eval(self, q):
        """Navigation function value in ``[0, mu]``."""
        mu = self.params.mu
        q = np.asarray(q, dtype=float)
        if not self.world.free(q):
            return mu
        try:
            return squash(exponentiate(self.log_potential(q)), mu)
        except PsiSingularity:
            return mu
        except LogSingularity as err:
            return 0.0 if err.goal else mu

    def difference_step(self, q):
        return 1e-6 * max(1.0, _norm(q))

    def log_gradient(self, q):
        """Central-difference gradient of :py:meth:`log_potential`."""
        q = np.asarray(q, dtype=float)
        h = self.difference_step(q)
        gradient = np.zeros(2)
        for axis in range(2):
            step = np.zeros(2)
            step[axis] = h
            gradient[axis] = (self.log_potential(q + step) - self.log_potential(q - step)) / (2.0 * h)
        return gradient

    def nf_grad(self, q):
        """Gradient of :py:meth:`nf_eval`; zero at the goal and on
        singular points."""
        q = np.asarray(q, dtype=float)
        try:
            z = exponentiate(self.log_potential(q))
            if math.isinf(z):
                return np.zeros(2)
            return z * squash_derivative(z, self.params.mu) * self.log_gradient(q)
        except (PsiSingularity, LogSingularity):
            return np.zeros(2)

    def image_jacobian(self, q):
        """Central-difference Jacobian of :py:meth:`point_image`."""
        q = np.asarray(q, dtype=float)
        h = self.difference_step(q)
        columns = []
        for axis in range(2):
            step = np.zeros(2)
            step[axis] = h
            columns.append((self.point_image(q + step) - self.point_image(q - step)) / (2.0 * h))
        return np.stack(columns, axis=1)


class TransformStack(AbstractPotential):
    """The navigation function built in one pass from the current state
    of *world*."""

    def __init__(self, world, goal, params=None):
        super(TransformStack, self).__init__(world, goal, params)
        self.stars = world.roots
        self.records = [self.purge_record(node) for node in world.non_roots]
        self.refresh_spheres()

    def star_displacement(self, q):
        return self.batch_star_displacement(q)

    def phi_point(self, x):
        weight = self.params.harmonic_gain(len(self.points))
        value = log_distance(x, self.goal_image, goal=True)
        for point in self.points:
            value -= log_distance(x, point) / weight
        return value
