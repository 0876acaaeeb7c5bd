"""Online updates of the navigation function.

When the robot discovers an obstacle, :py:class:`IncrementalState`
absorbs it without rebuilding the transform chain: an independent star
extends the star-to-sphere switches, which are re-evaluated through the
auxiliary recursion :py:func:`psi_aux`, and an overlapping star appends
one purging step to the forest-to-star composition.
"""

import copy
import math
import warnings

import numpy as np

from .diagnostics import RecursionFallbackWarning
from .transforms import AbstractPotential, TransformStack, log_distance, switch


class DegenerateDenominator(ArithmeticError):
    """The auxiliary recursion divided by zero."""


def psi_aux(frame, ray, new_ray, alpha):
    """Return ``|frame| * new_ray / (alpha * (|ray| - |frame|) + |frame|)``.

    If *frame* is ``s * ray`` for a switch value ``s`` in ``[0, 1]``,
    the result is ``s' * new_ray`` with ``s' = s / (s + alpha (1 - s))``."""
    size = math.hypot(frame[0], frame[1])
    denominator = alpha * (math.hypot(ray[0], ray[1]) - size) + size
    if denominator == 0.0 or not math.isfinite(denominator):
        raise DegenerateDenominator('auxiliary recursion denominator is %r' % denominator)
    return size * np.asarray(new_ray, dtype=float) / denominator


class IncrementalState(AbstractPotential):
    """A navigation function that follows a growing belief world.

    The state shares *world* with its owner.  New obstacles are either
    inserted through :py:meth:`add_obstacle` or, when the world is
    shared by several states, inserted once into the world and handed to
    :py:meth:`absorb` of every state."""

    def __init__(self, world, goal, params=None):
        super(IncrementalState, self).__init__(world, goal, params)
        self.absorbed = set()
        self.fallbacks = 0
        """Number of query points that needed the batch fallback."""
        self.refresh_spheres()
        for node_id in sorted(world.nodes):
            self.absorb(world.nodes[node_id])

    @classmethod
    def from_world(cls, world, goal, params=None):
        return cls(world, goal, params)

    def absorb(self, node):
        """Take the already inserted *node* into account."""
        if node.id in self.absorbed:
            return self
        self.absorbed.add(node.id)
        if node.is_root:
            self.stars.append(node)
            for record in self.records:
                record.others.append(node.shape)
            self.append_sphere(node)
            self.place_goal()
        else:
            self.records.append(self.purge_record(node))
        count = len(self.stars)
        assert self.params.harmonic_gain(count) > count
        return self

    def add_obstacle(self, shape, margin=None, gain=None):
        """Insert *shape* into the world and absorb it.  Propagates
        :py:class:`~harmonic_nav.world.OverlapAmbiguous` and
        :py:class:`~harmonic_nav.world.OutsideBoundary`."""
        node = self.world.insert_obstacle(shape, margin, gain)
        return self.absorb(node)

    def retarget(self, goal):
        """Return a state for another *goal* sharing this one's world."""
        other = copy.copy(self)
        other.goal = np.asarray(goal, dtype=float).reshape(2)
        other.absorbed = set(self.absorbed)
        other.stars = list(self.stars)
        other.records = [copy.copy(record) for record in self.records]
        for record in other.records:
            record.others = list(record.others)
        for name in ('sphere_centers', 'sphere_radii', 'nearest_gaps', 'ramp_widths', 'points'):
            setattr(other, name, list(getattr(self, name)))
        other.fallbacks = 0
        other.refresh_goal()
        return other

    def batch(self):
        """The equivalent :py:class:`~harmonic_nav.transforms.TransformStack`."""
        return TransformStack(self.world, self.goal, self.params)

    ### Star-to-sphere recursion

    def initial_workspace(self, terms):
        """Workspace switch of the empty world times its carrier."""
        gain = self.params.switch_gain(0)
        return switch(terms.gamma, 1.0, gain, terms.gates[0]) * terms.carrier

    def update_workspace(self, terms, frame, k):
        """Workspace term after the ``(k+1)``-th star from the term
        *frame* after the ``k``-th."""
        alpha = self.params.switch_gain(k + 1) / (self.params.switch_gain(k) * terms.proximities[k + 1])
        return psi_aux(frame, terms.carrier, terms.carrier, alpha)

    def update_obstacle(self, terms, frame, i):
        """Term of switch ``i+1`` from the term *frame* of switch ``i``;
        index 0 is the workspace."""
        ray = terms.carrier if i == 0 else terms.rays[i]
        alpha = (terms.gates[i + 1] * terms.proximities[i + 1]) / (terms.gates[i] * terms.proximities[i])
        return psi_aux(frame, ray, terms.rays[i + 1], alpha)

    def recursive_star_displacement(self, terms):
        frame = self.initial_workspace(terms)
        for k in range(len(self.stars)):
            frame = self.update_workspace(terms, frame, k)
        displacement = np.zeros(2) if self.passive else frame.copy()
        for i in range(len(self.stars)):
            frame = self.update_obstacle(terms, frame, i)
            displacement += frame
        return displacement

    def star_displacement(self, q):
        terms = self.star_terms(q)
        try:
            with np.errstate(divide='raise', invalid='raise'):
                return self.recursive_star_displacement(terms)
        except (DegenerateDenominator, ZeroDivisionError, FloatingPointError):
            return self.fall_back(q, terms)

    def fall_back(self, q, terms):
        self.fallbacks += 1
        if self.fallbacks == 1:
            warnings.warn('recursive update is degenerate at %s, using the batch value' % (q,),
                          RecursionFallbackWarning)
        return self.batch_star_displacement(q, terms)

    ### Purging recursion

    def update_purge(self, q, frame, k):
        """Purging term of record ``k+1`` at *q* from the term *frame*
        of record ``k``."""
        current, following = self.records[k], self.records[k + 1]
        _, product, gating, ray = self.purge_terms(current, q)
        _, next_product, next_gating, next_ray = self.purge_terms(following, q)
        alpha = (following.node.gain / current.node.gain) * (next_gating / gating) * (product / next_product)
        return psi_aux(frame, ray, next_ray, alpha)

    ### Point-world recursion

    def update_point_potential(self, x, value, count):
        """Potential with ``count + 1`` point obstacles from *value*, the
        potential at *x* with the first *count*."""
        weight = self.params.harmonic_gain(count)
        goal_term = log_distance(x, self.goal_image, goal=True)
        return (goal_term - log_distance(x, self.points[count])) / (weight + 1.0) \
            + weight / (weight + 1.0) * value

    def phi_point(self, x):
        value = log_distance(x, self.goal_image, goal=True)
        for count in range(len(self.points)):
            value = self.update_point_potential(x, value, count)
        return value
