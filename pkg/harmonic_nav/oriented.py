"""Oriented harmonic fields: the negated potential gradient turned by
a two-step rotation so that integral curves reach the goal along a
prescribed heading."""

import math

import numpy as np


class AtGoal(ArithmeticError):
    """The field is undefined at the goal point."""


class Diverged(RuntimeError):
    """An integral curve left the workspace."""


def wrap_angle(angle):
    """Wrap *angle* to ``(-pi, pi]``."""
    wrapped = math.fmod(angle + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def sign(value):
    return 1.0 if value >= 0.0 else -1.0


def rotation(angle):
    """Rotation matrix by *angle*; whole turns give the exact identity."""
    if abs(angle) >= 2.0 * math.pi - 1e-9:
        return np.eye(2)
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


class OrientedField(object):
    """The field ``-Gamma(q) grad(phi)`` of *potential* for the goal
    heading *heading*.

    ``Gamma = R(theta2) R(theta1)``.  Near the goal the first rotation
    aligns the gradient with ``q - q_G`` and the second one turns it into
    a dipole field around the goal heading; near obstacles and the
    workspace boundary both rotations fade to whole turns."""

    def __init__(self, potential, heading=0.0, tau=0.5, delta_c=0.0, delta_c_prime=math.pi):
        if not 0.0 < tau < 1.0:
            raise ValueError('tau must lie in (0, 1), got %r' % tau)
        self.potential = potential
        self.heading = float(heading)
        self.tau = float(tau)
        self.delta_c = float(delta_c)
        self.delta_c_prime = float(delta_c_prime)

    @property
    def goal(self):
        return self.potential.goal

    def s_d(self, q=None, value=None):
        """Switch that is 1 at the goal and fades to 0 towards the
        maximum of the navigation function.  *value* overrides the
        navigation function value at *q*."""
        mu = self.potential.params.mu
        if value is None:
            value = self.potential.nf_eval(q)
        if value >= mu - 1e-9:
            return 0.0
        return math.exp(self.tau - self.tau * mu / (mu - value) ** 2)

    def goal_frame(self, q):
        offset = np.asarray(q, dtype=float) - self.goal
        c, s = math.cos(self.heading), math.sin(self.heading)
        return np.array([c * offset[0] + s * offset[1], -s * offset[0] + c * offset[1]])

    def theta1(self, q, gradient, switch):
        offset = np.asarray(q, dtype=float) - self.goal
        delta = wrap_angle(math.atan2(offset[1], offset[0]) - math.atan2(gradient[1], gradient[0]))
        return switch * delta + sign(delta) * (1.0 - switch) * self.delta_c

    def theta2(self, q, switch):
        local = self.goal_frame(q)
        delta = math.atan2(local[1], local[0])
        if delta == -math.pi:
            delta = math.pi
        return switch * delta + sign(delta) * (1.0 - switch) * self.delta_c_prime + self.delta_c_prime

    def check(self, q):
        q = np.asarray(q, dtype=float)
        if q[0] == self.goal[0] and q[1] == self.goal[1]:
            raise AtGoal('the oriented field is undefined at the goal %s' % (self.goal,))
        return q

    def gamma_matrix(self, q, gradient=None):
        """The two-step rotation at *q*."""
        q = self.check(q)
        if gradient is None:
            gradient = self.potential.log_gradient(q)
        switch = self.s_d(q)
        return rotation(self.theta2(q, switch)).dot(rotation(self.theta1(q, gradient, switch)))

    def upsilon(self, q):
        """The oriented field; as long as the navigation function
        gradient."""
        q = self.check(q)
        gradient = self.potential.nf_grad(q)
        direction = self.potential.log_gradient(q)
        return -self.gamma_matrix(q, direction).dot(gradient)

    def log_field(self, q):
        """Field with the direction of :py:meth:`upsilon` built on the
        unsaturated log-potential gradient."""
        q = self.check(q)
        gradient = self.potential.log_gradient(q)
        return -self.gamma_matrix(q, gradient).dot(gradient)

    def direction(self, q):
        """Unit vector of the field at *q*."""
        field = self.log_field(q)
        size = math.hypot(field[0], field[1])
        if size == 0.0:
            raise AtGoal('the field vanishes at %s' % (q,))
        return field / size

    def heading_at(self, q):
        """Direction angle of the field at *q*."""
        field = self.log_field(q)
        return math.atan2(field[1], field[0])

    def integrate_curve(self, start, step=0.005, max_steps=5000, tolerance=0.01):
        """Trace the integral curve of the field from *start* with
        fixed-step RK4 on the unit field.  Stops within *tolerance* of
        the goal or after *max_steps*; returns the visited points."""
        q = np.asarray(start, dtype=float)
        points = [q.copy()]
        world = self.potential.world
        for _ in range(max_steps):
            if math.hypot(*(q - self.goal)) <= tolerance:
                break
            k1 = self.direction(q)
            k2 = self.direction(q + 0.5 * step * k1)
            k3 = self.direction(q + 0.5 * step * k2)
            k4 = self.direction(q + step * k3)
            q = q + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if world.boundary.beta_xy(q[0], q[1]) >= 0.0:
                raise Diverged('integral curve left the workspace at %s' % (q,))
            points.append(q.copy())
        return np.array(points)
