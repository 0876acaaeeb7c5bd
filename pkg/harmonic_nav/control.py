"""Unicycle kinematics, the harmonic tracking controller and the edge
cost estimate used by the Harmonic Trees."""

import math

import numpy as np

from .oriented import AtGoal, wrap_angle

FEEDFORWARD_MODES = ('chain', 'jacobian', 'none')
DIFFERENCE_STEP = 1e-5


class Pose(object):
    """A planar position with a heading wrapped to ``(-pi, pi]``."""

    def __init__(self, x=0.0, y=0.0, theta=0.0):
        self.x = float(x)
        self.y = float(y)
        self.theta = wrap_angle(float(theta))

    @classmethod
    def from_sequence(cls, values):
        return cls(*values)

    @property
    def q(self):
        return np.array([self.x, self.y])

    def distance(self, other):
        return math.hypot(self.x - other.x, self.y - other.y)

    def to_document(self):
        return [self.x, self.y, self.theta]

    def __eq__(self, other):
        return isinstance(other, Pose) and (self.x, self.y, self.theta) == (other.x, other.y, other.theta)

    def __hash__(self):
        return hash((self.x, self.y, self.theta))

    def __repr__(self):
        return 'Pose(%g, %g, %g)' % (self.x, self.y, self.theta)


class ControlParams(object):
    """Gains of the tracking controller and the rotation-cost weights."""

    def __init__(self, **kwargs):
        self.k_v = 1.0
        """Linear velocity gain."""
        self.k_omega = 0.8
        """Heading gain."""
        self.w = (1.0, 1.0)
        """Rotation-cost weights of the edge cost estimate."""
        self.dt = 0.01
        """Integration step in seconds."""
        self.feedforward = 'chain'
        """How the heading feed-forward term is computed: ``'chain'``
        (derivative of the field heading along the robot heading),
        ``'jacobian'`` (through the field Jacobian) or ``'none'``."""

        for k, v in kwargs.items():
            if not hasattr(self, k):
                raise ValueError('unknown control parameter "%s"' % k)
            setattr(self, k, v)

        self.k_v = float(self.k_v)
        self.k_omega = float(self.k_omega)
        self.w = tuple(float(x) for x in self.w)
        self.dt = float(self.dt)
        if self.k_v <= 0.0 or self.k_omega <= 0.0 or self.dt <= 0.0:
            raise ValueError('controller gains and time step must be positive')
        if len(self.w) != 2 or min(self.w) < 0.0:
            raise ValueError('w must hold two non-negative weights')
        if self.feedforward not in FEEDFORWARD_MODES:
            raise ValueError('unknown feed-forward mode "%s"' % self.feedforward)


def feedforward(field, q, heading, mode):
    """Rate of change of the field heading per metre travelled along
    *heading*."""
    if mode == 'none':
        return 0.0
    direction = np.array([math.cos(heading), math.sin(heading)])
    h = DIFFERENCE_STEP
    if mode == 'chain':
        ahead = field.heading_at(q + h * direction)
        behind = field.heading_at(q - h * direction)
        return wrap_angle(ahead - behind) / (2.0 * h)
    vector = field.log_field(q)
    size2 = vector[0] ** 2 + vector[1] ** 2
    angle_gradient = np.array([-vector[1], vector[0]]) / size2
    jacobian = np.zeros((2, 2))
    for axis in range(2):
        step = np.zeros(2)
        step[axis] = h
        jacobian[:, axis] = (field.log_field(q + step) - field.log_field(q - step)) / (2.0 * h)
    return float(angle_gradient.dot(jacobian).dot(direction))


def control(field, pose, params):
    """Return the velocities ``(v, omega)`` that track *field* from
    *pose*; ``(0, 0)`` at the goal."""
    q = pose.q
    distance = math.hypot(*(q - field.goal))
    try:
        target = field.heading_at(q)
    except AtGoal:
        return 0.0, 0.0
    v = params.k_v * math.tanh(distance)
    omega = -params.k_omega * wrap_angle(pose.theta - target)
    if params.feedforward != 'none':
        omega += v * feedforward(field, q, pose.theta, params.feedforward)
    return v, omega


def _unicycle(state, v, omega):
    return np.array([v * math.cos(state[2]), v * math.sin(state[2]), omega])


def step(pose, v, omega, dt):
    """Advance the unicycle by *dt* with constant inputs (RK4)."""
    state = np.array([pose.x, pose.y, pose.theta])
    k1 = _unicycle(state, v, omega)
    k2 = _unicycle(state + 0.5 * dt * k1, v, omega)
    k3 = _unicycle(state + 0.5 * dt * k2, v, omega)
    k4 = _unicycle(state + dt * k3, v, omega)
    state = state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return Pose(state[0], state[1], state[2])


def cost_terms(start, goal, field=None):
    """Return ``(distance, rotations)`` of the edge cost from the pose
    *start* to the pose *goal*.  *rotations* holds the turn from the
    start heading onto the field heading and the turn from the chord
    direction onto the goal heading.  Without a *field* the chord
    direction stands in for the field heading."""
    distance = start.distance(goal)
    if distance == 0.0:
        return 0.0, (abs(wrap_angle(goal.theta - start.theta)), 0.0)
    chord = math.atan2(goal.y - start.y, goal.x - start.x)
    field_heading = chord
    if field is not None:
        try:
            field_heading = field.heading_at(start.q)
        except ArithmeticError:
            field_heading = start.theta
    return distance, (abs(wrap_angle(field_heading - start.theta)),
                      abs(wrap_angle(chord - goal.theta)))


def estimate_cost(start, goal, field, w):
    """Cost of driving from the pose *start* to the pose *goal* under
    *field*: the straight-line distance plus the rotations of
    :py:func:`cost_terms` weighted by *w*."""
    distance, rotations = cost_terms(start, goal, field)
    return distance + w[0] * rotations[0] + w[1] * rotations[1]
