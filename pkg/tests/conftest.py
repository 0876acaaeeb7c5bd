import math

import numpy as np
import pytest

from harmonic_nav.control import Pose
from harmonic_nav.shapes import Circle, Squircle
from harmonic_nav.world import ForestWorld, Region, World


@pytest.fixture
def disk():
    return Circle((0.0, 0.0), 2.0, boundary=True)


@pytest.fixture
def empty_world(disk):
    return ForestWorld(disk)


@pytest.fixture
def box():
    return Squircle((2.0, 2.0), (2.0, 2.0), 0.99, boundary=True)


@pytest.fixture
def forest(box):
    """Two independent stars and a tree of depth one."""
    world = ForestWorld(box, [Region('a', (0.6, 3.4)), Region('b', (3.4, 0.6))])
    world.insert_obstacle(Circle((1.0, 1.0), 0.3))
    world.insert_obstacle(Squircle((3.0, 3.0), (0.3, 0.2), 0.9))
    world.insert_obstacle(Circle((1.35, 1.0), 0.2))
    return world


@pytest.fixture
def wall_world(box):
    """A box split in two by a wall."""
    return World(box, [Squircle((2.0, 2.0), (0.1, 2.5), 0.99)])


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def free_samples(world, count, rng, margin=0.0):
    """Uniform free points of *world* with every obstacle function above
    *margin*."""
    lower, upper = world.extent()
    found = []
    while len(found) < count:
        q = rng.uniform(lower, upper)
        if world.free(q) and world.clearance(q) > margin:
            found.append(q)
    return np.array(found)


def pose(x, y, theta=0.0):
    return Pose(x, y, theta)


def angle_error(a, b):
    return abs(math.remainder(a - b, 2.0 * math.pi))
