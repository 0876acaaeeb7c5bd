"""Harmonic Trees: oriented waypoint roadmaps, one per region
transition, whose edge costs estimate the effort of the harmonic
tracking controller.

A tree is a :py:class:`networkx.DiGraph` whose nodes carry a ``pose``
attribute and whose edges carry the ``distance`` and ``rotations``
terms of :py:func:`~harmonic_nav.control.cost_terms` together with the
weighted ``cost``.
"""

import math

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from .control import Pose, cost_terms
from .oriented import wrap_angle
from .world import LINE_OF_SIGHT_STEP

START = 0
GOAL = 1


class Disconnected(RuntimeError):
    """No path joins the start to the goal of a tree."""


class RankDeficient(RuntimeError):
    """The traversal history does not determine the cost weights."""


class TreeConfig(object):
    """Sampling and connection settings of a Harmonic Tree."""

    def __init__(self, **kwargs):
        self.samples = 40
        """Number of uniform free-space samples of the initial tree."""
        self.radius = None
        """Connection radius; ``None`` means ``0.35 * diagonal / sqrt(samples)``."""
        self.regenerate = 10
        """Samples drawn after each trim."""
        self.probe = 16
        """Probe grid size of the regeneration bias."""
        self.max_attempts = 200
        """Rejection-sampling attempts per requested vertex."""
        self.vicinity = 0.05
        """Distance at which a waypoint counts as reached."""
        self.goal_tolerance = 0.1
        """Heading tolerance at the final waypoint, in radians."""
        self.approach = 0.25
        """Distance of the approach vertex behind the goal; 0 disables it."""
        self.min_weight = 1e-3

        for k, v in kwargs.items():
            if not hasattr(self, k):
                raise ValueError('unknown tree parameter "%s"' % k)
            setattr(self, k, v)

        self.samples = int(self.samples)
        self.regenerate = int(self.regenerate)
        self.probe = int(self.probe)
        self.approach = float(self.approach)
        if self.samples < 0 or self.regenerate < 0:
            raise ValueError('sample counts must be non-negative')
        if self.probe < 2:
            raise ValueError('the probe grid needs at least 2 points per axis')
        if self.radius is not None and float(self.radius) <= 0.0:
            raise ValueError('connection radius must be positive')

    def connection_radius(self, world):
        if self.radius is not None:
            return float(self.radius)
        lower, upper = world.extent()
        diagonal = float(np.hypot(*(upper - lower)))
        return 0.35 * diagonal / math.sqrt(max(self.samples, 1))


class WaypointPath(object):
    """Vertex ids from the start to the goal of a tree, their poses and
    the summed edge cost."""

    def __init__(self, vertices, poses, cost):
        self.vertices = list(vertices)
        self.poses = list(poses)
        self.cost = float(cost)

    def __len__(self):
        return len(self.vertices)

    def turning(self):
        """Total heading change along the polyline through the poses,
        ending on the goal heading."""
        if len(self.poses) < 2:
            return 0.0
        headings = [self.poses[0].theta]
        for a, b in zip(self.poses[:-1], self.poses[1:]):
            if a.distance(b) > 0.0:
                headings.append(math.atan2(b.y - a.y, b.x - a.x))
        headings.append(self.poses[-1].theta)
        return sum(abs(wrap_angle(b - a)) for a, b in zip(headings[:-1], headings[1:]))

    def to_document(self):
        return {'path': self.vertices, 'poses': [pose.to_document() for pose in self.poses],
                'cost': self.cost}


def heading_towards(points, target):
    """Orientation of each of *points* facing *target*."""
    offset = np.asarray(target, dtype=float) - np.asarray(points, dtype=float)
    return np.arctan2(offset[:, 1], offset[:, 0])


def segment_clear(shape, start, end, step=LINE_OF_SIGHT_STEP):
    """Whether the segment misses *shape*."""
    count = max(2, int(np.ceil(np.hypot(*(end - start)) / step)) + 1)
    samples = start + np.linspace(0.0, 1.0, count)[:, None] * (end - start)
    return bool(np.all(shape.beta(samples) > 0.0))


def approach_point(goal, offset):
    """The point *offset* behind the pose *goal*, or ``None`` for a zero
    offset."""
    if offset <= 0.0:
        return None
    return goal.q - offset * np.array([math.cos(goal.theta), math.sin(goal.theta)])


def zeta(value):
    """``exp(1 - 1/value)``, zero at a vanishing potential."""
    value = np.asarray(value, dtype=float)
    with np.errstate(divide='ignore'):
        result = np.exp(1.0 - 1.0 / np.where(value > 0.0, value, np.inf))
    return np.where(value > 0.0, result, 0.0)


class HarmonicTree(object):
    """The oriented roadmap from *start* to *goal* (both
    :py:class:`~harmonic_nav.control.Pose`) in *world*.  Edge costs take
    the chord direction for the heading of the field."""

    def __init__(self, world, start, goal, config=None, w=(1.0, 1.0), seed=0):
        self.world = world
        self.config = config if config is not None else TreeConfig()
        self.w = tuple(float(x) for x in w)
        self.rng = np.random.default_rng(seed)
        self.radius = self.config.connection_radius(world)
        self.graph = nx.DiGraph()
        self.graph.add_node(START, pose=start)
        self.graph.add_node(GOAL, pose=goal)
        self.start = START
        self.next_id = 2

    @property
    def goal(self):
        return self.pose(GOAL)

    def pose(self, vertex):
        return self.graph.nodes[vertex]['pose']

    def positions(self, vertices=None):
        vertices = list(self.graph.nodes) if vertices is None else vertices
        return np.array([self.pose(v).q for v in vertices]).reshape(-1, 2)

    def edge_cost(self, distance, rotations):
        return distance + self.w[0] * rotations[0] + self.w[1] * rotations[1]

    def add_vertices(self, points, headings=None):
        """Add free *points* as vertices and connect them; returns the
        new ids."""
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if headings is None:
            headings = heading_towards(points, self.goal.q)
        ids = []
        for point, heading in zip(points, headings):
            self.graph.add_node(self.next_id, pose=Pose(point[0], point[1], heading))
            ids.append(self.next_id)
            self.next_id += 1
        self.connect(ids)
        return ids

    def connect(self, new):
        """Join each of the *new* vertices to every vertex within the
        connection radius in line of sight, in both directions."""
        if not new:
            return
        vertices = list(self.graph.nodes)
        positions = self.positions(vertices)
        index = cKDTree(positions)
        fresh = set(new)
        for v in new:
            for j in index.query_ball_point(self.pose(v).q, self.radius):
                u = vertices[j]
                if u == v or (u in fresh and u < v):
                    continue
                a, b = self.pose(u), self.pose(v)
                if a.distance(b) >= self.radius or not self.world.line_of_sight(a.q, b.q):
                    continue
                self.add_edge(u, v)
                self.add_edge(v, u)

    def add_edge(self, u, v):
        distance, rotations = cost_terms(self.pose(u), self.pose(v))
        self.graph.add_edge(u, v, distance=distance, rotations=rotations,
                            cost=self.edge_cost(distance, rotations))

    def sample_free(self, count):
        """Up to *count* uniform samples of free space."""
        lower, upper = self.world.extent()
        found = []
        attempts = 0
        while len(found) < count and attempts < self.config.max_attempts * max(count, 1):
            batch = self.rng.uniform(lower, upper, size=(max(count, 16), 2))
            attempts += len(batch)
            found.extend(batch[self.world.free_points(batch)])
        return np.array(found[:count]).reshape(-1, 2)

    def reweight(self, w):
        """Recompute every edge cost with the weights *w*."""
        self.w = tuple(float(x) for x in w)
        for _, _, data in self.graph.edges(data=True):
            data['cost'] = self.edge_cost(data['distance'], data['rotations'])

    def reroot(self, pose):
        """Make *pose* the start vertex, dropping the previous start."""
        if self.start != GOAL and self.start in self.graph:
            self.graph.remove_node(self.start)
        self.start = self.add_vertices([pose.q], [pose.theta])[0]
        return self.start

    def to_document(self, path=None):
        index = dict((v, i) for i, v in enumerate(sorted(self.graph.nodes)))
        document = {
            'vertices': [self.pose(v).to_document() for v in sorted(self.graph.nodes)],
            'edges': [[index[u], index[v], data['cost']]
                      for u, v, data in sorted(self.graph.edges(data=True), key=lambda e: e[:2])],
        }
        if path is not None:
            document['path'] = [index[v] for v in path.vertices]
        return document


def build(world, start, goal, config=None, w=(1.0, 1.0), seed=0):
    """Build the tree from the pose *start* to the pose *goal*: uniform
    free samples facing the goal, plus start and goal, connected within
    the connection radius.  An approach vertex sits behind the goal on
    its heading when that spot is free."""
    tree = HarmonicTree(world, start, goal, config, w, seed)
    tree.connect([START, GOAL])
    approach = approach_point(goal, tree.config.approach)
    if approach is not None and world.free(approach) and world.line_of_sight(approach, goal.q):
        tree.add_vertices([approach], [goal.theta])
    tree.add_vertices(tree.sample_free(tree.config.samples))
    return tree


def shortest_path(tree, source=None):
    """A* search from *source* (the tree start by default) to the goal
    with the Euclidean cost-to-go."""
    source = tree.start if source is None else source
    goal = tree.goal.q

    def heuristic(u, _):
        return float(np.hypot(*(tree.pose(u).q - goal)))

    try:
        vertices = nx.astar_path(tree.graph, source, GOAL, heuristic=heuristic, weight='cost')
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        raise Disconnected('no path from vertex %s to the goal %r' % (source, tree.goal))
    path = WaypointPath(vertices, [tree.pose(v) for v in vertices], 0.0)
    path.cost = path_cost(tree, path)
    return path


def path_cost(tree, path):
    """Sum of the edge costs along *path*."""
    return float(sum(tree.graph.edges[u, v]['cost']
                     for u, v in zip(path.vertices[:-1], path.vertices[1:])))


def trim(tree, shape):
    """Remove the vertices inside the new obstacle *shape* and the
    edges crossing it.  Returns the number of removed vertices and
    edges."""
    inside = [v for v in tree.graph.nodes if shape.beta_xy(*tree.pose(v).q) <= 0.0]
    tree.graph.remove_nodes_from(inside)
    crossing = [(u, v) for u, v in tree.graph.edges
                if not segment_clear(shape, tree.pose(u).q, tree.pose(v).q)]
    tree.graph.remove_edges_from(crossing)
    return len(inside), len(crossing)


def bias(tree, phi_old, phi_new):
    """Probe points of free space and the regeneration weight
    ``|zeta_new - zeta_old|`` at each, normalised to a maximum of 1.
    *phi_old* and *phi_new* map a point to a navigation function
    value."""
    lower, upper = tree.world.extent()
    axes = [np.linspace(lower[i], upper[i], tree.config.probe) for i in range(2)]
    grid = np.stack(np.meshgrid(*axes), axis=-1).reshape(-1, 2)
    probes = grid[tree.world.free_points(grid)]
    weights = np.array([abs(float(zeta(phi_new(q)) - zeta(phi_old(q)))) for q in probes])
    top = weights.max() if len(weights) else 0.0
    if top > 0.0:
        weights = weights / top
    return probes, weights


def regenerate(tree, phi_old, phi_new, count=None):
    """Grow *count* new vertices, drawn from free space with acceptance
    proportional to the change of the potential at the nearest probe
    point.  An unchanged potential means uniform sampling.  Returns the
    new vertex ids."""
    count = tree.config.regenerate if count is None else int(count)
    if count == 0:
        return []
    probes, weights = bias(tree, phi_old, phi_new)
    if len(probes) == 0 or weights.max() == 0.0:
        return tree.add_vertices(tree.sample_free(count))
    index = cKDTree(probes)
    accepted = []
    for _ in range(tree.config.max_attempts * count):
        if len(accepted) == count:
            break
        candidate = tree.sample_free(1)
        if len(candidate) == 0:
            break
        _, nearest = index.query(candidate[0])
        if tree.rng.uniform() < weights[nearest]:
            accepted.append(candidate[0])
    return tree.add_vertices(accepted)


def update_weights(history, min_weight=1e-3):
    """Least-squares cost weights from traversal *history*, a sequence
    of ``(actual, distance, rotations)`` triples of traversed edges.
    Raises :py:class:`RankDeficient` if the rotation rows do not span
    the plane."""
    history = list(history)
    if len(history) < 2:
        raise RankDeficient('need at least two traversed edges, got %d' % len(history))
    actual = np.array([h[0] for h in history], dtype=float)
    distance = np.array([h[1] for h in history], dtype=float)
    rotations = np.array([h[2] for h in history], dtype=float).reshape(-1, 2)
    if np.linalg.matrix_rank(rotations) < 2:
        raise RankDeficient('rotation terms of %d edges are linearly dependent' % len(history))
    normal = rotations.T.dot(rotations)
    w = np.linalg.solve(normal, rotations.T.dot(actual - distance))
    return tuple(float(x) for x in np.maximum(w, min_weight))
