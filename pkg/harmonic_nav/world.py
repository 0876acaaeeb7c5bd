"""Planar world models: the workspace boundary, obstacle shapes, the
forest-of-stars tree structure and free-space queries."""

import copy

import numpy as np

from .shapes import Circle, shape_from_document


OVERLAP_SAMPLES = 512
CENTER_SAMPLES = 10000
LINE_OF_SIGHT_STEP = 1e-3


class OverlapAmbiguous(ValueError):
    """The shape overlaps several obstacles, or the overlap is too thin
    to hold a common center."""


class OutsideBoundary(ValueError):
    """The shape is not strictly inside the workspace boundary."""


class Region(object):
    """A labelled goal region, a disk of the workspace."""

    def __init__(self, label, center, radius=0.1):
        self.label = str(label)
        """The atomic proposition this region satisfies."""
        self.center = np.asarray(center, dtype=float).reshape(2)
        self.radius = float(radius)

    @classmethod
    def from_document(cls, document):
        return cls(document['label'], document['center'], document.get('radius', 0.1))

    def to_document(self):
        return {'label': self.label, 'center': [float(c) for c in self.center],
                'radius': self.radius}

    def contains(self, point):
        return float(np.hypot(*(np.asarray(point) - self.center))) <= self.radius

    def __repr__(self):
        return 'Region(%r, center=(%g, %g), radius=%g)' % (
            self.label, self.center[0], self.center[1], self.radius)


class ObstacleNode(object):
    """An obstacle of a :py:class:`ForestWorld` together with its place
    in a tree of overlapping stars."""

    def __init__(self, **kwargs):
        self.id = -1
        """Insertion index, unique within a world."""
        self.shape = None
        self.parent = None
        """Id of the parent node, or ``None`` for a root."""
        self.center = None
        """The common center shared with the parent; ``None`` for roots."""
        self.margin = 0.0
        """Purging margin *E* of the star deforming factor."""
        self.gain = 10.0
        """Purging switch gain *xi*."""
        self.depth = 0
        self.children = []

        for k, v in kwargs.items():
            if hasattr(self, k):
                setattr(self, k, v)

    @property
    def is_root(self):
        return self.parent is None

    def __repr__(self):
        return 'ObstacleNode(id=%d, parent=%r, depth=%d, shape=%r)' % (
            self.id, self.parent, self.depth, self.shape)


class World(object):
    """A workspace *boundary* with obstacle *shapes* and goal
    *regions*.  The simulator uses a plain world as ground truth."""

    def __init__(self, boundary, shapes=(), regions=()):
        boundary.boundary = True
        self.boundary = boundary
        self._shapes = list(shapes)
        self.regions = list(regions)

    @property
    def shapes(self):
        return list(self._shapes)

    def interior(self, points):
        """The workspace function, positive strictly inside the
        boundary."""
        value = self.boundary.beta(points)
        return -value

    def betas(self, q):
        return [shape.beta_xy(q[0], q[1]) for shape in self.shapes]

    def free(self, q):
        """Whether *q* is strictly inside the boundary and strictly
        outside every obstacle."""
        if self.boundary.beta_xy(q[0], q[1]) >= 0.0:
            return False
        return all(shape.beta_xy(q[0], q[1]) > 0.0 for shape in self.shapes)

    def free_points(self, points):
        points = np.asarray(points, dtype=float)
        mask = self.boundary.beta(points) < 0.0
        for shape in self.shapes:
            mask &= shape.beta(points) > 0.0
        return mask

    def line_of_sight(self, start, end, step=LINE_OF_SIGHT_STEP):
        """Whether every point of the segment from *start* to *end*,
        sampled every *step* metres, is free."""
        start = np.asarray(start, dtype=float)
        end = np.asarray(end, dtype=float)
        count = max(2, int(np.ceil(np.hypot(*(end - start)) / step)) + 1)
        samples = start + np.linspace(0.0, 1.0, count)[:, None] * (end - start)
        return bool(np.all(self.free_points(samples)))

    def clearance(self, q):
        """Smallest obstacle-function value at *q*, counting the
        workspace function.  Negative once *q* leaves free space."""
        values = [-self.boundary.beta_xy(q[0], q[1])]
        values.extend(self.betas(q))
        return min(values)

    def region(self, label):
        for region in self.regions:
            if region.label == label:
                return region
        raise KeyError('unknown region "%s"' % label)

    def labels_at(self, q):
        return set(region.label for region in self.regions if region.contains(q))

    def extent(self):
        """Bounding box ``(lower, upper)`` of the workspace."""
        return self.boundary.bounding_box()

    def to_document(self):
        return {'workspace': self.boundary.to_document(),
                'obstacles': [shape.to_document() for shape in self.shapes],
                'regions': [region.to_document() for region in self.regions]}

    @classmethod
    def from_document(cls, document):
        return cls(shape_from_document(document['workspace'], boundary=True),
                   [shape_from_document(shape) for shape in document.get('obstacles', [])],
                   [Region.from_document(region) for region in document.get('regions', [])])


class ForestWorld(World):
    """A world whose obstacles are arranged as a forest of stars.

    Obstacles are added one at a time with :py:meth:`insert_obstacle`.
    A shape that overlaps no obstacle becomes a new root; a shape that
    overlaps exactly one obstacle becomes its child and shares a common
    center with it."""

    def __init__(self, boundary, regions=(), seed=0, margin_factor=0.1, gain=10.0):
        super(ForestWorld, self).__init__(boundary, (), regions)
        self.nodes = {}
        self.seed = int(seed)
        self.margin_factor = float(margin_factor)
        self.gain = float(gain)

    @property
    def shapes(self):
        return [self.nodes[i].shape for i in sorted(self.nodes)]

    @property
    def roots(self):
        """Root nodes in insertion order."""
        return [self.nodes[i] for i in sorted(self.nodes) if self.nodes[i].is_root]

    @property
    def non_roots(self):
        return [self.nodes[i] for i in sorted(self.nodes) if not self.nodes[i].is_root]

    def __len__(self):
        return len(self.nodes)

    def default_margin(self, shape):
        if isinstance(shape, Circle):
            return self.margin_factor * shape.radius
        return self.margin_factor * float(np.min(shape.half_widths))

    def overlapping(self, shape):
        """Return the nodes whose obstacles intersect *shape*."""
        samples = shape.boundary_points(OVERLAP_SAMPLES)
        found = []
        for i in sorted(self.nodes):
            other = self.nodes[i].shape
            if np.any(other.beta(samples) <= 0.0):
                found.append(self.nodes[i])
            elif np.any(shape.beta(other.boundary_points(OVERLAP_SAMPLES)) <= 0.0):
                found.append(self.nodes[i])
        return found

    def check_inside(self, shape):
        samples = shape.boundary_points(OVERLAP_SAMPLES)
        if np.any(self.interior(samples) <= 0.0):
            raise OutsideBoundary('%r is not strictly inside the workspace' % (shape,))

    def common_center(self, shape, parent, node_id):
        """Centroid of the intersection of *shape* and *parent*,
        estimated from uniform samples over the bounding box of the
        smaller of the two."""
        smaller = shape if shape.area() <= parent.area() else parent
        lower, upper = smaller.bounding_box()
        rng = np.random.default_rng([self.seed, node_id])
        samples = rng.uniform(lower, upper, size=(CENTER_SAMPLES, 2))
        inside = samples[(shape.beta(samples) < 0.0) & (parent.beta(samples) < 0.0)]
        if len(inside) < 10:
            raise OverlapAmbiguous('overlap between %r and %r is too thin' % (shape, parent))
        center = inside.mean(axis=0)
        if shape.beta_xy(center[0], center[1]) >= 0.0 or parent.beta_xy(center[0], center[1]) >= 0.0:
            center = inside[np.argmin(np.hypot(*(inside - center).T))]
        return center

    def insert_obstacle(self, shape, margin=None, gain=None):
        """Insert *shape* and return its :py:class:`ObstacleNode`.

        Raises :py:class:`OutsideBoundary` if the shape touches the
        workspace boundary and :py:class:`OverlapAmbiguous` if it
        overlaps two or more existing obstacles."""
        self.check_inside(shape)
        overlaps = self.overlapping(shape)
        if len(overlaps) > 1:
            raise OverlapAmbiguous('%r overlaps obstacles %s' % (
                shape, ', '.join(str(node.id) for node in overlaps)))
        node_id = len(self.nodes)
        node = ObstacleNode(id=node_id, shape=shape,
                            margin=self.default_margin(shape) if margin is None else float(margin),
                            gain=self.gain if gain is None else float(gain))
        if overlaps:
            parent = overlaps[0]
            node.center = self.common_center(shape, parent.shape, node_id)
            node.parent = parent.id
            node.depth = parent.depth + 1
            parent.children.append(node_id)
        self.nodes[node_id] = node
        return node

    def root_of(self, node):
        while node.parent is not None:
            node = self.nodes[node.parent]
        return node

    def stage(self, node):
        """Return ``(members, leaves)`` of the world seen when *node* is
        purged: every root and every non-root inserted no later than
        *node*, and the non-roots among them without children there."""
        members = [self.nodes[i] for i in sorted(self.nodes)
                   if self.nodes[i].is_root or i <= node.id]
        present = set(member.id for member in members)
        leaves = [member for member in members if not member.is_root
                  and not any(child in present for child in member.children)]
        return members, leaves

    def trees(self):
        """Map each root id to the ids of its tree."""
        trees = dict((root.id, []) for root in self.roots)
        for i in sorted(self.nodes):
            trees[self.root_of(self.nodes[i]).id].append(i)
        return trees

    def copy(self):
        return copy.deepcopy(self)
