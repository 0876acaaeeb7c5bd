"""Simulated 360 degree Lidar, point-cloud clustering and the growth of
the belief world from fitted shapes."""

import math
import warnings

import numpy as np
from scipy.spatial import cKDTree

from .diagnostics import FitDeferredWarning, ObstacleRejectedWarning
from .fitter import FitDiverged, get_fitter
from .fitters.circle import CircleFitter
from .fitters.squircle import SquircleFitter
from .world import OutsideBoundary, OverlapAmbiguous

__all__ = ['FitDiverged', 'SensorModel', 'PointCloud', 'Cluster', 'WorldEvent',
           'scan', 'cluster', 'fit_circle', 'fit_squircle', 'coverage', 'integrate', 'Mapper']


class SensorModel(object):
    """Lidar geometry and the thresholds of the mapping pipeline."""

    def __init__(self, **kwargs):
        self.range = 0.5
        """Maximum range in metres."""
        self.beams = 360
        self.resolution = 0.005
        """Spacing of the coarse samples along each beam."""
        self.tolerance = 1e-6
        """Bisection tolerance of a hit, in metres."""
        self.gap_factor = 3.0
        """Clusters split where consecutive points are further apart
        than this multiple of the median gap."""
        self.turn_limit = math.radians(60.0)
        self.known_tolerance = 0.05
        """Points with an obstacle-function value at most this large
        for a belief obstacle are considered explained."""
        self.merge_distance = 0.1
        self.force_range = 0.3
        """A pending blob this close to the robot is fitted regardless
        of its coverage."""
        self.min_coverage = math.pi / 2.0
        self.match_radius = 0.2
        self.period = 0.1
        """Seconds between scans during a mission."""

        for k, v in kwargs.items():
            if not hasattr(self, k):
                raise ValueError('unknown sensor parameter "%s"' % k)
            setattr(self, k, v)

        self.range = float(self.range)
        self.beams = int(self.beams)
        if self.range <= 0.0:
            raise ValueError('sensor range must be positive')
        if self.beams < 90:
            raise ValueError('a scan needs at least 90 beams, got %d' % self.beams)

    @property
    def angular_resolution(self):
        return 2.0 * math.pi / self.beams


class PointCloud(object):
    """Hits of one scan, in beam order."""

    def __init__(self, points, beams, origin, time=0.0):
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.beams = np.asarray(beams, dtype=int)
        """Beam index of each point."""
        self.origin = np.asarray(origin, dtype=float)
        self.time = float(time)

    def __len__(self):
        return len(self.points)

    def subset(self, mask):
        return PointCloud(self.points[mask], self.beams[mask], self.origin, self.time)

    def ranges(self):
        return np.hypot(*(self.points - self.origin).T)


class Cluster(object):
    def __init__(self, points, time=0.0):
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.time = float(time)

    def __len__(self):
        return len(self.points)

    def centroid(self):
        return self.points.mean(axis=0)


class WorldEvent(object):
    """A change of the belief world caused by perception."""

    def __init__(self, kind, node=None, shape=None, reason=None, time=0.0):
        self.kind = kind
        """One of ``'added'``, ``'refined'``, ``'rejected'`` or
        ``'deferred'``."""
        self.node = node
        self.shape = shape
        self.reason = reason
        self.time = float(time)

    @property
    def independent(self):
        return self.node is not None and self.node.is_root

    def to_document(self):
        document = {'event': 'obstacle_' + self.kind, 't': self.time}
        if self.node is not None:
            document['node'] = self.node.id
            document['placement'] = 'independent' if self.node.is_root else 'leaf'
        if self.shape is not None:
            document['shape'] = self.shape.to_document()
        if self.reason:
            document['reason'] = self.reason
        return document


def blocked(world, points):
    """Mask of *points* outside the free space of *world*."""
    return ~world.free_points(points)


def scan(world, pose, model, time=0.0):
    """Cast every beam of *model* from *pose* into *world* and return
    the first boundary hit of each beam within range."""
    origin = pose.q
    angles = pose.theta + model.angular_resolution * np.arange(model.beams)
    directions = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    count = int(math.ceil(model.range / model.resolution))
    distances = np.linspace(0.0, model.range, count + 1)[1:]
    samples = origin + distances[None, :, None] * directions[:, None, :]
    hit = blocked(world, samples.reshape(-1, 2)).reshape(model.beams, count)
    found = hit.any(axis=1)
    first = np.argmax(hit, axis=1)
    beams = np.nonzero(found)[0]
    if len(beams) == 0:
        return PointCloud(np.zeros((0, 2)), np.zeros(0, dtype=int), origin, time)
    upper = distances[first[beams]]
    lower = np.where(first[beams] > 0, distances[np.maximum(first[beams] - 1, 0)], 0.0)
    rays = directions[beams]
    while np.max(upper - lower) > model.tolerance:
        middle = 0.5 * (lower + upper)
        inside = blocked(world, origin + middle[:, None] * rays)
        upper = np.where(inside, middle, upper)
        lower = np.where(inside, lower, middle)
    points = origin + (0.5 * (lower + upper))[:, None] * rays
    return PointCloud(points, beams, origin, time)


def cluster(cloud, model=None):
    """Split *cloud* into clusters of neighbouring points, breaking at
    missing beams, large gaps and sharp turns."""
    model = model if model is not None else SensorModel()
    points, beams = cloud.points, cloud.beams
    if len(points) == 0:
        return []
    if len(points) < 3:
        return [Cluster(points, cloud.time)]
    gaps = np.hypot(*np.diff(points, axis=0).T)
    threshold = model.gap_factor * float(np.median(gaps))
    breaks = set()
    for i in range(1, len(points)):
        if beams[i] - beams[i - 1] > 1 or gaps[i - 1] > threshold:
            breaks.add(i)
    for i in range(1, len(points) - 1):
        if i in breaks or i + 1 in breaks:
            continue
        before = points[i] - points[i - 1]
        after = points[i + 1] - points[i]
        turn = abs(math.atan2(before[0] * after[1] - before[1] * after[0], before.dot(after)))
        if turn > model.turn_limit:
            breaks.add(i + 1)
    cuts = [0] + sorted(breaks) + [len(points)]
    groups = [list(range(start, stop)) for start, stop in zip(cuts[:-1], cuts[1:]) if stop > start]
    wraps = beams[0] == 0 and beams[-1] == model.beams - 1 \
        and float(np.hypot(*(points[0] - points[-1]))) <= threshold
    if wraps and len(groups) > 1:
        groups[0] = groups[-1] + groups[0]
        groups.pop()
    return [Cluster(points[group], cloud.time) for group in groups]


def fit_circle(points, **options):
    return CircleFitter(**options).fit(points).shape_


def fit_squircle(points, **options):
    return SquircleFitter(**options).fit(points).shape_


def coverage(points):
    """Angular span of *points* around the center of their best
    circle, in radians."""
    points = np.asarray(points, dtype=float)
    if len(points) < 3:
        return 0.0
    try:
        center = fit_circle(points, max_residual=np.inf).center
    except FitDiverged:
        return 0.0
    angles = np.sort(np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0]))
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * math.pi]]))
    return float(2.0 * math.pi - gaps.max())


def integrate(belief, fits, model=None, time=0.0):
    """Add fitted shapes to the *belief* world and return the resulting
    :py:class:`WorldEvent` list.

    A fit whose center lies within the match radius of a belief
    obstacle refines that obstacle when it is a childless root and the
    refined shape still overlaps nothing; otherwise it is inserted."""
    model = model if model is not None else SensorModel()
    events = []
    for shape in fits:
        match = None
        for node in belief.nodes.values():
            if math.hypot(*(node.shape.center - shape.center)) < model.match_radius:
                match = node
                break
        if match is not None:
            if refine(belief, match, shape):
                events.append(WorldEvent('refined', match, shape, time=time))
            continue
        try:
            node = belief.insert_obstacle(shape)
        except (OverlapAmbiguous, OutsideBoundary) as err:
            warnings.warn('rejected fitted obstacle: %s' % err, ObstacleRejectedWarning)
            events.append(WorldEvent('rejected', shape=shape, reason=type(err).__name__, time=time))
            continue
        events.append(WorldEvent('added', node, shape, time=time))
    return events


def refine(belief, node, shape):
    """Replace the shape of a childless root *node* in place.  Returns
    whether the world changed."""
    if not node.is_root or node.children or type(shape) is not type(node.shape):
        return False
    others = [other for other in belief.overlapping(shape) if other.id != node.id]
    try:
        belief.check_inside(shape)
    except OutsideBoundary:
        return False
    if others:
        return False
    node.shape.__dict__.update(shape.__dict__)
    return True


class Mapper(object):
    """Turns successive scans into belief-world updates, holding partial
    observations as pending blobs until they can be fitted."""

    def __init__(self, model=None, fitter=None):
        self.model = model if model is not None else SensorModel()
        self.fitter = fitter if fitter is not None else get_fitter()
        self.pending = []
        """Point arrays of clusters not yet turned into obstacles."""

    def explained(self, belief, points):
        """Mask of *points* accounted for by the belief world."""
        tolerance = self.model.known_tolerance
        mask = belief.interior(points) <= tolerance
        for shape in belief.shapes:
            mask |= shape.beta(points) <= tolerance
        return mask

    def merge(self, clusters):
        for new in clusters:
            tree = cKDTree(new.points)
            joined = [i for i, blob in enumerate(self.pending)
                      if tree.query(blob)[0].min() <= self.model.merge_distance]
            merged = np.concatenate([new.points] + [self.pending[i] for i in joined])
            self.pending = [blob for i, blob in enumerate(self.pending) if i not in joined]
            self.pending.append(merged)

    def observe(self, true_world, belief, pose, time=0.0):
        """Scan *true_world* from *pose* and update *belief*."""
        cloud = scan(true_world, pose, self.model, time)
        if len(cloud):
            cloud = cloud.subset(~self.explained(belief, cloud.points))
        self.merge(cluster(cloud, self.model))
        self.pending = [blob[~self.explained(belief, blob)] for blob in self.pending]
        self.pending = [blob for blob in self.pending if len(blob)]
        fits, events, keep = [], [], []
        for blob in self.pending:
            near = float(np.min(np.hypot(*(blob - pose.q).T))) <= self.model.force_range
            if coverage(blob) < self.model.min_coverage and not near:
                keep.append(blob)
                continue
            try:
                fits.append(self.fitter.fit(blob).shape_)
            except FitDiverged as err:
                warnings.warn('cluster of %d points kept pending: %s' % (len(blob), err),
                              FitDeferredWarning)
                events.append(WorldEvent('deferred', reason=str(err), time=time))
                keep.append(blob)
        self.pending = keep
        return events + integrate(belief, fits, self.model, time)
