import math

import numpy as np
import pytest

from harmonic_nav.control import Pose
from harmonic_nav.diagnostics import FitDeferredWarning, ObstacleRejectedWarning
from harmonic_nav.fitter import FitDiverged, get_fitter
from harmonic_nav.sensing import (Mapper, PointCloud, SensorModel, cluster, coverage, fit_circle,
                                  fit_squircle, scan)
from harmonic_nav.shapes import Circle, Squircle
from harmonic_nav.world import ForestWorld, World


@pytest.fixture
def far_disk():
    return Circle((0.0, 0.0), 5.0, boundary=True)


def near_crossing(circle, origin, direction):
    """Distance to the near intersection of a ray with *circle* and the
    chord length, or ``None``."""
    offset = origin - circle.center
    b = float(np.dot(direction, offset))
    c = float(np.dot(offset, offset)) - circle.radius ** 2
    disc = b * b - c
    if disc <= 0.0 or -b - math.sqrt(disc) < 0.0:
        return None
    return -b - math.sqrt(disc), 2.0 * math.sqrt(disc)


def test_sensor_model_validation():
    with pytest.raises(ValueError):
        SensorModel(fov=180)
    with pytest.raises(ValueError):
        SensorModel(beams=10)
    assert SensorModel().angular_resolution == pytest.approx(math.pi / 180.0)


def test_scan_hits_the_boundary(far_disk):
    obstacle = Circle((0.3, 0.0), 0.1)
    cloud = scan(World(far_disk, [obstacle]), Pose(0.0, 0.0, 0.0), SensorModel())
    assert len(cloud) > 20
    assert np.max(np.abs(obstacle.beta(cloud.points))) < 1e-4
    assert np.all(cloud.ranges() <= 0.5)


def test_scan_reports_the_first_hit(far_disk):
    circles = [Circle((0.3, 0.0), 0.08), Circle((0.42, 0.08), 0.05), Circle((-0.1, 0.3), 0.1)]
    model = SensorModel()
    origin = np.zeros(2)
    cloud = scan(World(far_disk, circles), Pose(0.0, 0.0, 0.0), model)
    checked = 0
    for point, beam in zip(cloud.points, cloud.beams):
        angle = beam * model.angular_resolution
        direction = np.array([math.cos(angle), math.sin(angle)])
        crossings = [near_crossing(circle, origin, direction) for circle in circles]
        crossings = [c for c in crossings if c is not None]
        if any(chord < 0.01 for _, chord in crossings):
            continue
        first = min(distance for distance, _ in crossings)
        assert abs(math.hypot(*point) - first) < 1e-5
        checked += 1
    assert checked > 30


def test_clusters_split_and_wrap(far_disk):
    world = World(far_disk, [Circle((0.3, 0.0), 0.1), Circle((-0.3, 0.0), 0.1)])
    cloud = scan(world, Pose(0.0, 0.0, 0.0), SensorModel())
    clusters = cluster(cloud)
    assert sum(len(c) for c in clusters) == len(cloud)
    for c in clusters:
        assert np.all(c.points[:, 0] > 0.0) or np.all(c.points[:, 0] < 0.0)
    right = max((c for c in clusters if c.points[0, 0] > 0.0), key=len)
    assert right.points[:, 1].min() < 0.0 < right.points[:, 1].max()
    assert len(right) > 0.8 * np.sum(cloud.points[:, 0] > 0.0)


def test_cluster_of_nothing():
    assert cluster(PointCloud(np.zeros((0, 2)), np.zeros(0, dtype=int), (0.0, 0.0))) == []


def test_fit_circle_on_exact_points():
    angles = np.linspace(0.0, math.pi / 2.0, 20)
    points = np.column_stack([1.0 + 0.3 * np.cos(angles), -2.0 + 0.3 * np.sin(angles)])
    shape = fit_circle(points)
    assert np.allclose(shape.center, [1.0, -2.0], atol=1e-9)
    assert shape.radius == pytest.approx(0.3, abs=1e-9)


def test_fit_circle_failures():
    with pytest.raises(FitDiverged):
        fit_circle(np.array([[0.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(FitDiverged):
        fit_circle(np.column_stack([np.linspace(0.0, 1.0, 10), np.zeros(10)]))


def test_fit_squircle_on_exact_points():
    truth = Squircle((1.0, 2.0), (0.4, 0.25), 0.9)
    shape = fit_squircle(truth.boundary_points(64))
    assert np.allclose(shape.center, truth.center, atol=1e-6)
    assert np.allclose(shape.half_widths, truth.half_widths, atol=1e-6)
    assert shape.kappa == pytest.approx(0.9, abs=1e-5)


def test_coverage():
    circle = Circle((0.0, 0.0), 1.0)
    full = circle.boundary_points(64)
    assert coverage(full) == pytest.approx(2.0 * math.pi * 63 / 64, abs=1e-6)
    half = circle.boundary_angles_to_points(np.linspace(0.0, math.pi, 33))
    assert coverage(half) == pytest.approx(math.pi, abs=1e-6)
    assert coverage(full[:2]) == 0.0


def test_mapper_adds_an_obstacle_once(far_disk):
    truth = World(far_disk, [Circle((0.3, 0.0), 0.1)])
    belief = ForestWorld(far_disk)
    mapper = Mapper()
    events = mapper.observe(truth, belief, Pose(0.0, 0.0, 0.0), time=1.5)
    assert [event.kind for event in events] == ['added']
    shape = events[0].shape
    assert isinstance(shape, Circle)
    assert np.allclose(shape.center, [0.3, 0.0], atol=1e-3)
    assert shape.radius == pytest.approx(0.1, abs=1e-3)
    assert events[0].independent
    document = events[0].to_document()
    assert document['event'] == 'obstacle_added'
    assert document['placement'] == 'independent'
    assert document['t'] == 1.5
    assert len(belief) == 1
    assert mapper.observe(truth, belief, Pose(0.0, 0.0, 0.0)) == []
    assert len(belief) == 1


def test_mapper_defers_failed_fits(far_disk):
    truth = World(far_disk, [Circle((0.3, 0.0), 0.1)])
    belief = ForestWorld(far_disk)
    mapper = Mapper(fitter=get_fitter(['circle'], {'circle': {'max_residual': 1e-12}}))
    with pytest.warns(FitDeferredWarning):
        events = mapper.observe(truth, belief, Pose(0.0, 0.0, 0.0))
    assert [event.kind for event in events] == ['deferred']
    assert len(mapper.pending) == 1
    assert len(belief) == 0


def test_mapper_rejects_ambiguous_overlaps(far_disk):
    truth = World(far_disk, [Circle((0.3, 0.0), 0.18)])
    belief = ForestWorld(far_disk)
    belief.insert_obstacle(Circle((0.3, 0.25), 0.1))
    belief.insert_obstacle(Circle((0.3, -0.25), 0.1))
    with pytest.warns(ObstacleRejectedWarning):
        events = Mapper().observe(truth, belief, Pose(0.0, 0.0, 0.0))
    assert [event.kind for event in events] == ['rejected']
    assert events[0].reason == 'OverlapAmbiguous'
    assert len(belief) == 2


def test_hits_are_never_occluded(far_disk):
    rng = np.random.default_rng(11)
    model = SensorModel(beams=90)
    checked = 0
    for _ in range(1000):
        circles = [Circle(rng.uniform(-0.6, 0.6, size=2), rng.uniform(0.05, 0.2)) for _ in range(2)]
        world = World(far_disk, circles)
        while True:
            origin = rng.uniform(-0.3, 0.3, size=2)
            if world.free(origin) and world.clearance(origin) > 0.01:
                break
        cloud = scan(world, Pose(origin[0], origin[1], rng.uniform(-math.pi, math.pi)), model)
        for point, distance in zip(cloud.points, cloud.ranges()):
            gaps = [abs(math.hypot(*(point - circle.center)) - circle.radius) for circle in circles]
            assert min(gaps) <= 2e-6
            direction = (point - origin) / distance
            for circle in circles:
                crossing = near_crossing(circle, origin, direction)
                if crossing is None:
                    continue
                near, chord = crossing
                if min(near + chord, model.range) - near > 2.0 * model.resolution:
                    assert near >= distance - 2e-6
            checked += 1
    assert checked > 1000
