"""Closed-loop missions: scenario loading, the hybrid execution of the
task plan along Harmonic Trees, and the online update pipeline that
runs whenever the Lidar reveals an obstacle."""

import copy
import gzip
import json
import math
import os
import pkgutil
import statistics
import time
import warnings

import numpy as np
import pandas as pd
from tqdm import tqdm

from . import htree
from .control import ControlParams, Pose, control, step
from .diagnostics import StallWarning
from .fitter import get_fitter
from .incremental import IncrementalState
from .oriented import OrientedField, wrap_angle
from .sensing import Mapper, SensorModel
from .shapes import Circle, shape_from_document
from .tasking import (NavigationMap, NoAcceptingRun, ParseError, adapt, build_product,
                      conjoin, contingent_event, load_nba, read_nba, synthesize)
from .transforms import TransformParams, TransformStack
from .world import ForestWorld, OutsideBoundary, OverlapAmbiguous, Region, World

EVENT_KINDS = ('WaypointReached', 'ObstacleDetected', 'FieldUpdated', 'TreeRevised',
               'PlanAdapted', 'RegionReached', 'MissionDone', 'MissionFailed')
PHASES = ('sensing', 'field', 'tree', 'plan', 'control')
BUNDLED = ('empty.json', 'surveillance.json', 'delivery.json')
VARIANTS = ('full', 'fixed', 'direct')


class ScenarioError(ValueError):
    """A scenario document is malformed or inconsistent."""


class MissionFailed(RuntimeError):
    """The mission ended without satisfying the task."""

    def __init__(self, reason, message=''):
        super(MissionFailed, self).__init__('%s: %s' % (reason, message) if message else reason)
        self.reason = reason
        """``'NoAcceptingRun'``, ``'Stuck'``, ``'Collision'`` or ``'Timeout'``."""


def open_file(filename, mode):
    if hasattr(filename, 'read') or hasattr(filename, 'write'):
        return filename
    if filename.endswith('.gz'):
        return gzip.open(filename, mode)
    else:
        return open(filename, mode)


class Termination(object):
    """When a mission stops."""

    def __init__(self, **kwargs):
        self.repetitions = 1
        """Completed suffix cycles after which the mission is done."""
        self.max_time = 300.0
        """Simulated seconds before the mission fails with ``Timeout``."""
        self.stall_time = 10.0
        self.stall_distance = 0.01

        for k, v in kwargs.items():
            if not hasattr(self, k):
                raise ValueError('unknown termination parameter "%s"' % k)
            setattr(self, k, float(v) if k != 'repetitions' else int(v))


class TraceEvent(object):
    def __init__(self, time, kind, **payload):
        if kind not in EVENT_KINDS:
            raise ValueError('unknown event kind "%s"' % kind)
        self.time = float(time)
        self.kind = kind
        self.payload = payload

    def to_document(self):
        document = {'t': self.time, 'kind': self.kind}
        document.update(self.payload)
        return document

    def __repr__(self):
        return 'TraceEvent(%g, %r)' % (self.time, self.kind)


class Scenario(object):
    """Everything a mission needs, read from one JSON document.

    Obstacle and workspace shapes are inflated by the robot radius when
    loaded, so the robot is a point in every world built from them."""

    def __init__(self, **kwargs):
        self.name = 'scenario'
        self.seed = 0
        self.start = Pose()
        self.radius = 0.0
        """Robot radius."""
        self.workspace = None
        self.obstacles = []
        """Inflated true obstacle shapes."""
        self.known = []
        """Indices into :py:attr:`obstacles` known before the mission."""
        self.regions = []
        self.task = None
        self.contingent = None
        """``(time, nba)`` of a task switch, or ``None``."""
        self.transform = TransformParams()
        self.oriented = {}
        """Keyword arguments of :py:class:`~harmonic_nav.oriented.OrientedField`."""
        self.control = ControlParams()
        self.sensor = SensorModel()
        self.fitters = {}
        """Keyword arguments of :py:func:`~harmonic_nav.fitter.get_fitter`."""
        self.tree = htree.TreeConfig()
        self.termination = Termination()

        for k, v in kwargs.items():
            if not hasattr(self, k):
                raise ValueError('unknown scenario field "%s"' % k)
            setattr(self, k, v)

    @classmethod
    def from_document(cls, document, base=None):
        """Build a scenario from a parsed *document*; *base* is the
        directory relative task paths are resolved against."""
        try:
            robot = document.get('robot', {})
            radius = float(robot.get('radius', 0.0))
            workspace = shape_from_document(document['workspace'], boundary=True)
            if radius > 0.0:
                workspace = workspace.inflated(-radius)
            obstacles, known = [], []
            for i, item in enumerate(document.get('obstacles', [])):
                shape = shape_from_document(item)
                obstacles.append(shape.inflated(radius) if radius > 0.0 else shape)
                if item.get('known', False):
                    known.append(i)
            scenario = cls(
                name=document.get('name', 'scenario'),
                seed=int(document.get('seed', 0)),
                start=Pose.from_sequence(robot.get('pose', [0.0, 0.0, 0.0])),
                radius=radius,
                workspace=workspace,
                obstacles=obstacles,
                known=known,
                regions=[Region.from_document(region) for region in document.get('regions', [])],
                task=load_task(document['task'], base),
                transform=TransformParams(**document.get('transform', {})),
                oriented=dict(document.get('oriented', {})),
                control=ControlParams(**document.get('control', {})),
                sensor=SensorModel(**document.get('sensor', {})),
                fitters=dict(document.get('fitters', {})),
                tree=htree.TreeConfig(**document.get('htree', {})),
                termination=Termination(**document.get('termination', {})))
            if 'contingent' in document:
                contingent = document['contingent']
                scenario.contingent = (float(contingent['time']), load_task(contingent['task'], base))
        except (KeyError, TypeError, ValueError) as err:
            if isinstance(err, ScenarioError):
                raise
            raise ScenarioError('invalid scenario: %s' % (err,))
        scenario.validate()
        return scenario

    def validate(self):
        truth = self.true_world()
        if not truth.free(self.start.q):
            raise ScenarioError('the start pose %r is not free' % (self.start,))
        for region in self.regions:
            if not truth.free(region.center):
                raise ScenarioError('region "%s" is not in free space' % region.label)
        labels = set(region.label for region in self.regions)
        for nba in [self.task] + ([self.contingent[1]] if self.contingent else []):
            missing = set(nba.alphabet) - labels
            if missing:
                raise ScenarioError('task refers to unknown regions %s' % ', '.join(sorted(missing)))
        try:
            self.belief_world()
        except (OverlapAmbiguous, OutsideBoundary) as err:
            raise ScenarioError('known obstacles do not form a forest: %s' % err)

    def true_world(self):
        return World(self.workspace, self.obstacles, self.regions)

    def belief_world(self):
        """A forest world holding the known obstacles."""
        world = ForestWorld(self.workspace, self.regions, seed=self.seed)
        for i in self.known:
            world.insert_obstacle(self.obstacles[i])
        return world


def load_task(task, base=None):
    if isinstance(task, dict):
        return load_nba(task)
    if base is not None and os.path.exists(os.path.join(base, task)):
        with open_file(os.path.join(base, task), 'rt') as f:
            return load_nba(json.load(f))
    try:
        return read_nba(task)
    except (IOError, OSError):
        raise ParseError('cannot find automaton "%s"' % task)


def load_scenario(path):
    """Load a scenario from *path*, or from the bundled scenario of that
    name."""
    if not os.path.exists(path) and os.path.basename(path) in BUNDLED:
        document = json.loads(pkgutil.get_data('harmonic_nav', 'data/' + os.path.basename(path)).decode('utf-8'))
        return Scenario.from_document(document)
    try:
        with open_file(path, 'rt') as f:
            document = json.load(f)
    except (IOError, OSError) as err:
        raise ScenarioError('cannot read scenario %s: %s' % (path, err))
    except ValueError as err:
        raise ScenarioError('scenario %s is not valid JSON: %s' % (path, err))
    return Scenario.from_document(document, os.path.dirname(os.path.abspath(path)))


class MissionResult(object):
    def __init__(self, trajectory, events, metrics):
        self.trajectory = trajectory
        """List of trajectory rows."""
        self.events = events
        """List of :py:class:`TraceEvent`."""
        self.metrics = metrics

    @property
    def done(self):
        return self.metrics['status'] == 'MissionDone'


class Mission(object):
    """One closed-loop run of *scenario* as one of :py:data:`VARIANTS`."""

    def __init__(self, scenario, variant='full'):
        if variant not in VARIANTS:
            raise ValueError('unknown mission variant "%s"' % variant)
        self.scenario = scenario
        self.variant = variant
        self.truth = scenario.true_world()
        self.belief = scenario.belief_world()
        self.potential = IncrementalState(self.belief, scenario.start.q, scenario.transform)
        self.mapper = Mapper(scenario.sensor, get_fitter(**scenario.fitters))
        self.w = scenario.control.w
        self.pose = scenario.start
        self.t = 0.0
        self.trajectory = []
        self.events = []
        self.history = []
        """Traversed edges as ``(actual, distance, rotations)``."""
        self.weights = [list(self.w)]
        self.plans = []
        self.reached = [scenario.start]
        self.timing = dict((phase, 0.0) for phase in PHASES)
        self.min_clearance = math.inf
        self.travel = 0.0
        self.turning = 0.0
        self.trees_built = 0
        self.removed = []
        self.switched = False
        self.nba = scenario.task
        self.nav_map = NavigationMap(scenario.regions, scenario.start,
                                     builder=None if variant == 'direct' else self.build_tree)
        self.dirty = False
        """Set when the plan changed under the active transition."""

    ### Bookkeeping

    def emit(self, kind, **payload):
        self.events.append(TraceEvent(self.t, kind, **payload))

    def timed(self, phase, function, *args):
        started = time.perf_counter()
        try:
            return function(*args)
        finally:
            self.timing[phase] += time.perf_counter() - started

    def build_tree(self, start, goal):
        self.trees_built += 1
        return htree.build(self.belief, start, goal, self.scenario.tree, self.w,
                           seed=[self.scenario.seed, self.trees_built])

    def field_towards(self, pose):
        return OrientedField(self.potential.retarget(pose.q), heading=pose.theta,
                             tau=self.scenario.oriented.get('tau', 0.5),
                             delta_c=self.scenario.oriented.get('delta_c', 0.0),
                             delta_c_prime=self.scenario.oriented.get('delta_c_prime', math.pi))

    def set_plan(self, plan, reason):
        changed = not self.plans or plan != self.current_plan
        self.current_plan = plan
        self.plans.append(plan.to_document())
        if changed and len(self.plans) > 1:
            self.emit('PlanAdapted', reason=reason, **plan.to_document())
        return changed

    ### Planning

    def plan_initial(self):
        product = build_product(self.nav_map, self.nba)
        try:
            plan = self.timed('plan', synthesize, product)
        except NoAcceptingRun as err:
            raise MissionFailed('NoAcceptingRun', str(err))
        self.current = plan.source
        self.set_plan(plan, 'initial')

    def replan(self, reason):
        try:
            _, plan = self.timed('plan', adapt, self.nav_map, self.nba, self.current, self.removed)
        except NoAcceptingRun as err:
            raise MissionFailed('NoAcceptingRun', '%s; removed edges %s' % (
                err, ', '.join('%s->%s' % (u[0], v[0]) for u, v in err.removed) or 'none'))
        if self.set_plan(plan, reason):
            self.dirty = True

    def path_for(self, tree):
        """Shortest path of *tree* from the current pose, growing the
        tree a few times if the pose cannot be connected."""
        tree.reroot(self.pose)
        for _ in range(3):
            try:
                return htree.shortest_path(tree)
            except htree.Disconnected:
                htree.regenerate(tree, lambda q: 0.0, lambda q: 0.0)
        return htree.shortest_path(tree)

    ### Perception and online updates

    def sense(self):
        events = self.timed('sensing', self.mapper.observe, self.truth, self.belief, self.pose, self.t)
        changed = []
        for event in events:
            if event.kind not in ('added', 'refined'):
                continue
            self.emit('ObstacleDetected', **event.to_document())
            changed.append(event)
        if not changed:
            return False
        old = self.potential.retarget(self.active_goal.q) if self.active_goal is not None else None
        for event in changed:
            if event.kind == 'added':
                self.timed('field', self.potential.absorb, event.node)
            else:
                self.timed('field', self.potential.refresh_spheres)
        self.emit('FieldUpdated', obstacles=len(self.belief), fallbacks=self.potential.fallbacks)
        self.timed('tree', self.revise_trees, [event.shape for event in changed], old)
        if self.variant != 'fixed':
            self.update_weights()
            self.replan('obstacle')
        return True

    def revise_trees(self, shapes, old):
        for u, v, tree in self.nav_map.trees():
            removed = [0, 0]
            for shape in shapes:
                counts = htree.trim(tree, shape)
                removed = [removed[0] + counts[0], removed[1] + counts[1]]
            added = []
            if tree is self.active_tree and old is not None:
                new = self.potential.retarget(self.active_goal.q)
                added = htree.regenerate(tree, old.nf_eval, new.nf_eval)
            if sum(removed) or added:
                self.emit('TreeRevised', transition=[u[0], v[0]], removed_vertices=removed[0],
                          removed_edges=removed[1], added_vertices=len(added))

    def update_weights(self):
        try:
            w = htree.update_weights(self.history, self.scenario.tree.min_weight)
        except htree.RankDeficient:
            return
        self.w = w
        self.weights.append(list(w))
        for _, _, tree in self.nav_map.trees():
            tree.reweight(w)

    ### Execution

    def check_contingent(self):
        if self.switched or self.scenario.contingent is None or self.t < self.scenario.contingent[0]:
            return False
        self.switched = True
        self.nba = conjoin(self.scenario.contingent[1], self.nba, [self.current[1]])
        self.nav_map.reanchor(self.pose)
        try:
            _, plan = self.timed('plan', contingent_event, self.nav_map, self.nba, self.nav_map.initial)
        except NoAcceptingRun as err:
            raise MissionFailed('NoAcceptingRun', str(err))
        self.current = plan.source
        self.visits = 0
        self.current_plan = None
        self.set_plan(plan, 'contingent')
        self.dirty = True
        return True

    def finished(self):
        plan = self.current_plan
        if plan.stationary and plan.cursor >= len(plan.prefix):
            return True
        return self.visits > self.scenario.termination.repetitions

    def arrive(self, target):
        self.current = target
        self.current_plan.advance()
        if target[1] in self.nba.accepting:
            self.visits += 1

    def advance_step(self):
        """One control step along the active field."""
        params = self.scenario.control
        try:
            v, omega = self.timed('control', control, self.active_field, self.pose, params)
        except ArithmeticError:
            v, omega = 0.0, 0.0
        previous = self.pose
        self.pose = step(self.pose, v, omega, params.dt)
        self.t = round(self.t + params.dt, 9)
        moved = previous.distance(self.pose)
        self.travel += moved
        self.edge_travel += moved
        self.turning += abs(wrap_angle(self.pose.theta - previous.theta))
        clearance = self.truth.clearance(self.pose.q)
        self.min_clearance = min(self.min_clearance, clearance)
        self.trajectory.append({'t': self.t, 'x': self.pose.x, 'y': self.pose.y,
                                'theta': self.pose.theta, 'v': v, 'omega': omega,
                                'clearance': clearance, 'active_edge': list(self.active_edge)})
        if clearance <= 0.0:
            raise MissionFailed('Collision', 'at t=%g, %r' % (self.t, self.pose))
        termination = self.scenario.termination
        if self.pose.distance(self.anchor[1]) >= termination.stall_distance:
            self.anchor = (self.t, self.pose)
        elif self.t - self.anchor[0] >= termination.stall_time:
            warnings.warn('no progress since t=%g' % self.anchor[0], StallWarning)
            raise MissionFailed('Stuck', 'no progress since t=%g at %r' % (self.anchor[0], self.pose))
        if self.t >= termination.max_time:
            raise MissionFailed('Timeout', 'time cap of %g s reached' % termination.max_time)

    def waypoint(self, tree, v):
        """Pose to steer to at vertex *v*: intermediate vertices take the
        heading of the chord from the robot."""
        pose = tree.pose(v)
        if v == htree.GOAL:
            return pose
        return Pose(pose.x, pose.y, math.atan2(pose.y - self.pose.y, pose.x - self.pose.x))

    def reached_waypoint(self, goal, last):
        config = self.scenario.tree
        distance = self.pose.distance(goal)
        if not last:
            return distance <= config.vicinity
        heading = abs(wrap_angle(self.pose.theta - goal.theta))
        return (distance <= config.vicinity and heading <= config.goal_tolerance) \
            or distance <= 0.4 * config.vicinity

    def drive(self, target):
        """Drive the field of the region pose of *target* without a
        tree.  Returns like :py:meth:`traverse`."""
        goal = self.nav_map.pose(target[0])
        self.active_goal, self.active_edge = goal, (htree.START, htree.GOAL)
        self.active_field = self.timed('field', self.field_towards, goal)
        self.edge_travel = 0.0
        period = max(1, int(round(self.scenario.sensor.period / self.scenario.control.dt)))
        steps = 0
        while not self.reached_waypoint(goal, True):
            if steps % period == 0 and self.sense():
                if self.dirty or not self.nav_map.graph.has_edge(self.current[0], target[0]):
                    return False
                self.active_field = self.timed('field', self.field_towards, goal)
            if self.check_contingent():
                return False
            self.advance_step()
            steps += 1
        self.reached.append(self.pose)
        return True

    def traverse(self, target):
        """Drive along the tree of the transition to *target*.  Returns
        True on arrival, False if the plan changed on the way."""
        if self.variant == 'direct':
            return self.drive(target)
        tree = self.timed('tree', self.nav_map.tree, self.current[0], target[0])
        self.active_tree = tree
        try:
            path = self.timed('tree', self.path_for, tree)
        except htree.Disconnected:
            self.replan('disconnected')
            self.active_tree = None
            return False
        index = 1
        period = max(1, int(round(self.scenario.sensor.period / self.scenario.control.dt)))
        steps = 0
        while index < len(path.vertices):
            u, v = path.vertices[index - 1], path.vertices[index]
            goal = self.waypoint(tree, v)
            last = v == htree.GOAL
            self.active_goal, self.active_edge = goal, (u, v)
            self.active_field = self.timed('field', self.field_towards, goal)
            self.edge_travel = 0.0
            edge = tree.graph.edges[u, v] if tree.graph.has_edge(u, v) else None
            while not self.reached_waypoint(goal, last):
                if steps % period == 0 and self.sense():
                    if self.dirty or not self.nav_map.graph.has_edge(self.current[0], target[0]):
                        self.active_tree = None
                        return False
                    try:
                        path = self.timed('tree', self.path_for, tree)
                    except htree.Disconnected:
                        self.replan('disconnected')
                        self.active_tree = None
                        return False
                    index = 1
                    u, v = path.vertices[0], path.vertices[1]
                    goal = self.waypoint(tree, v)
                    last = v == htree.GOAL
                    self.active_goal, self.active_edge = goal, (u, v)
                    self.active_field = self.timed('field', self.field_towards, goal)
                    edge = tree.graph.edges[u, v]
                    self.edge_travel = 0.0
                if self.check_contingent():
                    self.active_tree = None
                    return False
                self.advance_step()
                steps += 1
            if edge is not None:
                self.history.append((self.edge_travel, edge['distance'], edge['rotations']))
            self.reached.append(self.pose)
            self.emit('WaypointReached', vertex=int(v), x=self.pose.x, y=self.pose.y,
                      theta=self.pose.theta)
            index += 1
        self.active_tree = None
        return True

    def run(self):
        self.active_tree = None
        self.active_goal = None
        self.active_edge = (-1, -1)
        self.anchor = (0.0, self.pose)
        self.visits = 0
        status, reason = 'MissionDone', None
        try:
            self.plan_initial()
            while not self.finished():
                self.dirty = False
                target = self.current_plan.target()
                if target[0] == self.current[0]:
                    self.arrive(target)
                    continue
                if self.traverse(target):
                    self.arrive(target)
                    self.emit('RegionReached', region=target[0][0], state=target[1])
            self.emit('MissionDone', cost=self.current_plan.cost)
        except MissionFailed as err:
            status, reason = 'MissionFailed', err.reason
            self.emit('MissionFailed', reason=err.reason, message=str(err))
        return MissionResult(self.trajectory, self.events, self.metrics(status, reason))

    def metrics(self, status, reason):
        counts = dict((kind, 0) for kind in EVENT_KINDS)
        for event in self.events:
            counts[event.kind] += 1
        polyline = htree.WaypointPath(range(len(self.reached)), self.reached, 0.0)
        return {'scenario': self.scenario.name, 'status': status, 'reason': reason,
                'time': self.t, 'steps': len(self.trajectory),
                'travel_distance': self.travel,
                'min_clearance': self.min_clearance if self.trajectory else None,
                'turning': self.turning, 'path_turning': polyline.turning(),
                'wall_time': dict(self.timing), 'events': counts,
                'obstacles': len(self.belief), 'trees_built': self.trees_built,
                'fallbacks': self.potential.fallbacks, 'weights': self.weights,
                'plans': self.plans}


def run(scenario, variant='full'):
    """Execute *scenario* and return a :py:class:`MissionResult`."""
    return Mission(scenario, variant).run()


def compare(scenario, variants=VARIANTS, progress=False):
    """Run *scenario* once per variant and tabulate travel and turning
    as a :py:class:`pandas.DataFrame`.  The variants are

    ``full``
        trees, plan adaptation and weight learning;
    ``fixed``
        trees, but the plan and the cost weights never change;
    ``direct``
        no trees: the oriented field of each region pose is followed
        from wherever the robot is.
    """
    rows = []
    for variant in tqdm(variants, disable=not progress):
        metrics = run(copy.deepcopy(scenario), variant).metrics
        rows.append({'variant': variant, 'status': metrics['status'], 'reason': metrics['reason'],
                     'time': metrics['time'], 'travel_distance': metrics['travel_distance'],
                     'turning': metrics['turning'], 'path_turning': metrics['path_turning'],
                     'min_clearance': metrics['min_clearance']})
    return pd.DataFrame(rows, columns=['variant', 'status', 'reason', 'time', 'travel_distance',
                                       'turning', 'path_turning', 'min_clearance'])


### Benchmarks

def grid_obstacles(count, radius=0.1, spacing=0.35, workspace=2.0):
    """*count* disjoint circles on a grid inside a disk workspace of
    radius *workspace*."""
    steps = np.arange(-workspace, workspace + spacing, spacing)
    centers = [(x, y) for x in steps for y in steps
               if math.hypot(x, y) + radius < workspace - 0.3 and math.hypot(x, y) > 0.3]
    centers.sort(key=lambda c: (round(math.hypot(*c), 9), c))
    if len(centers) < count:
        raise ValueError('cannot fit %d obstacles' % count)
    return Circle((0.0, 0.0), workspace, boundary=True), [Circle(c, radius) for c in centers[:count]]


def populated_world(boundary, shapes):
    world = ForestWorld(boundary)
    for shape in shapes:
        world.insert_obstacle(shape)
    return world


def time_rebuild(boundary, shapes, goal=(0.0, 0.0)):
    """Seconds to build the transform stack of the full world."""
    world = populated_world(boundary, shapes)
    started = time.perf_counter()
    TransformStack(world, goal)
    return time.perf_counter() - started


def time_update(boundary, shapes, goal=(0.0, 0.0)):
    """Seconds to absorb the last of *shapes* into the navigation
    function of the others; the obstacle is inserted beforehand."""
    state = IncrementalState(populated_world(boundary, shapes[:-1]), goal)
    node = state.world.insert_obstacle(shapes[-1])
    started = time.perf_counter()
    state.absorb(node)
    return time.perf_counter() - started


def time_eval(potential, samples=50, seed=0):
    rng = np.random.default_rng(seed)
    points = rng.uniform(-1.5, 1.5, size=(samples, 2))
    started = time.perf_counter()
    for point in points:
        potential.nf_eval(point)
    return (time.perf_counter() - started) / samples


def bench(sizes=(5, 10, 20), trials=20, progress=False):
    """Median build and update timings per world size, as a
    :py:class:`pandas.DataFrame`."""
    rows = []
    for count in tqdm(sizes, disable=not progress):
        boundary, shapes = grid_obstacles(count)
        rebuild = statistics.median(time_rebuild(boundary, shapes) for _ in range(trials))
        update = statistics.median(time_update(boundary, shapes) for _ in range(trials))
        world = populated_world(boundary, shapes)
        batch = time_eval(TransformStack(world, (0.0, 0.0)))
        recursive = time_eval(IncrementalState(world, (0.0, 0.0)))
        rows.append({'obstacles': count, 'rebuild_ms': 1e3 * rebuild, 'update_ms': 1e3 * update,
                     'speedup': rebuild / update, 'batch_eval_ms': 1e3 * batch,
                     'recursive_eval_ms': 1e3 * recursive})
    return pd.DataFrame(rows, columns=['obstacles', 'rebuild_ms', 'update_ms', 'speedup',
                                       'batch_eval_ms', 'recursive_eval_ms'])
