#!/usr/bin/env python
from __future__ import print_function

import argparse
import csv
import functools
import json
import os
import sys
import warnings

import jsonlines
import numpy as np

from . import get_fitter, plotting
from .shapes import ShapeEncoder
from .oriented import OrientedField
from .sim import Mission, ScenarioError, bench, compare, load_scenario, open_file
from .tasking import NavigationMap, NoAcceptingRun, build_product, synthesize
from .transforms import TransformStack
from .world import ForestWorld, OutsideBoundary, OverlapAmbiguous

COMMANDS = ('run', 'plan', 'field', 'bench', 'replay')
MIN_RESOLUTION = 32


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        description='Plan and simulate missions with oriented harmonic fields.',
        epilog='Scenario paths ending in ".gz" are treated as gzipped files.  '
               'Bundled scenarios can be named without a path.')
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('--scenario',
        metavar='PATH', default='surveillance.json',
        help='scenario file (default: the bundled surveillance scenario)')
    parser.add_argument('--out',
        metavar='DIR', default='.',
        help='directory for output artifacts')
    parser.add_argument('--seed',
        type=int,
        help='override the scenario seed')
    parser.add_argument('--resolution',
        type=int, default=64,
        help='grid size of field dumps (at least %d)' % MIN_RESOLUTION)
    parser.add_argument('--oriented',
        action='store_true',
        help='dump the oriented field instead of the negated gradient')
    parser.add_argument('--region',
        metavar='LABEL',
        help='goal region of field dumps (default: the first region)')
    parser.add_argument('--heading',
        type=float, default=0.0,
        help='goal heading of field dumps, in radians')
    parser.add_argument('--max-time',
        type=float, dest='max_time',
        help='override the simulated time cap, in seconds')
    parser.add_argument('--fitters',
        metavar='FITTERS',
        help='preferred fitter order (comma-separated)')
    parser.add_argument('--sizes',
        default='5,10,20',
        help='obstacle counts of the benchmark (comma-separated)')
    parser.add_argument('--trials',
        type=int, default=20,
        help='trials per benchmark size')
    parser.add_argument('--missions',
        action='store_true',
        help='benchmark the mission variants on the scenario instead')
    parser.add_argument('-s', '--statistics',
        action='store_true',
        help='show summary statistics')
    args = parser.parse_args(argv)
    if args.resolution < MIN_RESOLUTION:
        parser.error('--resolution must be at least %d' % MIN_RESOLUTION)
    return args


def scenario_from_args(args):
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario.seed = args.seed
    if args.max_time is not None:
        scenario.termination.max_time = float(args.max_time)
    if args.fitters is not None:
        scenario.fitters = dict(scenario.fitters, order=args.fitters.split(','))
        get_fitter(**scenario.fitters)
    return scenario


def writer(path):
    return jsonlines.Writer(open_file(path, 'wt'), dumps=functools.partial(json.dumps, cls=ShapeEncoder))


def read_lines(path):
    with jsonlines.Reader(open_file(path, 'rt')) as reader:
        return list(reader.iter(skip_invalid=True, skip_empty=True))


def cmd_run(args, scenario):
    mission = Mission(scenario)

    # Show warnings with the mission clock, not the Python source code.
    def showwarning(message, category, filename, lineno, file=sys.stderr, line=None):
        sys.stderr.write('%s t=%.2f: %s: %s\n' % (scenario.name, mission.t, category.__name__, message))
    warnings.showwarning = showwarning

    result = mission.run()
    with writer(os.path.join(args.out, 'trajectory.jsonl')) as fo:
        fo.write_all(result.trajectory)
    with writer(os.path.join(args.out, 'events.jsonl')) as fo:
        fo.write_all(event.to_document() for event in result.events)
    with open_file(os.path.join(args.out, 'metrics.json'), 'wt') as fo:
        json.dump(result.metrics, fo, cls=ShapeEncoder, indent=2, sort_keys=True)
    plotting.render_run(os.path.join(args.out, 'run.svg'), mission.truth, result.trajectory,
                        [event.to_document() for event in result.events],
                        known=scenario.known, title=scenario.name)

    metrics = result.metrics
    if args.statistics:
        print('Travelled %.3f m in %.2f s over %d steps.' % (
            metrics['travel_distance'], metrics['time'], metrics['steps']), file=sys.stderr)
        print('Detected %d obstacles; built %d trees; %d recursion fallbacks.' % (
            metrics['events']['ObstacleDetected'], metrics['trees_built'], metrics['fallbacks']),
            file=sys.stderr)
        print('Wall time: %s.' % (
            ', '.join('%.3f s %s' % (v, k) for (k, v) in sorted(metrics['wall_time'].items()))),
            file=sys.stderr)
        if metrics['min_clearance'] is not None:
            print('Minimum clearance %.4f.' % metrics['min_clearance'], file=sys.stderr)
    print('%s: %s%s.' % (scenario.name, metrics['status'],
                         ' (%s)' % metrics['reason'] if metrics['reason'] else ''), file=sys.stderr)
    return 0 if result.done else 1


def cmd_plan(args, scenario):
    nav_map = NavigationMap(scenario.regions, scenario.start)
    product = build_product(nav_map, scenario.task)
    print('Automaton: %d states, %d transitions.' % (
        len(scenario.task), len(scenario.task.transitions)))
    print('Navigation map: %d nodes, %d edges.' % (
        nav_map.graph.number_of_nodes(), nav_map.graph.number_of_edges()))
    print('Product: %d states, %d transitions.' % (
        len(product), product.graph.number_of_edges()))
    try:
        plan = synthesize(product)
    except NoAcceptingRun as err:
        print('No accepting run: %s' % err, file=sys.stderr)
        return 1
    document = plan.to_document()
    print('Prefix: %s' % ' '.join(str(label) for label in document['prefix']))
    print('Suffix: %s' % ' '.join(str(label) for label in document['suffix']))
    print('Cost: %.4f' % document['cost'])
    return 0


def full_world(scenario):
    """Forest world of every obstacle of *scenario* that fits into one."""
    world = ForestWorld(scenario.workspace, scenario.regions, seed=scenario.seed)
    for shape in scenario.obstacles:
        try:
            world.insert_obstacle(shape)
        except (OverlapAmbiguous, OutsideBoundary) as err:
            warnings.warn('obstacle left out of the field: %s' % err)
    return world


def cmd_field(args, scenario):
    world = full_world(scenario)
    if args.region is not None:
        goal = world.region(args.region).center
    elif world.regions:
        goal = world.regions[0].center
    else:
        goal = scenario.start.q
    potential = TransformStack(world, goal, scenario.transform)
    field = OrientedField(potential, heading=args.heading, **scenario.oriented)
    xs, ys = plotting.grid(world, args.resolution)
    points = np.stack(np.meshgrid(xs, ys), axis=-1).reshape(-1, 2)
    values = plotting.sample_values(potential, points)
    grid_values = values.reshape(len(ys), len(xs))
    with open_file(os.path.join(args.out, 'field.csv'), 'wt') as fo:
        csv.writer(fo).writerows([float(v) for v in row] for row in grid_values)
    header = {'bounds': [[float(xs[0]), float(ys[0])], [float(xs[-1]), float(ys[-1])]],
              'resolution': args.resolution, 'goal': [float(goal[0]), float(goal[1])]}
    with open_file(os.path.join(args.out, 'field.json'), 'wt') as fo:
        json.dump(header, fo, indent=2, sort_keys=True)
    coarse = max(8, args.resolution // 4)
    qx, qy = plotting.grid(world, coarse)
    arrow_points = np.stack(np.meshgrid(qx, qy), axis=-1).reshape(-1, 2)
    arrow_points = arrow_points[world.free_points(arrow_points)]
    vectors = plotting.sample_vectors(field, arrow_points, args.oriented)
    with open_file(os.path.join(args.out, 'quiver.csv'), 'wt') as fo:
        out = csv.writer(fo)
        out.writerow(['x', 'y', 'u', 'v'])
        out.writerows([float(p[0]), float(p[1]), float(u[0]), float(u[1])]
                      for p, u in zip(arrow_points, vectors))
    plotting.render_field(os.path.join(args.out, 'field.svg'), world, xs, ys,
                          grid_values, (arrow_points, vectors),
                          title='%s field' % ('oriented' if args.oriented else 'gradient'))
    if args.statistics:
        print('Sampled %d points and %d arrows with %d threads.' % (
            len(points), len(arrow_points), plotting.worker_count()), file=sys.stderr)
    return 0


def cmd_bench(args, scenario=None):
    if args.missions:
        table = compare(scenario, progress=args.statistics)
        table.to_csv(os.path.join(args.out, 'missions.csv'), index=False)
        print(table.to_string(index=False))
        return 0 if (table['status'] == 'MissionDone').all() else 1
    sizes = [int(size) for size in args.sizes.split(',')]
    table = bench(sizes, args.trials, progress=args.statistics)
    table.to_csv(os.path.join(args.out, 'bench.csv'), index=False)
    print(table.to_string(index=False))
    return 0


def cmd_replay(args, scenario):
    trajectory = read_lines(os.path.join(args.out, 'trajectory.jsonl'))
    events = read_lines(os.path.join(args.out, 'events.jsonl'))
    plotting.render_run(os.path.join(args.out, 'run.svg'), scenario.true_world(), trajectory, events,
                        known=scenario.known, title=scenario.name)
    if args.statistics:
        print('Replayed %d trajectory rows and %d events.' % (len(trajectory), len(events)),
              file=sys.stderr)
    return 0


def main(argv=None):
    args = parse_args(argv)
    warnings.simplefilter('always')
    handlers = {'run': cmd_run, 'plan': cmd_plan, 'field': cmd_field,
                'bench': cmd_bench, 'replay': cmd_replay}
    if not os.path.isdir(args.out):
        os.makedirs(args.out)
    if args.command == 'bench' and not args.missions:
        return cmd_bench(args)
    try:
        scenario = scenario_from_args(args)
    except (ScenarioError, ValueError) as err:
        print('error: %s' % err, file=sys.stderr)
        return 2
    try:
        return handlers[args.command](args, scenario)
    except (IOError, OSError) as err:
        print('error: %s' % err, file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
