import copy
import json
import pkgutil

import pytest

from harmonic_nav.sim import (EVENT_KINDS, VARIANTS, Mission, MissionFailed, Scenario, ScenarioError,
                              Termination, TraceEvent, bench, compare, grid_obstacles, load_scenario,
                              load_task, run)

UNSATISFIABLE = {
    'states': ['s0', 's1'],
    'alphabet': ['a'],
    'transitions': [{'from': 's0', 'symbol': '1', 'to': 's0'},
                    {'from': 's0', 'symbol': '0', 'to': 's1'},
                    {'from': 's1', 'symbol': '1', 'to': 's1'}],
    'initial': ['s0'],
    'accepting': ['s1'],
}


@pytest.fixture
def empty_document():
    return json.loads(pkgutil.get_data('harmonic_nav', 'data/empty.json').decode('utf-8'))


def test_bundled_scenarios():
    surveillance = load_scenario('surveillance.json')
    assert len(surveillance.obstacles) == 11
    assert len(surveillance.known) == 3
    assert [region.label for region in surveillance.regions] == ['d1', 'd2', 'd3', 'd4']
    assert len(surveillance.task) == 16
    assert surveillance.radius == pytest.approx(0.05)
    assert surveillance.workspace.boundary
    delivery = load_scenario('delivery.json')
    assert len(delivery.obstacles) == 5
    assert len(delivery.known) == 2
    assert delivery.contingent[0] == pytest.approx(20.0)
    assert delivery.contingent[1].alphabet == ['u1']
    assert len(delivery.belief_world()) == 2


def test_obstacles_are_inflated(empty_document):
    empty_document['robot']['radius'] = 0.1
    empty_document['obstacles'] = [{'type': 'circle', 'center': [0.0, 1.0], 'radius': 0.2}]
    scenario = Scenario.from_document(empty_document)
    assert scenario.obstacles[0].radius == pytest.approx(0.3)
    assert scenario.workspace.radius == pytest.approx(1.9)


def test_invalid_scenarios(empty_document):
    blocked = copy.deepcopy(empty_document)
    blocked['obstacles'] = [{'type': 'circle', 'center': [-1.0, -0.5], 'radius': 0.2}]
    with pytest.raises(ScenarioError):
        Scenario.from_document(blocked)
    relabelled = copy.deepcopy(empty_document)
    relabelled['regions'][0]['label'] = 'b'
    with pytest.raises(ScenarioError):
        Scenario.from_document(relabelled)
    del empty_document['task']
    with pytest.raises(ScenarioError):
        Scenario.from_document(empty_document)
    with pytest.raises(ScenarioError):
        load_scenario('/nonexistent/scenario.json')


def test_parameters_reject_unknown_keys():
    with pytest.raises(ValueError):
        Termination(deadline=3)
    with pytest.raises(ValueError):
        Scenario(robot=None)
    with pytest.raises(ValueError):
        TraceEvent(0.0, 'Teleported')
    event = TraceEvent(1.5, 'RegionReached', region='a')
    assert event.to_document() == {'t': 1.5, 'kind': 'RegionReached', 'region': 'a'}
    assert MissionFailed('Stuck', 'at rest').reason == 'Stuck'


def test_inline_task():
    assert len(load_task(UNSATISFIABLE)) == 2
    assert load_task('urgent.nba.json').alphabet == ['u1']


def test_empty_mission():
    result = run(load_scenario('empty.json'))
    metrics = result.metrics
    assert result.done
    assert metrics['reason'] is None
    assert metrics['min_clearance'] > 0.0
    assert metrics['events']['RegionReached'] == 1
    assert metrics['events']['ObstacleDetected'] == 0
    assert set(metrics['events']) == set(EVENT_KINDS)
    kinds = [event.kind for event in result.events]
    assert kinds[-1] == 'MissionDone'
    assert result.events[kinds.index('RegionReached')].payload['region'] == 'a'
    final = result.trajectory[-1]
    assert abs(final['x'] - 1.0) <= 0.05
    assert abs(final['y'] - 0.5) <= 0.05
    assert metrics['steps'] == len(result.trajectory)
    assert metrics['travel_distance'] >= 2.0


def test_missions_are_deterministic():
    first = run(load_scenario('empty.json'))
    second = run(load_scenario('empty.json'))
    assert [(row['x'], row['y'], row['theta']) for row in first.trajectory] == \
        [(row['x'], row['y'], row['theta']) for row in second.trajectory]


def test_timeout(empty_document):
    empty_document['termination'] = {'max_time': 0.5}
    result = run(Scenario.from_document(empty_document))
    assert not result.done
    assert result.metrics['reason'] == 'Timeout'
    assert result.events[-1].kind == 'MissionFailed'
    assert result.metrics['time'] == pytest.approx(0.5)


def test_unsatisfiable_task(empty_document):
    empty_document['task'] = UNSATISFIABLE
    result = run(Scenario.from_document(empty_document))
    assert result.metrics['reason'] == 'NoAcceptingRun'
    assert result.trajectory == []
    assert result.metrics['min_clearance'] is None


def test_grid_obstacles():
    boundary, shapes = grid_obstacles(8)
    assert len(shapes) == 8
    assert boundary.boundary
    with pytest.raises(ValueError):
        grid_obstacles(10000)


def test_bench_table():
    table = bench(sizes=(2, 3), trials=1)
    assert list(table.columns) == ['obstacles', 'rebuild_ms', 'update_ms', 'speedup',
                                   'batch_eval_ms', 'recursive_eval_ms']
    assert list(table['obstacles']) == [2, 3]
    assert (table['update_ms'] > 0.0).all()


def test_surveillance_mission_is_safe_and_repeatable():
    first = run(load_scenario('surveillance.json'))
    second = run(load_scenario('surveillance.json'))
    assert first.done, first.metrics['reason']
    metrics = first.metrics
    assert metrics['min_clearance'] > 0.0
    assert {event.payload['region'] for event in first.events if event.kind == 'RegionReached'} == \
        {'d1', 'd2', 'd3', 'd4'}
    assert json.dumps([event.to_document() for event in first.events]) == \
        json.dumps([event.to_document() for event in second.events])
    assert metrics['turning'] <= 1.5 * metrics['path_turning']


def test_contingent_delivery_keeps_the_deliveries():
    result = run(load_scenario('delivery.json'))
    assert result.done, result.metrics['reason']
    adapted = [event for event in result.events
               if event.kind == 'PlanAdapted' and event.payload['reason'] == 'contingent']
    assert len(adapted) == 1
    switched = result.events.index(adapted[0])
    reached = [event.payload['region'] for event in result.events if event.kind == 'RegionReached']
    later = [event.payload['region'] for event in result.events[switched:]
             if event.kind == 'RegionReached']
    assert 'u1' in later
    assert {'d1', 'd2', 'd3'} <= set(reached)


def test_mission_variants():
    with pytest.raises(ValueError):
        Mission(load_scenario('empty.json'), 'teleport')
    table = compare(load_scenario('empty.json'))
    assert list(table['variant']) == list(VARIANTS)
    assert (table['status'] == 'MissionDone').all()
    assert (table['travel_distance'] >= 2.0).all()
    assert (table['turning'] >= 0.0).all()
    direct = run(load_scenario('empty.json'), 'direct')
    assert direct.metrics['trees_built'] == 0
    assert [event.kind for event in direct.events].count('WaypointReached') == 0
