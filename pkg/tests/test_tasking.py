import math

import networkx as nx
import numpy as np
import pytest

from harmonic_nav.control import Pose
from harmonic_nav.htree import TreeConfig, build
from harmonic_nav.shapes import Circle
from harmonic_nav.tasking import (ORIENTATIONS, DanglingState, Guard, NavigationMap,
                                  NoAcceptingRun, ParseError, Plan, adapt, build_product,
                                  conjoin, conjoin_guards, contingent_event, load_nba, read_nba,
                                  synthesize)
from harmonic_nav.world import Region, World

PICKUP = {
    'states': ['s0', 's1', 's2'],
    'alphabet': ['p1', 'p2', 'd'],
    'transitions': [{'from': 's0', 'symbol': 'p1 || p2', 'to': 's1'},
                    {'from': 's0', 'symbol': '!p1 && !p2', 'to': 's0'},
                    {'from': 's1', 'symbol': 'd', 'to': 's2'},
                    {'from': 's1', 'symbol': '!d', 'to': 's1'},
                    {'from': 's2', 'symbol': '1', 'to': 's2'}],
    'initial': ['s0'],
    'accepting': ['s2'],
}


def document(**changes):
    result = read_nba('eventually_a.nba.json').to_document()
    result.update(changes)
    return result


@pytest.fixture
def pickup_world(box):
    return World(box, [], [Region('p1', (1.0, 1.0)), Region('p2', (3.0, 1.0)),
                           Region('d', (2.0, 3.0))])


def test_bundled_automata_load():
    nba = read_nba('eventually_a.nba.json')
    assert len(nba) == 2
    assert nba.alphabet == ['a']
    assert nba.accepting == {'s1'}
    assert nba.successors('s0', set()) == {'s0'}
    assert nba.successors('s0', {'a'}) == {'s1'}
    assert load_nba(nba.to_document()).to_document() == nba.to_document()
    assert len(read_nba('surveillance.nba.json')) == 16
    assert len(read_nba('delivery.nba.json')) == 16


def test_malformed_automata():
    incomplete = document()
    del incomplete['accepting']
    with pytest.raises(ParseError):
        load_nba(incomplete)
    with pytest.raises(ParseError):
        load_nba(document(accepting=[]))
    with pytest.raises(ParseError):
        load_nba(['s0'])
    with pytest.raises(ParseError):
        load_nba(document(transitions=[{'from': 's0', 'symbol': 'b', 'to': 's1'},
                                       {'from': 's1', 'symbol': '1', 'to': 's1'}]))


def test_dangling_states():
    with pytest.raises(DanglingState):
        load_nba(document(transitions=[{'from': 's0', 'symbol': 'a', 'to': 's9'},
                                       {'from': 's1', 'symbol': '1', 'to': 's1'}]))
    with pytest.raises(DanglingState):
        load_nba(document(transitions=[{'from': 's0', 'symbol': 'a', 'to': 's1'}]))
    with pytest.raises(DanglingState):
        load_nba(document(initial=['s7']))


def test_guards():
    alphabet = ['a', 'b', 'c']
    guard = Guard('a && !b || c', alphabet)
    assert guard({'a'})
    assert not guard({'a', 'b'})
    assert guard({'a', 'b', 'c'})
    assert not guard(set())
    assert Guard('1', alphabet)(set())
    assert not Guard('0', alphabet)({'a'})


def test_navigation_map_structure():
    regions = [Region('a', (1.0, 1.0)), Region('b', (3.0, 1.0))]
    start = Pose(0.5, 0.5, 0.0)
    nav_map = NavigationMap(regions, start)
    assert nav_map.graph.number_of_nodes() == 1 + 2 * len(ORIENTATIONS)
    assert nav_map.graph.in_degree(nav_map.initial) == 0
    assert nav_map.graph.number_of_edges() == 9 * 8
    assert nav_map.graph.edges[('a', 0.0), ('a', 0.0)]['cost'] == 0.0
    cost = nav_map.graph.edges[('a', 0.0), ('b', math.pi)]['cost']
    assert cost == pytest.approx(2.0 + math.pi)
    assert nav_map.labels(('b', 0.0)) == frozenset(['b'])
    assert nav_map.labels(nav_map.initial) == frozenset()


def test_product_reads_labels_on_arrival():
    nav_map = NavigationMap([Region('a', (1.0, 1.0))], Pose(0.5, 0.5, 0.0))
    product = build_product(nav_map, read_nba('eventually_a.nba.json'))
    assert len(product) <= 2 * len(ORIENTATIONS) + 1
    assert product.graph.has_edge((nav_map.initial, 's0'), (('a', 0.0), 's1'))
    assert not any(state == (('a', 0.0), 's0') for state in product.graph.nodes)
    assert product.graph.edges[(nav_map.initial, 's0'), (('a', 0.0), 's1')]['cost'] == \
        nav_map.graph.edges[nav_map.initial, ('a', 0.0)]['cost']


def test_empty_map_has_no_accepting_run():
    nav_map = NavigationMap([Region('a', (1.0, 1.0))], Pose(0.5, 0.5, 0.0))
    nav_map.graph.remove_edges_from(list(nav_map.graph.edges))
    product = build_product(nav_map, read_nba('eventually_a.nba.json'))
    assert len(product) == 1
    assert product.graph.number_of_edges() == 0
    with pytest.raises(NoAcceptingRun):
        synthesize(product)


def test_eventually_plan():
    nav_map = NavigationMap([Region('a', (1.0, 1.0))], Pose(0.0, 1.0, 0.0))
    plan = synthesize(build_product(nav_map, read_nba('eventually_a.nba.json')))
    assert plan.prefix == [(('a', 0.0), 's1')]
    assert plan.stationary
    assert plan.cost == pytest.approx(1.0)
    assert plan.source == (nav_map.initial, 's0')
    assert plan.to_document() == {'prefix': ['a'], 'suffix': ['a'], 'cost': plan.cost}


def test_pickup_then_deliver(pickup_world):
    nav_map = NavigationMap(pickup_world.regions, Pose(1.0, 0.3, math.pi / 2.0))
    plan = synthesize(build_product(nav_map, load_nba(PICKUP)))
    assert plan.labels(plan.prefix) == ['p1', 'd']
    assert plan.cost == pytest.approx(0.7 + math.sqrt(5.0))


def test_plan_cursor():
    a, b, c = ((('a', 0.0), 's0'), (('b', 0.0), 's1'), (('c', 0.0), 's1'))
    plan = Plan([a, b], [c, b], 2.0, 3.0)
    assert [plan.target(i) for i in range(5)] == [a, b, c, b, c]
    for _ in range(4):
        plan.advance()
    assert plan.cycles() == 1
    assert plan.cost == 5.0
    assert not plan.stationary
    assert Plan([a], [a], 1.0, 0.0).stationary
    assert Plan([a, b], [c, b], 0.0, 0.0) == plan


def random_nba(rng):
    guards = ['a', 'b', 'c', '!a', 'a && !b', 'b || c', '1']
    states = ['q0', 'q1', 'q2']
    transitions = [{'from': s, 'symbol': '!a', 'to': s} for s in states]
    for _ in range(5):
        source, target = rng.choice(states, size=2)
        transitions.append({'from': str(source), 'symbol': str(rng.choice(guards)), 'to': str(target)})
    return load_nba({'states': states, 'alphabet': ['a', 'b', 'c'], 'transitions': transitions,
                     'initial': ['q0'], 'accepting': ['q2']})


def oracle_cost(product):
    distances = nx.floyd_warshall(product.graph, weight='cost')
    best = math.inf
    for source in product.initial:
        for accept in product.accepting:
            prefix = distances[source][accept]
            cycle = min([distances[accept][p] + product.graph.edges[p, accept]['cost']
                         for p in product.graph.predecessors(accept)] or [math.inf])
            best = min(best, prefix + cycle)
    return best


@pytest.mark.parametrize('seed', range(10))
def test_synthesis_is_optimal(seed):
    rng = np.random.default_rng(seed)
    regions = [Region(label, rng.uniform(0.0, 4.0, size=2)) for label in 'abc']
    nav_map = NavigationMap(regions, Pose(2.0, 2.0, 0.0))
    for u, v, data in nav_map.graph.edges(data=True):
        if u != v:
            data['cost'] *= rng.uniform(0.5, 2.0)
    product = build_product(nav_map, random_nba(rng))
    assert len(product) <= 200
    expected = oracle_cost(product)
    if math.isinf(expected):
        with pytest.raises(NoAcceptingRun):
            synthesize(product)
        return
    plan = synthesize(product)
    assert plan.cost == pytest.approx(expected, abs=1e-9)
    loop = [plan.prefix[-1]] + plan.suffix
    assert sum(product.graph.edges[u, v]['cost'] for u, v in zip(loop[:-1], loop[1:])) == \
        pytest.approx(plan.suffix_cost)


def tree_builder(world):
    def builder(start, goal):
        return build(world, start, goal, TreeConfig(samples=60, radius=1.5), seed=0)
    return builder


def test_adapt_without_changes_keeps_the_plan(pickup_world):
    nav_map = NavigationMap(pickup_world.regions, Pose(1.0, 0.3, math.pi / 2.0),
                            builder=tree_builder(pickup_world))
    nba = load_nba(PICKUP)
    _, first = adapt(nav_map, nba, (nav_map.initial, 's0'))
    _, second = adapt(nav_map, nba, (nav_map.initial, 's0'))
    assert first == second
    assert first.labels(first.prefix) == ['p1', 'd']


def test_adapt_switches_to_the_other_pickup(pickup_world):
    nav_map = NavigationMap(pickup_world.regions, Pose(1.0, 0.3, math.pi / 2.0),
                            builder=tree_builder(pickup_world))
    nba = load_nba(PICKUP)
    initial = synthesize(build_product(nav_map, nba))
    assert 'p1' in initial.labels(initial.prefix)
    pickup_world._shapes.append(Circle((1.0, 1.0), 0.3))
    removed = []
    _, plan = adapt(nav_map, nba, initial.source, removed)
    labels = plan.labels(plan.prefix)
    assert 'p1' not in labels
    assert 'p2' in labels
    assert labels[-1] == 'd'
    assert len(removed) == len(ORIENTATIONS)
    assert all(u == nav_map.initial and v[0] == 'p1' for u, v in removed)


def test_adapt_reports_removed_edges(box):
    world = World(box, [], [Region('a', (1.0, 1.0))])
    nav_map = NavigationMap(world.regions, Pose(3.0, 3.0, 0.0), builder=tree_builder(world))
    world._shapes.append(Circle((1.0, 1.0), 0.3))
    with pytest.raises(NoAcceptingRun) as info:
        adapt(nav_map, read_nba('eventually_a.nba.json'), (nav_map.initial, 's0'))
    assert len(info.value.removed) == len(ORIENTATIONS)


def test_contingent_event_switches_the_task():
    regions = [Region('a', (1.0, 1.0)), Region('u1', (3.0, 3.0))]
    nav_map = NavigationMap(regions, Pose(0.5, 0.5, 0.0))
    plan = synthesize(build_product(nav_map, read_nba('eventually_a.nba.json')))
    assert plan.labels(plan.prefix)[-1] == 'a'
    nav_map.reanchor(Pose(1.0, 1.2, 0.0))
    product, urgent = contingent_event(nav_map, read_nba('urgent.nba.json'), nav_map.initial)
    assert urgent.labels(urgent.prefix)[-1] == 'u1'
    assert urgent.source == (nav_map.initial, 's0')
    assert urgent.prefix_cost == pytest.approx(math.hypot(2.0, 1.8))


def test_conjoined_guards():
    alphabet = ['a', 'b', 'c']
    both = conjoin_guards(Guard('a || b', alphabet), Guard('!b', alphabet))
    assert both == 'a && !b'
    assert Guard(both, alphabet)({'a'})
    assert not Guard(both, alphabet)({'a', 'b'})
    assert conjoin_guards(Guard('a', alphabet), Guard('!a', alphabet)) == '0'
    assert conjoin_guards(Guard('1', alphabet), Guard('1', alphabet)) == '1'


def test_conjoined_automaton_needs_both_tasks(pickup_world):
    urgent = read_nba('urgent.nba.json')
    task = conjoin(urgent, load_nba(PICKUP))
    assert sorted(task.alphabet) == ['d', 'p1', 'p2', 'u1']
    assert task.initial == {'s0|s0|1'}
    regions = list(pickup_world.regions) + [Region('u1', (3.0, 3.0))]
    nav_map = NavigationMap(regions, Pose(0.5, 0.5, 0.0))
    plan = synthesize(build_product(nav_map, task))
    labels = plan.labels(plan.prefix)
    assert 'u1' in labels and 'd' in labels
    assert min(labels.index(p) for p in ('p1', 'p2') if p in labels) < labels.index('d')
    assert plan.prefix[-1][1] in task.accepting


def test_contingent_task_keeps_outstanding_deliveries():
    regions = [Region('p1', (1.2, 0.3)), Region('p2', (1.8, 2.2)), Region('d1', (0.3, 2.2)),
               Region('d2', (2.7, 2.2)), Region('d3', (2.7, 0.3)), Region('u1', (0.3, 1.25))]
    delivery = read_nba('delivery.nba.json')
    state = 's0_0'
    for label in ('p1', 'd3'):
        (state,) = delivery.successors(state, {label})
    assert state == 's4_0'
    nav_map = NavigationMap(regions, Pose(2.7, 0.3, 0.0))
    nba = conjoin(read_nba('urgent.nba.json'), delivery, [state])
    _, plan = contingent_event(nav_map, nba, nav_map.initial)
    labels = plan.labels(plan.prefix)
    assert {'u1', 'd1', 'd2'} <= set(labels)
    for delivered in ('d1', 'd2'):
        before = labels[:labels.index(delivered)]
        assert 'p1' in before or 'p2' in before
    assert plan.stationary
