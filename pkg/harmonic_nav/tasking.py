"""Task planning over Büchi automata: the navigation map of oriented
regions, its product with the task automaton, prefix-suffix plan
synthesis and the adaptation of the plan as the map changes.

Automata are read from JSON documents::

    {"states": ["s0", "s1"],
     "alphabet": ["a"],
     "transitions": [{"from": "s0", "symbol": "1", "to": "s0"},
                     {"from": "s0", "symbol": "a", "to": "s1"},
                     {"from": "s1", "symbol": "1", "to": "s1"}],
     "initial": ["s0"],
     "accepting": ["s1"]}

A symbol is a guard over the alphabet: ``1`` is true, ``0`` false, and
literals (``a``, ``!a``) combine with ``&&`` and ``||``.
"""

import json
import math
import pkgutil

import networkx as nx

from .control import Pose
from .htree import Disconnected, shortest_path
from .oriented import wrap_angle

ORIENTATIONS = (0.0, math.pi / 2.0, math.pi, 3.0 * math.pi / 2.0)
START_LABEL = None


class ParseError(ValueError):
    """An automaton document is malformed."""


class DanglingState(ValueError):
    """An automaton refers to an undeclared state, or a state has no
    outgoing transition."""


class NoAcceptingRun(RuntimeError):
    """No accepting run exists in the product automaton."""

    def __init__(self, message, removed=()):
        super(NoAcceptingRun, self).__init__(message)
        self.removed = list(removed)
        """Map edges removed so far."""


class Guard(object):
    """A guard in disjunctive normal form."""

    def __init__(self, text, alphabet):
        self.text = str(text).strip()
        self.clauses = []
        """List of clauses, each a list of ``(proposition, positive)``."""
        for clause in self.text.split('||'):
            literals = []
            for literal in clause.split('&&'):
                literal = literal.strip().strip('()').strip()
                if literal == '1':
                    continue
                if literal == '0':
                    literals = None
                    break
                positive = not literal.startswith('!')
                name = literal.lstrip('!').strip()
                if not name:
                    raise ParseError('empty literal in guard "%s"' % self.text)
                if name not in alphabet:
                    raise ParseError('guard "%s" uses "%s" outside the alphabet' % (self.text, name))
                literals.append((name, positive))
            if literals is not None:
                self.clauses.append(literals)

    def __call__(self, labels):
        return any(all((name in labels) == positive for name, positive in clause)
                   for clause in self.clauses)

    def __repr__(self):
        return 'Guard(%r)' % self.text


class NBA(object):
    """A nondeterministic Büchi automaton."""

    def __init__(self, states, alphabet, transitions, initial, accepting):
        self.states = list(states)
        self.alphabet = list(alphabet)
        self.transitions = [(source, Guard(symbol, self.alphabet), target)
                            for source, symbol, target in transitions]
        self.initial = set(initial)
        self.accepting = set(accepting)
        self.outgoing = dict((state, []) for state in self.states)
        for source, guard, target in self.transitions:
            self.outgoing[source].append((guard, target))

    def successors(self, state, labels):
        """States reachable from *state* reading the label set *labels*."""
        return set(target for guard, target in self.outgoing[state] if guard(labels))

    def __len__(self):
        return len(self.states)

    def to_document(self):
        return {'states': self.states, 'alphabet': self.alphabet,
                'transitions': [{'from': s, 'symbol': g.text, 'to': t}
                                for s, g, t in self.transitions],
                'initial': sorted(self.initial), 'accepting': sorted(self.accepting)}


def load_nba(document):
    """Build an :py:class:`NBA` from a parsed JSON *document*."""
    if not isinstance(document, dict):
        raise ParseError('an automaton document must be an object')
    for key in ('states', 'alphabet', 'transitions', 'initial', 'accepting'):
        if key not in document:
            raise ParseError('automaton document has no "%s"' % key)
    states = [str(state) for state in document['states']]
    if len(set(states)) != len(states):
        raise ParseError('duplicate state names')
    declared = set(states)
    transitions = []
    for transition in document['transitions']:
        try:
            item = (str(transition['from']), str(transition['symbol']), str(transition['to']))
        except (KeyError, TypeError):
            raise ParseError('malformed transition %r' % (transition,))
        for state in (item[0], item[2]):
            if state not in declared:
                raise DanglingState('transition %r refers to undeclared state "%s"' % (transition, state))
        transitions.append(item)
    initial = [str(state) for state in document['initial']]
    accepting = [str(state) for state in document['accepting']]
    if not initial or not accepting:
        raise ParseError('the initial and accepting sets must not be empty')
    for state in initial + accepting:
        if state not in declared:
            raise DanglingState('"%s" is not a declared state' % state)
    sources = set(item[0] for item in transitions)
    for state in states:
        if state not in sources:
            raise DanglingState('state "%s" has no outgoing transition' % state)
    return NBA(states, [str(name) for name in document['alphabet']], transitions, initial, accepting)


def read_nba(name):
    """Load a bundled automaton by file name."""
    return load_nba(json.loads(pkgutil.get_data('harmonic_nav', 'data/' + name).decode('utf-8')))


def conjoin_guards(first, second):
    """Guard text of the conjunction of two guards, in disjunctive
    normal form; ``0`` when unsatisfiable."""
    clauses = []
    for a in first.clauses:
        for b in second.clauses:
            literals = dict(a)
            if any(literals.get(name, positive) != positive for name, positive in b):
                continue
            literals.update(b)
            clauses.append(' && '.join(('' if positive else '!') + name
                                       for name, positive in sorted(literals.items())) or '1')
    return ' || '.join(clauses) or '0'


def conjoin(first, second, initial=None):
    """The automaton accepting the words both *first* and *second*
    accept, with *second* started from the states *initial* (its initial
    states by default).  States are ``first|second|track``: track 1
    waits for an accepting state of *first*, track 2 for one of
    *second*."""
    initial = sorted(second.initial) if initial is None else list(initial)
    start = [(p, q, 1) for p in sorted(first.initial) for q in initial]
    seen = set(start)
    queue = list(start)
    transitions = []
    while queue:
        p, q, track = queue.pop(0)
        if track == 1 and p in first.accepting:
            following = 1 if q in second.accepting else 2
        elif track == 2 and q in second.accepting:
            following = 1
        else:
            following = track
        for guard_a, p_next in first.outgoing[p]:
            for guard_b, q_next in second.outgoing[q]:
                text = conjoin_guards(guard_a, guard_b)
                if text == '0':
                    continue
                target = (p_next, q_next, following)
                transitions.append(((p, q, track), text, target))
                if target not in seen:
                    seen.add(target)
                    queue.append(target)

    def name(state):
        return '%s|%s|%d' % state

    states = sorted(seen, key=name)
    alphabet = list(first.alphabet) + [a for a in second.alphabet if a not in first.alphabet]
    return NBA([name(s) for s in states], alphabet,
               [(name(s), text, name(t)) for s, text, t in transitions],
               [name(s) for s in start],
               [name(s) for s in states if s[2] == 1 and s[0] in first.accepting])


class NavigationMap(object):
    """Oriented regions and the transitions between them.

    Nodes are ``(label, orientation)`` pairs with a ``pose`` attribute;
    the initial node has label ``None`` and the start pose.  The map
    starts fully connected with cost ``|g - g'| + w |theta - theta'|``
    and self-loops of cost 0.  A *builder*, a callable from a start and
    a goal pose to a :py:class:`~harmonic_nav.htree.HarmonicTree`,
    provides the trees that refine edge costs."""

    def __init__(self, regions, start, orientations=ORIENTATIONS, w=1.0, builder=None):
        self.w = float(w)
        self.orientations = tuple(orientations)
        self.builder = builder
        self.graph = nx.DiGraph()
        self.initial = (START_LABEL, start.theta)
        self.graph.add_node(self.initial, pose=start, labels=frozenset())
        for region in regions:
            for theta in self.orientations:
                self.graph.add_node((region.label, theta),
                                    pose=Pose(region.center[0], region.center[1], theta),
                                    labels=frozenset([region.label]))
        for u in self.graph.nodes:
            for v in self.graph.nodes:
                if v == self.initial:
                    continue
                cost = 0.0 if u == v else self.initial_cost(u, v)
                self.graph.add_edge(u, v, cost=cost, tree=None)

    def pose(self, node):
        return self.graph.nodes[node]['pose']

    def labels(self, node):
        return self.graph.nodes[node]['labels']

    def initial_cost(self, u, v):
        a, b = self.pose(u), self.pose(v)
        return a.distance(b) + self.w * abs(wrap_angle(b.theta - a.theta))

    def tree(self, u, v):
        """The tree of edge ``(u, v)``, built on first use."""
        data = self.graph.edges[u, v]
        if data['tree'] is None and self.builder is not None and u != v:
            data['tree'] = self.builder(self.pose(u), self.pose(v))
        return data['tree']

    def trees(self):
        return [(u, v, data['tree']) for u, v, data in self.graph.edges(data=True)
                if data['tree'] is not None]

    def refresh(self, u, v):
        """Re-evaluate edge ``(u, v)`` from its tree.  Removes the edge
        and returns False if the tree has no path."""
        tree = self.tree(u, v)
        if tree is None:
            return True
        try:
            path = shortest_path(tree)
        except Disconnected:
            self.graph.remove_edge(u, v)
            return False
        self.graph.edges[u, v]['cost'] = path.cost
        return True

    def reanchor(self, pose):
        """Move the initial node to *pose*."""
        self.graph.nodes[self.initial]['pose'] = pose
        for v in list(self.graph.successors(self.initial)):
            data = self.graph.edges[self.initial, v]
            data['tree'] = None
            if v != self.initial:
                data['cost'] = self.initial_cost(self.initial, v)


class ProductAutomaton(object):
    """Reachable part of the product of a :py:class:`NavigationMap`
    and an :py:class:`NBA`.  A state ``(node, s)`` holds the automaton
    state after arriving at map node *node*."""

    def __init__(self, graph, initial, accepting):
        self.graph = graph
        self.initial = list(initial)
        self.accepting = set(accepting)

    def __len__(self):
        return self.graph.number_of_nodes()


def build_product(nav_map, nba, initial=None):
    """Product of *nav_map* and *nba*, explored from *initial* product
    states (by default the map's initial node with each initial
    automaton state)."""
    if initial is None:
        initial = [(nav_map.initial, s) for s in sorted(nba.initial)]
    graph = nx.DiGraph()
    frontier = list(initial)
    graph.add_nodes_from(frontier)
    while frontier:
        node, state = frontier.pop()
        for target, data in nav_map.graph[node].items():
            for successor in sorted(nba.successors(state, nav_map.labels(target))):
                product_state = (target, successor)
                if product_state not in graph:
                    graph.add_node(product_state)
                    frontier.append(product_state)
                graph.add_edge((node, state), product_state, cost=data['cost'])
    accepting = [p for p in graph.nodes if p[1] in nba.accepting]
    return ProductAutomaton(graph, initial, accepting)


class Plan(object):
    """A prefix of product states ending at an accepting state and a
    suffix cycle back to it, repeated forever."""

    def __init__(self, prefix, suffix, prefix_cost, suffix_cost, source=None):
        self.source = source
        """The product state the plan starts from."""
        self.prefix = list(prefix)
        self.suffix = list(suffix)
        self.prefix_cost = float(prefix_cost)
        self.suffix_cost = float(suffix_cost)
        self.cursor = 0
        """Index of the next state to reach in the unrolled plan."""

    @property
    def cost(self):
        return self.prefix_cost + self.suffix_cost

    @property
    def stationary(self):
        """Whether the suffix stays at the accepting state."""
        return len(self.suffix) == 1 and self.suffix[0] == self.prefix[-1]

    def target(self, index=None):
        index = self.cursor if index is None else index
        if index < len(self.prefix):
            return self.prefix[index]
        return self.suffix[(index - len(self.prefix)) % len(self.suffix)]

    def advance(self):
        self.cursor += 1
        return self.cursor

    def cycles(self):
        """Completed repetitions of the suffix."""
        return max(0, self.cursor - len(self.prefix)) // len(self.suffix)

    def labels(self, states):
        return [node[0] for node, _ in states]

    def to_document(self):
        return {'prefix': self.labels(self.prefix), 'suffix': self.labels(self.suffix),
                'cost': self.cost}

    def __eq__(self, other):
        return isinstance(other, Plan) and (self.prefix, self.suffix) == (other.prefix, other.suffix)

    def __repr__(self):
        return 'Plan(prefix=%r, suffix=%r, cost=%g)' % (
            self.labels(self.prefix), self.labels(self.suffix), self.cost)


def synthesize(product):
    """Cheapest prefix-suffix plan: for each accepting state reachable
    from an initial state, the shortest prefix plus the shortest cycle
    back through it."""
    best = None
    for source in product.initial:
        if source not in product.graph:
            continue
        distances, paths = nx.single_source_dijkstra(product.graph, source, weight='cost')
        for accept in sorted(product.accepting, key=repr):
            if accept not in distances:
                continue
            cycle = shortest_cycle(product, accept)
            if cycle is None:
                continue
            total = distances[accept] + cycle[0]
            if best is None or total < best[0] - 1e-12:
                best = (total, paths[accept][1:] or [accept], cycle[1], distances[accept], cycle[0], source)
    if best is None:
        raise NoAcceptingRun('no accepting run from %r' % (product.initial,))
    _, prefix, suffix, prefix_cost, suffix_cost, source = best
    return Plan(prefix, suffix, prefix_cost, suffix_cost, source)


def shortest_cycle(product, state):
    """``(cost, states)`` of the cheapest cycle from *state* back to
    itself, the states listed after *state* and ending with it."""
    distances, paths = nx.single_source_dijkstra(product.graph, state, weight='cost')
    best = None
    for predecessor in product.graph.predecessors(state):
        if predecessor not in distances:
            continue
        total = distances[predecessor] + product.graph.edges[predecessor, state]['cost']
        if best is None or total < best[0] - 1e-12:
            best = (total, paths[predecessor][1:] + [state])
    return best


def adapt(nav_map, nba, current, removed=None):
    """Re-evaluate the map edges that have trees, dropping those without
    a path, and re-synthesize from the product state *current*.  Edges
    leaving the current map node get trees first.  Removed edges are
    appended to *removed*."""
    removed = [] if removed is None else removed
    node = current[0]
    for v in list(nav_map.graph.successors(node)):
        nav_map.tree(node, v)
    for u, v, _ in nav_map.trees():
        if not nav_map.refresh(u, v):
            removed.append((u, v))
    product = build_product(nav_map, nba, [current])
    try:
        return product, synthesize(product)
    except NoAcceptingRun as err:
        raise NoAcceptingRun(str(err), removed)


def contingent_event(nav_map, nba, current_node):
    """Switch to the automaton *nba* at map node *current_node*:
    rebuild the product from it and re-synthesize."""
    product = build_product(nav_map, nba, [(current_node, s) for s in sorted(nba.initial)])
    return product, synthesize(product)
