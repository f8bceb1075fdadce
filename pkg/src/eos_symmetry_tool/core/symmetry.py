# -*- coding: utf-8 -*-
"""
Symmetry module
Automorphisms of p/t nets and of elementary object systems, group closure
and cycle notation.
"""

from collections import Counter, deque
from dataclasses import dataclass
from itertools import islice
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

from .config import DEFAULT_GROUP_CAP, get_logger
from .eos import BLACK, Eos, EosEvent, NestedMarking
from .errors import ImageNotInTheta, NonBijective, NotEnabled
from .multiset import Multiset
from .ptnet import PtMarking, PtNet


def _cycles(nodes, image):
    """Non-trivial cycles, each starting at its earliest node, in node order"""
    seen = set()
    cycles = []
    for x in nodes:
        if x in seen:
            continue
        cycle = [x]
        seen.add(x)
        y = image[x]
        while y != x:
            cycle.append(y)
            seen.add(y)
            y = image[y]
        if len(cycle) > 1:
            cycles.append(tuple(cycle))
    return cycles


class PtAutomorphism:
    """Bijection on places and on transitions of one net, preserving pre and post"""

    __slots__ = ('net', '_places', '_transitions', '_key')

    def __init__(self, net: PtNet, places: Mapping[str, str], transitions: Mapping[str, str], check: bool = True):
        self.net = net
        self._places = dict(places)
        self._transitions = dict(transitions)
        if check and not check_pt_automorphism(net, self._places, self._transitions):
            raise NonBijective(f"net {net.name}: mapping does not preserve pre/post")
        p_index, t_index = net.place_index, net.transition_index
        self._key = (tuple(p_index[self._places[p]] for p in net.places)
                     + tuple(t_index[self._transitions[t]] for t in net.transitions))

    @classmethod
    def identity(cls, net: PtNet) -> 'PtAutomorphism':
        return cls(net, {p: p for p in net.places}, {t: t for t in net.transitions}, check=False)

    def place(self, p: str) -> str:
        return self._places[p]

    def transition(self, t: str) -> str:
        return self._transitions[t]

    def apply(self, marking: PtMarking) -> PtMarking:
        return marking.map(self._places.__getitem__)

    def apply_steps(self, steps: Multiset) -> Multiset:
        return steps.map(self._transitions.__getitem__)

    def compose(self, other: 'PtAutomorphism') -> 'PtAutomorphism':
        """self after other"""
        return PtAutomorphism(self.net,
                              {p: self._places[other._places[p]] for p in self.net.places},
                              {t: self._transitions[other._transitions[t]] for t in self.net.transitions},
                              check=False)

    def inverse(self) -> 'PtAutomorphism':
        return PtAutomorphism(self.net,
                              {v: k for k, v in self._places.items()},
                              {v: k for k, v in self._transitions.items()},
                              check=False)

    @property
    def key(self) -> Tuple[int, ...]:
        """Image indices in declaration order; the identity has the least key"""
        return self._key

    def is_identity(self) -> bool:
        n = len(self.net.places)
        return (all(i == v for i, v in enumerate(self._key[:n]))
                and all(i == v for i, v in enumerate(self._key[n:])))

    def place_cycles(self) -> List[Tuple[str, ...]]:
        return _cycles(self.net.places, self._places)

    def transition_cycles(self) -> List[Tuple[str, ...]]:
        return _cycles(self.net.transitions, self._transitions)

    def cycles(self) -> List[Tuple[str, ...]]:
        return self.place_cycles() + self.transition_cycles()

    def __eq__(self, other):
        if not isinstance(other, PtAutomorphism):
            return NotImplemented
        return self.net.name == other.net.name and self._key == other._key

    def __hash__(self):
        return hash((self.net.name, self._key))

    def __repr__(self):
        return f"PtAutomorphism({self.net.name}, {_render_cycles(self.cycles())})"


def _render_cycles(cycles):
    text = ''.join(f"({' '.join(c)})" for c in cycles)
    return text or '()'


def check_pt_automorphism(net: PtNet, places: Mapping[str, str], transitions: Mapping[str, str]) -> bool:
    """True when the maps preserve pre and post; NonBijective if they are not bijections"""
    for kind, mapping, nodes in (('places', places, net.places), ('transitions', transitions, net.transitions)):
        if set(mapping) != set(nodes) or set(mapping.values()) != set(nodes):
            raise NonBijective(f"net {net.name}: not a bijection on {kind}")
    for t in net.transitions:
        image = transitions[t]
        if net.pre[image] != net.pre[t].map(places.__getitem__):
            return False
        if net.post[image] != net.post[t].map(places.__getitem__):
            return False
    return True


def morphism_preserves_firing(net: PtNet, aut: PtAutomorphism, m: PtMarking, t: str) -> bool:
    """m[t>m' holds exactly when aut(m)[aut(t)>aut(m') holds"""
    image_m, image_t = aut.apply(m), aut.transition(t)
    if net.enabled(m, t) != net.enabled(image_m, image_t):
        return False
    if not net.enabled(m, t):
        return True
    try:
        return aut.apply(net.fire(m, t)) == net.fire(image_m, image_t)
    except NotEnabled:
        return False


def net_graph(net: PtNet, colors: Optional[Mapping[str, object]] = None,
              transition_colors: Optional[Mapping[str, object]] = None) -> nx.DiGraph:
    """Bipartite digraph of a net; arc weights carry multiplicities"""
    colors = colors or {}
    transition_colors = transition_colors or {}
    graph = nx.DiGraph()
    for p in net.places:
        graph.add_node(('p', p), kind='place', color=str(colors.get(p, '')))
    for t in net.transitions:
        graph.add_node(('t', t), kind='transition', color=str(transition_colors.get(t, '')))
        for p, c in net.pre[t].items():
            graph.add_edge(('p', p), ('t', t), weight=c)
        for p, c in net.post[t].items():
            graph.add_edge(('t', t), ('p', p), weight=c)
    return graph


_node_match = isomorphism.categorical_node_match(['kind', 'color'], ['', ''])
_edge_match = isomorphism.categorical_edge_match('weight', 0)


def is_isomorphic(n1: PtNet, n2: PtNet) -> bool:
    return nx.is_isomorphic(net_graph(n1), net_graph(n2), node_match=_node_match, edge_match=_edge_match)


@dataclass(frozen=True)
class AutomorphismSet:
    """Automorphisms of one net, sorted by key"""

    elements: Tuple[PtAutomorphism, ...]
    truncated: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[PtAutomorphism]:
        return iter(self.elements)


def pt_automorphisms(net: PtNet, cap: int = DEFAULT_GROUP_CAP,
                     colors: Optional[Mapping[str, object]] = None,
                     transition_colors: Optional[Mapping[str, object]] = None) -> AutomorphismSet:
    """All automorphisms of a net (nodes keep their colour), at most `cap`.

    A truncated set always keeps the identity.
    """
    graph = net_graph(net, colors, transition_colors)
    matcher = isomorphism.DiGraphMatcher(graph, graph, node_match=_node_match, edge_match=_edge_match)
    found = []
    for mapping in islice(matcher.isomorphisms_iter(), cap + 1):
        places = {x[1]: y[1] for x, y in mapping.items() if x[0] == 'p'}
        transitions = {x[1]: y[1] for x, y in mapping.items() if x[0] == 't'}
        found.append(PtAutomorphism(net, places, transitions, check=False))
    truncated = len(found) > cap
    identity = PtAutomorphism.identity(net)
    if truncated:
        found = found[:cap]
        if identity not in found:
            found[-1] = identity
    if not found:
        found = [identity]
    return AutomorphismSet(tuple(sorted(found, key=lambda a: a.key)), truncated)


class EosAutomorphism:
    """System-net automorphism plus one automorphism per object net"""

    __slots__ = ('eos', 'system', '_objects', '_key')

    def __init__(self, eos: Eos, system: PtAutomorphism, objects: Mapping[str, PtAutomorphism]):
        self.eos = eos
        self.system = system
        self._objects = {name: objects.get(name) or PtAutomorphism.identity(eos.nets[name])
                         for name in eos.object_net_names}
        self._key = (system.key,) + tuple(self._objects[n].key for n in eos.object_net_names)

    @classmethod
    def identity(cls, eos: Eos) -> 'EosAutomorphism':
        return cls(eos, PtAutomorphism.identity(eos.system_net), {})

    def component(self, net: str) -> PtAutomorphism:
        if net == BLACK:
            return PtAutomorphism.identity(self.eos.nets[BLACK])
        return self._objects[net]

    def object_components(self) -> Iterator[Tuple[str, PtAutomorphism]]:
        return iter(self._objects.items())

    def apply_to_marking(self, mu: NestedMarking) -> NestedMarking:
        typing = self.eos.typing
        objects = self._objects
        place = self.system.place

        def image(addend):
            p, m = addend
            net = typing[p]
            return (place(p), objects[net].apply(m) if net in objects else m)

        return mu.map(image)

    def map_event(self, event: EosEvent) -> EosEvent:
        system = self.system.place(event.system) if event.idle else self.system.transition(event.system)
        sync = {n: self.component(n).apply_steps(steps) for n, steps in event.sync}
        return EosEvent.create(system, sync, idle=event.idle)

    def apply_to_event(self, event: EosEvent) -> EosEvent:
        """Image of an event; ImageNotInTheta when the image is not an event of the system"""
        image = self.map_event(event)
        if image not in self.eos.event_set:
            raise ImageNotInTheta(f"image {image.label} of {event.label} is not an event")
        return image

    def compose(self, other: 'EosAutomorphism') -> 'EosAutomorphism':
        """self after other"""
        return EosAutomorphism(self.eos, self.system.compose(other.system),
                               {n: c.compose(other._objects[n]) for n, c in self._objects.items()})

    def inverse(self) -> 'EosAutomorphism':
        return EosAutomorphism(self.eos, self.system.inverse(),
                               {n: c.inverse() for n, c in self._objects.items()})

    @property
    def key(self):
        return self._key

    def is_identity(self) -> bool:
        return self.system.is_identity() and all(c.is_identity() for c in self._objects.values())

    def cycle_notation(self) -> str:
        """Place cycles of every component, then transition cycles; `()` for the identity"""
        components = [self.system] + list(self._objects.values())
        cycles = [c for comp in components for c in comp.place_cycles()]
        cycles += [c for comp in components for c in comp.transition_cycles()]
        return _render_cycles(cycles)

    def __eq__(self, other):
        if not isinstance(other, EosAutomorphism):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"EosAutomorphism({self.cycle_notation()})"


@dataclass(frozen=True)
class AutGroup:
    """Finite automorphism group: elements sorted by key, identity first"""

    elements: Tuple[EosAutomorphism, ...]
    generators: Tuple[EosAutomorphism, ...]
    truncated: bool
    eos: Eos

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> EosAutomorphism:
        return self.elements[0]

    def __contains__(self, aut) -> bool:
        return aut in set(self.elements)

    def __iter__(self) -> Iterator[EosAutomorphism]:
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def _closure(start, generators, cap):
    members = set(start)
    queue = deque(members)
    while queue:
        g = queue.popleft()
        for h in generators:
            product = h.compose(g)
            if product in members:
                continue
            if len(members) >= cap:
                return members, True
            members.add(product)
            queue.append(product)
    return members, False


def close_group(eos: Eos, generators: Sequence[EosAutomorphism], cap: int = DEFAULT_GROUP_CAP) -> AutGroup:
    """Group generated by `generators` (breadth-first products), at most `cap` elements"""
    members, truncated = _closure([EosAutomorphism.identity(eos)], list(generators), cap)
    elements = tuple(sorted(members, key=lambda a: a.key))
    return AutGroup(elements, tuple(g for g in generators if not g.is_identity()), truncated, eos)


def _generating_set(elements, cap):
    """Greedy generating set: take each element not yet generated"""
    generators = []
    if not elements:
        return ()
    members = {elements[0]}
    for g in elements:
        if g in members:
            continue
        generators.append(g)
        members, _ = _closure(members | {g}, generators, cap)
    return tuple(generators)


def _closed_subgroup(eos, candidates, cap):
    """Subgroup generated greedily by `candidates`, skipping any that would overflow `cap`"""
    members = {EosAutomorphism.identity(eos)}
    generators = []
    for g in candidates:
        if g in members:
            continue
        grown, overflow = _closure(members, generators + [g], cap)
        if not overflow:
            members = grown
            generators.append(g)
    return tuple(sorted(members, key=lambda a: a.key)), tuple(generators)


def _transition_orbits(auts):
    """Orbit representative of every transition under a complete automorphism set"""
    orbit = {}
    for aut in auts:
        for t in aut.net.transitions:
            image = aut.transition(t)
            orbit[t] = min(orbit.get(t, t), image)
    return orbit


def _event_colors(eos, net_auts):
    """Colours of system places and transitions that every automorphism preserves.

    A transition is coloured by the sync shapes of its events, where object
    steps are read up to their orbit (or only by multiplicity when the
    object group is incomplete). Idle events colour their place together
    with its type.
    """
    orbits = {n: _transition_orbits(a) for n, a in net_auts.items() if not a.truncated}

    def shape(event):
        parts = []
        for net, steps in event.sync:
            if net in orbits:
                counts = Counter()
                for t, c in steps.items():
                    counts[orbits[net].get(t, t)] += c
                parts.append((net, tuple(sorted(counts.items()))))
            else:
                parts.append((net, tuple(sorted(c for _, c in steps.items()))))
        return tuple(parts)

    transition_shapes, place_shapes = {}, {}
    for event in eos.events:
        target = place_shapes if event.idle else transition_shapes
        target.setdefault(event.system, []).append(shape(event))
    transition_colors = {t: tuple(sorted(s)) for t, s in transition_shapes.items()}
    place_colors = {p: (eos.typing.get(p), tuple(sorted(place_shapes.get(p, ()))))
                    for p in eos.system_net.places}
    return place_colors, transition_colors


def eos_automorphisms(eos: Eos, cap: int = DEFAULT_GROUP_CAP) -> AutGroup:
    """All typing- and event-preserving automorphisms of an EOS, at most `cap`.

    When the search stops at `cap`, the result is the subgroup generated by
    what was found, so it still holds the identity and is closed.
    """
    logger = get_logger('AutomorphismSearch')
    names = list(eos.object_net_names)
    net_auts = {n: pt_automorphisms(eos.nets[n], cap) for n in names}
    place_colors, transition_colors = _event_colors(eos, net_auts)
    system_auts = pt_automorphisms(eos.system_net, cap, colors=place_colors, transition_colors=transition_colors)
    truncated = system_auts.truncated or any(a.truncated for a in net_auts.values())
    logger.debug("system net %s: %d automorphisms; object nets: %s", eos.system_net.name, len(system_auts),
                 {n: len(a) for n, a in net_auts.items()})

    # events are checked as soon as every net they synchronize with is assigned
    position = {n: i for i, n in enumerate(names)}
    checks = {}
    for event in eos.events:
        last = max((position[n] for n in event.nets if n in position), default=-1)
        checks.setdefault(last, []).append(event)

    found = []

    def consistent(candidate, level):
        return all(candidate.map_event(e) in eos.event_set for e in checks.get(level, ()))

    def search(system, level, chosen):
        if level == len(names):
            if len(found) >= cap:
                return False
            found.append(EosAutomorphism(eos, system, chosen))
            return True
        name = names[level]
        for comp in net_auts[name]:
            chosen[name] = comp
            if consistent(EosAutomorphism(eos, system, chosen), level) and not search(system, level + 1, chosen):
                return False
        del chosen[name]
        return True

    for system in system_auts:
        if not consistent(EosAutomorphism(eos, system, {}), -1):
            continue
        if not search(system, 0, {}):
            truncated = True
            break

    if truncated:
        elements, generators = _closed_subgroup(eos, sorted(set(found), key=lambda a: a.key), cap)
        logger.warning("automorphism search stopped at %d; using a subgroup of order %d", cap, len(elements))
    else:
        elements = tuple(sorted(set(found), key=lambda a: a.key)) or (EosAutomorphism.identity(eos),)
        generators = _generating_set(elements, cap)
    logger.info("automorphism group of order %d (%d generators, truncated=%s)",
                len(elements), len(generators), truncated)
    return AutGroup(elements, generators, truncated, eos)
