# -*- coding: utf-8 -*-
"""
Canonical representative module
Total-order keys for nested markings, orbit minima under an automorphism
group and projection-equivalence keys.
"""

from dataclasses import dataclass
from threading import Lock
from typing import TYPE_CHECKING, Dict, Iterable, List, Mapping, Tuple

from .multiset import Multiset

if TYPE_CHECKING:  # pragma: no cover
    from .eos import Eos, NestedMarking
    from .symmetry import AutGroup, EosAutomorphism

# ((system place index, object key), multiplicity) entries, sorted
MarkingKey = Tuple[Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], int], ...]


class NodeOrder:
    """Declaration-order indices of every place of a system"""

    def __init__(self, system_places: Iterable[str], typing: Mapping[str, str],
                 object_places: Mapping[str, Iterable[str]]):
        self.system_index = {p: i for i, p in enumerate(system_places)}
        self.typing = dict(typing)
        self.object_index = {
            net: {q: i for i, q in enumerate(places)} for net, places in object_places.items()
        }

    def object_key(self, marking: Multiset, net: str) -> Tuple[Tuple[int, int], ...]:
        index = self.object_index.get(net, {})
        return tuple(sorted((index[q], c) for q, c in marking.items()))

    def addend_key(self, place: str, marking: Multiset):
        return (self.system_index[place], self.object_key(marking, self.typing[place]))

    def key(self, mu: 'NestedMarking') -> MarkingKey:
        return tuple(sorted((self.addend_key(p, m), c) for (p, m), c in mu.items()))


def marking_key(mu: 'NestedMarking', order: NodeOrder) -> MarkingKey:
    """Injective, totally ordered linearization of a nested marking"""
    return order.key(mu)


def orbit(mu: 'NestedMarking', group: 'AutGroup') -> List['NestedMarking']:
    """Distinct images of mu, sorted by key"""
    order = group.eos.node_order
    images = {a.apply_to_marking(mu) for a in group.elements}
    return sorted(images, key=order.key)


def canonicalize_with_witness(mu: 'NestedMarking', group: 'AutGroup') -> Tuple['NestedMarking', 'EosAutomorphism']:
    """Orbit minimum together with an automorphism mapping mu onto it"""
    order = group.eos.node_order
    best = None
    best_key = None
    witness = None
    for aut in group.elements:
        image = aut.apply_to_marking(mu)
        key = order.key(image)
        if best_key is None or key < best_key:
            best, best_key, witness = image, key, aut
    return best, witness


def canonicalize(mu: 'NestedMarking', group: 'AutGroup') -> 'NestedMarking':
    """Lexicographically least member of mu's orbit"""
    return canonicalize_with_witness(mu, group)[0]


def tokenwise_canonicalize(mu: 'NestedMarking', group: 'AutGroup') -> 'NestedMarking':
    """Component-wise representative.

    The system component of each group element relocates the net-tokens,
    then every net-token marking is replaced by its own least image under
    the object-net components of the group. The result need not be
    automorphic to mu: this is a presentation form, not a state quotient.
    """
    from .eos import nested

    order = group.eos.node_order
    components: Dict[str, list] = {}
    for aut in group.elements:
        for net, comp in aut.object_components():
            components.setdefault(net, [])
            if comp not in components[net]:
                components[net].append(comp)

    token_cache: Dict[Tuple[str, Multiset], Multiset] = {}

    def least(net: str, marking: Multiset) -> Multiset:
        cached = token_cache.get((net, marking))
        if cached is None:
            candidates = [c.apply(marking) for c in components.get(net, [])] or [marking]
            cached = min(candidates, key=lambda m: order.object_key(m, net))
            token_cache[(net, marking)] = cached
        return cached

    best = None
    best_key = None
    systems_seen = set()
    for aut in group.elements:
        if aut.system in systems_seen:
            continue
        systems_seen.add(aut.system)
        counts = {}
        for (p, m), c in mu.items():
            net = order.typing[p]
            addend = (aut.system.place(p), least(net, m))
            counts[addend] = counts.get(addend, 0) + c
        image = nested(counts)
        key = order.key(image)
        if best_key is None or key < best_key:
            best, best_key = image, key
    return best


@dataclass(frozen=True)
class ProjKey:
    """(system projection, per-net sums of net-token markings)"""

    system_part: Multiset
    per_net: Tuple[Tuple[str, Multiset], ...]

    def net(self, name: str) -> Multiset:
        return dict(self.per_net).get(name, Multiset())


def proj_key(mu: 'NestedMarking', eos: 'Eos') -> ProjKey:
    """Projection-equivalence key: equal keys iff the markings are projection equivalent"""
    from .eos import pi1

    per_net = tuple((name, eos.pi2(mu, name)) for name in eos.object_net_names)
    return ProjKey(pi1(mu), per_net)


def proj_sort_key(key: ProjKey, order: NodeOrder):
    system = tuple(sorted((order.system_index[p], c) for p, c in key.system_part.items()))
    return (system, tuple(order.object_key(m, net) for net, m in key.per_net))


def symmetric_proj_key(mu: 'NestedMarking', group: 'AutGroup') -> ProjKey:
    """Least projection key over the orbit of mu"""
    eos = group.eos
    order = eos.node_order
    keys = {proj_key(aut.apply_to_marking(mu), eos) for aut in group.elements}
    return min(keys, key=lambda k: proj_sort_key(k, order))


class Canonicalizer:
    """Memoizing canonicalizer shared by exploration workers"""

    def __init__(self, group: 'AutGroup'):
        self.group = group
        self.cache = {}
        self.cache_lock = Lock()
        self.trivial = group.order == 1

    def __call__(self, mu: 'NestedMarking') -> 'NestedMarking':
        if self.trivial:
            return mu
        with self.cache_lock:
            cached = self.cache.get(mu)
        if cached is not None:
            return cached
        rep = canonicalize(mu, self.group)
        with self.cache_lock:
            self.cache[mu] = rep
        return rep
