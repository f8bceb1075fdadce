# -*- coding: utf-8 -*-
"""
Elementary object system module
System net, object nets, typing, events, nested markings, projections, the
enabling predicate, mode enumeration and the firing rule.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement, product
from types import MappingProxyType
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from ..locales import messages
from .canonical import NodeOrder, proj_key
from .config import DEFAULT_LABEL_CAP, ModeCaps
from .errors import Diagnostic, LabelBlowup, NotEnabled, UnknownNode
from .multiset import Multiset
from .ptnet import PtNet, black_net

BLACK = 'dot'
BLACK_ALIASES = ('dot', '•')
IDLE_PREFIX = 'id@'

# Multiset of (system place, object-net marking) addends
NestedMarking = Multiset
Addend = Tuple[str, Multiset]

_EMPTY = Multiset()


def nested(entries: Union[None, Mapping[Addend, int], Iterable[Addend]] = None) -> NestedMarking:
    """Build a nested marking from addends `(place, marking)`"""
    return Multiset(entries)


def addend(place: str, marking: Optional[Multiset] = None) -> Addend:
    """The addend p[M]; p[] when no marking is given"""
    return (place, marking if marking is not None else _EMPTY)


def pi1(mu: NestedMarking) -> Multiset:
    """System-net projection: the places of all addends"""
    return mu.map(lambda pm: pm[0])


def nested_leq(a: NestedMarking, b: NestedMarking) -> bool:
    """a is contained in b as a multiset of addends"""
    return a <= b


@dataclass(frozen=True)
class Injection:
    """Witness for the liberal order: source addend i sits inside target addend mapping[i]"""

    mapping: Tuple[Tuple[int, int], ...]
    source: Tuple[Addend, ...]
    target: Tuple[Addend, ...]

    @property
    def image(self) -> NestedMarking:
        """The sub-marking of the target selected by the injection"""
        return nested(self.target[j] for _, j in self.mapping)


def _expand(mu):
    return tuple(sorted(mu.elements(), key=lambda pm: (pm[0], sorted(pm[1].items()))))


def liberal_leq(a: NestedMarking, b: NestedMarking) -> Optional[Injection]:
    """Injective placewise embedding of a's addends into larger addends of b"""
    source, target = _expand(a), _expand(b)
    if len(source) > len(target):
        return None
    if not source:
        return Injection((), source, target)
    graph = nx.Graph()
    left = [('a', i) for i in range(len(source))]
    graph.add_nodes_from(left)
    graph.add_nodes_from(('b', j) for j in range(len(target)))
    for i, (p, m) in enumerate(source):
        for j, (q, n) in enumerate(target):
            if p == q and m <= n:
                graph.add_edge(('a', i), ('b', j))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    if any(node not in matching for node in left):
        return None
    mapping = tuple(sorted((i, matching[('a', i)][1]) for i in range(len(source))))
    return Injection(mapping, source, target)


@dataclass(frozen=True)
class EosEvent:
    """System transition (or idle transition of a place) with its synchronized object steps"""

    system: str
    sync: Tuple[Tuple[str, Multiset], ...] = ()
    idle: bool = False

    @classmethod
    def create(cls, system: str, sync: Optional[Mapping[str, Multiset]] = None, idle: bool = False) -> 'EosEvent':
        steps = tuple(sorted((n, ms) for n, ms in (sync or {}).items() if ms))
        return cls(system, steps, idle)

    @classmethod
    def idle_at(cls, place: str, sync: Mapping[str, Multiset]) -> 'EosEvent':
        return cls.create(place, sync, idle=True)

    @property
    def name(self) -> str:
        return f"{IDLE_PREFIX}{self.system}" if self.idle else self.system

    def theta(self, net: str) -> Multiset:
        for name, steps in self.sync:
            if name == net:
                return steps
        return _EMPTY

    @property
    def nets(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.sync)

    @property
    def label(self) -> str:
        inner = ','.join(f"{n}:{ms.render(compact=True)}" for n, ms in self.sync)
        return f"{self.name}[{inner}]"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Mode:
    """Consumed (lam) and produced (rho) sub-markings of one firing"""

    lam: NestedMarking
    rho: NestedMarking


class ModeList(list):
    """List of modes or (event, mode) pairs that remembers cap truncation"""

    def __init__(self, items=(), truncated=False):
        super().__init__(items)
        self.truncated = truncated


def _sub_multisets(items, size, start=0):
    """All ways to pick `size` addends from (marking, available) pairs"""
    if size == 0:
        yield {}
        return
    if start >= len(items):
        return
    marking, available = items[start]
    for take in range(min(available, size), -1, -1):
        for rest in _sub_multisets(items, size - take, start + 1):
            if take:
                rest = dict(rest)
                rest[marking] = take
            yield rest


def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _splits(target, k):
    """Ordered splits of target into k parts"""
    if k == 1:
        yield (target,)
        return
    items = target.sorted_items()
    per_element = [list(_compositions(c, k)) for _, c in items]
    for combo in product(*per_element):
        parts = [{} for _ in range(k)]
        for (element, _), composition in zip(items, combo):
            for i, n in enumerate(composition):
                if n:
                    parts[i][element] = n
        yield tuple(Multiset(part) for part in parts)


class Eos:
    """An elementary object system (system net, object nets, typing, events)"""

    def __init__(self, system_net: PtNet, object_nets: Sequence[PtNet], typing: Mapping[str, str],
                 events: Iterable[EosEvent] = (),
                 system_labels: Optional[Mapping[str, Mapping[str, Multiset]]] = None,
                 object_labels: Optional[Mapping[str, Mapping[str, str]]] = None,
                 label_bound: Optional[int] = None):
        self.system_net = system_net
        self.object_nets = tuple(n for n in object_nets if n.name != BLACK)
        self.nets = {n.name: n for n in self.object_nets}
        self.nets[BLACK] = black_net(BLACK)
        self.typing = MappingProxyType({p: (BLACK if t in BLACK_ALIASES else t) for p, t in typing.items()})
        self.system_labels = {t: dict(v) for t, v in (system_labels or {}).items()}
        self.object_labels = {n: dict(v) for n, v in (object_labels or {}).items()}
        # max_sync used when the events came from labels; None for explicit events
        self.label_bound = label_bound
        self.events = tuple(sorted(set(events), key=self.event_sort_key))

    # -- structure ------------------------------------------------------

    @property
    def object_net_names(self) -> Tuple[str, ...]:
        return tuple(n.name for n in self.object_nets)

    @cached_property
    def node_order(self) -> NodeOrder:
        return NodeOrder(self.system_net.places,
                         {p: self.typing.get(p, BLACK) for p in self.system_net.places},
                         {name: net.places for name, net in self.nets.items()})

    @cached_property
    def event_set(self) -> frozenset:
        return frozenset(self.events)

    def event_sort_key(self, event: EosEvent):
        net = self.system_net
        index = (net.place_index if event.idle else net.transition_index).get(event.system, len(net.place_index) + len(net.transition_index))
        return (int(event.idle), index, event.system,
                tuple((n, tuple(sorted(ms.items()))) for n, ms in event.sync))

    def net_of(self, place: str) -> PtNet:
        try:
            return self.nets[self.typing[place]]
        except KeyError:
            raise UnknownNode(f"no typed system place {place!r}")

    def with_events(self, events: Iterable[EosEvent], label_bound: Optional[int] = None) -> 'Eos':
        return Eos(self.system_net, self.object_nets, self.typing, events,
                   self.system_labels, self.object_labels, label_bound)

    def validate(self) -> List[Diagnostic]:
        """All violated structural invariants, one diagnostic each"""
        diags = []

        def report(code, location, *args):
            diags.append(Diagnostic(code, messages.get_text(code, *args), location))

        system = self.system_net
        names = [n.name for n in self.object_nets]
        for name in names:
            if name in BLACK_ALIASES:
                report('ReservedName', name, name)
            if name == system.name:
                report('SystemNetAsType', name, name)
        owner = {}
        for net in (system,) + self.object_nets:
            for node in net.places + net.transitions:
                if node in owner:
                    report('DuplicateNode', node, node, owner[node], net.name)
                else:
                    owner[node] = net.name
        for t in system.transitions:
            if t.startswith(IDLE_PREFIX):
                report('ReservedName', t, t)
        for p in system.places:
            kind = self.typing.get(p)
            if kind is None:
                report('UntypedPlace', p, p)
            elif kind == system.name:
                report('SystemNetAsType', p, p)
            elif kind not in self.nets:
                report('UnknownObjectNet', p, p, kind)
        for event in self.events:
            if event.idle:
                if event.system not in system.place_index:
                    report('UnknownPlace', event.name, event.label, event.system)
                else:
                    kind = self.typing.get(event.system)
                    for n in event.nets:
                        if n != kind:
                            report('IdleTypeMismatch', event.name, event.label, n, kind)
                    if kind not in event.nets:
                        report('IdleWithoutStep', event.name, event.label, kind)
            elif event.system not in system.transition_index:
                report('UnknownTransition', event.name, event.label, event.system)
            for n, steps in event.sync:
                net = self.nets.get(n)
                if net is None:
                    report('UnknownEventNet', event.name, event.label, n)
                    continue
                for t in steps:
                    if t not in net.transition_index:
                        report('UnknownObjectTransition', event.name, event.label, t, n)
        for t, demands in self.system_labels.items():
            if t not in system.transition_index:
                report('UnknownLabelNode', t, t, system.name)
            for n in demands:
                if n not in self.nets:
                    report('UnknownLabelNet', t, t, n)
        for n, labels in self.object_labels.items():
            net = self.nets.get(n)
            if net is None:
                report('UnknownLabelNet', n, 'objectnet', n)
                continue
            for t in labels:
                if t not in net.transition_index:
                    report('UnknownLabelNode', t, t, n)
        return diags

    def validate_marking(self, mu: NestedMarking) -> List[Diagnostic]:
        """Typing consistency of a nested marking"""
        diags = []
        for (p, m), _ in mu.items():
            if p not in self.system_net.place_index or p not in self.typing:
                diags.append(Diagnostic('UnknownMarkingPlace', messages.get_text('UnknownMarkingPlace', p), p))
                continue
            net = self.nets.get(self.typing[p])
            if net is None or not net.is_marking(m):
                label = f"{p}[{m.render(compact=True)}]"
                diags.append(Diagnostic('MarkingTypeMismatch',
                                        messages.get_text('MarkingTypeMismatch', label, self.typing[p]), p))
        return diags

    def is_conservative(self) -> bool:
        """Every non-black input type of a transition is also an output type"""
        system = self.system_net
        for t in system.transitions:
            inputs = {self.typing[p] for p in system.pre[t].support()} | {BLACK}
            outputs = {self.typing[p] for p in system.post[t].support()} | {BLACK}
            if not inputs <= outputs:
                return False
        return True

    def is_pt_like(self) -> bool:
        return all(self.typing.get(p) == BLACK for p in self.system_net.places)

    # -- projections ----------------------------------------------------

    def pi2(self, mu: NestedMarking, net: str) -> Multiset:
        """Sum of the markings of all net-tokens of type `net`"""
        if net not in self.nets:
            raise UnknownNode(f"unknown object net {net!r}")
        counts = {}
        for (p, m), c in mu.items():
            if self.typing.get(p) != net:
                continue
            for q, k in m.items():
                counts[q] = counts.get(q, 0) + k * c
        return Multiset(counts)

    # -- firing ---------------------------------------------------------

    def system_pre(self, event: EosEvent) -> Multiset:
        if event.idle:
            if event.system not in self.system_net.place_index:
                raise UnknownNode(f"unknown system place {event.system!r}")
            return Multiset.of(event.system)
        if event.system not in self.system_net.transition_index:
            raise UnknownNode(f"unknown system transition {event.system!r}")
        return self.system_net.pre[event.system]

    def system_post(self, event: EosEvent) -> Multiset:
        if event.idle:
            return self.system_pre(event)
        if event.system not in self.system_net.transition_index:
            raise UnknownNode(f"unknown system transition {event.system!r}")
        return self.system_net.post[event.system]

    def _object_effects(self, event):
        effects = {}
        for n, steps in event.sync:
            net = self.nets.get(n)
            if net is None or any(t not in net.transition_index for t in steps):
                return None
        for net in self.object_nets:
            steps = event.theta(net.name)
            effects[net.name] = (net.pre_of(steps), net.post_of(steps))
        return effects

    def failing_clause(self, event: EosEvent, lam: NestedMarking, rho: NestedMarking) -> Optional[int]:
        """Number (1-4) of the first violated conjunct of the enabling predicate, or None"""
        if pi1(lam) != self.system_pre(event):
            return 1
        if pi1(rho) != self.system_post(event):
            return 2
        effects = self._object_effects(event)
        if effects is None:
            return 3
        for name, (pre_n, post_n) in effects.items():
            if not pre_n <= self.pi2(lam, name):
                return 3
        for name, (pre_n, post_n) in effects.items():
            if self.pi2(rho, name) != self.pi2(lam, name) - pre_n + post_n:
                return 4
        return None

    def phi(self, event: EosEvent, lam: NestedMarking, rho: NestedMarking) -> bool:
        """Enabling predicate"""
        return self.failing_clause(event, lam, rho) is None

    def _distributions(self, post_sys, targets):
        order = self.node_order
        slots = {}
        for p, c in post_sys.sorted_items(key=order.system_index.get):
            slots.setdefault(self.typing[p], []).extend([p] * c)
        for name, target in targets.items():
            if target and name not in slots:
                return
        per_net = []
        for name, places in slots.items():
            if name == BLACK or name not in targets:
                per_net.append([(places, (_EMPTY,) * len(places))])
            else:
                per_net.append([(places, parts) for parts in _splits(targets[name], len(places))])
        seen = set()
        for combo in product(*per_net):
            counts = {}
            for places, parts in combo:
                for p, m in zip(places, parts):
                    counts[(p, m)] = counts.get((p, m), 0) + 1
            rho = nested(counts)
            if rho not in seen:
                seen.add(rho)
                yield rho

    def enumerate_modes(self, mu: NestedMarking, event: EosEvent, caps: Optional[ModeCaps] = None) -> ModeList:
        """All modes (lam, rho) with lam contained in mu that satisfy the enabling predicate"""
        caps = caps or ModeCaps()
        pre_sys = self.system_pre(event)
        post_sys = self.system_post(event)
        if not pre_sys <= pi1(mu):
            return ModeList()
        effects = self._object_effects(event)
        if effects is None:
            return ModeList()
        order = self.node_order
        by_place = {}
        for (p, m), c in mu.items():
            if p in pre_sys:
                by_place.setdefault(p, []).append((m, c))
        for p in by_place:
            by_place[p].sort(key=lambda mc, p=p: order.addend_key(p, mc[0]))
        places = [p for p, _ in pre_sys.sorted_items(key=order.system_index.get)]
        choices = [list(_sub_multisets(by_place.get(p, []), pre_sys.count(p))) for p in places]

        modes = set()
        truncated = False
        lambdas = 0
        distributions = 0
        for combo in product(*choices):
            lambdas += 1
            if lambdas > caps.max_lambda:
                truncated = True
                break
            counts = {}
            for p, picked in zip(places, combo):
                for m, k in picked.items():
                    counts[(p, m)] = k
            lam = nested(counts)
            targets = {}
            for name, (pre_n, post_n) in effects.items():
                available = self.pi2(lam, name)
                if not pre_n <= available:
                    break
                targets[name] = available - pre_n + post_n
            else:
                for rho in self._distributions(post_sys, targets):
                    distributions += 1
                    if distributions > caps.max_distributions:
                        truncated = True
                        break
                    modes.add(Mode(lam, rho))
            if truncated:
                break

        ordered = sorted(modes, key=lambda md: (order.key(md.lam), order.key(md.rho)))
        if caps.collapse_projection:
            seen = set()
            kept = []
            for md in ordered:
                cls = (proj_key(md.lam, self), proj_key(md.rho, self))
                if cls not in seen:
                    seen.add(cls)
                    kept.append(md)
            ordered = kept
        return ModeList(ordered, truncated)

    def fire(self, mu: NestedMarking, event: EosEvent, mode: Mode) -> NestedMarking:
        """Successor mu - lam + rho of an enabled event"""
        if not mode.lam <= mu:
            raise NotEnabled(f"{event.label}: lambda is not contained in the marking", clause='lambda')
        clause = self.failing_clause(event, mode.lam, mode.rho)
        if clause is not None:
            raise NotEnabled(f"{event.label}: enabling predicate fails at clause {clause}", clause=clause)
        return mu - mode.lam + mode.rho

    def enabled_events(self, mu: NestedMarking, caps: Optional[ModeCaps] = None) -> ModeList:
        """(event, mode) pairs of every enabled event, in event order"""
        result = ModeList()
        for event in self.events:
            modes = self.enumerate_modes(mu, event, caps)
            result.truncated = result.truncated or modes.truncated
            result.extend((event, md) for md in modes)
        return result

    # -- events from channel labels -------------------------------------

    def _label_matches(self, net, channels):
        labels = self.object_labels.get(net, {})
        transitions = self.nets[net].transitions
        per_channel = []
        for ch, count in channels.sorted_items():
            carriers = [t for t in transitions if labels.get(t) == ch]
            per_channel.append([Multiset(c) for c in combinations_with_replacement(carriers, count)])
        result = []
        for combo in product(*per_channel):
            total = Multiset()
            for part in combo:
                total = total + part
            result.append(total)
        return result

    def events_from_labels(self, max_sync: int, cap: int = DEFAULT_LABEL_CAP) -> Tuple[EosEvent, ...]:
        """Events whose object steps carry exactly the channels demanded by the system transition"""
        events = set()

        def emit(event):
            events.add(event)
            if len(events) > cap:
                raise LabelBlowup(messages.get_text('LabelBlowup', f"more than {cap}"))

        for t in self.system_net.transitions:
            demands = self.system_labels.get(t, {})
            options = []
            for net, channels in sorted(demands.items()):
                if not channels:
                    continue
                if net not in self.nets or channels.card > max_sync:
                    options = None
                    break
                matches = self._label_matches(net, channels)
                if not matches:
                    options = None
                    break
                options.append([(net, m) for m in matches])
            if options is None:
                continue
            for combo in product(*options):
                emit(EosEvent.create(t, dict(combo)))
        for p in self.system_net.places:
            kind = self.typing.get(p)
            if kind is None or kind == BLACK or kind not in self.nets:
                continue
            labelled = self.object_labels.get(kind, {})
            free = [t for t in self.nets[kind].transitions if t not in labelled]
            for size in range(1, max_sync + 1):
                for combo in combinations_with_replacement(free, size):
                    emit(EosEvent.idle_at(p, {kind: Multiset(combo)}))
        return tuple(sorted(events, key=self.event_sort_key))

    # -- notation -------------------------------------------------------

    def render_object_marking(self, marking: Multiset, net: str) -> str:
        index = self.nets[net].place_index if net in self.nets else {}
        return marking.render(key=lambda q: index.get(q, len(index)), compact=True)

    def render_marking(self, mu: NestedMarking) -> str:
        """Weighted nested notation, e.g. `1'S1[p1+p4] + 2'S2[p1+p4]`"""
        if not mu:
            return '0'
        order = self.node_order
        parts = []
        for (p, m), c in sorted(mu.items(), key=lambda kv: order.addend_key(*kv[0])):
            parts.append(f"{c}'{p}[{self.render_object_marking(m, self.typing[p])}]")
        return ' + '.join(parts)

    def find_events(self, name: str) -> List[EosEvent]:
        """Events whose label equals `name`, else those whose system part is `name`"""
        wanted = ''.join(name.split())
        exact = [e for e in self.events if e.label == wanted]
        if exact:
            return exact
        return [e for e in self.events if e.name == name or (not e.idle and e.system == name)]
