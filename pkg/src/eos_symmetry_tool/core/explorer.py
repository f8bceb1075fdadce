# -*- coding: utf-8 -*-
"""
Explorer module
Builds full, symmetry-reduced and projection-reduced reachability graphs,
checks quotients against full graphs and exports DOT and JSON.
"""

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Tuple

import networkx as nx

from .canonical import Canonicalizer, proj_key, symmetric_proj_key
from .config import Bounds, get_logger
from .eos import Eos, EosEvent, Mode, NestedMarking
from .errors import IncomparableGraphs
from .symmetry import AutGroup, eos_automorphisms

REDUCTIONS = ('none', 'aut', 'proj', 'aut+proj')

# progress(states, edges, depth)
ProgressCallback = Callable[[int, int, int], None]


@dataclass(frozen=True)
class Edge:
    source: int
    event: EosEvent
    mode: str
    target: int

    @property
    def label(self) -> str:
        return self.event.label


@dataclass
class ReachGraph:
    """Indexed states, labelled edges and run statistics"""

    eos: Eos
    reduction: str = 'none'
    group_order: int = 1
    states: List[NestedMarking] = field(default_factory=list)
    index: Dict[Hashable, int] = field(default_factory=dict)
    edges: List[Edge] = field(default_factory=list)
    modes: Dict[str, Mode] = field(default_factory=dict)
    initial: int = 0
    truncated: bool = False
    heuristic: bool = False
    depth: int = 0
    wall_ms: Optional[int] = None

    def add_state(self, key: Hashable, marking: NestedMarking) -> int:
        self.index[key] = len(self.states)
        self.states.append(marking)
        return self.index[key]

    @property
    def stats(self) -> Dict[str, object]:
        return {
            'states': len(self.states),
            'edges': len(self.edges),
            'truncated': self.truncated,
            'group_order': self.group_order,
            'reduction': self.reduction,
            'wall_ms': self.wall_ms,
        }

    def to_networkx(self) -> nx.MultiDiGraph:
        """MultiDiGraph with rendered markings on nodes and event labels on edges"""
        graph = nx.MultiDiGraph()
        for i, mu in enumerate(self.states):
            graph.add_node(i, marking=self.eos.render_marking(mu), initial=(i == self.initial))
        for e in self.edges:
            graph.add_edge(e.source, e.target, label=e.label, mode=e.mode)
        return graph


def mode_digest(eos: Eos, mode: Mode) -> str:
    order = eos.node_order
    return hashlib.sha1(repr((order.key(mode.lam), order.key(mode.rho))).encode('utf-8')).hexdigest()[:16]


class ExplorationWorker:
    """Breadth-first exploration, one frontier level at a time.

    `normalize` turns a marking into (state key, stored marking). Levels may
    be expanded by a thread pool; results are merged in frontier order so
    numbering does not depend on scheduling.
    """

    def __init__(self, eos: Eos, initial: NestedMarking, bounds: Optional[Bounds] = None,
                 normalize: Optional[Callable[[NestedMarking], Tuple[Hashable, NestedMarking]]] = None,
                 reduction: str = 'none', group_order: int = 1,
                 progress: Optional[ProgressCallback] = None):
        self.eos = eos
        self.initial = initial
        self.bounds = bounds or Bounds()
        self.normalize = normalize or (lambda mu: (mu, mu))
        self.reduction = reduction
        self.group_order = group_order
        self.progress = progress
        self.should_stop = False
        self.setup_logging()

    def setup_logging(self):
        """Setup logging for the worker"""
        self.logger = get_logger('ExplorationWorker')

    def stop(self):
        """Stop after the current level"""
        self.should_stop = True

    def _expand(self, mu: NestedMarking):
        pairs = self.eos.enabled_events(mu, self.bounds.mode_caps)
        result = []
        for event, mode in pairs:
            successor = mu - mode.lam + mode.rho
            result.append((event, mode, self.normalize(successor)))
        return result, pairs.truncated

    def _expand_level(self, markings):
        if self.bounds.workers > 1 and len(markings) > 1:
            with ThreadPoolExecutor(max_workers=self.bounds.workers) as pool:
                return list(pool.map(self._expand, markings))
        return [self._expand(mu) for mu in markings]

    def run(self) -> ReachGraph:
        """Main exploration loop"""
        started = time.perf_counter()
        bounds = self.bounds
        graph = ReachGraph(self.eos, self.reduction, self.group_order)
        graph.heuristic = 'proj' in self.reduction
        key, marking = self.normalize(self.initial)
        graph.initial = graph.add_state(key, marking)
        frontier = [graph.initial]
        depth = 0
        while frontier and not self.should_stop:
            if bounds.max_depth is not None and depth >= bounds.max_depth:
                if any(self.eos.enabled_events(graph.states[i], bounds.mode_caps) for i in frontier):
                    graph.truncated = True
                    self.logger.warning("depth bound %d reached with %d unexpanded states", depth, len(frontier))
                break
            expansions = self._expand_level([graph.states[i] for i in frontier])
            next_frontier = []
            for source, (successors, modes_truncated) in zip(frontier, expansions):
                if modes_truncated and not graph.truncated:
                    graph.truncated = True
                    self.logger.warning("mode enumeration truncated at state %d", source)
                for event, mode, (key, marking) in successors:
                    target = graph.index.get(key)
                    if target is None:
                        if len(graph.states) >= bounds.max_states:
                            if not graph.truncated:
                                self.logger.warning("state bound %d reached", bounds.max_states)
                            graph.truncated = True
                            continue
                        target = graph.add_state(key, marking)
                        next_frontier.append(target)
                    digest = mode_digest(self.eos, mode)
                    if bounds.keep_modes:
                        graph.modes[digest] = mode
                    graph.edges.append(Edge(source, event, digest, target))
            depth += 1
            graph.depth = depth
            self.logger.info("level %d: %d states, %d edges, frontier %d",
                             depth, len(graph.states), len(graph.edges), len(next_frontier))
            if self.progress:
                self.progress(len(graph.states), len(graph.edges), depth)
            frontier = next_frontier
        if self.should_stop and frontier:
            graph.truncated = True
        graph.wall_ms = int((time.perf_counter() - started) * 1000)
        return graph


def explore_full(eos: Eos, mu0: NestedMarking, bounds: Optional[Bounds] = None,
                 progress: Optional[ProgressCallback] = None) -> ReachGraph:
    """Reachability graph over concrete markings"""
    return ExplorationWorker(eos, mu0, bounds, progress=progress).run()


def explore_reduced(eos: Eos, mu0: NestedMarking, group: Optional[AutGroup] = None,
                    bounds: Optional[Bounds] = None, progress: Optional[ProgressCallback] = None) -> ReachGraph:
    """Reachability graph over canonical representatives"""
    group = group or eos_automorphisms(eos)
    canon = Canonicalizer(group)

    def normalize(mu):
        rep = canon(mu)
        return rep, rep

    return ExplorationWorker(eos, mu0, bounds, normalize, 'aut', group.order, progress).run()


def explore_proj(eos: Eos, mu0: NestedMarking, bounds: Optional[Bounds] = None,
                 group: Optional[AutGroup] = None, progress: Optional[ProgressCallback] = None) -> ReachGraph:
    """Projection classes, each stored with the first marking found for it.

    With a group the class key is also minimized over the orbit. The result
    is marked heuristic until checked with QuotientValidator.
    """
    if group is None:
        return ExplorationWorker(eos, mu0, bounds, lambda mu: (proj_key(mu, eos), mu), 'proj', 1, progress).run()
    return ExplorationWorker(eos, mu0, bounds, lambda mu: (symmetric_proj_key(mu, group), mu),
                             'aut+proj', group.order, progress).run()


def explore(eos: Eos, mu0: NestedMarking, reduction: str = 'none', bounds: Optional[Bounds] = None,
            group: Optional[AutGroup] = None, progress: Optional[ProgressCallback] = None) -> ReachGraph:
    if reduction not in REDUCTIONS:
        raise ValueError(f"unknown reduction {reduction!r}")
    if reduction == 'none':
        return explore_full(eos, mu0, bounds, progress)
    if reduction == 'proj':
        return explore_proj(eos, mu0, bounds, progress=progress)
    group = group or eos_automorphisms(eos)
    if reduction == 'aut':
        return explore_reduced(eos, mu0, group, bounds, progress)
    return explore_proj(eos, mu0, bounds, group, progress)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass
class QuotientReport:
    full_states: int
    reduced_states: int
    full_edges: int
    reduced_edges: int
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class QuotientValidator:
    """Compares a reduced graph with the full graph of the same system"""

    @staticmethod
    def validate_quotient(full: ReachGraph, reduced: ReachGraph, group: Optional[AutGroup] = None) -> QuotientReport:
        """Check surjectivity on states and edge correspondence in both directions.

        States are related through the reduced graph's own key (canonical
        representative, projection key or symmetric projection key); event
        labels are compared up to the orbit under `group`.
        """
        if full.eos is not reduced.eos or (group is not None and group.eos is not full.eos):
            raise IncomparableGraphs("graphs were built for different systems")
        if full.truncated:
            raise IncomparableGraphs("full graph is truncated")
        if group is None and reduced.reduction in ('aut', 'aut+proj'):
            raise IncomparableGraphs(f"a group is needed to check a {reduced.reduction} graph")
        eos = full.eos
        if reduced.reduction == 'aut':
            key_of = Canonicalizer(group)
        elif reduced.reduction == 'aut+proj':
            key_of = lambda mu: symmetric_proj_key(mu, group)
        elif reduced.reduction == 'proj':
            key_of = lambda mu: proj_key(mu, eos)
        else:
            key_of = lambda mu: mu
        auts = group.elements if group is not None else ()
        report = QuotientReport(len(full.states), len(reduced.states), len(full.edges), len(reduced.edges))
        orbit_labels = {}

        def orbit_label(event):
            label = orbit_labels.get(event)
            if label is None:
                label = min((aut.map_event(event).label for aut in auts), default=event.label)
                orbit_labels[event] = label
            return label

        keys_by_index = {i: k for k, i in reduced.index.items()}
        images = [key_of(mu) for mu in full.states]
        witness = {}
        for mu, key in zip(full.states, images):
            witness.setdefault(key, mu)
        for key, mu in witness.items():
            if key not in reduced.index:
                report.violations.append(Violation('states', f"{eos.render_marking(mu)} has no reduced state"))
        for i in sorted(keys_by_index):
            if keys_by_index[i] not in witness:
                report.violations.append(Violation(
                    'states', f"{eos.render_marking(reduced.states[i])} is not the image of a full state"))

        reduced_edges = {(keys_by_index[e.source], keys_by_index[e.target], orbit_label(e.event))
                         for e in reduced.edges}
        full_images = set()
        for e in full.edges:
            entry = (images[e.source], images[e.target], orbit_label(e.event))
            full_images.add(entry)
            if entry not in reduced_edges:
                report.violations.append(Violation(
                    'edge', f"{eos.render_marking(full.states[e.source])} --{e.label}--> "
                            f"{eos.render_marking(full.states[e.target])} has no reduced counterpart"))
        for e in reduced.edges:
            entry = (keys_by_index[e.source], keys_by_index[e.target], orbit_label(e.event))
            if entry not in full_images:
                report.violations.append(Violation(
                    'image', f"reduced edge {e.source} --{e.label}--> {e.target} is not the image of a full edge"))
        return report

    @staticmethod
    def generate_report(report: QuotientReport, output_path=None) -> str:
        """Generate a quotient report"""
        lines = [
            "Quotient Validation Report",
            "==========================",
            f"Full states: {report.full_states}",
            f"Reduced states: {report.reduced_states}",
            f"Full edges: {report.full_edges}",
            f"Reduced edges: {report.reduced_edges}",
            f"Violations: {len(report.violations)}",
        ]
        for kind, title in (('states', 'State Violations'), ('edge', 'Missing Reduced Edges'),
                            ('image', 'Unmatched Reduced Edges')):
            found = [v for v in report.violations if v.kind == kind]
            if found:
                lines.append(f"\n{title}:")
                lines.extend(f"  - {v.detail}" for v in found)
        text = "\n".join(lines)
        if output_path:
            with open(output_path, 'w', encoding='utf-8') as f:
                f.write(text + "\n")
        return text


verify_quotient = QuotientValidator.validate_quotient


def _gvquote(text):
    return '"' + text.replace('\\', '\\\\').replace('"', '\\"').replace('\n', '\\n') + '"'


def _shorten(text, max_len):
    if max_len is None or len(text) <= max_len:
        return text
    return text[:max(max_len - 3, 0)] + '...'


def export_dot(graph: ReachGraph, show_markings: bool = True, max_label_len: Optional[int] = None) -> str:
    """DOT digraph; nodes are numbered states, the initial state has a double border"""
    lines = ['digraph reach {', '  node [shape=box];']
    for i, mu in enumerate(graph.states):
        label = _shorten(graph.eos.render_marking(mu), max_label_len) if show_markings else f"s{i}"
        extra = ', peripheries=2' if i == graph.initial else ''
        lines.append(f"  s{i} [label={_gvquote(label)}{extra}];")
    for e in graph.edges:
        lines.append(f"  s{e.source} -> s{e.target} [label={_gvquote(_shorten(e.label, max_label_len))}];")
    lines.append('}')
    return '\n'.join(lines) + '\n'


def export_stats_json(graph: ReachGraph, timing: bool = False, extra: Optional[Dict[str, object]] = None) -> str:
    """Stats record with sorted keys; wall_ms stays null unless timing is requested"""
    stats = dict(graph.stats)
    if not timing:
        stats['wall_ms'] = None
    stats.update(extra or {})
    return json.dumps(stats, sort_keys=True, indent=2) + '\n'
