import json

import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings

from eos_symmetry_tool.core.canonical import canonicalize, proj_key
from eos_symmetry_tool.core.config import Bounds
from eos_symmetry_tool.core.eos import Eos, EosEvent
from eos_symmetry_tool.core.errors import IncomparableGraphs
from eos_symmetry_tool.core.explorer import (ExplorationWorker, QuotientValidator, explore, explore_full,
                                             explore_proj, explore_reduced, export_dot, export_stats_json,
                                             verify_quotient)
from eos_symmetry_tool.core.model_parser import parse_nested_marking
from eos_symmetry_tool.core.ptnet import PtNet
from eos_symmetry_tool.core.symmetry import close_group, eos_automorphisms
from strategies import object_systems


@pytest.fixture(scope='module')
def kitchen_graphs(kitchen, kitchen_group):
    full = explore_full(kitchen.eos, kitchen.initial)
    reduced = explore_reduced(kitchen.eos, kitchen.initial, kitchen_group)
    return full, reduced


@pytest.fixture
def collapse_model():
    n = PtNet.build('N', ['x', 'y'], {})
    system = PtNet.build('sys', ['A', 'B'], {'split': (['A'], ['B', 'B'])})
    eos = Eos(system, [n], {'A': 'N', 'B': 'N'}, [EosEvent.create('split')])
    return eos, parse_nested_marking('A[x+y]')


class TestKitchen:
    def test_state_counts(self, kitchen_graphs):
        full, reduced = kitchen_graphs
        assert len(full.states) == 12
        assert len(reduced.states) == 6
        assert not full.truncated and not reduced.truncated
        assert reduced.group_order == 2

    def test_quotient_is_sound(self, kitchen_graphs, kitchen_group):
        full, reduced = kitchen_graphs
        report = verify_quotient(full, reduced, kitchen_group)
        assert report.ok
        assert report.full_states == 12 and report.reduced_states == 6

    def test_recipe_completes(self, kitchen, kitchen_graphs):
        full, _ = kitchen_graphs
        done = [i for i, mu in enumerate(full.states) if 'p5' in kitchen.eos.render_marking(mu)]
        assert len(done) == 2
        graph = full.to_networkx()
        assert all(nx.has_path(graph, full.initial, i) for i in done)

    def test_full_graph_is_connected_from_initial(self, kitchen_graphs):
        full, _ = kitchen_graphs
        graph = full.to_networkx()
        assert set(nx.descendants(graph, full.initial)) | {full.initial} == set(graph.nodes)

    def test_reduced_states_are_canonical(self, kitchen_graphs, kitchen_group):
        _, reduced = kitchen_graphs
        for mu in reduced.states:
            assert canonicalize(mu, kitchen_group) == mu

    def test_deleted_edge_is_reported(self, kitchen, kitchen_graphs, kitchen_group):
        full, _ = kitchen_graphs
        broken = explore_reduced(kitchen.eos, kitchen.initial, kitchen_group)
        del broken.edges[0]
        report = QuotientValidator.validate_quotient(full, broken, kitchen_group)
        assert any(v.kind == 'edge' for v in report.violations)
        assert 'Missing Reduced Edges' in QuotientValidator.generate_report(report)

    def test_trivial_group_gives_isomorphic_graph(self, kitchen, kitchen_graphs):
        full, _ = kitchen_graphs
        trivial = close_group(kitchen.eos, [])
        assert trivial.order == 1
        reduced = explore_reduced(kitchen.eos, kitchen.initial, trivial)
        match = nx.algorithms.isomorphism.categorical_multiedge_match('label', None)
        assert nx.is_isomorphic(full.to_networkx(), reduced.to_networkx(), edge_match=match)
        assert verify_quotient(full, reduced, trivial).ok


@pytest.mark.parametrize('k, full_count, reduced_count', [(1, 18, 11), (2, 171, 94), (3, 1140, 594)])
def test_hub_aggregation(kitchen_hub, k, full_count, reduced_count):
    eos = kitchen_hub.eos
    mu0 = parse_nested_marking(f"{k}'H[p0]")
    group = eos_automorphisms(eos)
    assert group.order == 2
    assert len(explore_full(eos, mu0).states) == full_count
    assert len(explore_reduced(eos, mu0, group).states) == reduced_count


class TestS8:
    def test_one_step_graph(self, s8, s8_group):
        full = explore_full(s8.eos, s8.initial)
        assert len(full.states) == 5
        assert {e.label for e in full.edges} == {'t[N1:t1,N2:t2]'}
        printed = parse_nested_marking("p1[] + p4[a1+2'b1] + p5[] + p6[c2]")
        assert printed in full.states
        reduced = explore_reduced(s8.eos, s8.initial, s8_group)
        assert len(reduced.states) == 3
        assert verify_quotient(full, reduced, s8_group).ok

    def test_capped_group_gives_canonical_states(self, s8):
        group = eos_automorphisms(s8.eos, cap=3)
        reduced = explore_reduced(s8.eos, s8.initial, group)
        assert all(canonicalize(mu, group) == mu for mu in reduced.states)
        full = explore_full(s8.eos, s8.initial)
        assert verify_quotient(full, reduced, group).ok

    def test_projection_merges_symmetric_splits(self, s8):
        graph = explore_proj(s8.eos, s8.initial)
        full = explore_full(s8.eos, s8.initial)
        assert graph.heuristic
        assert len(graph.states) == 2
        successors = {proj_key(full.states[e.target], s8.eos) for e in full.edges if e.source == full.initial}
        assert len(successors) == 1
        assert all(proj_key(mu, s8.eos) in graph.index for mu in full.states)


class TestProjection:
    def test_collapse(self, collapse_model):
        eos, mu0 = collapse_model
        full = explore_full(eos, mu0)
        proj = explore_proj(eos, mu0)
        assert len(full.states) == 3
        assert len(proj.states) == 2
        assert QuotientValidator.validate_quotient(full, proj).ok

    def test_one_token_per_type_keeps_all_states(self, kitchen, kitchen_graphs):
        full, _ = kitchen_graphs
        assert len(explore_proj(kitchen.eos, kitchen.initial).states) == len(full.states)

    def test_combined_reduction(self, kitchen, kitchen_group, kitchen_graphs):
        full, _ = kitchen_graphs
        combined = explore(kitchen.eos, kitchen.initial, 'aut+proj', group=kitchen_group)
        assert combined.reduction == 'aut+proj'
        assert len(combined.states) == 6
        assert verify_quotient(full, combined, kitchen_group).ok


class TestBounds:
    def test_state_bound(self, kitchen):
        graph = explore_full(kitchen.eos, kitchen.initial, Bounds(max_states=5))
        assert graph.truncated
        assert len(graph.states) == 5

    def test_depth_bound(self, kitchen):
        graph = explore_full(kitchen.eos, kitchen.initial, Bounds(max_depth=1))
        assert graph.truncated
        assert graph.depth == 1

    def test_truncated_full_graph_is_rejected(self, kitchen, kitchen_group, kitchen_graphs):
        _, reduced = kitchen_graphs
        partial = explore_full(kitchen.eos, kitchen.initial, Bounds(max_states=3))
        with pytest.raises(IncomparableGraphs):
            verify_quotient(partial, reduced, kitchen_group)

    def test_other_system_is_rejected(self, s8, kitchen_graphs, kitchen_group):
        full, _ = kitchen_graphs
        other = explore_full(s8.eos, s8.initial)
        with pytest.raises(IncomparableGraphs):
            verify_quotient(full, other, kitchen_group)

    def test_stop_keeps_initial(self, kitchen):
        worker = ExplorationWorker(kitchen.eos, kitchen.initial)
        worker.stop()
        graph = worker.run()
        assert len(graph.states) == 1
        assert graph.truncated


class TestExport:
    def test_no_events_single_state(self):
        system = PtNet.build('sys', ['A'], {})
        eos = Eos(system, [], {'A': 'dot'})
        graph = explore_full(eos, parse_nested_marking('A[]'))
        dot = export_dot(graph)
        assert len(graph.states) == 1 and not graph.edges
        assert dot.count('[label=') == 1
        assert dot.startswith('digraph reach {')

    def test_dot_is_deterministic(self, kitchen, kitchen_group):
        first = export_dot(explore_reduced(kitchen.eos, kitchen.initial, kitchen_group))
        second = export_dot(explore_reduced(kitchen.eos, kitchen.initial, kitchen_group))
        threaded = export_dot(explore_reduced(kitchen.eos, kitchen.initial, kitchen_group, Bounds(workers=4)))
        assert first == second == threaded

    def test_dot_labels(self, s8):
        dot = export_dot(explore_full(s8.eos, s8.initial))
        assert 's0 -> s1 [label="t[N1:t1,N2:t2]"];' in dot
        assert 'peripheries=2' in dot
        assert export_dot(explore_full(s8.eos, s8.initial), max_label_len=8).count('...') >= 1

    def test_stats_json(self, kitchen_graphs):
        _, reduced = kitchen_graphs
        stats = json.loads(export_stats_json(reduced))
        assert stats == {'states': 6, 'edges': len(reduced.edges), 'truncated': False, 'group_order': 2,
                         'reduction': 'aut', 'wall_ms': None}
        assert json.loads(export_stats_json(reduced, timing=True))['wall_ms'] is not None

    def test_keep_modes(self, s8):
        graph = explore_full(s8.eos, s8.initial, Bounds(keep_modes=True))
        assert len(graph.modes) == 4
        assert all(e.mode in graph.modes for e in graph.edges)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(object_systems())
def test_random_quotients_are_sound(system):
    eos, mu0 = system
    if eos.validate():
        return
    bounds = Bounds(max_states=3000)
    full = explore_full(eos, mu0, bounds)
    if full.truncated:
        return
    group = eos_automorphisms(eos)
    reduced = explore_reduced(eos, mu0, group, bounds)
    assert len(reduced.states) <= len(full.states)
    assert verify_quotient(full, reduced, group).ok
