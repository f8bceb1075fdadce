import textwrap

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from eos_symmetry_tool.core.eos import BLACK
from eos_symmetry_tool.core.errors import ModelParseError
from eos_symmetry_tool.core.model_parser import load, parse, parse_nested_marking, render_model
from eos_symmetry_tool.core.multiset import Multiset
from conftest import model_path

EXPLICIT = textwrap.dedent("""\
    objectnet N
      place x
      place y
      trans u pre x post y
    end

    systemnet
      place A
      place B
      type A N
      type B N
      trans move pre A post B
    end

    events explicit
      event move { N: u }
      event idle@A { N: u }
    end

    initial A[x] + 2'B[]
""")


def codes(info):
    return [d.code for d in info.value.diagnostics]


def parse_error(text):
    with pytest.raises(ModelParseError) as info:
        parse(textwrap.dedent(text))
    return info


class TestFixtures:
    def test_s8(self, s8):
        assert len(s8.initial.support()) == 4
        assert s8.initial.card == 4
        assert [e.label for e in s8.eos.events] == ['t[N1:t1,N2:t2]']
        assert s8.max_sync == 1

    def test_kitchen_events(self, kitchen):
        assert [e.label for e in kitchen.eos.events] == [
            'go12[]', 'go21[]', 'whiteS1[recipe:c]', 'fillS1[recipe:d]',
            'yolkS2[recipe:b]', 'fillS2[recipe:d]', 'id@S1[recipe:a]', 'id@S2[recipe:a]',
        ]
        assert kitchen.initial == parse_nested_marking('S1[p0]')
        assert kitchen.eos.system_net.name == 'kitchen'

    def test_hub_places_share_one_type(self, kitchen_hub):
        eos = kitchen_hub.eos
        assert eos.system_net.places == ('H', 'S1', 'S2')
        assert {eos.typing[p] for p in eos.system_net.places} == {'recipe'}

    def test_spans_point_at_declarations(self, kitchen):
        line, column = kitchen.spans['go12']
        assert kitchen.source.splitlines()[line - 1][column - 1:].startswith('go12')


class TestExplicitEvents:
    def test_events_and_marking(self):
        doc = parse(EXPLICIT)
        assert [e.label for e in doc.eos.events] == ['move[N:u]', 'id@A[N:u]']
        assert doc.initial == parse_nested_marking("A[x] + 2'B[]")
        assert doc.max_sync is None
        assert doc.eos.nets['N'].pre['u'] == Multiset.of('x')

    def test_default_system_name(self):
        assert parse(EXPLICIT).eos.system_net.name == 'system'

    def test_no_initial_means_empty_marking(self):
        doc = parse(EXPLICIT.replace("initial A[x] + 2'B[]\n", ''))
        assert not doc.initial

    def test_black_alias(self):
        doc = parse(textwrap.dedent("""\
            systemnet
              place A
              type A •
              trans t pre A post A
            end
            events explicit
              event t
            end
            initial A[]
        """))
        assert doc.eos.typing['A'] == BLACK
        assert doc.eos.is_pt_like()
        assert doc.initial == parse_nested_marking('A[]')

    def test_net_named_like_a_place(self):
        doc = parse(textwrap.dedent("""\
            systemnet
              place A
              type A N
            end
            objectnet M
              place N
            end
            objectnet N
              place x
            end
            initial A[x]
        """))
        assert doc.eos.object_net_names == ('M', 'N')
        assert doc.eos.typing['A'] == 'N'
        assert doc.spans['N'] == (6, 9)

    def test_duplicate_object_net(self):
        info = parse_error("""\
            objectnet N
              place x
            end
            objectnet N
              place y
            end
            systemnet
              place A
              type A N
            end
        """)
        (diag,) = info.value.diagnostics
        assert diag.code == 'DuplicateDeclaration'
        assert (diag.line, diag.column) == (4, 11)


@pytest.mark.parametrize('name', ['eos-s8.eos', 'kitchen.eos', 'kitchen_hub.eos'])
def test_rendered_fixture_parses_back(name):
    doc = load(model_path(name))
    text = render_model(doc)
    again = parse(text)
    assert render_model(again) == text
    assert again.initial == doc.initial
    assert again.eos.events == doc.eos.events


def test_rendered_explicit_model_parses_back():
    doc = parse(EXPLICIT)
    text = render_model(doc)
    assert 'events explicit' in text
    assert 'event id@A { N: u }' in text
    assert parse(text).eos.events == doc.eos.events


class TestDiagnostics:
    def test_unknown_place_in_transition(self):
        info = parse_error("""\
            objectnet N
              place x
              trans u pre x + z post x
            end
            systemnet
              place A
              type A N
            end
        """)
        (diag,) = info.value.diagnostics
        assert diag.code == 'UnknownId'
        assert diag.line == 3
        assert 'z' in diag.message

    def test_duplicate_place(self):
        info = parse_error("""\
            objectnet N
              place x
              place x
            end
            systemnet
              place A
              type A N
            end
        """)
        (diag,) = info.value.diagnostics
        assert diag.code == 'DuplicateDeclaration'
        assert (diag.line, diag.column) == (3, 9)

    def test_malformed_multiset(self):
        info = parse_error("""\
            objectnet N
              place x
              trans u pre x + + post x
            end
            systemnet
              place A
              type A N
            end
        """)
        assert codes(info) == ['MalformedMultiset']
        assert info.value.diagnostics[0].line == 3

    def test_missing_end(self):
        info = parse_error("""\
            systemnet
              place A
              type A dot
            end
            objectnet N
              place x
        """)
        assert codes(info) == ['MissingEnd']
        assert info.value.diagnostics[0].line == 5

    def test_missing_system_net(self):
        info = parse_error("""\
            objectnet N
              place x
            end
        """)
        assert codes(info) == ['MissingSystemNet']

    def test_unknown_event_transition_is_positioned(self):
        info = parse_error("""\
            systemnet
              place A
              type A dot
            end
            events explicit
              event jump
            end
        """)
        (diag,) = info.value.diagnostics
        assert diag.code == 'UnknownTransition'
        assert (diag.line, diag.column) == (6, 9)

    def test_all_problems_are_reported_in_order(self):
        info = parse_error("""\
            objectnet N
              place x
              place x
              trans u pre q post x
            end
            systemnet
              place A
              type A N
            end
            bogus
        """)
        assert codes(info) == ['DuplicateDeclaration', 'UnknownId', 'UnknownDirective']
        assert [d.line for d in info.value.diagnostics] == [3, 4, 10]
        assert str(info.value).startswith('<model>:3:9: DuplicateDeclaration')

    def test_marking_outside_type(self):
        info = parse_error(EXPLICIT.replace("initial A[x] + 2'B[]", 'initial A[q]'))
        assert codes(info) == ['MarkingTypeMismatch']
        assert info.value.diagnostics[0].line == 20

    def test_malformed_marking(self):
        info = parse_error(EXPLICIT.replace("initial A[x] + 2'B[]", 'initial A[x'))
        assert codes(info) == ['MalformedMarking']

    def test_label_blowup(self):
        with pytest.raises(ModelParseError) as info:
            load(model_path('kitchen.eos'), label_cap=3)
        assert codes(info) == ['LabelBlowup']


def test_load_reports_source_name(tmp_path):
    path = tmp_path / 'broken.eos'
    path.write_text('objectnet N\n', encoding='utf-8')
    with pytest.raises(ModelParseError) as info:
        load(str(path))
    assert codes(info) == ['MissingEnd', 'MissingSystemNet']
    assert info.value.diagnostics[0].format(str(path)).startswith(f"{path}:1:1: MissingEnd")


def read_model(name):
    with open(model_path(name), encoding='utf-8') as f:
        return f.read()


FIXTURE_TEXTS = [EXPLICIT] + [read_model(name) for name in ('eos-s8.eos', 'kitchen.eos', 'kitchen_hub.eos')]
NOISE = "[]{}'+:;@#=\n \t0123xyzANpt"


@st.composite
def mutated_models(draw):
    text = draw(st.sampled_from(FIXTURE_TEXTS))
    for _ in range(draw(st.integers(1, 4))):
        at = draw(st.integers(0, len(text)))
        edit = draw(st.sampled_from(['delete', 'insert', 'replace']))
        ch = draw(st.sampled_from(NOISE))
        if edit == 'delete':
            text = text[:at] + text[at + 1:]
        elif edit == 'insert':
            text = text[:at] + ch + text[at:]
        else:
            text = text[:at] + ch + text[at + 1:]
    return text


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(mutated_models())
def test_mutated_models_fail_with_positioned_diagnostics(text):
    try:
        doc = parse(text)
    except ModelParseError as error:
        assert error.diagnostics
        lines = len(text.splitlines()) or 1
        for diag in error.diagnostics:
            assert diag.line is not None and 1 <= diag.line <= lines
    else:
        assert doc.eos.validate() == []


@settings(max_examples=100, deadline=None)
@given(st.text(max_size=200))
def test_arbitrary_text_never_crashes(text):
    try:
        parse(text)
    except ModelParseError as error:
        assert error.diagnostics
