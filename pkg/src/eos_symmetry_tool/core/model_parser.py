# -*- coding: utf-8 -*-
"""
Model parser module
Reads and writes the line-oriented `.eos` text format.

    objectnet N1
      place a1
      place b1
      trans t1 pre a1 post b1
      label t1 ch1
    end
    systemnet
      place p1
      type p1 N1
      trans t pre p1 post p1
      label t N1:ch1
    end
    events from-labels max_sync=1
    initial p1[a1] + 2'p1[]

Explicit events are given in an `events explicit` block with lines like
`event t { N1: t1; N2: 2't2 }` or `event idle@p { N1: u }`.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..locales import messages
from .config import DEFAULT_LABEL_CAP
from .eos import BLACK, BLACK_ALIASES, IDLE_PREFIX, Eos, EosEvent, NestedMarking, nested
from .errors import Diagnostic, LabelBlowup, ModelParseError
from .multiset import Multiset, parse_multiset
from .ptnet import PtNet

DEFAULT_SYSTEM_NAME = 'system'
IDLE_PREFIXES = (IDLE_PREFIX, 'idle@')

_IDENT = r"[^\s\[\]{}:;+'#]+"
_TRANS = re.compile(rf"trans\s+(?P<id>{_IDENT})\s+pre\b(?P<pre>.*?)\bpost\b(?P<post>.*)$")
_ADDEND = re.compile(rf"\s*(?:(?P<count>\d+)\s*'\s*)?(?P<place>{_IDENT})\s*\[(?P<inner>[^\[\]]*)\]\s*")
_EVENT = re.compile(rf"event\s+(?P<name>{_IDENT})\s*(?:\{{(?P<body>[^{{}}]*)\}})?\s*$")
_FROM_LABELS = re.compile(r"events\s+from-labels\s+max_sync\s*=\s*(?P<k>\d+)\s*$")


def _split_top(text):
    """Split on `+` outside brackets, keeping each chunk's offset"""
    chunks = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == '[':
            depth += 1
        elif ch == ']':
            depth -= 1
        elif ch == '+' and depth == 0:
            chunks.append((text[start:i], start))
            start = i + 1
    chunks.append((text[start:], start))
    return chunks


def parse_nested_marking(text: str) -> NestedMarking:
    """Parse `k'p[M] + ...`; `0` or blank text is the empty nested marking.

    Raises ValueError whose second argument is the offending offset.
    """
    if not text.strip() or text.strip() == '0':
        return nested()
    counts = {}
    for chunk, offset in _split_top(text):
        match = _ADDEND.fullmatch(chunk)
        if not match:
            raise ValueError(f"malformed addend {chunk.strip()!r}", offset + len(chunk) - len(chunk.lstrip()))
        try:
            inner = parse_multiset(match.group('inner'))
        except ValueError as e:
            raise ValueError(e.args[0], offset + match.start('inner') + (e.args[1] if len(e.args) > 1 else 0))
        count = int(match.group('count')) if match.group('count') else 1
        if count:
            key = (match.group('place'), inner)
            counts[key] = counts.get(key, 0) + count
    return nested(counts)


@dataclass
class _NetDraft:
    name: str
    line: int
    places: List[str] = field(default_factory=list)
    transitions: List[str] = field(default_factory=list)
    pre: Dict[str, Multiset] = field(default_factory=dict)
    post: Dict[str, Multiset] = field(default_factory=dict)
    labels: Dict[str, object] = field(default_factory=dict)
    typing: Dict[str, str] = field(default_factory=dict)

    def build(self) -> PtNet:
        return PtNet(self.name, self.places, self.transitions, self.pre, self.post)


@dataclass
class ModelDocument:
    """A parsed model: system, initial marking and declaration positions"""

    source: str
    eos: Eos
    initial: NestedMarking
    spans: Dict[str, Tuple[int, int]]
    max_sync: Optional[int] = None
    source_name: str = '<model>'


class ModelParser:
    """Line-oriented reader collecting every diagnostic before failing"""

    def __init__(self, text: str, source_name: str = '<model>', label_cap: int = DEFAULT_LABEL_CAP):
        self.text = text
        self.source_name = source_name
        self.label_cap = label_cap
        self.diagnostics = []
        self.spans = {}
        self.net_spans = {}
        self.object_nets = []
        self.system = None
        self.events = []
        self.explicit_events = False
        self.max_sync = None
        self.max_sync_at = (1, 1)
        self.initial_text = None
        self.initial_at = (1, 1)

    def error(self, code: str, line: int, column: int, *args):
        self.diagnostics.append(Diagnostic(code, messages.get_text(code, *args), '', line, column))

    def parse(self) -> ModelDocument:
        block = None
        block_at = (0, 0)
        for number, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split('#', 1)[0].rstrip()
            stripped = line.strip()
            if not stripped:
                continue
            column = len(line) - len(line.lstrip()) + 1
            word = stripped.split()[0]
            if word == 'end':
                if block is None:
                    self.error('UnexpectedEnd', number, column)
                block = None
                continue
            if block is None:
                block = self.parse_top(stripped, number, column)
                if block is not None:
                    block_at = (number, column)
            elif block == 'events':
                self.parse_event(stripped, number, column)
            else:
                self.parse_net_line(block, stripped, number, column)
        if block is not None:
            self.error('MissingEnd', *block_at)
        if self.system is None:
            self.error('MissingSystemNet', 1, 1)
        return self.assemble()

    # -- top level ------------------------------------------------------

    def parse_top(self, text: str, line: int, column: int):
        words = text.split()
        if words[0] == 'objectnet':
            if len(words) != 2:
                self.error('MalformedLine', line, column, text)
                return _NetDraft('?', line)
            name = words[1]
            at = (line, column + text.index(name, 9))
            if any(d.name == name for d in self.object_nets):
                self.error('DuplicateDeclaration', *at, name)
            self.net_spans.setdefault(name, at)
            draft = _NetDraft(name, line)
            self.object_nets.append(draft)
            return draft
        if words[0] == 'systemnet':
            name = words[1] if len(words) > 1 else DEFAULT_SYSTEM_NAME
            if len(words) > 2:
                self.error('MalformedLine', line, column, text)
            if self.system is not None:
                self.error('DuplicateDeclaration', line, column, 'systemnet')
            draft = _NetDraft(name, line)
            self.system = draft
            self.net_spans.setdefault(name, (line, column))
            return draft
        if words[0] == 'events':
            if text.split() == ['events', 'explicit']:
                self.explicit_events = True
                return 'events'
            match = _FROM_LABELS.fullmatch(text)
            if match:
                self.max_sync = int(match.group('k'))
                self.max_sync_at = (line, column)
                return None
            self.error('MalformedLine', line, column, text)
            return None
        if words[0] == 'initial':
            if self.initial_text is not None:
                self.error('DuplicateDeclaration', line, column, 'initial')
            self.initial_text = text[len('initial'):]
            self.initial_at = (line, column + len('initial'))
            return None
        self.error('UnknownDirective', line, column, words[0])
        return None

    # -- net blocks -----------------------------------------------------

    def declare(self, draft: _NetDraft, name: str, line: int, column: int) -> bool:
        if name in draft.places or name in draft.transitions:
            self.error('DuplicateDeclaration', line, column, name)
            return False
        self.spans[name] = (line, column)
        return True

    def parse_multiset_at(self, text: str, line: int, column: int) -> Optional[Multiset]:
        try:
            return parse_multiset(text)
        except ValueError as e:
            offset = e.args[1] if len(e.args) > 1 else 0
            self.error('MalformedMultiset', line, column + offset, e.args[0])
            return None

    def check_places(self, draft: _NetDraft, ms: Multiset, line: int, column: int) -> Multiset:
        known = {}
        for p, c in ms.items():
            if p in draft.places:
                known[p] = c
            else:
                self.error('UnknownId', line, column, p)
        return Multiset(known)

    def parse_net_line(self, draft: _NetDraft, text: str, line: int, column: int):
        words = text.split()
        kind = words[0]
        if kind == 'place':
            if len(words) != 2:
                self.error('MalformedLine', line, column, text)
                return
            if self.declare(draft, words[1], line, column + text.index(words[1], 5)):
                draft.places.append(words[1])
        elif kind == 'trans':
            self.parse_transition(draft, text, line, column)
        elif kind == 'label':
            self.parse_label(draft, text, line, column)
        elif kind == 'type' and draft is self.system:
            self.parse_type(draft, words, text, line, column)
        else:
            self.error('UnknownDirective', line, column, kind)

    def parse_transition(self, draft: _NetDraft, text: str, line: int, column: int):
        match = _TRANS.fullmatch(text)
        if not match:
            self.error('MalformedLine', line, column, text)
            return
        name = match.group('id')
        pre = self.parse_multiset_at(match.group('pre'), line, column + match.start('pre'))
        post = self.parse_multiset_at(match.group('post'), line, column + match.start('post'))
        if pre is None or post is None:
            return
        if not self.declare(draft, name, line, column + match.start('id')):
            return
        draft.transitions.append(name)
        draft.pre[name] = self.check_places(draft, pre, line, column + match.start('pre'))
        draft.post[name] = self.check_places(draft, post, line, column + match.start('post'))

    def parse_label(self, draft: _NetDraft, text: str, line: int, column: int):
        words = text.split(None, 2)
        if len(words) != 3:
            self.error('MalformedLine', line, column, text)
            return
        _, name, value = words
        at = column + text.index(name, 5)
        if name not in draft.transitions:
            self.error('UnknownId', line, at, name)
            return
        if draft is not self.system:
            if len(value.split()) != 1:
                self.error('MalformedLine', line, column, text)
            elif name in draft.labels:
                self.error('DuplicateDeclaration', line, at, f"label of {name}")
            else:
                draft.labels[name] = value
            return
        net, sep, channels = value.partition(':')
        if not sep or not net.strip():
            self.error('MalformedLine', line, column, text)
            return
        ms = self.parse_multiset_at(channels, line, column + text.index(':') + 1)
        if ms is None:
            return
        net = BLACK if net.strip() in BLACK_ALIASES else net.strip()
        demands = draft.labels.setdefault(name, {})
        demands[net] = demands.get(net, Multiset()) + ms

    def parse_type(self, draft, words, text, line, column):
        if len(words) != 3:
            self.error('MalformedLine', line, column, text)
            return
        _, place, net = words
        at = column + text.index(place, 4)
        if place not in draft.places:
            self.error('UnknownId', line, at, place)
        elif place in draft.typing:
            self.error('DuplicateDeclaration', line, at, f"type of {place}")
        else:
            draft.typing[place] = BLACK if net in BLACK_ALIASES else net

    # -- events ---------------------------------------------------------

    def parse_event(self, text: str, line: int, column: int):
        match = _EVENT.fullmatch(text)
        if not match:
            self.error('MalformedEvent', line, column, text)
            return
        name = match.group('name')
        sync = {}
        body = match.group('body') or ''
        offset = match.start('body') if match.group('body') is not None else 0
        for part in body.split(';'):
            if part.strip():
                net, sep, steps = part.partition(':')
                if not sep or not net.strip():
                    self.error('MalformedEvent', line, column + offset, part.strip())
                    return
                ms = self.parse_multiset_at(steps, line, column + offset + len(net) + 1)
                if ms is None:
                    return
                net = BLACK if net.strip() in BLACK_ALIASES else net.strip()
                sync[net] = sync.get(net, Multiset()) + ms
            offset += len(part) + 1
        idle = False
        for prefix in IDLE_PREFIXES:
            if name.startswith(prefix):
                name, idle = name[len(prefix):], True
                break
        event = EosEvent.create(name, sync, idle=idle)
        self.spans.setdefault(event.name, (line, column + match.start('name')))
        self.spans.setdefault(event.label, (line, column + match.start('name')))
        self.events.append(event)

    # -- assembly -------------------------------------------------------

    def position(self, diagnostic: Diagnostic) -> Diagnostic:
        location = diagnostic.location
        line, column = self.spans.get(location) or self.net_spans.get(location, (None, None))
        return Diagnostic(diagnostic.code, diagnostic.message, diagnostic.location, line, column)

    def fail(self):
        ordered = sorted(self.diagnostics, key=lambda d: (d.line or 0, d.column or 0))
        raise ModelParseError(ordered)

    def assemble(self) -> ModelDocument:
        if self.diagnostics:
            self.fail()
        system = self.system
        eos = Eos(system.build(), [d.build() for d in self.object_nets], system.typing,
                  self.events, system_labels=system.labels,
                  object_labels={d.name: d.labels for d in self.object_nets if d.labels})
        if self.max_sync is not None:
            if self.explicit_events:
                self.error('DuplicateDeclaration', *self.max_sync_at, 'events')
            else:
                try:
                    eos = eos.with_events(eos.events_from_labels(self.max_sync, self.label_cap), self.max_sync)
                except LabelBlowup:
                    self.error('LabelBlowup', *self.max_sync_at, f"cap {self.label_cap}")
        self.diagnostics.extend(self.position(d) for d in eos.validate())
        initial = nested()
        if self.initial_text is not None:
            line, column = self.initial_at
            try:
                initial = parse_nested_marking(self.initial_text)
            except ValueError as e:
                offset = e.args[1] if len(e.args) > 1 else 0
                self.error('MalformedMarking', line, column + offset, e.args[0])
            else:
                for d in eos.validate_marking(initial):
                    self.diagnostics.append(Diagnostic(d.code, d.message, d.location, line, column + 1))
        if self.diagnostics:
            self.fail()
        spans = {**self.net_spans, **self.spans}
        return ModelDocument(self.text, eos, initial, spans, self.max_sync, self.source_name)


def parse(text: str, source_name: str = '<model>', label_cap: int = DEFAULT_LABEL_CAP) -> ModelDocument:
    """Parse model text; ModelParseError carries every positioned diagnostic"""
    return ModelParser(text, source_name, label_cap).parse()


def load(path: str, label_cap: int = DEFAULT_LABEL_CAP) -> ModelDocument:
    with open(path, 'r', encoding='utf-8') as f:
        return parse(f.read(), path, label_cap)


def _ms(m, net):
    return m.render(key=net.place_index.get, compact=True) or '0'


def render_model(document: ModelDocument) -> str:
    """Model text that parses back to the same system and initial marking"""
    eos = document.eos
    lines = []

    def net_block(header: str, net: PtNet, labels, typing=None):
        lines.append(header)
        lines.extend(f"  place {p}" for p in net.places)
        if typing:
            lines.extend(f"  type {p} {typing[p]}" for p in net.places if p in typing)
        for t in net.transitions:
            lines.append(f"  trans {t} pre {_ms(net.pre[t], net)} post {_ms(net.post[t], net)}")
        for t in net.transitions:
            value = labels.get(t)
            if value is None:
                continue
            if isinstance(value, dict):
                for name, channels in sorted(value.items()):
                    lines.append(f"  label {t} {name}:{channels.render(compact=True) or '0'}")
            else:
                lines.append(f"  label {t} {value}")
        lines.append('end')
        lines.append('')

    for net in eos.object_nets:
        net_block(f"objectnet {net.name}", net, eos.object_labels.get(net.name, {}))
    net_block(f"systemnet {eos.system_net.name}", eos.system_net, eos.system_labels, eos.typing)
    if eos.label_bound is not None:
        lines.append(f"events from-labels max_sync={eos.label_bound}")
    elif eos.events:
        lines.append('events explicit')
        for event in eos.events:
            body = '; '.join(f"{n}: {steps.render(key=eos.nets[n].transition_index.get, compact=True)}"
                             for n, steps in event.sync)
            lines.append(f"  event {event.name} {{ {body} }}" if body else f"  event {event.name} {{}}")
        lines.append('end')
    lines.append(f"initial {eos.render_marking(document.initial)}")
    return '\n'.join(lines) + '\n'
