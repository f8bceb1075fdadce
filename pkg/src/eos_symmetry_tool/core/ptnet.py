# -*- coding: utf-8 -*-
"""
Place/transition net module
Nets, markings, enabling, firing, firing sequences and bounded reachability.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from .errors import ModelError, NotEnabled, UnknownNode
from .multiset import Multiset

# A marking of a p/t net is a multiset of its place names.
PtMarking = Multiset


@dataclass(frozen=True)
class PtNet:
    """A p/t net (P, T, pre, post).

    Node order is declaration order; it is the total node order used for
    canonical keys.
    """

    name: str
    places: Tuple[str, ...]
    transitions: Tuple[str, ...]
    pre: Mapping[str, Multiset] = field(repr=False)
    post: Mapping[str, Multiset] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'places', tuple(self.places))
        object.__setattr__(self, 'transitions', tuple(self.transitions))
        object.__setattr__(self, 'pre', MappingProxyType(dict(self.pre)))
        object.__setattr__(self, 'post', MappingProxyType(dict(self.post)))
        if len(set(self.places)) != len(self.places):
            raise ModelError(f"net {self.name}: duplicate place")
        if len(set(self.transitions)) != len(self.transitions):
            raise ModelError(f"net {self.name}: duplicate transition")
        clash = set(self.places) & set(self.transitions)
        if clash:
            raise ModelError(f"net {self.name}: nodes both place and transition: {sorted(clash)}")
        declared = set(self.places)
        for t in self.transitions:
            if t not in self.pre or t not in self.post:
                raise ModelError(f"net {self.name}: pre/post missing for {t}")
            stray = (self.pre[t].support() | self.post[t].support()) - declared
            if stray:
                raise ModelError(f"net {self.name}: transition {t} uses undeclared places {sorted(stray)}")
        extra = (set(self.pre) | set(self.post)) - set(self.transitions)
        if extra:
            raise ModelError(f"net {self.name}: pre/post given for undeclared {sorted(extra)}")

    def __hash__(self):
        return hash((self.name, self.places, self.transitions))

    @classmethod
    def build(cls, name: str, places: Sequence[str],
              arcs: Mapping[str, Tuple[Iterable[str], Iterable[str]]]) -> 'PtNet':
        """Convenience constructor from `{t: (pre_places, post_places)}`"""
        pre = {t: Multiset(p) for t, (p, _) in arcs.items()}
        post = {t: Multiset(q) for t, (_, q) in arcs.items()}
        return cls(name, tuple(places), tuple(arcs), pre, post)

    @cached_property
    def place_index(self) -> Dict[str, int]:
        return {p: i for i, p in enumerate(self.places)}

    @cached_property
    def transition_index(self) -> Dict[str, int]:
        return {t: i for i, t in enumerate(self.transitions)}

    def _require_transition(self, t: str):
        if t not in self.transition_index:
            raise UnknownNode(f"net {self.name}: unknown transition {t!r}")

    # -- structure ------------------------------------------------------

    def preset(self, x: str) -> FrozenSet[str]:
        """Predecessors of a place or transition"""
        if x in self.transition_index:
            return self.pre[x].support()
        if x in self.place_index:
            return frozenset(t for t in self.transitions if self.post[t].count(x) > 0)
        raise UnknownNode(f"net {self.name}: unknown node {x!r}")

    def postset(self, x: str) -> FrozenSet[str]:
        """Successors of a place or transition"""
        if x in self.transition_index:
            return self.post[x].support()
        if x in self.place_index:
            return frozenset(t for t in self.transitions if self.pre[t].count(x) > 0)
        raise UnknownNode(f"net {self.name}: unknown node {x!r}")

    def pre_of(self, steps: Multiset) -> Multiset:
        """pre extended to a multiset of transitions"""
        total = Multiset()
        for t, count in steps.items():
            self._require_transition(t)
            total = total + self.pre[t] * count
        return total

    def post_of(self, steps: Multiset) -> Multiset:
        total = Multiset()
        for t, count in steps.items():
            self._require_transition(t)
            total = total + self.post[t] * count
        return total

    def is_marking(self, m: PtMarking) -> bool:
        return m.support() <= set(self.places)

    # -- behaviour ------------------------------------------------------

    def enabled(self, m: PtMarking, t: str) -> bool:
        self._require_transition(t)
        return self.pre[t] <= m

    def fire(self, m: PtMarking, t: str) -> PtMarking:
        if not self.enabled(m, t):
            raise NotEnabled(f"net {self.name}: {t} is not enabled in {m}")
        return m - self.pre[t] + self.post[t]

    def fire_sequence(self, m: PtMarking, word: Sequence[str]) -> PtMarking:
        for index, t in enumerate(word):
            if not self.enabled(m, t):
                raise NotEnabled(f"net {self.name}: step {index} ({t}) is not enabled in {m}", index=index)
            m = m - self.pre[t] + self.post[t]
        return m

    def enabled_transitions(self, m: PtMarking) -> List[str]:
        return [t for t in self.transitions if self.pre[t] <= m]

    def reachable(self, m0: PtMarking, max_states: int) -> 'ReachableSet':
        """Breadth-first closure of firing from m0, bounded by max_states"""
        if max_states < 1:
            raise ValueError("max_states must be at least 1")
        seen = {m0}
        queue = deque([m0])
        truncated = False
        while queue:
            m = queue.popleft()
            for t in self.enabled_transitions(m):
                succ = m - self.pre[t] + self.post[t]
                if succ in seen:
                    continue
                if len(seen) >= max_states:
                    truncated = True
                    break
                seen.add(succ)
                queue.append(succ)
            if truncated:
                break
        return ReachableSet(frozenset(seen), truncated)


@dataclass(frozen=True)
class ReachableSet:
    markings: FrozenSet[PtMarking]
    truncated: bool

    def __len__(self):
        return len(self.markings)

    def __contains__(self, m):
        return m in self.markings


def black_net(name: str) -> PtNet:
    """The object net with no places and no transitions"""
    return PtNet(name, (), (), {}, {})
