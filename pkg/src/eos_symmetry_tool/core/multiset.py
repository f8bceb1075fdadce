# -*- coding: utf-8 -*-
"""
Multiset module
Finite multisets with addition, truncated difference, inclusion order and
homomorphic images. Values are immutable and hashable.
"""

import re
from typing import Callable, Dict, Generic, Hashable, Iterable, Iterator, List, Mapping, Optional, Tuple, TypeVar, Union

E = TypeVar('E', bound=Hashable)
F = TypeVar('F', bound=Hashable)

_TERM = re.compile(r"\s*(?:(\d+)\s*'\s*)?([^\s+'\[\]]+)\s*")


class Multiset(Generic[E]):
    """Finite map from elements to positive counts.

    Zero counts are never stored, so two multisets are equal exactly when
    their entry maps are equal.
    """

    __slots__ = ('_entries', '_hash', '_card')

    def __init__(self, entries: Union[None, Mapping[E, int], Iterable[E]] = None):
        counts: Dict[E, int] = {}
        if entries is None:
            pass
        elif isinstance(entries, Multiset):
            counts = dict(entries._entries)
        elif isinstance(entries, Mapping):
            for element, count in entries.items():
                if not isinstance(count, int) or count < 0:
                    raise ValueError(f"invalid multiplicity {count!r} for {element!r}")
                if count:
                    counts[element] = counts.get(element, 0) + count
        else:
            for element in entries:
                counts[element] = counts.get(element, 0) + 1
        self._entries = counts
        self._hash = None
        self._card = sum(counts.values())

    @classmethod
    def of(cls, *elements: E) -> 'Multiset[E]':
        """Build a multiset from a formal sum of elements"""
        return cls(elements)

    @classmethod
    def _from_clean(cls, counts: Dict[E, int]) -> 'Multiset[E]':
        ms = cls.__new__(cls)
        ms._entries = counts
        ms._hash = None
        ms._card = sum(counts.values())
        return ms

    # -- queries --------------------------------------------------------

    def count(self, element: E) -> int:
        return self._entries.get(element, 0)

    __call__ = count

    @property
    def card(self) -> int:
        """Cardinality |m|"""
        return self._card

    def support(self) -> frozenset:
        return frozenset(self._entries)

    def items(self):
        return self._entries.items()

    def elements(self) -> Iterator[E]:
        """Iterate the formal sum, repeating each element by its count"""
        for element, count in self._entries.items():
            for _ in range(count):
                yield element

    def sorted_items(self, key: Optional[Callable[[E], object]] = None) -> List[Tuple[E, int]]:
        return sorted(self._entries.items(), key=(lambda kv: key(kv[0])) if key else (lambda kv: kv[0]))

    def is_empty(self) -> bool:
        return not self._entries

    def __bool__(self):
        return bool(self._entries)

    def __contains__(self, element) -> bool:
        return element in self._entries

    def __iter__(self) -> Iterator[E]:
        return iter(self._entries)

    # -- algebra --------------------------------------------------------

    def __add__(self, other: 'Multiset[E]') -> 'Multiset[E]':
        if not other._entries:
            return self
        if not self._entries:
            return other
        counts = dict(self._entries)
        for element, count in other._entries.items():
            counts[element] = counts.get(element, 0) + count
        return Multiset._from_clean(counts)

    def __sub__(self, other: 'Multiset[E]') -> 'Multiset[E]':
        if not other._entries:
            return self
        counts = {}
        for element, count in self._entries.items():
            rest = count - other._entries.get(element, 0)
            if rest > 0:
                counts[element] = rest
        return Multiset._from_clean(counts)

    def __mul__(self, factor: int) -> 'Multiset[E]':
        if factor < 0:
            raise ValueError("negative scalar")
        if factor == 0:
            return Multiset()
        return Multiset._from_clean({e: c * factor for e, c in self._entries.items()})

    __rmul__ = __mul__

    def __le__(self, other: 'Multiset[E]') -> bool:
        if self._card > other._card:
            return False
        entries = other._entries
        return all(entries.get(e, 0) >= c for e, c in self._entries.items())

    def __ge__(self, other: 'Multiset[E]') -> bool:
        return other.__le__(self)

    def map(self, f: Callable[[E], F]) -> 'Multiset[F]':
        """Homomorphic image: each element x becomes f(x), counts are summed"""
        counts: Dict[F, int] = {}
        for element, count in self._entries.items():
            image = f(element)
            counts[image] = counts.get(image, 0) + count
        return Multiset._from_clean(counts)

    # -- identity -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._card == other._card and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self):
        inner = ', '.join(f"{e!r}: {c}" for e, c in self._entries.items())
        return f"Multiset({{{inner}}})"

    def render(self, key: Optional[Callable[[E], object]] = None, name: Callable[[E], str] = str,
               compact: bool = False) -> str:
        """Render as `k'x + ...` sorted by the element order.

        The compact form drops `1'` and the blanks around `+`; the empty
        multiset renders as `0` (long form) or an empty string (compact).
        """
        if not self._entries:
            return '' if compact else '0'
        parts = []
        for element, count in self.sorted_items(key):
            if compact and count == 1:
                parts.append(name(element))
            else:
                parts.append(f"{count}'{name(element)}")
        return ('+' if compact else ' + ').join(parts)

    def __str__(self):
        return self.render()


EMPTY: Multiset = Multiset()


def add(a: Multiset, b: Multiset) -> Multiset:
    return a + b


def sub(a: Multiset, b: Multiset) -> Multiset:
    """Truncated difference: max(a(d) - b(d), 0)"""
    return a - b


def leq(a: Multiset, b: Multiset) -> bool:
    return a <= b


def map_hom(f: Callable[[E], F], m: Multiset) -> Multiset:
    return m.map(f)


def parse_multiset(text: str) -> Multiset:
    """Parse `k'x + y + ...`; `0` or blank text is the empty multiset.

    Raises ValueError whose second argument is the offending offset.
    """
    stripped = text.strip()
    if not stripped or stripped == '0':
        return Multiset()
    counts: Dict[str, int] = {}
    offset = 0
    for chunk in text.split('+'):
        match = _TERM.fullmatch(chunk)
        if not match or not chunk.strip():
            raise ValueError(f"malformed multiset term {chunk.strip()!r}", offset + len(chunk) - len(chunk.lstrip()))
        count = int(match.group(1)) if match.group(1) else 1
        if count:
            element = match.group(2)
            counts[element] = counts.get(element, 0) + count
        offset += len(chunk) + 1
    return Multiset(counts)
