"""Hypothesis strategies for multisets, nets and small object systems."""

from hypothesis import strategies as st

from eos_symmetry_tool.core.eos import BLACK, Eos, EosEvent, nested
from eos_symmetry_tool.core.multiset import Multiset
from eos_symmetry_tool.core.ptnet import PtNet

ELEMENTS = ('a', 'b', 'c', 'd')


def multisets(elements=ELEMENTS, max_count=3):
    return st.dictionaries(st.sampled_from(elements), st.integers(0, max_count), max_size=len(elements)).map(Multiset)


def _sub_multiset(draw, places, min_size, max_size):
    size = draw(st.integers(min_size, max_size))
    return Multiset(draw(st.lists(st.sampled_from(places), min_size=size, max_size=size)))


@st.composite
def pt_nets(draw, name='N', max_places=4, max_transitions=3, prefix=''):
    """Token-nonincreasing p/t net: every transition consumes at least as much as it produces"""
    places = [f'{prefix}q{i}' for i in range(draw(st.integers(1, max_places)))]
    transitions = [f'{prefix}u{j}' for j in range(draw(st.integers(0, max_transitions)))]
    pre, post = {}, {}
    for t in transitions:
        pre[t] = _sub_multiset(draw, places, 1, 2)
        post[t] = _sub_multiset(draw, places, 0, pre[t].card)
    return PtNet(name, places, transitions, pre, post)


@st.composite
def pt_marked_nets(draw):
    net = draw(pt_nets())
    marking = _sub_multiset(draw, list(net.places), 0, 3)
    return net, marking


@st.composite
def object_systems(draw, max_tokens=3):
    """A small EOS whose system net is two mirrored halves plus an optional hub.

    Swapping the halves is always an automorphism, so the group is
    non-trivial. Every firing is token-nonincreasing on both levels, so
    the state space is finite.
    """
    nets = [draw(pt_nets(name=f'N{i}', prefix=f'n{i}')) for i in range(draw(st.integers(1, 2)))]
    kinds = [n.name for n in nets] + [BLACK]
    half = [f'h{i}' for i in range(draw(st.integers(1, 2)))]
    hub = draw(st.booleans())
    half_types = {p: draw(st.sampled_from(kinds)) for p in half}

    places = (['H'] if hub else []) + [f'{p}A' for p in half] + [f'{p}B' for p in half]
    typing = {f'{p}{side}': half_types[p] for p in half for side in 'AB'}
    if hub:
        typing['H'] = draw(st.sampled_from(kinds))

    local = half + (['H'] if hub else [])

    def side_of(p, side):
        return p if p == 'H' else f'{p}{side}'

    transitions, pre, post, events = [], {}, {}, []
    by_name = {n.name: n for n in nets}
    for j in range(draw(st.integers(1, 3))):
        t_pre = _sub_multiset(draw, local, 1, 2)
        t_post = _sub_multiset(draw, local, 0, t_pre.card)
        theta = {}
        for n in nets:
            if n.transitions and draw(st.booleans()):
                theta[n.name] = Multiset.of(draw(st.sampled_from(n.transitions)))
        for side in 'AB':
            t = f'v{j}{side}'
            transitions.append(t)
            pre[t] = t_pre.map(lambda p, s=side: side_of(p, s))
            post[t] = t_post.map(lambda p, s=side: side_of(p, s))
            events.append(EosEvent.create(t, theta))
    for p in half:
        kind = half_types[p]
        if kind != BLACK and by_name[kind].transitions and draw(st.booleans()):
            step = Multiset.of(draw(st.sampled_from(by_name[kind].transitions)))
            for side in 'AB':
                events.append(EosEvent.idle_at(f'{p}{side}', {kind: step}))

    system = PtNet('sys', places, transitions, pre, post)
    eos = Eos(system, nets, typing, events)

    counts = {}
    for _ in range(draw(st.integers(1, max_tokens))):
        p = draw(st.sampled_from(places))
        kind = typing[p]
        marking = Multiset() if kind == BLACK else _sub_multiset(draw, list(by_name[kind].places), 0, 2)
        counts[(p, marking)] = counts.get((p, marking), 0) + 1
    return eos, nested(counts)


@st.composite
def projection_shuffles(draw, eos, mu):
    """A marking with the same projections as mu: object tokens are dealt again among same-typed net-tokens"""
    addends = sorted(mu.elements(), key=lambda pm: eos.node_order.addend_key(*pm))
    pools = {}
    for p, m in addends:
        pools.setdefault(eos.typing[p], []).extend(m.elements())
    slots = {kind: [i for i, (p, _) in enumerate(addends) if eos.typing[p] == kind] for kind in pools}
    dealt = [dict() for _ in addends]
    for kind, tokens in pools.items():
        for token in tokens:
            i = draw(st.sampled_from(slots[kind]))
            dealt[i][token] = dealt[i].get(token, 0) + 1
    return nested((p, Multiset(d)) for (p, _), d in zip(addends, dealt))
