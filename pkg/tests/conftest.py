import pytest

from guildnet.netcore import ACTIVE, BOTH, PASSIVE, ActorId, Guild, LinkKind, Slice, TemporalNetwork


def make_net(year_links, extra_actors=()):
    """Build a network from {year: {(nag, hs): LinkKind-or-None}} shorthand."""
    registry = {}
    slices = []
    for year, links in sorted(year_links.items()):
        resolved = {}
        for pair, kind in links.items():
            a, b = pair
            registry.setdefault(a, ActorId(a, Guild.NAG))
            registry.setdefault(b, ActorId(b, Guild.HS))
            resolved[pair] = kind if kind is not None else BOTH
        slices.append(Slice(year, resolved))
    for actor in extra_actors:
        registry.setdefault(actor.id, actor)
    return TemporalNetwork(registry.values(), slices)


@pytest.fixture
def two_blocks_net():
    """Single slice: two disjoint complete bipartite K22 blocks."""
    links = {}
    for a in ("a1", "a2"):
        for b in ("b1", "b2"):
            links[(a, b)] = BOTH
    for a in ("a3", "a4"):
        for b in ("b3", "b4"):
            links[(a, b)] = BOTH
    return make_net({2000: links})
