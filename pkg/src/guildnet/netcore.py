"""Core data model for temporal bipartite two-guild networks.

A network is a sequence of yearly slices over a shared actor registry.
Actors belong to one of two guilds (labelled "NAG" and "HS" after the
conflict-support data the toolkit was built for, but nothing downstream
depends on that reading). Links always cross guilds and carry an
active/passive type; an actor is *present* in a year iff it has at least
one link in that year's slice.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping


class Guild(Enum):
    """The two sides of the bipartite relation."""

    NAG = "NAG"
    HS = "HS"

    @property
    def other(self) -> "Guild":
        return Guild.HS if self is Guild.NAG else Guild.NAG


class LinkType(Enum):
    """Projection selector for :func:`project_subnetwork`."""

    ACTIVE_ONLY = "active"
    PASSIVE_ONLY = "passive"


@dataclass(frozen=True)
class LinkKind:
    """Type annotation of a link; at least one flag must be set."""

    active: bool
    passive: bool

    def __post_init__(self) -> None:
        if not (self.active or self.passive):
            raise ValueError("a link must be active, passive or both")

    def __or__(self, other: "LinkKind") -> "LinkKind":
        return LinkKind(self.active or other.active, self.passive or other.passive)

    def matches(self, mask: "LinkKind") -> bool:
        return (self.active and mask.active) or (self.passive and mask.passive)


ACTIVE = LinkKind(True, False)
PASSIVE = LinkKind(False, True)
BOTH = LinkKind(True, True)


@dataclass(frozen=True)
class ActorId:
    """Registry entry: stable identifier, guild, display label."""

    id: str
    guild: Guild
    label: str = ""

    def __post_init__(self) -> None:
        if not self.label:
            object.__setattr__(self, "label", self.id)


class Slice:
    """One year of the network: a set of typed cross-guild links.

    Links are keyed by ``(nag_id, hs_id)`` pairs; duplicate pairs are
    rejected at construction (merge kinds upstream instead).
    """

    def __init__(self, year: int, links: Mapping[tuple[str, str], LinkKind] | None = None):
        self.year = int(year)
        self._links: dict[tuple[str, str], LinkKind] = dict(links or {})
        self._adj: dict[str, dict[str, LinkKind]] | None = None

    @property
    def links(self) -> Mapping[tuple[str, str], LinkKind]:
        return self._links

    def __len__(self) -> int:
        return len(self._links)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Slice)
            and self.year == other.year
            and self._links == other._links
        )

    def adjacency(self) -> Mapping[str, dict[str, LinkKind]]:
        """Neighbor map over present actors (both guilds), cached."""
        if self._adj is None:
            adj: dict[str, dict[str, LinkKind]] = {}
            for (a, b), kind in self._links.items():
                adj.setdefault(a, {})[b] = kind
                adj.setdefault(b, {})[a] = kind
            self._adj = adj
        return self._adj

    def degree_of(self, actor_id: str, kind_filter: LinkKind | None = None) -> int:
        neigh = self.adjacency().get(actor_id)
        if not neigh:
            return 0
        if kind_filter is None:
            return len(neigh)
        return sum(1 for kind in neigh.values() if kind.matches(kind_filter))


class TemporalNetwork:
    """Immutable ordered sequence of yearly slices over an actor registry.

    Years are contiguous: gaps in the input are materialised as empty
    slices so consecutive-slice operations are always well defined.
    """

    def __init__(self, registry: Iterable[ActorId], slices: Iterable[Slice]):
        self.registry: dict[str, ActorId] = {}
        for actor in registry:
            existing = self.registry.get(actor.id)
            if existing is not None and existing.guild is not actor.guild:
                raise ValueError(f"actor {actor.id!r} registered in both guilds")
            self.registry[actor.id] = actor
        by_year: dict[int, Slice] = {}
        for sl in slices:
            if sl.year in by_year:
                raise ValueError(f"duplicate slice for year {sl.year}")
            by_year[sl.year] = sl
        if by_year:
            years = range(min(by_year), max(by_year) + 1)
            self.slices: list[Slice] = [by_year.get(y, Slice(y)) for y in years]
        else:
            self.slices = []
        self._validate()

    def _validate(self) -> None:
        for sl in self.slices:
            for a, b in sl.links:
                actor_a = self.registry.get(a)
                actor_b = self.registry.get(b)
                if actor_a is None or actor_b is None:
                    raise ValueError(f"link ({a!r}, {b!r}) references unregistered actor")
                if not (actor_a.guild is Guild.NAG and actor_b.guild is Guild.HS):
                    raise ValueError(
                        f"link ({a!r}, {b!r}) must go from a NAG-guild actor to an HS-guild actor"
                    )

    # -- basic accessors ---------------------------------------------------

    @property
    def years(self) -> list[int]:
        return [sl.year for sl in self.slices]

    def slice_at(self, year: int) -> Slice:
        if not self.slices:
            raise ValueError("network has no slices")
        first = self.slices[0].year
        if not (first <= year <= self.slices[-1].year):
            raise ValueError(f"year {year} outside range {first}..{self.slices[-1].year}")
        return self.slices[year - first]

    def actors(self, guild: Guild | None = None) -> list[ActorId]:
        if guild is None:
            return list(self.registry.values())
        return [a for a in self.registry.values() if a.guild is guild]

    def present_actors(self, year: int, guild: Guild | None = None) -> list[str]:
        """Ids of actors with degree >= 1 in the year's slice."""
        sl = self.slice_at(year)
        out = []
        for aid in sl.adjacency():
            if guild is None or self.registry[aid].guild is guild:
                out.append(aid)
        return sorted(out)

    def is_present(self, actor_id: str, year: int) -> bool:
        return self.slice_at(year).degree_of(actor_id) > 0

    def present_pairs(self) -> list[tuple[str, int]]:
        """All (actor_id, year) pairs with degree >= 1, in canonical order."""
        out = []
        for sl in self.slices:
            out.extend((aid, sl.year) for aid in sorted(sl.adjacency()))
        return out

    def degrees(self, year: int, guild: Guild | None = None) -> dict[str, int]:
        """Degree of every present actor (optionally one guild) in a year."""
        sl = self.slice_at(year)
        out = {}
        for aid, neigh in sl.adjacency().items():
            if guild is None or self.registry[aid].guild is guild:
                out[aid] = len(neigh)
        return out


# -- elementary structural queries ----------------------------------------


def degree(
    net: TemporalNetwork,
    actor_id: str,
    year: int,
    kind_filter: LinkKind | None = None,
) -> int:
    """Number of cross-guild partners of an actor in a yearly slice.

    Parameters
    ----------
    kind_filter : LinkKind, optional
        If given, only links carrying at least one of the set flags count.

    Raises
    ------
    ValueError
        If the actor is not registered or the year is out of range.
    """
    if actor_id not in net.registry:
        raise ValueError(f"unknown actor {actor_id!r}")
    return net.slice_at(year).degree_of(actor_id, kind_filter)


def connectance(net: TemporalNetwork, year: int) -> float | None:
    """Realized link fraction L / (n_NAG * n_HS) among present actors.

    Returns ``None`` when either guild has no present actor that year.
    """
    sl = net.slice_at(year)
    n_nag = len(net.present_actors(year, Guild.NAG))
    n_hs = len(net.present_actors(year, Guild.HS))
    if n_nag == 0 or n_hs == 0:
        return None
    return len(sl) / (n_nag * n_hs)


def component_count(net: TemporalNetwork, year: int) -> int:
    """Number of connected components among present actors; 0 if empty."""
    adj = net.slice_at(year).adjacency()
    seen: set[str] = set()
    count = 0
    for start in adj:
        if start in seen:
            continue
        count += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            node = queue.popleft()
            for nxt in adj[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return count


def project_subnetwork(net: TemporalNetwork, kind: LinkType) -> TemporalNetwork:
    """Subnetwork of links carrying the requested support type.

    A link flagged both active and passive appears in both projections;
    retained links carry only the projected flag.
    """
    keep_active = kind is LinkType.ACTIVE_ONLY
    projected_kind = ACTIVE if keep_active else PASSIVE
    new_slices = []
    for sl in net.slices:
        links = {
            pair: projected_kind
            for pair, lk in sl.links.items()
            if (lk.active if keep_active else lk.passive)
        }
        new_slices.append(Slice(sl.year, links))
    return TemporalNetwork(net.registry.values(), new_slices)


def restrict_years(net: TemporalNetwork, first: int, last: int | None = None) -> TemporalNetwork:
    """Subnetwork covering a contiguous year range (registry preserved)."""
    last = net.years[-1] if last is None else last
    keep = [sl for sl in net.slices if first <= sl.year <= last]
    if not keep:
        raise ValueError(f"no slices in {first}..{last}")
    return TemporalNetwork(net.registry.values(), keep)


def aggregate_window(net: TemporalNetwork, center_year: int, width: int = 5) -> Slice:
    """Union of links over a sliding window, clipped at the range edges.

    Link kinds are OR-ed across the window. ``width`` must be odd;
    ``width=1`` returns a copy of the yearly slice.
    """
    if width < 1 or width % 2 == 0:
        raise ValueError("width must be an odd positive integer")
    net.slice_at(center_year)  # range check
    half = width // 2
    first, last = net.years[0], net.years[-1]
    links: dict[tuple[str, str], LinkKind] = {}
    for year in range(max(first, center_year - half), min(last, center_year + half) + 1):
        for pair, kind in net.slice_at(year).links.items():
            prev = links.get(pair)
            links[pair] = kind if prev is None else (prev | kind)
    return Slice(center_year, links)
