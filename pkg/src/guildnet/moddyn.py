"""Module composition over time: sizes, Jaccard stability, classification.

A module's NAG- and HS-submodules are tracked separately; the temporal
Jaccard index J(t, t-1) = |A(t) & A(t-1)| / |A(t) | A(t-1)| compares a
submodule's membership in consecutive years. Pairs touching a year with
empty membership are skipped (stability is averaged over active years
only).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import stats
from .modularity import Partition
from .netcore import Guild, TemporalNetwork


@dataclass(frozen=True)
class ModuleTimeline:
    """Per-year membership of one module, split by guild."""

    module_id: int
    years: list[int]
    members_nag: dict[int, frozenset[str]]
    members_hs: dict[int, frozenset[str]]

    def members(self, guild: Guild, year: int) -> frozenset[str]:
        table = self.members_nag if guild is Guild.NAG else self.members_hs
        return table.get(year, frozenset())

    def size(self, guild: Guild, year: int) -> int:
        return len(self.members(guild, year))

    @property
    def lifespan(self) -> tuple[int, int]:
        active = [
            y
            for y in self.years
            if self.members_nag.get(y) or self.members_hs.get(y)
        ]
        return (active[0], active[-1]) if active else (0, -1)

    @property
    def distinct_actor_count(self) -> int:
        actors: set[str] = set()
        for table in (self.members_nag, self.members_hs):
            for members in table.values():
                actors.update(members)
        return len(actors)


def module_timelines(net: TemporalNetwork, partition: Partition) -> list[ModuleTimeline]:
    """One timeline per module id, covering the network's full year range."""
    years = net.years
    by_module: dict[int, tuple[dict[int, set[str]], dict[int, set[str]]]] = {}
    for (aid, year), module in partition.assignment.items():
        nag_t, hs_t = by_module.setdefault(module, ({}, {}))
        table = nag_t if net.registry[aid].guild is Guild.NAG else hs_t
        table.setdefault(year, set()).add(aid)
    out = []
    for module in sorted(by_module):
        nag_t, hs_t = by_module[module]
        out.append(
            ModuleTimeline(
                module,
                years,
                {y: frozenset(m) for y, m in nag_t.items()},
                {y: frozenset(m) for y, m in hs_t.items()},
            )
        )
    return out


def jaccard_series(timeline: ModuleTimeline, guild: Guild) -> list[tuple[int, float]]:
    """J(t, t-1) of one guild's submodule for consecutive active years.

    Pairs where either year has empty membership are skipped.
    """
    if not timeline.years:
        raise ValueError("timeline covers no years")
    out = []
    for prev_year, year in zip(timeline.years, timeline.years[1:]):
        a = timeline.members(guild, prev_year)
        b = timeline.members(guild, year)
        if not a or not b:
            continue
        out.append((year, len(a & b) / len(a | b)))
    return out


def classify_modules(
    timelines: list[ModuleTimeline], major_threshold: int = 3
) -> tuple[list[ModuleTimeline], list[ModuleTimeline]]:
    """Split timelines into (major, transitory) by distinct actor count.

    A module is major iff it gathered strictly more than
    ``major_threshold`` distinct actors (both guilds counted jointly).
    """
    major = [t for t in timelines if t.distinct_actor_count > major_threshold]
    transitory = [t for t in timelines if t.distinct_actor_count <= major_threshold]
    return major, transitory


def submodule_correlation(timeline: ModuleTimeline) -> tuple[float, float]:
    """Pearson correlation between the guilds' aligned Jaccard series.

    Raises
    ------
    ValueError
        If fewer than 3 aligned (J_NAG, J_HS) pairs exist.
    """
    j_nag = dict(jaccard_series(timeline, Guild.NAG))
    j_hs = dict(jaccard_series(timeline, Guild.HS))
    years = sorted(set(j_nag) & set(j_hs))
    if len(years) < 3:
        raise ValueError("need at least 3 aligned Jaccard pairs")
    rho = stats.pearson([j_nag[y] for y in years], [j_hs[y] for y in years])
    return rho, stats.t_test_p(rho, len(years))
