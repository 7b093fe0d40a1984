"""Actor roles: within-module degree z-scores and participation coefficients.

For an actor i in module s of a yearly slice, d is its within-module
degree standardized over all members of s that year (population
convention), and c = 1 - sum over modules m of (k_im / k_i)^2 measures
how evenly its links spread across modules (0 = all internal). Role
categories follow the usual quadrant taxonomy: hubs have d at or above
``d_hub``, connectors have c at or above ``c_connector``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import stats
from .modularity import Partition
from .netcore import LinkType, TemporalNetwork, project_subnetwork


class RoleCategory(Enum):
    PERIPHERAL = "peripheral"
    CONNECTOR = "connector"
    MODULE_HUB = "module_hub"
    NETWORK_HUB = "network_hub"


@dataclass(frozen=True)
class RoleThresholds:
    d_hub: float = 2.5
    c_connector: float = 0.625

    def __post_init__(self) -> None:
        if not (math.isfinite(self.d_hub) and math.isfinite(self.c_connector)):
            raise ValueError("thresholds must be finite")


@dataclass(frozen=True)
class RoleScores:
    actor: str
    year: int
    d: float
    c: float
    category: RoleCategory
    degenerate: bool = False


def _categorize(d: float, c: float, thresholds: RoleThresholds) -> RoleCategory:
    hub = d >= thresholds.d_hub
    connector = c >= thresholds.c_connector
    if hub and connector:
        return RoleCategory.NETWORK_HUB
    if hub:
        return RoleCategory.MODULE_HUB
    if connector:
        return RoleCategory.CONNECTOR
    return RoleCategory.PERIPHERAL


def role_scores(
    net: TemporalNetwork,
    partition: Partition,
    year: int,
    thresholds: RoleThresholds = RoleThresholds(),
) -> list[RoleScores]:
    """(d, c) scores and role category for every actor present in a year.

    Members of single-actor or zero-spread modules get d = 0 with the
    degeneracy flag set, so yearly summaries stay total.
    """
    adj = net.slice_at(year).adjacency()
    module_of = {aid: partition.module_of(aid, year) for aid in adj}
    within: dict[str, int] = {}
    across: dict[str, dict[int, int]] = {}
    for aid, neigh in adj.items():
        own = module_of[aid]
        counts: dict[int, int] = {}
        for partner in neigh:
            m = module_of[partner]
            counts[m] = counts.get(m, 0) + 1
        within[aid] = counts.get(own, 0)
        across[aid] = counts
    populations: dict[int, list[int]] = {}
    for aid in adj:
        populations.setdefault(module_of[aid], []).append(within[aid])
    mod_stats: dict[int, tuple[float, float]] = {}
    for m, ks in populations.items():
        mean = sum(ks) / len(ks)
        std = math.sqrt(sum((k - mean) ** 2 for k in ks) / len(ks))
        mod_stats[m] = (mean, std)
    out = []
    for aid in sorted(adj):
        mean, std = mod_stats[module_of[aid]]
        degenerate = len(populations[module_of[aid]]) < 2 or std == 0.0
        d = 0.0 if degenerate else (within[aid] - mean) / std
        k_total = len(adj[aid])
        c = 1.0 - sum((k_m / k_total) ** 2 for k_m in across[aid].values())
        out.append(RoleScores(aid, year, d, c, _categorize(d, c, thresholds), degenerate))
    return out


def role_fluctuation(
    net: TemporalNetwork,
    partition: Partition,
    thresholds: RoleThresholds = RoleThresholds(),
) -> dict[str, tuple[float, float]]:
    """Population standard deviation of each actor's yearly (d, c) scores.

    Actors present in fewer than 2 years are omitted (no value).
    """
    series: dict[str, list[tuple[float, float]]] = {}
    for year in net.years:
        for rs in role_scores(net, partition, year, thresholds):
            series.setdefault(rs.actor, []).append((rs.d, rs.c))
    out = {}
    for actor, values in sorted(series.items()):
        if len(values) < 2:
            continue
        ds = [v[0] for v in values]
        cs = [v[1] for v in values]
        n = len(values)
        mean_d, mean_c = sum(ds) / n, sum(cs) / n
        out[actor] = (
            math.sqrt(sum((d - mean_d) ** 2 for d in ds) / n),
            math.sqrt(sum((c - mean_c) ** 2 for c in cs) / n),
        )
    return out


def subnetwork_role_scores(
    net: TemporalNetwork,
    partition: Partition,
    year: int,
    kind: LinkType,
    thresholds: RoleThresholds = RoleThresholds(),
) -> list[RoleScores]:
    """Role scores within one support-type projection.

    Module membership is inherited from the whole-network partition;
    degrees and module populations are recomputed in the projection.
    """
    sub = project_subnetwork(net, kind)
    return role_scores(sub, partition, year, thresholds)


def subnetwork_role_correlation(
    net: TemporalNetwork,
    partition: Partition,
    year: int,
    score: str = "d",
    thresholds: RoleThresholds = RoleThresholds(),
) -> tuple[float, float] | None:
    """Pearson correlation of a score across the active/passive projections.

    Computed over actors present in both projections that year; returns
    ``None`` when fewer than 3 such actors exist or a score series is
    constant.
    """
    if score not in ("d", "c"):
        raise ValueError("score must be 'd' or 'c'")
    active = {rs.actor: rs for rs in subnetwork_role_scores(net, partition, year, LinkType.ACTIVE_ONLY, thresholds)}
    passive = {rs.actor: rs for rs in subnetwork_role_scores(net, partition, year, LinkType.PASSIVE_ONLY, thresholds)}
    common = sorted(set(active) & set(passive))
    if len(common) < 3:
        return None
    xs = [getattr(active[a], score) for a in common]
    ys = [getattr(passive[a], score) for a in common]
    try:
        rho = stats.pearson(xs, ys)
    except ValueError:
        return None
    return rho, stats.t_test_p(rho, len(common))
