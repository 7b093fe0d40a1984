"""Year-over-year link events and relative attachment/detachment probabilities.

Consecutive slices are diffed into added and removed links, classified
into four blocks by whether each endpoint is an incumbent. For the
relative-probability estimators, every event targeting an incumbent of
prior degree k is weighted by N_s(t)/n_s(k,t) -- the inverse of the
uniform-selection probability of hitting a degree-k incumbent -- and
bin sums are divided by the event count, so an unbiased process reads
1.0 at every degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .stats import loglog_fit
from .netcore import Guild, TemporalNetwork


class Block(Enum):
    """Event classification by endpoint status.

    For added links, status is measured against year t-1: an endpoint is
    *new* if it had degree 0 then. For removed links, status is measured
    against year t: an endpoint is *departing* if it has degree 0 then.
    B1 = both endpoints incumbent/remaining, B2 = NAG side new/departing,
    B3 = HS side new/departing, B4 = both.
    """

    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    B4 = "B4"


@dataclass(frozen=True)
class LinkEvent:
    actor_a: str
    actor_b: str
    block: Block
    k_a_prev: int
    k_b_prev: int


@dataclass(frozen=True)
class SliceDiff:
    year: int
    added: list[LinkEvent]
    removed: list[LinkEvent]


@dataclass(frozen=True)
class CurvePoint:
    k: int
    value: float
    weight_sum: float
    raw_count: int


@dataclass(frozen=True)
class RelProbCurve:
    points: list[CurvePoint]
    exponent: float
    exponent_stderr: float
    n_events: int
    n_fit_points: int


class NoQualifyingEventsError(ValueError):
    """Raised when an estimator finds no event of the requested kind."""


def diff_slices(net: TemporalNetwork, year: int) -> SliceDiff:
    """Classified added/removed links between year-1 and year.

    Raises
    ------
    ValueError
        For the first year of the range (no predecessor).
    """
    if not net.years or year <= net.years[0]:
        raise ValueError("diff needs a preceding slice")
    prev = net.slice_at(year - 1)
    curr = net.slice_at(year)
    deg_prev = {aid: len(n) for aid, n in prev.adjacency().items()}
    deg_curr = {aid: len(n) for aid, n in curr.adjacency().items()}
    added = []
    for (a, b) in sorted(set(curr.links) - set(prev.links)):
        ka, kb = deg_prev.get(a, 0), deg_prev.get(b, 0)
        if ka > 0 and kb > 0:
            block = Block.B1
        elif ka == 0 and kb == 0:
            block = Block.B4
        elif ka == 0:
            block = Block.B2
        else:
            block = Block.B3
        added.append(LinkEvent(a, b, block, ka, kb))
    removed = []
    for (a, b) in sorted(set(prev.links) - set(curr.links)):
        ka, kb = deg_prev[a], deg_prev[b]
        a_stays = deg_curr.get(a, 0) > 0
        b_stays = deg_curr.get(b, 0) > 0
        if a_stays and b_stays:
            block = Block.B1
        elif not a_stays and not b_stays:
            block = Block.B4
        elif not a_stays:
            block = Block.B2
        else:
            block = Block.B3
        removed.append(LinkEvent(a, b, block, ka, kb))
    return SliceDiff(year, added, removed)


def _incumbent_histogram(net: TemporalNetwork, year: int, guild: Guild) -> dict[int, int]:
    hist: dict[int, int] = {}
    for k in net.degrees(year, guild).values():
        hist[k] = hist.get(k, 0) + 1
    return hist


def _curve_from_events(
    events: list[tuple[int, int]],
    hists: dict[int, dict[int, int]],
    min_count: int,
    log_binning: bool,
) -> RelProbCurve:
    """events: (year, target prior degree); hists: year -> degree histogram.

    Each bin is normalized by the number of events in years where its
    degree class was populated, so an unbiased process reads 1.0 at every
    binned degree even for transiently occupied classes. When a class
    exists in every year this equals dividing by the total event count.
    """
    if not events:
        raise NoQualifyingEventsError("no qualifying events")
    per_year: dict[int, int] = {}
    for year, _ in events:
        per_year[year] = per_year.get(year, 0) + 1
    weight_sum: dict[int, float] = {}
    raw: dict[int, int] = {}
    for year, k in events:
        hist = hists[year]
        n_total = sum(hist.values())
        weight_sum[k] = weight_sum.get(k, 0.0) + n_total / hist[k]
        raw[k] = raw.get(k, 0) + 1
    denom = {
        k: sum(n for year, n in per_year.items() if hists[year].get(k, 0) > 0)
        for k in weight_sum
    }
    n_events = len(events)
    points = [
        CurvePoint(k, weight_sum[k] / denom[k], weight_sum[k], raw[k])
        for k in sorted(weight_sum)
    ]
    fit_input: list[tuple[float, float]] = []
    if log_binning:
        merged: dict[int, list[CurvePoint]] = {}
        for p in points:
            merged.setdefault(int(math.floor(math.log2(p.k))), []).append(p)
        for _, group in sorted(merged.items()):
            count = sum(p.raw_count for p in group)
            if count < min_count:
                continue
            k_geo = math.exp(sum(p.raw_count * math.log(p.k) for p in group) / count)
            value = sum(p.raw_count * p.value for p in group) / count
            if value > 0:
                fit_input.append((k_geo, value))
    else:
        fit_input = [
            (float(p.k), p.value)
            for p in points
            if p.raw_count >= min_count and p.k > 0 and p.value > 0
        ]
    if len(fit_input) >= 2 and len({k for k, _ in fit_input}) >= 2:
        fit = loglog_fit(fit_input)
        exponent, stderr = fit.slope, fit.stderr_slope
    else:
        exponent, stderr = math.nan, math.nan
    return RelProbCurve(points, exponent, stderr, n_events, len(fit_input))


def _collect(
    net: TemporalNetwork,
    guild_of_target: Guild,
    kind: str,
    min_count: int,
    log_binning: bool,
) -> RelProbCurve:
    hists: dict[int, dict[int, int]] = {}
    events: list[tuple[int, int]] = []
    source_new_block = Block.B2 if guild_of_target is Guild.HS else Block.B3
    for year in net.years[1:]:
        diff = diff_slices(net, year)
        pool = diff.added if kind in ("attach_new", "attach_incumbent") else diff.removed
        for ev in pool:
            k_target = ev.k_b_prev if guild_of_target is Guild.HS else ev.k_a_prev
            if kind == "attach_new":
                # newly joining source, incumbent target
                if ev.block is not source_new_block:
                    continue
            elif kind == "attach_incumbent":
                if ev.block is not Block.B1:
                    continue
            elif kind == "detach_departing":
                # source departs the network this year (target side free)
                if ev.block not in (source_new_block, Block.B4):
                    continue
            else:  # detach_incumbent
                if ev.block is not Block.B1:
                    continue
            if k_target <= 0:
                continue
            if year not in hists:
                hists[year] = _incumbent_histogram(net, year - 1, guild_of_target)
            events.append((year, k_target))
    return _curve_from_events(events, hists, min_count, log_binning)


def relative_attach_new(
    net: TemporalNetwork,
    guild_of_target: Guild,
    min_count: int = 5,
    log_binning: bool = False,
) -> RelProbCurve:
    """Relative probability that a degree-k incumbent gains a link from a
    newly joining actor of the other guild (T+ curve).

    The power-law exponent is fitted by least squares on log-log over
    bins with at least ``min_count`` events.
    """
    return _collect(net, guild_of_target, "attach_new", min_count, log_binning)


def relative_detach_departing(
    net: TemporalNetwork,
    guild_of_target: Guild,
    min_count: int = 5,
    log_binning: bool = False,
) -> RelProbCurve:
    """Relative probability that a degree-k incumbent loses a link to an
    actor departing the network that year (T- curve)."""
    return _collect(net, guild_of_target, "detach_departing", min_count, log_binning)


def relative_attach_incumbent(
    net: TemporalNetwork,
    guild_of_target: Guild,
    min_count: int = 5,
    log_binning: bool = False,
) -> RelProbCurve:
    """Relative probability that a degree-k incumbent gains a link from
    another incumbent (R+ curve; excludes newcomer events)."""
    return _collect(net, guild_of_target, "attach_incumbent", min_count, log_binning)


def relative_detach_incumbent(
    net: TemporalNetwork,
    guild_of_target: Guild,
    min_count: int = 5,
    log_binning: bool = False,
) -> RelProbCurve:
    """Relative probability that a degree-k incumbent loses a link while
    both endpoints remain in the network (R- curve)."""
    return _collect(net, guild_of_target, "detach_incumbent", min_count, log_binning)
