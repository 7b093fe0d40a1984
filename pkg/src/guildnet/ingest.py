"""Edge-list ingestion and descriptive statistics.

One parser covers both the public conflict-support export and the
synthetic files emitted by :mod:`guildnet.synth`: column names are
mapped through a :class:`FormatConfig`, so files only need a header row
naming the group/state/year columns and the active/passive type codes.
"""

from __future__ import annotations

import configparser
import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from . import stats
from .netcore import ActorId, Guild, LinkKind, Slice, TemporalNetwork


@dataclass(frozen=True)
class FormatConfig:
    """Column mapping for edge-list files (CSV or JSON-lines)."""

    group_column: str = "groupid"
    state_column: str = "stateid"
    start_column: str = "styear"
    end_column: str = "endyear"
    active_types_column: str = "active_types"
    passive_types_column: str = "passive_types"
    type_separator: str = ";"

    @staticmethod
    def from_file(path: str | Path) -> "FormatConfig":
        """Load the ``[input]`` section of a key=value config file."""
        parser = configparser.ConfigParser()
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
        cfg = FormatConfig()
        if parser.has_section("input"):
            known = {f for f in FormatConfig.__dataclass_fields__}
            overrides = {
                key: value for key, value in parser.items("input") if key in known
            }
            cfg = replace(cfg, **overrides)
        return cfg


@dataclass(frozen=True)
class EdgeRecord:
    """One raw support relation spanning an inclusive year range."""

    guild_a_label: str
    guild_b_label: str
    start_year: int
    end_year: int
    active_types: frozenset[int] = frozenset()
    passive_types: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if self.start_year > self.end_year:
            raise ValueError(f"start year {self.start_year} after end year {self.end_year}")
        if not (self.active_types or self.passive_types):
            raise ValueError("record carries no support type")

    @property
    def kind(self) -> LinkKind:
        return LinkKind(bool(self.active_types), bool(self.passive_types))


@dataclass(frozen=True)
class DurationStats:
    """Participation summary of one actor over its present years."""

    actor: ActorId
    duration: int
    max_degree: int
    mean_degree: float


def _parse_types(raw: str, sep: str, where: str) -> frozenset[int]:
    raw = (raw or "").strip()
    if not raw:
        return frozenset()
    try:
        codes = frozenset(int(tok) for tok in raw.split(sep) if tok.strip())
    except ValueError as exc:
        raise ValueError(f"{where}: bad type code list {raw!r}") from exc
    bad = [c for c in codes if not 1 <= c <= 10]
    if bad:
        raise ValueError(f"{where}: type codes out of range 1..10: {sorted(bad)}")
    return codes


def _record_from_row(row: dict, cfg: FormatConfig, where: str) -> EdgeRecord:
    for col in (cfg.group_column, cfg.state_column, cfg.start_column, cfg.end_column):
        if row.get(col) in (None, ""):
            raise ValueError(f"{where}: missing value for column {col!r}")
    try:
        start = int(row[cfg.start_column])
        end = int(row[cfg.end_column])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}: year columns must be integers") from exc
    active = _parse_types(str(row.get(cfg.active_types_column, "") or ""), cfg.type_separator, where)
    passive = _parse_types(str(row.get(cfg.passive_types_column, "") or ""), cfg.type_separator, where)
    try:
        return EdgeRecord(
            guild_a_label=str(row[cfg.group_column]).strip(),
            guild_b_label=str(row[cfg.state_column]).strip(),
            start_year=start,
            end_year=end,
            active_types=active,
            passive_types=passive,
        )
    except ValueError as exc:
        raise ValueError(f"{where}: {exc}") from exc


def read_edge_records(path: str | Path, cfg: FormatConfig | None = None) -> list[EdgeRecord]:
    """Read raw records from a CSV (default) or JSON-lines file."""
    cfg = cfg or FormatConfig()
    path = Path(path)
    records: list[EdgeRecord] = []
    if path.suffix.lower() in {".jsonl", ".ndjson", ".json"}:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValueError(f"line {lineno}: invalid JSON") from exc
                records.append(_record_from_row(row, cfg, f"line {lineno}"))
        return records
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        for lineno, row in enumerate(reader, start=2):
            records.append(_record_from_row(row, cfg, f"line {lineno}"))
    return records


def network_from_records(records: Iterable[EdgeRecord]) -> TemporalNetwork:
    """Expand year ranges into yearly links; overlapping records merge by OR."""
    registry: dict[str, ActorId] = {}
    by_year: dict[int, dict[tuple[str, str], LinkKind]] = {}
    for rec in records:
        a, b = rec.guild_a_label, rec.guild_b_label
        if a not in registry:
            registry[a] = ActorId(a, Guild.NAG)
        if b not in registry:
            registry[b] = ActorId(b, Guild.HS)
        if registry[a].guild is not Guild.NAG or registry[b].guild is not Guild.HS:
            raise ValueError(f"label used in both guilds: {a!r}/{b!r}")
        for year in range(rec.start_year, rec.end_year + 1):
            links = by_year.setdefault(year, {})
            prev = links.get((a, b))
            links[(a, b)] = rec.kind if prev is None else (prev | rec.kind)
    slices = [Slice(year, links) for year, links in sorted(by_year.items())]
    return TemporalNetwork(registry.values(), slices)


def parse_edge_list(path: str | Path, cfg: FormatConfig | None = None) -> TemporalNetwork:
    """Parse an edge-list file into a TemporalNetwork.

    Raises
    ------
    ValueError
        On any malformed row, with the offending line number.
    """
    return network_from_records(read_edge_records(path, cfg))


def write_edge_list(net: TemporalNetwork, path: str | Path, cfg: FormatConfig | None = None) -> None:
    """Serialize a network back to CSV; maximal constant-kind year runs per pair.

    ``parse_edge_list(write_edge_list(net))`` reproduces the network with
    link kinds intact (support type codes are not preserved; kind flags
    are re-encoded as code 10).
    """
    cfg = cfg or FormatConfig()
    runs: list[tuple[str, str, int, int, LinkKind]] = []
    presence: dict[tuple[str, str], list[tuple[int, LinkKind]]] = {}
    for sl in net.slices:
        for pair, kind in sl.links.items():
            presence.setdefault(pair, []).append((sl.year, kind))
    for (a, b), entries in sorted(presence.items()):
        entries.sort()
        start, prev_year, kind = entries[0][0], entries[0][0], entries[0][1]
        for year, k in entries[1:]:
            if year == prev_year + 1 and k == kind:
                prev_year = year
            else:
                runs.append((a, b, start, prev_year, kind))
                start, prev_year, kind = year, year, k
        runs.append((a, b, start, prev_year, kind))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            [
                cfg.group_column,
                cfg.state_column,
                cfg.start_column,
                cfg.end_column,
                cfg.active_types_column,
                cfg.passive_types_column,
            ]
        )
        for a, b, start, end, kind in runs:
            writer.writerow(
                [a, b, start, end, "10" if kind.active else "", "10" if kind.passive else ""]
            )


# -- descriptive statistics -------------------------------------------------


def survival_ccdf(durations: Sequence[int]) -> list[tuple[int, float]]:
    """Complementary CDF P(D >= d) at each observed duration.

    The first point always has probability 1; the curve is nonincreasing.
    """
    if len(durations) == 0:
        raise ValueError("empty duration list")
    if min(durations) <= 0:
        raise ValueError("durations must be positive")
    n = len(durations)
    ordered = sorted(durations)
    out: list[tuple[int, float]] = []
    for i, d in enumerate(ordered):
        if i == 0 or d != ordered[i - 1]:
            out.append((d, (n - i) / n))
    return out


def duration_stats(net: TemporalNetwork, guild: Guild) -> list[DurationStats]:
    """Per-actor participation duration and degree summary for one guild.

    Duration counts present years (degree >= 1), not the calendar span,
    so dormant gaps do not inflate it.
    """
    per_actor: dict[str, list[int]] = {}
    for sl in net.slices:
        for aid, neigh in sl.adjacency().items():
            if net.registry[aid].guild is guild:
                per_actor.setdefault(aid, []).append(len(neigh))
    out = []
    for aid in sorted(per_actor):
        degs = per_actor[aid]
        out.append(
            DurationStats(
                actor=net.registry[aid],
                duration=len(degs),
                max_degree=max(degs),
                mean_degree=sum(degs) / len(degs),
            )
        )
    return out


def duration_degree_correlation(
    net: TemporalNetwork, guild: Guild, statistic: str = "max"
) -> tuple[float, float]:
    """Pearson correlation between participation duration and degree.

    ``statistic`` selects the degree summary: lifetime maximum yearly
    degree (default) or the mean over present years.

    Returns
    -------
    (rho, p_value) with a two-sided t-test p-value.
    """
    if statistic not in ("max", "mean"):
        raise ValueError("statistic must be 'max' or 'mean'")
    ds = duration_stats(net, guild)
    if len(ds) < 3:
        raise ValueError("need at least 3 actors in the guild")
    durations = [d.duration for d in ds]
    degrees = [d.max_degree if statistic == "max" else d.mean_degree for d in ds]
    rho = stats.pearson(durations, degrees)
    return rho, stats.t_test_p(rho, len(ds))


def link_type_fractions(net: TemporalNetwork, year: int) -> tuple[float, float, float] | None:
    """Fractions of active-only, passive-only and dual-type links in a year.

    Returns ``None`` for an empty slice; otherwise the three fractions
    sum to 1.
    """
    sl = net.slice_at(year)
    if len(sl) == 0:
        return None
    n_active = n_passive = n_both = 0
    for kind in sl.links.values():
        if kind.active and kind.passive:
            n_both += 1
        elif kind.active:
            n_active += 1
        else:
            n_passive += 1
    total = len(sl)
    return n_active / total, n_passive / total, n_both / total
