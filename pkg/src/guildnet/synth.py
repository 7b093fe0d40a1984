"""Generative simulator with planted attachment/detachment kernels and modules.

Every link event selects its target actor first, with probability
proportional to the configured kernel over the previous year's incumbent
degrees. Attachment events come from newcomer arrivals (both guilds) and
an incumbent-to-incumbent channel; removal events strip surviving
previous-year links from kernel-chosen targets until the sampled number
of departures has occurred, so departures are emergent (an actor leaves
when its last link dies) and every removed link's target is an exact
draw from the planted kernel. The event log carries per-event selection
probabilities and replays to the identical network.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .modularity import Partition
from .netcore import (
    ACTIVE,
    BOTH,
    PASSIVE,
    ActorId,
    Guild,
    LinkKind,
    Slice,
    TemporalNetwork,
)

_KINDS = (ACTIVE, PASSIVE, BOTH)
_KIND_CODE = {ACTIVE: "A", PASSIVE: "P", BOTH: "B"}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}
_KIND_PROBS = (0.4, 0.4, 0.2)


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of the generative process; see module docstring."""

    years: int
    arrival_rate_a: float = 5.0
    arrival_rate_b: float = 5.0
    newcomer_degree_exponent: float = 2.5
    newcomer_degree_min: int = 1
    newcomer_degree_max: int = 3
    newcomer_degree_min_b: int | None = None
    newcomer_degree_max_b: int | None = None
    alpha_attach: float = 0.0
    beta_detach: float = 0.0
    baseline_weight: float = 1.0
    departure_prob: float = 0.0
    link_removal_rate: float = 0.0
    incumbent_add_rate: float = 0.0
    detach_protect_targets: bool = False
    seed_actors_a: int = 0
    seed_actors_b: int = 0
    n_planted_modules: int = 1
    mixing: float = 0.0
    start_year: int = 1
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.years < 1:
            raise ValueError("years must be >= 1")
        if self.arrival_rate_a < 0 or self.arrival_rate_b < 0 or self.incumbent_add_rate < 0:
            raise ValueError("rates must be nonnegative")
        if not 1 <= self.newcomer_degree_min <= self.newcomer_degree_max:
            raise ValueError("need 1 <= newcomer_degree_min <= newcomer_degree_max")
        lo_b, hi_b = self.degree_range(Guild.HS)
        if not 1 <= lo_b <= hi_b:
            raise ValueError("need 1 <= newcomer_degree_min_b <= newcomer_degree_max_b")
        if self.alpha_attach < 0 or self.beta_detach < 0:
            raise ValueError("kernel exponents must be nonnegative")
        if self.baseline_weight < 0:
            raise ValueError("baseline_weight must be nonnegative")
        if not 0.0 <= self.departure_prob <= 1.0:
            raise ValueError("departure_prob must be in [0, 1]")
        if not 0.0 <= self.link_removal_rate <= 1.0:
            raise ValueError("link_removal_rate must be in [0, 1]")
        if self.n_planted_modules < 1:
            raise ValueError("n_planted_modules must be >= 1")
        if not 0.0 <= self.mixing <= 1.0:
            raise ValueError("mixing must be in [0, 1]")
        if self.seed_actors_a < 0 or self.seed_actors_b < 0:
            raise ValueError("seed counts must be nonnegative")

    def degree_range(self, guild: Guild) -> tuple[int, int]:
        """Newcomer degree bounds; guild B may override guild A's."""
        if guild is Guild.HS:
            lo = self.newcomer_degree_min if self.newcomer_degree_min_b is None else self.newcomer_degree_min_b
            hi = self.newcomer_degree_max if self.newcomer_degree_max_b is None else self.newcomer_degree_max_b
            return lo, hi
        return self.newcomer_degree_min, self.newcomer_degree_max


@dataclass
class GroundTruth:
    """Event log and planted labels produced alongside a synthetic network."""

    modules: dict[str, int] = field(default_factory=dict)
    guilds: dict[str, str] = field(default_factory=dict)
    events: list[dict] = field(default_factory=list)
    expected_attach_classes: dict[int, float] = field(default_factory=dict)
    observed_attach_classes: dict[int, int] = field(default_factory=dict)


class _State:
    def __init__(self) -> None:
        self.neighbors: dict[str, set[str]] = {}
        self.kinds: dict[tuple[str, str], LinkKind] = {}

    def degree(self, actor: str) -> int:
        return len(self.neighbors.get(actor, ()))

    def add(self, g: str, h: str, kind: LinkKind) -> None:
        self.neighbors.setdefault(g, set()).add(h)
        self.neighbors.setdefault(h, set()).add(g)
        self.kinds[(g, h)] = kind

    def remove(self, g: str, h: str) -> None:
        self.neighbors[g].discard(h)
        self.neighbors[h].discard(g)
        del self.kinds[(g, h)]

    def has(self, g: str, h: str) -> bool:
        return (g, h) in self.kinds


def _draw_degree(cfg: SynthConfig, rng: np.random.Generator, guild: Guild) -> int:
    lo, hi = cfg.degree_range(guild)
    if lo == hi:
        return lo
    ds = np.arange(lo, hi + 1, dtype=float)
    probs = ds ** (-cfg.newcomer_degree_exponent)
    probs /= probs.sum()
    return int(rng.choice(np.arange(lo, hi + 1), p=probs))


class _Pool:
    """Static weighted candidate pool sampled by inverse CDF."""

    def __init__(self, ids: list[str], weights: np.ndarray):
        self.ids = ids
        if len(ids) and float(weights.sum()) <= 0:
            weights = np.ones(len(ids))
        self.weights = weights
        self.cum = np.cumsum(weights) if len(ids) else np.zeros(0)

    def __len__(self) -> int:
        return len(self.ids)

    def draw(self, rng: np.random.Generator, reject: set[str] | None = None,
             attempts: int = 60) -> tuple[str, float] | None:
        """One weighted draw; candidates in ``reject`` are resampled."""
        if not self.ids:
            return None
        total = float(self.cum[-1])
        for _ in range(attempts):
            idx = int(np.searchsorted(self.cum, rng.random() * total, side="right"))
            idx = min(idx, len(self.ids) - 1)
            cand = self.ids[idx]
            if reject is None or cand not in reject:
                return cand, float(self.weights[idx]) / total
        return None


def generate(cfg: SynthConfig) -> tuple[TemporalNetwork, GroundTruth]:
    """Simulate the configured process; returns the network and its log.

    Deterministic for a fixed seed. The expected/observed newcomer-target
    degree-class tallies in the ground truth support goodness-of-fit
    checks of the attachment kernel.
    """
    rng = np.random.default_rng(cfg.rng_seed)
    gt = GroundTruth()
    state = _State()
    slices: list[Slice] = []
    counters = {Guild.NAG: 0, Guild.HS: 0}
    prev_deg: dict[str, int] = {}
    prev_links: set[tuple[str, str]] = set()

    registered: dict[str, list[str]] = {Guild.NAG.value: [], Guild.HS.value: []}

    def new_actor(guild: Guild) -> str:
        counters[guild] += 1
        aid = f"{'G' if guild is Guild.NAG else 'S'}{counters[guild]:04d}"
        gt.guilds[aid] = guild.value
        # round-robin keeps planted modules populated in both guilds
        gt.modules[aid] = (counters[guild] - 1) % cfg.n_planted_modules
        registered[guild.value].append(aid)
        return aid

    def draw_kind() -> LinkKind:
        return _KINDS[int(rng.choice(3, p=_KIND_PROBS))]

    for step in range(cfg.years):
        year = cfg.start_year + step
        # per-year static pools: kernel weights frozen at the t-1 snapshot;
        # attach pools cover every actor registered before this year, so a
        # positive baseline weight keeps currently degree-0 actors reachable
        prev_counts = {g: len(ids) for g, ids in registered.items()}
        prev_incumbents: dict[str, list[str]] = {Guild.NAG.value: [], Guild.HS.value: []}
        for a in sorted(prev_deg):
            prev_incumbents[gt.guilds[a]].append(a)
        attach_pools: dict[tuple[str, int | None], _Pool] = {}

        def attach_pool(guild: Guild, module: int | None) -> _Pool:
            key = (guild.value, module)
            if key not in attach_pools:
                ids = [
                    a
                    for a in registered[guild.value][: prev_counts[guild.value]]
                    if module is None or gt.modules[a] == module
                ]
                ks = np.array([prev_deg.get(a, 0) for a in ids], dtype=float)
                attach_pools[key] = _Pool(ids, ks ** cfg.alpha_attach + cfg.baseline_weight)
            return attach_pools[key]

        def expected_classes_of(pool: _Pool) -> dict[int, float]:
            shares: dict[int, float] = {}
            total = float(pool.cum[-1])
            for a, w in zip(pool.ids, pool.weights):
                k = prev_deg.get(a, 0)
                shares[k] = shares.get(k, 0.0) + float(w) / total
            return shares

        def module_choice(module: int) -> int | None:
            # with prob 1-mixing only same-module targets qualify; an
            # empty restricted pool skips the link instead of crossing
            if cfg.n_planted_modules > 1 and rng.random() < (1.0 - cfg.mixing):
                return module
            return None

        # -- arrivals: create all newcomers first so bootstrap wiring can
        #    pair the guilds in either order, then wire each one; seeded
        #    actors are passive bootstrap targets in year 1, and when both
        #    guilds are seeded the guild-B seeds wire immediately with
        #    degrees drawn from their newcomer range (uniform partners)
        newcomers: list[str] = []
        passive: set[str] = set()
        if step == 0 and (cfg.seed_actors_a or cfg.seed_actors_b):
            seeds_a = [new_actor(Guild.NAG) for _ in range(cfg.seed_actors_a)]
            seeds_b = [new_actor(Guild.HS) for _ in range(cfg.seed_actors_b)]
            newcomers.extend(seeds_a + seeds_b)
            passive.update(seeds_a + seeds_b)
            for h in seeds_b if seeds_a else []:
                taken_a: set[str] = set()
                for _ in range(_draw_degree(cfg, rng, Guild.HS)):
                    module = module_choice(gt.modules[h])
                    g = None
                    for _ in range(60):
                        cand = seeds_a[int(rng.integers(0, len(seeds_a)))]
                        if cand in taken_a:
                            continue
                        if module is not None and gt.modules[cand] != module:
                            continue
                        g = cand
                        break
                    if g is None:
                        continue
                    taken_a.add(g)
                    kind = draw_kind()
                    state.add(g, h, kind)
                    gt.events.append(
                        {
                            "year": year,
                            "type": "add",
                            "channel": "seed",
                            "nag": g,
                            "hs": h,
                            "kind": _KIND_CODE[kind],
                            "p_select": 1.0 / len(seeds_a),
                        }
                    )
        for guild, rate in ((Guild.NAG, cfg.arrival_rate_a), (Guild.HS, cfg.arrival_rate_b)):
            newcomers.extend(new_actor(guild) for _ in range(int(rng.poisson(rate))))
        expected_shares: dict[int, float] | None = None
        for actor in newcomers:
            if actor in passive:
                continue
            guild = Guild.NAG if gt.guilds[actor] == Guild.NAG.value else Guild.HS
            other = guild.other
            taken: set[str] = set()
            for _ in range(_draw_degree(cfg, rng, guild)):
                module = module_choice(gt.modules[actor])
                pool = attach_pool(other, module)
                channel = "newcomer"
                if not len(pool):
                    # bootstrap: pair with a same-year newcomer of the other guild
                    ids = [
                        a
                        for a in newcomers
                        if gt.guilds[a] == other.value
                        and (module is None or gt.modules[a] == module)
                    ]
                    pool = _Pool(ids, np.ones(len(ids)))
                    channel = "bootstrap"
                picked = pool.draw(rng, reject=taken)
                if picked is None:
                    continue
                target, p_sel = picked
                taken.add(target)
                g, h = (actor, target) if guild is Guild.NAG else (target, actor)
                if state.has(g, h):
                    continue
                kind = draw_kind()
                state.add(g, h, kind)
                if channel == "newcomer" and guild is Guild.NAG and cfg.n_planted_modules == 1:
                    k = prev_deg.get(target, 0)
                    gt.observed_attach_classes[k] = gt.observed_attach_classes.get(k, 0) + 1
                    if expected_shares is None:
                        expected_shares = expected_classes_of(pool)
                    for kk, share in expected_shares.items():
                        gt.expected_attach_classes[kk] = (
                            gt.expected_attach_classes.get(kk, 0.0) + share
                        )
                gt.events.append(
                    {
                        "year": year,
                        "type": "add",
                        "channel": channel,
                        "nag": g,
                        "hs": h,
                        "kind": _KIND_CODE[kind],
                        "p_select": p_sel,
                    }
                )
        # -- incumbent-to-incumbent additions (NAG source, HS target)
        prev_nags = prev_incumbents[Guild.NAG.value]
        for _ in range(int(rng.poisson(cfg.incumbent_add_rate))):
            if not prev_nags:
                break
            source = prev_nags[int(rng.integers(0, len(prev_nags)))]
            pool = attach_pool(Guild.HS, module_choice(gt.modules[source]))
            picked = pool.draw(rng, reject=state.neighbors.get(source, set()))
            if picked is None:
                continue
            target, p_sel = picked
            kind = draw_kind()
            state.add(source, target, kind)
            gt.events.append(
                {
                    "year": year,
                    "type": "add",
                    "channel": "incumbent",
                    "nag": source,
                    "hs": target,
                    "kind": _KIND_CODE[kind],
                    "p_select": p_sel,
                }
            )
        # removal channels share a static kernel pool over prev-year
        # incumbent HSs; exhausted or unsafe targets are resampled so each
        # event's target stays an exact draw from the planted kernel
        detach_pool: _Pool | None = None
        if (cfg.link_removal_rate > 0 or cfg.departure_prob > 0) and prev_links:
            hs_ids = prev_incumbents[Guild.HS.value]
            ks = np.array([prev_deg[h] for h in hs_ids], dtype=float)
            detach_pool = _Pool(hs_ids, ks ** cfg.beta_detach)

        def draw_detach_target(has_option) -> tuple[str, float] | None:
            if detach_pool is None or not len(detach_pool):
                return None
            for _ in range(80):
                picked = detach_pool.draw(rng)
                if picked is not None and has_option(picked[0]):
                    return picked
            return None

        # -- pruning: the kernel-chosen target loses one surviving prev-year
        #    link; targets of prior or current degree 1 are exempt (the
        #    target never dies), while a source departs when its last link
        #    is pruned
        if cfg.link_removal_rate > 0 and prev_links:
            surviving = [lk for lk in sorted(prev_links) if state.has(*lk)]
            n_rm = int(rng.binomial(len(surviving), cfg.link_removal_rate))
            prunable: dict[str, list[tuple[str, str]]] = {}
            for (g, h) in surviving:
                prunable.setdefault(h, []).append((g, h))
            for _ in range(n_rm):
                picked = draw_detach_target(
                    lambda h: bool(prunable.get(h))
                    and prev_deg[h] >= 2
                    and state.degree(h) >= 2
                )
                if picked is None:
                    break
                target, p_sel = picked
                options = prunable[target]
                g, h = options.pop(int(rng.integers(0, len(options))))
                state.remove(g, h)
                gt.events.append(
                    {
                        "year": year,
                        "type": "remove",
                        "channel": "prune",
                        "nag": g,
                        "hs": h,
                        "p_select": p_sel,
                    }
                )
        # -- departures: the kernel-chosen target loses one surviving
        #    prev-year link; repeat until the sampled number of source-side
        #    departures occurred (an actor departs when its last link dies)
        if cfg.departure_prob > 0 and prev_links:
            n_dep = int(rng.binomial(len(prev_nags), cfg.departure_prob)) if prev_nags else 0
            removable: dict[str, list[tuple[str, str]]] = {}
            for (g, h) in sorted(prev_links):
                if state.has(g, h):
                    removable.setdefault(h, []).append((g, h))
            departed = 0
            while departed < n_dep:
                if cfg.detach_protect_targets:
                    ok = lambda h: bool(removable.get(h)) and state.degree(h) >= 2
                else:
                    ok = lambda h: bool(removable.get(h))
                picked = draw_detach_target(ok)
                if picked is None:
                    break
                target, p_sel = picked
                options = removable[target]
                g, h = options.pop(int(rng.integers(0, len(options))))
                state.remove(g, h)
                if state.degree(g) == 0:
                    departed += 1
                gt.events.append(
                    {
                        "year": year,
                        "type": "remove",
                        "channel": "departure",
                        "nag": g,
                        "hs": h,
                        "p_select": p_sel,
                    }
                )
        # -- snapshot
        links = {pair: kind for pair, kind in sorted(state.kinds.items())}
        slices.append(Slice(year, links))
        prev_links = set(links)
        prev_deg = {a: len(n) for a, n in state.neighbors.items() if n}

    registry = [
        ActorId(aid, Guild.NAG if g == Guild.NAG.value else Guild.HS)
        for aid, g in sorted(gt.guilds.items())
    ]
    net = TemporalNetwork(registry, slices)
    return net, gt


def planted_partition(net: TemporalNetwork, gt: GroundTruth) -> Partition:
    """Ground-truth module of every present (actor, year) pair."""
    return Partition({key: gt.modules[key[0]] for key in net.present_pairs()})


def replay_events(gt: GroundTruth, start_year: int, years: int) -> TemporalNetwork:
    """Rebuild the network from the event log alone."""
    state = _State()
    by_year: dict[int, list[dict]] = {}
    for ev in gt.events:
        by_year.setdefault(ev["year"], []).append(ev)
    slices = []
    for year in range(start_year, start_year + years):
        for ev in by_year.get(year, ()):  # log order is generation order
            if ev["type"] == "add":
                state.add(ev["nag"], ev["hs"], _CODE_KIND[ev["kind"]])
            else:
                state.remove(ev["nag"], ev["hs"])
        slices.append(Slice(year, dict(sorted(state.kinds.items()))))
    registry = [
        ActorId(aid, Guild.NAG if g == Guild.NAG.value else Guild.HS)
        for aid, g in sorted(gt.guilds.items())
    ]
    return TemporalNetwork(registry, slices)


def generate_nested(
    rows: int, cols: int, fill: float, noise: float, rng_seed: int = 0
) -> np.ndarray:
    """Staircase incidence matrix with a fraction of cells re-randomized.

    ``noise`` is the fraction of cells whose value is replaced by an
    independent Bernoulli draw at the matrix's overall fill, so noise=0
    is the pure staircase and noise=1 is a fully random matrix of the
    same expected fill.
    """
    if rows < 1 or cols < 1:
        raise ValueError("matrix must be nonempty")
    if not 0.0 <= fill <= 1.0 or not 0.0 <= noise <= 1.0:
        raise ValueError("fill and noise must be in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    target = int(round(fill * rows * cols))
    lengths = _staircase_lengths(rows, cols, target)
    m = np.zeros((rows, cols), dtype=np.int64)
    for i, ell in enumerate(lengths):
        m[i, :ell] = 1
    n_noisy = int(round(noise * rows * cols))
    if n_noisy:
        flat = rng.choice(rows * cols, size=n_noisy, replace=False)
        p = target / (rows * cols)
        m.ravel()[flat] = (rng.random(n_noisy) < p).astype(np.int64)
    return m


def _staircase_lengths(rows: int, cols: int, target: int) -> list[int]:
    """Row lengths summing to target, proportional to a decreasing ramp."""
    target = max(0, min(target, rows * cols))
    weights = [rows - i for i in range(rows)]
    total_w = sum(weights)
    raw = [target * w / total_w for w in weights]
    lengths = [int(math.floor(r)) for r in raw]
    fracs = sorted(range(rows), key=lambda i: (raw[i] - lengths[i], -i), reverse=True)
    for i in fracs[: target - sum(lengths)]:
        lengths[i] += 1
    # cap at the column count and push overflow to rows with spare room
    overflow = sum(max(0, ell - cols) for ell in lengths)
    lengths = [min(ell, cols) for ell in lengths]
    i = 0
    while overflow > 0 and i < rows:
        room = cols - lengths[i]
        take = min(room, overflow)
        lengths[i] += take
        overflow -= take
        i += 1
    return lengths
