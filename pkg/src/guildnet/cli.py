"""Command-line pipelines: ingestion, analyses, null models, synthesis.

Every run writes a flat set of CSV/JSON artifacts plus one manifest into
its output directory. Artifacts are deterministic for fixed (inputs,
config, seed); the manifest additionally records wall time and input
digests, so it is the one file that varies between identical runs.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, consensus, dynamics, ingest, moddyn, nestedness, roles, stats, synth
from .modularity import (
    MultilayerParams,
    Partition,
    null_degree_shuffle,
    null_permute_slices,
    optimize,
    yearly_q,
)
from .netcore import Guild, LinkType, TemporalNetwork, component_count, connectance

OUT_ROOT_ENV = "GUILDNET_OUT"


def _fmt(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    return str(value)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class RunContext:
    """Collects artifacts and provenance for one output directory."""

    def __init__(self, out_dir: Path, command: str, argv: list[str], seed: int, threads: int):
        self.out_dir = out_dir
        self.command = command
        self.argv = argv
        self.seed = seed
        self.threads = threads
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []
        self.params: dict = {}
        self.started = time.time()
        out_dir.mkdir(parents=True, exist_ok=True)

    def track_input(self, path: str | Path) -> Path:
        path = Path(path)
        self.inputs[str(path)] = _sha256(path)
        return path

    def write_csv(self, name: str, header: list[str], rows) -> None:
        with open(self.out_dir / name, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        self.outputs.append(name)

    def write_json(self, name: str, payload) -> None:
        with open(self.out_dir / name, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        self.outputs.append(name)

    def finish(self) -> None:
        manifest = {
            "command": self.command,
            "argv": self.argv,
            "config": self.params,
            "seed": self.seed,
            "threads": self.threads,
            "inputs": self.inputs,
            "outputs": sorted(self.outputs),
            "version": __version__,
            "wall_time_s": round(time.time() - self.started, 3),
        }
        with open(self.out_dir / "manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _load_net(args, ctx: RunContext) -> TemporalNetwork:
    fmt = ingest.FormatConfig.from_file(args.format_config) if args.format_config else None
    if args.format_config:
        ctx.track_input(args.format_config)
    path = ctx.track_input(args.input)
    return ingest.parse_edge_list(path, fmt)


def _read_partition(path: str | Path) -> Partition:
    assignment: dict[tuple[str, int], int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            assignment[(row["actor"], int(row["year"]))] = int(row["module"])
    return Partition(assignment)


def _write_partition(ctx: RunContext, partition: Partition, name: str = "partition.csv") -> None:
    rows = [(a, y, m) for (a, y), m in sorted(partition.assignment.items())]
    ctx.write_csv(name, ["actor", "year", "module"], rows)


# -- analysis emitters ---------------------------------------------------------


def _emit_describe(net: TemporalNetwork, ctx: RunContext) -> None:
    rows = []
    for year in net.years:
        n_nag = len(net.present_actors(year, Guild.NAG))
        n_hs = len(net.present_actors(year, Guild.HS))
        fractions = ingest.link_type_fractions(net, year)
        f_a, f_p, f_b = fractions if fractions else (None, None, None)
        rows.append(
            (
                year,
                n_nag,
                n_hs,
                n_nag + n_hs,
                len(net.slice_at(year)),
                component_count(net, year),
                connectance(net, year),
                f_a,
                f_p,
                f_b,
            )
        )
    ctx.write_csv(
        "yearly.csv",
        ["year", "n_nag", "n_hs", "n_actors", "n_links", "n_components",
         "connectance", "f_active_only", "f_passive_only", "f_both"],
        rows,
    )
    summary: dict = {"years": [net.years[0], net.years[-1]] if net.years else []}
    for guild, tag in ((Guild.NAG, "nag"), (Guild.HS, "hs")):
        ds = ingest.duration_stats(net, guild)
        ctx.write_csv(
            f"durations_{tag}.csv",
            ["actor", "duration", "max_degree", "mean_degree"],
            [(d.actor.id, d.duration, d.max_degree, d.mean_degree) for d in ds],
        )
        if ds:
            ccdf = ingest.survival_ccdf([d.duration for d in ds])
            ctx.write_csv(f"survival_{tag}.csv", ["duration", "ccdf"], ccdf)
            summary[f"survival_rate_{tag}"] = (
                stats.exp_survival_fit(ccdf) if len(ccdf) >= 2 else None
            )
        try:
            rho, p = ingest.duration_degree_correlation(net, guild)
            summary[f"duration_degree_rho_{tag}"] = rho
            summary[f"duration_degree_p_{tag}"] = p
        except ValueError:
            summary[f"duration_degree_rho_{tag}"] = None
            summary[f"duration_degree_p_{tag}"] = None
    ctx.write_json("describe_summary.json", summary)


_CURVES = {
    "t_plus": dynamics.relative_attach_new,
    "t_minus": dynamics.relative_detach_departing,
    "r_plus": dynamics.relative_attach_incumbent,
    "r_minus": dynamics.relative_detach_incumbent,
}


def _emit_dynamics(net: TemporalNetwork, guild: Guild, min_count: int,
                   log_binning: bool, ctx: RunContext) -> None:
    summary = {"target_guild": guild.value, "min_count": min_count}
    for name, fn in _CURVES.items():
        try:
            curve = fn(net, guild, min_count=min_count, log_binning=log_binning)
        except dynamics.NoQualifyingEventsError as exc:
            ctx.write_csv(f"{name}.csv", ["k", "value", "weight_sum", "raw_count"], [])
            summary[name] = {"error": str(exc)}
            continue
        ctx.write_csv(
            f"{name}.csv",
            ["k", "value", "weight_sum", "raw_count"],
            [(p.k, p.value, p.weight_sum, p.raw_count) for p in curve.points],
        )
        summary[name] = {
            "exponent": None if math.isnan(curve.exponent) else curve.exponent,
            "exponent_stderr": None if math.isnan(curve.exponent_stderr) else curve.exponent_stderr,
            "n_events": curve.n_events,
            "n_fit_points": curve.n_fit_points,
        }
    ctx.write_json("dynamics_summary.json", summary)


def _emit_nestedness(net, window, n_null, ctx) -> list[nestedness.NestednessReport]:
    reports = nestedness.nestedness_series(
        net, window, n_null, rng_seed=(ctx.seed, 11), threads=ctx.threads
    )
    ctx.write_csv(
        "nestedness.csv",
        ["year", "nodf", "null_mean", "null_std", "z"],
        [(r.year, r.nodf, r.null_mean, r.null_std, r.z_score) for r in reports],
    )
    return reports


def _emit_yearly_q(net, partition, gamma, ctx) -> list[tuple[int, float | None]]:
    series = yearly_q(net, partition, gamma)
    ctx.write_csv("yearly_q.csv", ["year", "q"], series)
    return series


def _emit_modules(net, partition, major_threshold, ctx) -> None:
    timelines = moddyn.module_timelines(net, partition)
    rows = []
    summary_modules = {}
    for tl in timelines:
        j_nag = dict(moddyn.jaccard_series(tl, Guild.NAG))
        j_hs = dict(moddyn.jaccard_series(tl, Guild.HS))
        for year in tl.years:
            rows.append(
                (
                    tl.module_id,
                    year,
                    tl.size(Guild.NAG, year),
                    tl.size(Guild.HS, year),
                    j_nag.get(year),
                    j_hs.get(year),
                )
            )
        entry = {
            "lifespan": list(tl.lifespan),
            "distinct_actors": tl.distinct_actor_count,
            "mean_j_nag": float(np.mean(list(j_nag.values()))) if j_nag else None,
            "mean_j_hs": float(np.mean(list(j_hs.values()))) if j_hs else None,
        }
        try:
            rho, p = moddyn.submodule_correlation(tl)
            entry["submodule_rho"] = rho
            entry["submodule_p"] = p
        except ValueError:
            entry["submodule_rho"] = None
            entry["submodule_p"] = None
        summary_modules[str(tl.module_id)] = entry
    ctx.write_csv(
        "module_yearly.csv",
        ["module", "year", "size_nag", "size_hs", "j_nag", "j_hs"],
        rows,
    )
    major, transitory = moddyn.classify_modules(timelines, major_threshold)
    ctx.write_json(
        "modules_summary.json",
        {
            "major_threshold": major_threshold,
            "major": [tl.module_id for tl in major],
            "transitory": [tl.module_id for tl in transitory],
            "modules": summary_modules,
        },
    )


def _emit_roles(net, partition, thresholds, ctx) -> None:
    rows = []
    guild_of = {aid: actor.guild.value for aid, actor in net.registry.items()}
    for year in net.years:
        for tag, scores in (
            ("full", roles.role_scores(net, partition, year, thresholds)),
            ("active", roles.subnetwork_role_scores(net, partition, year, LinkType.ACTIVE_ONLY, thresholds)),
            ("passive", roles.subnetwork_role_scores(net, partition, year, LinkType.PASSIVE_ONLY, thresholds)),
        ):
            for s in scores:
                rows.append(
                    (s.actor, guild_of[s.actor], s.year, tag, s.d, s.c,
                     s.category.value, int(s.degenerate))
                )
    ctx.write_csv(
        "roles.csv",
        ["actor", "guild", "year", "subnetwork", "d", "c", "category", "degenerate"],
        rows,
    )
    fluct = roles.role_fluctuation(net, partition, thresholds)
    ctx.write_csv(
        "fluctuation.csv",
        ["actor", "guild", "std_d", "std_c"],
        [(a, guild_of[a], sd, sc) for a, (sd, sc) in fluct.items()],
    )
    yearly_corr = {}
    for score in ("d", "c"):
        series = {}
        for year in net.years:
            out = roles.subnetwork_role_correlation(net, partition, year, score, thresholds)
            series[str(year)] = {"rho": out[0], "p": out[1]} if out else None
        yearly_corr[score] = series
    share_low_d = share_low_c = None
    if fluct:
        share_low_d = float(np.mean([sd < 0.5 for sd, _ in fluct.values()]))
        share_low_c = float(np.mean([sc <= 0.1 for _, sc in fluct.values()]))
    ctx.write_json(
        "roles_summary.json",
        {
            "thresholds": {"d_hub": thresholds.d_hub, "c_connector": thresholds.c_connector},
            "subnetwork_correlation": yearly_corr,
            "share_std_d_below_0.5": share_low_d,
            "share_std_c_at_most_0.1": share_low_c,
        },
    )


def _emit_correlate(reports, q_series, ctx) -> None:
    nodf_by_year = {r.year: r.nodf for r in reports if r.nodf is not None}
    q_by_year = {y: q for y, q in q_series if q is not None}
    years = sorted(set(nodf_by_year) & set(q_by_year))
    rows = [(y, nodf_by_year[y], q_by_year[y]) for y in years]
    ctx.write_csv("nestedness_vs_modularity.csv", ["year", "nodf", "q"], rows)
    summary = {"n_years": len(years), "rho": None, "p": None}
    if len(years) >= 3:
        try:
            rho = stats.pearson([r[1] for r in rows], [r[2] for r in rows])
            summary["rho"] = rho
            summary["p"] = stats.t_test_p(rho, len(years))
        except ValueError:
            pass
    ctx.write_json("correlate_summary.json", summary)


# -- subcommands ----------------------------------------------------------------


def cmd_synth(args, ctx: RunContext) -> int:
    cfg = synth.SynthConfig(
        years=args.years,
        arrival_rate_a=args.arrival_a,
        arrival_rate_b=args.arrival_b,
        newcomer_degree_exponent=args.degree_exponent,
        newcomer_degree_min=args.degree_min,
        newcomer_degree_max=args.degree_max,
        alpha_attach=args.alpha,
        beta_detach=args.beta,
        baseline_weight=args.baseline,
        departure_prob=args.departure_prob,
        link_removal_rate=args.link_removal_rate,
        incumbent_add_rate=args.incumbent_add_rate,
        n_planted_modules=args.modules,
        mixing=args.mixing,
        start_year=args.start_year,
        rng_seed=ctx.seed,
    )
    ctx.params = {k: getattr(cfg, k) for k in cfg.__dataclass_fields__}
    net, gt = synth.generate(cfg)
    ingest.write_edge_list(net, ctx.out_dir / "edges.csv")
    ctx.outputs.append("edges.csv")
    with open(ctx.out_dir / "truth_events.jsonl", "w", encoding="utf-8") as fh:
        for event in gt.events:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
    ctx.outputs.append("truth_events.jsonl")
    ctx.write_json(
        "truth.json",
        {
            "modules": gt.modules,
            "guilds": gt.guilds,
            "expected_attach_classes": {str(k): v for k, v in gt.expected_attach_classes.items()},
            "observed_attach_classes": {str(k): v for k, v in gt.observed_attach_classes.items()},
        },
    )
    return 0


def cmd_ingest(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    ingest.write_edge_list(net, ctx.out_dir / "edges.csv")
    ctx.outputs.append("edges.csv")
    ctx.write_json(
        "ingest_summary.json",
        {
            "n_actors_nag": len(net.actors(Guild.NAG)),
            "n_actors_hs": len(net.actors(Guild.HS)),
            "years": [net.years[0], net.years[-1]] if net.years else [],
            "n_links_total": int(sum(len(sl.links) for sl in net.slices)),
        },
    )
    return 0


def cmd_describe(args, ctx: RunContext) -> int:
    _emit_describe(_load_net(args, ctx), ctx)
    return 0


def cmd_dynamics(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    guild = Guild(args.target_guild)
    ctx.params = {"target_guild": guild.value, "min_count": args.min_count,
                  "log_binning": args.log_binning}
    _emit_dynamics(net, guild, args.min_count, args.log_binning, ctx)
    return 0


def cmd_nestedness(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    ctx.params = {"window": args.window, "n_null": args.n_null}
    _emit_nestedness(net, args.window, args.n_null, ctx)
    return 0


def cmd_modularity(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    params = MultilayerParams(args.gamma, args.omega, args.bipartite_null)
    ctx.params = {"gamma": args.gamma, "omega": args.omega,
                  "bipartite_null": args.bipartite_null,
                  "null_model": args.null, "n_null": args.n_null}
    partition = optimize(net, params, (ctx.seed, 21))
    _write_partition(ctx, partition)
    ctx.write_json("params.json", ctx.params | {"n_modules": partition.n_modules})
    _emit_yearly_q(net, partition, args.gamma, ctx)
    if args.null != "none" and args.n_null > 0:
        rows = []
        models = ["permute", "degree"] if args.null == "both" else [args.null]
        for model in models:
            for rep in range(args.n_null):
                if model == "permute":
                    null_net = null_permute_slices(net, (ctx.seed, 22, rep))
                else:
                    null_net = null_degree_shuffle(net, (ctx.seed, 23, rep))
                null_part = optimize(null_net, params, (ctx.seed, 24, rep))
                for year, q in yearly_q(null_net, null_part, args.gamma):
                    rows.append((model, rep, year, q))
        ctx.write_csv("null_q.csv", ["model", "replicate", "year", "q"], rows)
    return 0


def cmd_consensus(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    params = MultilayerParams(args.gamma, args.omega)
    ctx.params = {"gamma": args.gamma, "omega": args.omega,
                  "ensemble": args.ensemble, "binarize": args.binarize}
    partition, diagnostics = consensus.representative_partition(
        net, params, args.ensemble, (ctx.seed, 31), args.binarize, threads=ctx.threads
    )
    _write_partition(ctx, partition)
    ctx.write_json("params.json", ctx.params | {"n_modules": partition.n_modules})
    ctx.write_json("diagnostics.json", diagnostics)
    _emit_yearly_q(net, partition, args.gamma, ctx)
    return 0


def cmd_modules(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    partition = _read_partition(ctx.track_input(args.partition))
    ctx.params = {"major_threshold": args.major_threshold}
    _emit_modules(net, partition, args.major_threshold, ctx)
    return 0


def cmd_roles(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    partition = _read_partition(ctx.track_input(args.partition))
    thresholds = roles.RoleThresholds(args.d_hub, args.c_connector)
    ctx.params = {"d_hub": args.d_hub, "c_connector": args.c_connector}
    _emit_roles(net, partition, thresholds, ctx)
    return 0


def cmd_correlate(args, ctx: RunContext) -> int:
    reports = []
    with open(ctx.track_input(args.nestedness), newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            nodf_v = float(row["nodf"])
            reports.append(
                nestedness.NestednessReport(
                    int(row["year"]),
                    None if math.isnan(nodf_v) else nodf_v,
                    None, None, None, 0,
                )
            )
    q_series = []
    with open(ctx.track_input(args.yearly_q), newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            q = float(row["q"])
            q_series.append((int(row["year"]), None if math.isnan(q) else q))
    _emit_correlate(reports, q_series, ctx)
    return 0


def cmd_pipeline(args, ctx: RunContext) -> int:
    net = _load_net(args, ctx)
    thresholds = roles.RoleThresholds(args.d_hub, args.c_connector)
    params = MultilayerParams(args.gamma, args.omega)
    ctx.params = {
        "gamma": args.gamma, "omega": args.omega, "ensemble": args.ensemble,
        "window": args.window, "n_null": args.n_null,
        "target_guild": args.target_guild, "min_count": args.min_count,
        "major_threshold": args.major_threshold,
        "d_hub": args.d_hub, "c_connector": args.c_connector,
    }
    _emit_describe(net, ctx)
    _emit_dynamics(net, Guild(args.target_guild), args.min_count, False, ctx)
    reports = _emit_nestedness(net, args.window, args.n_null, ctx)
    partition, diagnostics = consensus.representative_partition(
        net, params, args.ensemble, (ctx.seed, 31), threads=ctx.threads
    )
    _write_partition(ctx, partition)
    ctx.write_json("params.json", ctx.params | {"n_modules": partition.n_modules})
    ctx.write_json("diagnostics.json", diagnostics)
    q_series = _emit_yearly_q(net, partition, args.gamma, ctx)
    _emit_modules(net, partition, args.major_threshold, ctx)
    _emit_roles(net, partition, thresholds, ctx)
    _emit_correlate(reports, q_series, ctx)
    return 0


# -- argument parsing -----------------------------------------------------------


def _add_input_args(parser):
    parser.add_argument("--input", required=True, help="edge-list CSV or JSON-lines file")
    parser.add_argument("--format-config", default=None, help="column-mapping config file")


def build_parser(defaults: dict) -> argparse.ArgumentParser:
    def d(key, builtin):
        return defaults.get(key, builtin)

    def global_options() -> argparse.ArgumentParser:
        # fresh parser per use: set_defaults mutates shared action objects
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
        common.add_argument("--config", default=argparse.SUPPRESS,
                            help="key=value config file (sections: input, analysis)")
        common.add_argument("--out", default=argparse.SUPPRESS,
                            help="output directory (default: $GUILDNET_OUT/<cmd> or ./runs/<cmd>)")
        return common

    parser = argparse.ArgumentParser(
        prog="guildnet",
        description="Temporal bipartite two-guild network analysis pipelines.",
        parents=[global_options()],
    )
    parser.set_defaults(
        seed=int(d("seed", 0)), threads=int(d("threads", 1)), config=None, out=None
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub_parent = {"parents": [global_options()]}

    p = sub.add_parser("synth", **sub_parent, help="generate a synthetic network")
    p.add_argument("--years", type=int, default=30)
    p.add_argument("--arrival-a", type=float, default=8.0)
    p.add_argument("--arrival-b", type=float, default=6.0)
    p.add_argument("--degree-exponent", type=float, default=2.5)
    p.add_argument("--degree-min", type=int, default=1)
    p.add_argument("--degree-max", type=int, default=3)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--baseline", type=float, default=1.0)
    p.add_argument("--departure-prob", type=float, default=0.08)
    p.add_argument("--link-removal-rate", type=float, default=0.0)
    p.add_argument("--incumbent-add-rate", type=float, default=4.0)
    p.add_argument("--modules", type=int, default=1)
    p.add_argument("--mixing", type=float, default=0.0)
    p.add_argument("--start-year", type=int, default=1)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", **sub_parent, help="parse, validate and normalize an edge list")
    _add_input_args(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("describe", **sub_parent, help="sizes, connectance, survival and degree statistics")
    _add_input_args(p)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("dynamics", **sub_parent, help="relative attachment/detachment probability curves")
    _add_input_args(p)
    p.add_argument("--target-guild", choices=[g.value for g in Guild], default="HS")
    p.add_argument("--min-count", type=int, default=int(d("min_count", 5)))
    p.add_argument("--log-binning", action="store_true")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("nestedness", **sub_parent, help="sliding-window NODF vs occupation null")
    _add_input_args(p)
    p.add_argument("--window", type=int, default=int(d("window", 5)))
    p.add_argument("--n-null", type=int, default=int(d("n_null", 100)))
    p.set_defaults(func=cmd_nestedness)

    p = sub.add_parser("modularity", **sub_parent, help="multislice partition, yearly Q, null models")
    _add_input_args(p)
    p.add_argument("--gamma", type=float, default=float(d("gamma", 1.0)))
    p.add_argument("--omega", type=float, default=float(d("omega", 1.0)))
    p.add_argument("--bipartite-null", action="store_true")
    p.add_argument("--null", choices=["none", "permute", "degree", "both"], default="none")
    p.add_argument("--n-null", type=int, default=int(d("n_null_modularity", 10)))
    p.set_defaults(func=cmd_modularity)

    p = sub.add_parser("consensus", **sub_parent, help="representative partition via association matrix")
    _add_input_args(p)
    p.add_argument("--gamma", type=float, default=float(d("gamma", 1.0)))
    p.add_argument("--omega", type=float, default=float(d("omega", 1.0)))
    p.add_argument("--ensemble", type=int, default=int(d("ensemble", 50)))
    p.add_argument("--binarize", action="store_true")
    p.set_defaults(func=cmd_consensus)

    p = sub.add_parser("modules", **sub_parent, help="module timelines, Jaccard stability, classification")
    _add_input_args(p)
    p.add_argument("--partition", required=True)
    p.add_argument("--major-threshold", type=int, default=int(d("major_threshold", 3)))
    p.set_defaults(func=cmd_modules)

    p = sub.add_parser("roles", **sub_parent, help="within-module degree and participation scores")
    _add_input_args(p)
    p.add_argument("--partition", required=True)
    p.add_argument("--d-hub", type=float, default=float(d("d_hub", 2.5)))
    p.add_argument("--c-connector", type=float, default=float(d("c_connector", 0.625)))
    p.set_defaults(func=cmd_roles)

    p = sub.add_parser("correlate", **sub_parent, help="nestedness vs modularity yearly correlation")
    p.add_argument("--nestedness", required=True, help="nestedness.csv from a nestedness run")
    p.add_argument("--yearly-q", required=True, help="yearly_q.csv from a modularity/consensus run")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("pipeline", **sub_parent, help="describe + dynamics + nestedness + consensus + modules + roles + correlate")
    _add_input_args(p)
    p.add_argument("--gamma", type=float, default=float(d("gamma", 1.0)))
    p.add_argument("--omega", type=float, default=float(d("omega", 1.0)))
    p.add_argument("--ensemble", type=int, default=int(d("ensemble", 50)))
    p.add_argument("--window", type=int, default=int(d("window", 5)))
    p.add_argument("--n-null", type=int, default=int(d("n_null", 100)))
    p.add_argument("--target-guild", choices=[g.value for g in Guild], default="HS")
    p.add_argument("--min-count", type=int, default=int(d("min_count", 5)))
    p.add_argument("--major-threshold", type=int, default=int(d("major_threshold", 3)))
    p.add_argument("--d-hub", type=float, default=float(d("d_hub", 2.5)))
    p.add_argument("--c-connector", type=float, default=float(d("c_connector", 0.625)))
    p.set_defaults(func=cmd_pipeline)
    return parser


def _config_defaults(argv: list[str]) -> dict:
    # pre-scan --config so file values become argparse defaults
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
        else:
            continue
        parser = configparser.ConfigParser()
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
        if parser.has_section("analysis"):
            return dict(parser.items("analysis"))
        return {}
    return {}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        defaults = _config_defaults(argv)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    parser = build_parser(defaults)
    args = parser.parse_args(argv)
    if args.out:
        out_dir = Path(args.out)
    else:
        root = Path(os.environ.get(OUT_ROOT_ENV, "runs"))
        out_dir = root / args.command
    ctx = RunContext(out_dir, args.command, argv, args.seed, args.threads)
    try:
        code = args.func(args, ctx)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ctx.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
