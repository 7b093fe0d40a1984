"""Render figures from a guildnet run directory.

Strictly presentational: every number shown is read from the run's CSV
and JSON artifacts, never recomputed. SVG output keeps text as text so
annotations are searchable.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

plt.rcParams["svg.fonttype"] = "none"

KINDS = ("overview", "attachment", "architecture", "modules", "roles")


class SchemaError(ValueError):
    """An input file or column required by a figure kind is missing."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    run_dir: Path
    out_path: Path
    dpi: int = 150
    style: dict = field(default_factory=dict)


def fmt_num(value, digits: int = 4) -> str:
    """Annotation formatting shared with the tests (exact string match)."""
    if value is None:
        return "n/a"
    return f"{value:.{digits}g}"


def _require(path: Path) -> Path:
    if not path.exists():
        raise SchemaError(f"missing required input: {path.name}")
    return path


def _read_csv(run_dir: Path, name: str, columns: list[str]) -> list[dict]:
    with open(_require(run_dir / name), newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        head = reader.fieldnames or []
        for col in columns:
            if col not in head:
                raise SchemaError(f"{name}: missing column {col!r}")
        return list(reader)


def _read_json(run_dir: Path, name: str) -> dict:
    with open(_require(run_dir / name), encoding="utf-8") as fh:
        return json.load(fh)


def _num(raw: str) -> float:
    return float(raw)


def _finite(rows, x, y):
    xs, ys = [], []
    for row in rows:
        try:
            vx, vy = _num(row[x]), _num(row[y])
        except (ValueError, KeyError):
            continue
        if math.isfinite(vx) and math.isfinite(vy):
            xs.append(vx)
            ys.append(vy)
    return xs, ys


# -- figure kinds ---------------------------------------------------------


def _fig_overview(spec: FigureSpec):
    rows = _read_csv(spec.run_dir, "yearly.csv",
                     ["year", "n_actors", "n_components", "connectance",
                      "f_active_only", "f_passive_only", "f_both"])
    summary = _read_json(spec.run_dir, "describe_summary.json")
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    years, actors = _finite(rows, "year", "n_actors")
    _, comps = _finite(rows, "year", "n_components")
    axes[0, 0].plot(years, actors, "o-", ms=3, label="actors")
    axes[0, 0].plot(years, comps, "s--", ms=3, label="components")
    axes[0, 0].set(xlabel="year", ylabel="count", title="network size")
    axes[0, 0].legend(fontsize=8)
    cy, conn = _finite(rows, "year", "connectance")
    axes[0, 1].plot(cy, conn, "o-", ms=3, color="tab:red")
    axes[0, 1].set(xlabel="year", ylabel="connectance", title="link density")
    for key, style in (("f_active_only", "-"), ("f_passive_only", "--"), ("f_both", ":")):
        fy, fv = _finite(rows, "year", key)
        axes[1, 0].plot(fy, fv, style, label=key.replace("f_", ""))
    axes[1, 0].set(xlabel="year", ylabel="fraction of links", title="support types")
    axes[1, 0].legend(fontsize=8)
    ax = axes[1, 1]
    for tag, marker in (("nag", "o"), ("hs", "s")):
        try:
            surv = _read_csv(spec.run_dir, f"survival_{tag}.csv", ["duration", "ccdf"])
        except SchemaError:
            continue
        xs, ys = _finite(surv, "duration", "ccdf")
        ax.semilogy(xs, ys, marker, ms=4, label=tag.upper())
        rate = summary.get(f"survival_rate_{tag}")
        if rate is not None:
            ax.annotate(f"rate {tag.upper()} = {fmt_num(rate)}",
                        xy=(0.55, 0.9 - 0.12 * (tag == "hs")), xycoords="axes fraction",
                        fontsize=8)
    ax.set(xlabel="duration (years)", ylabel="P(D >= d)", title="participation survival")
    ax.legend(fontsize=8)
    fig.suptitle("network overview")
    return fig


def _fig_attachment(spec: FigureSpec):
    summary = _read_json(spec.run_dir, "dynamics_summary.json")
    titles = {
        "t_plus": "gain from newcomers (T+)",
        "t_minus": "loss to departures (T-)",
        "r_plus": "gain from incumbents (R+)",
        "r_minus": "loss among incumbents (R-)",
    }
    fig, axes = plt.subplots(2, 2, figsize=(9, 8))
    for ax, name in zip(axes.ravel(), titles):
        rows = _read_csv(spec.run_dir, f"{name}.csv", ["k", "value", "raw_count"])
        ks, vs = _finite(rows, "k", "value")
        info = summary.get(name) or {}
        ax.set(title=titles[name], xlabel="degree k", ylabel="relative probability")
        if ks:
            ax.loglog(ks, vs, "o", ms=4)
            exponent = info.get("exponent")
            if exponent is not None:
                kk = np.array([min(ks), max(ks)], dtype=float)
                anchor = np.median([v / k ** exponent for k, v in zip(ks, vs) if v > 0])
                ax.loglog(kk, anchor * kk ** exponent, "-", color="tab:red")
                ax.annotate(f"slope = {fmt_num(exponent)}", xy=(0.05, 0.92),
                            xycoords="axes fraction", fontsize=9, color="tab:red")
        else:
            ax.annotate(info.get("error", "no events"), xy=(0.15, 0.5),
                        xycoords="axes fraction", fontsize=9)
    fig.suptitle("assembly and disassembly")
    fig.tight_layout()
    return fig


def _fig_architecture(spec: FigureSpec):
    nest = _read_csv(spec.run_dir, "nestedness.csv",
                     ["year", "nodf", "null_mean", "null_std", "z"])
    qrows = _read_csv(spec.run_dir, "yearly_q.csv", ["year", "q"])
    corr = _read_json(spec.run_dir, "correlate_summary.json")
    scatter = _read_csv(spec.run_dir, "nestedness_vs_modularity.csv", ["year", "nodf", "q"])
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    years, nodf_v = _finite(nest, "year", "nodf")
    axes[0].plot(years, nodf_v, "o-", ms=3, label="NODF")
    ny, nm = _finite(nest, "year", "null_mean")
    _, ns = _finite(nest, "year", "null_std")
    if ny:
        nm = np.array(nm)
        ns = np.array(ns)
        axes[0].fill_between(ny, nm - ns, nm + ns, alpha=0.3, label="null occu. ±1 sd")
    axes[0].set(xlabel="year", ylabel="NODF", title="nestedness")
    axes[0].legend(fontsize=8)
    qy, qv = _finite(qrows, "year", "q")
    axes[1].plot(qy, qv, "s-", ms=3, color="tab:green")
    axes[1].set(xlabel="year", ylabel="yearly Q", title="modularity")
    xs, ys = _finite(scatter, "nodf", "q")
    axes[2].plot(xs, ys, "o", ms=4)
    axes[2].set(xlabel="NODF", ylabel="yearly Q", title="nestedness vs modularity")
    rho = corr.get("rho")
    axes[2].annotate(f"rho = {fmt_num(rho)}", xy=(0.05, 0.92),
                     xycoords="axes fraction", fontsize=9)
    if corr.get("p") is not None:
        axes[2].annotate(f"p = {fmt_num(corr['p'])}", xy=(0.05, 0.84),
                         xycoords="axes fraction", fontsize=9)
    fig.tight_layout()
    return fig


def _fig_modules(spec: FigureSpec):
    rows = _read_csv(spec.run_dir, "module_yearly.csv",
                     ["module", "year", "size_nag", "size_hs"])
    summary = _read_json(spec.run_dir, "modules_summary.json")
    major = {str(m) for m in summary.get("major", [])}
    series: dict[str, dict[int, tuple[int, int]]] = {}
    for row in rows:
        series.setdefault(row["module"], {})[int(row["year"])] = (
            int(row["size_nag"]), int(row["size_hs"])
        )
    fig, axes = plt.subplots(2, 1, figsize=(10, 7), sharex=True)
    cmap = plt.get_cmap("tab20")
    for idx, (module, by_year) in enumerate(sorted(series.items(), key=lambda kv: int(kv[0]))):
        years = sorted(by_year)
        offset = 6 * idx
        color = cmap(idx % 20)
        lw = 1.6 if module in major else 0.8
        for ax, which in ((axes[0], 0), (axes[1], 1)):
            sizes = np.array([by_year[y][which] for y in years], dtype=float)
            ax.fill_between(years, offset - sizes / 2, offset + sizes / 2,
                            color=color, alpha=0.75, linewidth=0)
            ax.plot(years, np.full(len(years), offset), color=color, lw=lw * 0.4)
        axes[0].annotate(module, xy=(years[0], offset), fontsize=7, va="center")
    axes[0].set(ylabel="module (NAG side)", title="module sizes per guild")
    axes[1].set(xlabel="year", ylabel="module (HS side)")
    n_major = len(summary.get("major", []))
    n_trans = len(summary.get("transitory", []))
    axes[0].annotate(f"major modules = {n_major}", xy=(0.8, 0.95),
                     xycoords="axes fraction", fontsize=9)
    axes[1].annotate(f"transitory modules = {n_trans}", xy=(0.8, 0.95),
                     xycoords="axes fraction", fontsize=9)
    return fig


def _fig_roles(spec: FigureSpec):
    rows = _read_csv(spec.run_dir, "roles.csv",
                     ["actor", "guild", "year", "subnetwork", "d", "c"])
    fluct = _read_csv(spec.run_dir, "fluctuation.csv", ["actor", "std_d", "std_c"])
    summary = _read_json(spec.run_dir, "roles_summary.json")
    thresholds = summary.get("thresholds", {})
    d_hub = thresholds.get("d_hub")
    c_conn = thresholds.get("c_connector")
    full = [r for r in rows if r["subnetwork"] == "full"]
    last_year = max(int(r["year"]) for r in full) if full else None
    latest = [r for r in full if int(r["year"]) == last_year]
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    for guild, marker, color in (("NAG", "o", "tab:blue"), ("HS", "s", "tab:orange")):
        pts = [(float(r["c"]), float(r["d"])) for r in latest if r["guild"] == guild]
        if pts:
            axes[0].scatter(*zip(*pts), marker=marker, s=18, alpha=0.7,
                            color=color, label=guild)
    if c_conn is not None:
        axes[0].axvline(c_conn, color="grey", lw=0.8, ls="--")
        axes[0].annotate(f"c* = {fmt_num(c_conn)}", xy=(0.62, 0.03),
                         xycoords="axes fraction", fontsize=8)
    if d_hub is not None:
        axes[0].axhline(d_hub, color="grey", lw=0.8, ls="--")
        axes[0].annotate(f"d* = {fmt_num(d_hub)}", xy=(0.02, 0.9),
                         xycoords="axes fraction", fontsize=8)
    axes[0].set(xlabel="participation c", ylabel="within-module degree d",
                title=f"roles in {last_year}")
    axes[0].legend(fontsize=8)
    std_d = [float(r["std_d"]) for r in fluct]
    std_c = [float(r["std_c"]) for r in fluct]
    axes[1].hist(std_d, bins=20, color="tab:blue", alpha=0.8)
    axes[1].set(xlabel="std of d", ylabel="actors", title="d-score fluctuation")
    share_d = summary.get("share_std_d_below_0.5")
    if share_d is not None:
        axes[1].annotate(f"share(std d < 0.5) = {fmt_num(share_d)}", xy=(0.25, 0.92),
                         xycoords="axes fraction", fontsize=8)
    axes[2].hist(std_c, bins=20, color="tab:orange", alpha=0.8)
    axes[2].set(xlabel="std of c", ylabel="actors", title="c-score fluctuation")
    share_c = summary.get("share_std_c_at_most_0.1")
    if share_c is not None:
        axes[2].annotate(f"share(std c <= 0.1) = {fmt_num(share_c)}", xy=(0.25, 0.92),
                         xycoords="axes fraction", fontsize=8)
    fig.tight_layout()
    return fig


_RENDERERS = {
    "overview": _fig_overview,
    "attachment": _fig_attachment,
    "architecture": _fig_architecture,
    "modules": _fig_modules,
    "roles": _fig_roles,
}


def render(spec: FigureSpec) -> Path:
    """Render one figure kind from a run directory to a vector file."""
    if spec.kind not in _RENDERERS:
        raise ValueError(f"unknown figure kind {spec.kind!r} (choices: {', '.join(KINDS)})")
    _require(spec.run_dir / "manifest.json")
    fig = _RENDERERS[spec.kind](spec)
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path, dpi=spec.dpi)
    plt.close(fig)
    return spec.out_path
