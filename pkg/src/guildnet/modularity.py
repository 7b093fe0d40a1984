"""Multislice modularity: quality function, Louvain optimizer, null models.

Slices are coupled ordinally: each actor is linked to its own copy in
adjacent slices (weight omega) wherever it is present in both. The
quality of a partition is

    Q = (1/2mu) * sum_{ij,ab} [ (A_ij^a - gamma * k_i k_j / (2m_a)) d_ab
                                + d_ij * C_j^ab ] * d(module_i^a, module_j^b)

with 2m_a the total intraslice degree of slice a and 2mu the total edge
mass including couplings. Bipartite slices are encoded as symmetric
unipartite adjacency with the standard configuration null; an optional
bipartite null restricts the expected-weight term to cross-guild pairs.

The optimizer is a generalized Louvain: node moves scored against the
null expressed as per-slice rank-one factors, then aggregation, repeated
until no merge improves the score. Runs are deterministic for a fixed
seed (randomized sweep order, ties broken by lowest module id).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .netcore import Guild, Slice, TemporalNetwork

NodeKey = tuple[str, int]


@dataclass(frozen=True)
class MultilayerParams:
    """Resolution and coupling parameters of the quality function."""

    gamma: float = 1.0
    omega: float = 1.0
    bipartite_null: bool = False

    def __post_init__(self) -> None:
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.omega < 0:
            raise ValueError("omega must be nonnegative")


@dataclass(frozen=True)
class Partition:
    """Assignment of (actor, year) pairs to dense integer module ids."""

    assignment: Mapping[NodeKey, int]

    @property
    def n_modules(self) -> int:
        return len(set(self.assignment.values()))

    def module_of(self, actor_id: str, year: int) -> int:
        return self.assignment[(actor_id, year)]

    def year_restriction(self, year: int) -> dict[str, int]:
        return {a: m for (a, y), m in self.assignment.items() if y == year}

    def relabeled(self) -> "Partition":
        """Modules renumbered densely by first occurrence in key order."""
        mapping: dict[int, int] = {}
        out = {}
        for key in sorted(self.assignment):
            m = self.assignment[key]
            if m not in mapping:
                mapping[m] = len(mapping)
            out[key] = mapping[m]
        return Partition(out)

    def groups(self) -> list[frozenset[NodeKey]]:
        """Label-free view: the family of module member sets."""
        by_mod: dict[int, set[NodeKey]] = {}
        for key, m in self.assignment.items():
            by_mod.setdefault(m, set()).add(key)
        return sorted((frozenset(v) for v in by_mod.values()), key=sorted)

    def same_grouping(self, other: "Partition") -> bool:
        return self.groups() == other.groups()


def _coupling_pairs(net: TemporalNetwork) -> list[tuple[NodeKey, NodeKey]]:
    pairs = []
    for sl, nxt in zip(net.slices, net.slices[1:]):
        here = set(sl.adjacency())
        there = set(nxt.adjacency())
        for aid in sorted(here & there):
            pairs.append(((aid, sl.year), (aid, nxt.year)))
    return pairs


class SupraGraph:
    """Flattened multislice graph with the null model in factored form.

    ``links`` holds real edge weights (intraslice adjacency plus
    interslice couplings). The expected-weight term of the quality
    function is a sum of rank-one products: for modules, only the
    per-module sums of the factor columns matter, which is what makes
    Louvain moves O(degree).
    """

    def __init__(
        self,
        keys: Sequence[NodeKey],
        links: sp.csr_matrix,
        factors_u: np.ndarray,
        factors_v: np.ndarray,
        two_mu: float,
    ):
        self.keys = list(keys)
        self.links = links
        self.factors_u = factors_u
        self.factors_v = factors_v
        self.two_mu = two_mu

    # -- construction --------------------------------------------------

    @staticmethod
    def from_network(net: TemporalNetwork, params: MultilayerParams) -> "SupraGraph":
        keys = net.present_pairs()
        index = {key: i for i, key in enumerate(keys)}
        n = len(keys)
        n_slices = len(net.slices)
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []
        factors_u = np.zeros((n, n_slices))
        factors_v = np.zeros((n, n_slices))
        two_mu = 0.0
        for f, sl in enumerate(net.slices):
            adj = sl.adjacency()
            if not adj:
                continue
            two_m = 2.0 * len(sl.links)
            two_mu += two_m
            for (a, b) in sl.links:
                i, j = index[(a, sl.year)], index[(b, sl.year)]
                rows.extend((i, j))
                cols.extend((j, i))
                vals.extend((1.0, 1.0))
            if params.bipartite_null:
                # expected weight gamma*k_i*k_j/m for cross-guild pairs only
                scale = np.sqrt(params.gamma / (two_m / 2.0))
                for aid, neigh in adj.items():
                    i = index[(aid, sl.year)]
                    if net.registry[aid].guild is Guild.NAG:
                        factors_u[i, f] = len(neigh) * scale
                    else:
                        factors_v[i, f] = len(neigh) * scale
            else:
                # expected weight gamma*k_i*k_j/(2m): u = v = k*sqrt(gamma/(2*2m))
                scale = np.sqrt(params.gamma / (2.0 * two_m))
                for aid, neigh in adj.items():
                    i = index[(aid, sl.year)]
                    factors_u[i, f] = len(neigh) * scale
                factors_v[:, f] = factors_u[:, f]
        if params.omega > 0:
            for key_a, key_b in _coupling_pairs(net):
                i, j = index[key_a], index[key_b]
                rows.extend((i, j))
                cols.extend((j, i))
                vals.extend((params.omega, params.omega))
                two_mu += 2.0 * params.omega
        links = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        links.sum_duplicates()
        return SupraGraph(keys, links, factors_u, factors_v, two_mu)

    @staticmethod
    def from_matrix(weights: np.ndarray | sp.spmatrix, gamma: float = 1.0) -> "SupraGraph":
        """Single-layer weighted graph with the configuration null."""
        w = sp.csr_matrix(weights, dtype=float)
        w = w - sp.diags(w.diagonal())
        w.eliminate_zeros()
        n = w.shape[0]
        strength = np.asarray(w.sum(axis=1)).ravel()
        two_m = float(strength.sum())
        factors = np.zeros((n, 1))
        if two_m > 0:
            factors[:, 0] = strength * np.sqrt(gamma / (2.0 * two_m))
        keys = [(str(i), 0) for i in range(n)]
        return SupraGraph(keys, w, factors, factors.copy(), two_m)

    # -- scoring ---------------------------------------------------------

    def score(self, comm: np.ndarray) -> float:
        """Unnormalized quality: Q = score / two_mu."""
        _, dense = np.unique(comm, return_inverse=True)
        coo = self.links.tocoo()
        same = dense[coo.row] == dense[coo.col]
        link_part = float(coo.data[same].sum())
        n_comms = int(dense.max()) + 1 if dense.size else 0
        su = np.zeros((n_comms, self.factors_u.shape[1]))
        sv = np.zeros((n_comms, self.factors_v.shape[1]))
        np.add.at(su, dense, self.factors_u)
        np.add.at(sv, dense, self.factors_v)
        null_part = 2.0 * float(np.sum(su * sv))
        return link_part - null_part

    def quality(self, comm: np.ndarray) -> float:
        return self.score(comm) / self.two_mu

    def delta_q(self, comm: np.ndarray, node: int, target: int) -> float:
        """Exact quality change of moving one node, as used by the optimizer."""
        current = comm[node]
        if current == target:
            return 0.0
        indptr, indices, data = self.links.indptr, self.links.indices, self.links.data
        w_old = w_new = 0.0
        for idx in range(indptr[node], indptr[node + 1]):
            v = indices[idx]
            if v == node:
                continue
            if comm[v] == current:
                w_old += data[idx]
            elif comm[v] == target:
                w_new += data[idx]
        fu, fv = self.factors_u[node], self.factors_v[node]
        mask_old = comm == current
        mask_old[node] = False
        mask_new = comm == target
        su_old = self.factors_u[mask_old].sum(axis=0)
        sv_old = self.factors_v[mask_old].sum(axis=0)
        su_new = self.factors_u[mask_new].sum(axis=0)
        sv_new = self.factors_v[mask_new].sum(axis=0)
        gain_new = w_new - float(fu @ sv_new + fv @ su_new)
        gain_old = w_old - float(fu @ sv_old + fv @ su_old)
        return 2.0 * (gain_new - gain_old) / self.two_mu

    # -- optimization ----------------------------------------------------

    def _one_level(self, rng: np.random.Generator) -> tuple[np.ndarray, bool]:
        n = self.links.shape[0]
        indptr, indices, data = self.links.indptr, self.links.indices, self.links.data
        fu, fv = self.factors_u, self.factors_v
        comm = np.arange(n)
        su = fu.copy()
        sv = fv.copy()
        comm_size = np.ones(n, dtype=np.int64)
        free_ids: list[int] = []
        moved_any = False
        while True:
            moved_this_pass = False
            for u in rng.permutation(n):
                c_old = int(comm[u])
                # take u out of its module
                su[c_old] -= fu[u]
                sv[c_old] -= fv[u]
                comm_size[c_old] -= 1
                w_to: dict[int, float] = {c_old: 0.0}
                for idx in range(indptr[u], indptr[u + 1]):
                    v = indices[idx]
                    if v == u:
                        continue
                    c = int(comm[v])
                    w_to[c] = w_to.get(c, 0.0) + data[idx]
                gain_stay = w_to[c_old] - float(fu[u] @ sv[c_old] + fv[u] @ su[c_old])
                # a move must strictly beat staying; ties go to the lowest id
                best_c, best_gain = c_old, gain_stay
                for c in sorted(w_to):
                    if c == c_old:
                        continue
                    gain = w_to[c] - float(fu[u] @ sv[c] + fv[u] @ su[c])
                    if gain > best_gain + 1e-12:
                        best_c, best_gain = c, gain
                # going solo is worth exactly 0 in a fresh module
                if 0.0 > best_gain + 1e-12 and comm_size[c_old] > 0 and free_ids:
                    best_c = free_ids.pop()
                if best_c != c_old:
                    moved_this_pass = moved_any = True
                    if comm_size[c_old] == 0:
                        free_ids.append(c_old)
                comm[u] = best_c
                su[best_c] += fu[u]
                sv[best_c] += fv[u]
                comm_size[best_c] += 1
            if not moved_this_pass:
                break
        _, dense = np.unique(comm, return_inverse=True)
        return dense.astype(np.int64), moved_any

    def aggregate(self, comm: np.ndarray) -> "SupraGraph":
        n = self.links.shape[0]
        k = int(comm.max()) + 1
        s = sp.csr_matrix((np.ones(n), (np.arange(n), comm)), shape=(n, k))
        links = (s.T @ self.links @ s).tocsr()
        fu = s.T @ self.factors_u
        fv = s.T @ self.factors_v
        keys = [(f"m{c}", 0) for c in range(k)]
        return SupraGraph(keys, links, np.asarray(fu), np.asarray(fv), self.two_mu)

    def louvain(self, rng: np.random.Generator) -> np.ndarray:
        """Community labels (dense ids) for the graph's nodes."""
        n = self.links.shape[0]
        labels = np.arange(n)
        graph = self
        while True:
            level, moved = graph._one_level(rng)
            labels = level[labels]
            n_comms = int(level.max()) + 1 if level.size else 0
            if not moved or n_comms == graph.links.shape[0]:
                break
            graph = graph.aggregate(level)
        return labels


# -- public operations -------------------------------------------------------


def optimize(net: TemporalNetwork, params: MultilayerParams, rng_seed: int = 0) -> Partition:
    """Locally optimal multislice partition via generalized Louvain.

    Deterministic for a fixed seed. Every present (actor, year) pair is
    assigned; module ids are dense, numbered by first occurrence in
    canonical key order.
    """
    supra = SupraGraph.from_network(net, params)
    if not supra.keys:
        return Partition({})
    rng = np.random.default_rng(rng_seed)
    labels = supra.louvain(rng)
    return Partition({key: int(labels[i]) for i, key in enumerate(supra.keys)}).relabeled()


def _check_coverage(net: TemporalNetwork, partition: Partition) -> None:
    for key in net.present_pairs():
        if key not in partition.assignment:
            raise ValueError(f"partition does not cover present node {key}")


def quality(net: TemporalNetwork, partition: Partition, params: MultilayerParams) -> float:
    """Multislice quality of a partition, evaluated directly per slice.

    Independent of the optimizer's internals (used as its oracle in the
    tests).
    """
    _check_coverage(net, partition)
    two_mu = 0.0
    link_part = 0.0
    null_part = 0.0
    for sl in net.slices:
        if len(sl.links) == 0:
            continue
        two_m = 2.0 * len(sl.links)
        two_mu += two_m
        for (a, b) in sl.links:
            if partition.module_of(a, sl.year) == partition.module_of(b, sl.year):
                link_part += 2.0
        sums_a: dict[int, float] = {}
        sums_b: dict[int, float] = {}
        for aid, neigh in sl.adjacency().items():
            m = partition.module_of(aid, sl.year)
            if net.registry[aid].guild is Guild.NAG:
                sums_a[m] = sums_a.get(m, 0.0) + len(neigh)
            else:
                sums_b[m] = sums_b.get(m, 0.0) + len(neigh)
        if params.bipartite_null:
            for m, sa in sums_a.items():
                null_part += 2.0 * params.gamma * sa * sums_b.get(m, 0.0) / (two_m / 2.0)
        else:
            for m in set(sums_a) | set(sums_b):
                s = sums_a.get(m, 0.0) + sums_b.get(m, 0.0)
                null_part += params.gamma * s * s / two_m
    for key_a, key_b in _coupling_pairs(net):
        two_mu += 2.0 * params.omega
        if partition.assignment[key_a] == partition.assignment[key_b]:
            link_part += 2.0 * params.omega
    if two_mu == 0.0:
        raise ValueError("network has no links")
    return (link_part - null_part) / two_mu


def move_delta_q(
    net: TemporalNetwork,
    partition: Partition,
    params: MultilayerParams,
    node: NodeKey,
    target_module: int,
) -> float:
    """Incremental quality change of one node move (the optimizer's formula)."""
    _check_coverage(net, partition)
    supra = SupraGraph.from_network(net, params)
    index = {key: i for i, key in enumerate(supra.keys)}
    comm = np.array([partition.assignment[key] for key in supra.keys])
    return supra.delta_q(comm, index[node], target_module)


def yearly_q(
    net: TemporalNetwork, partition: Partition, gamma: float = 1.0
) -> list[tuple[int, float | None]]:
    """Per-slice Newman-Girvan modularity of the partition's restriction.

    Empty slices yield ``None``.
    """
    _check_coverage(net, partition)
    out: list[tuple[int, float | None]] = []
    for sl in net.slices:
        if len(sl.links) == 0:
            out.append((sl.year, None))
            continue
        two_m = 2.0 * len(sl.links)
        intra = sum(
            2.0
            for (a, b) in sl.links
            if partition.module_of(a, sl.year) == partition.module_of(b, sl.year)
        )
        sums: dict[int, float] = {}
        for aid, neigh in sl.adjacency().items():
            m = partition.module_of(aid, sl.year)
            sums[m] = sums.get(m, 0.0) + len(neigh)
        null = sum(gamma * s * s / two_m for s in sums.values())
        out.append((sl.year, (intra - null) / two_m))
    return out


# -- null models --------------------------------------------------------------


def null_permute_slices(
    net: TemporalNetwork,
    rng_seed: int | None = 0,
    permutation: Sequence[int] | None = None,
) -> TemporalNetwork:
    """Slice contents reordered by a random permutation, years kept in place."""
    years = net.years
    if permutation is None:
        rng = np.random.default_rng(rng_seed)
        permutation = rng.permutation(len(years))
    if sorted(permutation) != list(range(len(years))):
        raise ValueError("not a permutation of the slice indices")
    slices = [Slice(years[i], net.slices[permutation[i]].links) for i in range(len(years))]
    return TemporalNetwork(net.registry.values(), slices)


def null_degree_shuffle(
    net: TemporalNetwork, rng_seed: int = 0, attempts_factor: int = 10
) -> TemporalNetwork:
    """Within-slice rewiring by double-edge swaps, degrees preserved exactly.

    Swaps stay cross-guild by construction: two links (a1,b1),(a2,b2)
    become (a1,b2),(a2,b1) when neither target link exists.
    """
    rng = np.random.default_rng(rng_seed)
    slices = []
    for sl in net.slices:
        links = dict(sl.links)
        if len(links) >= 2:
            pairs = list(links)
            for _ in range(attempts_factor * len(pairs)):
                i, j = rng.integers(0, len(pairs), size=2)
                if i == j:
                    continue
                (a1, b1), (a2, b2) = pairs[i], pairs[j]
                if a1 == a2 or b1 == b2:
                    continue
                if (a1, b2) in links or (a2, b1) in links:
                    continue
                k1 = links.pop((a1, b1))
                k2 = links.pop((a2, b2))
                links[(a1, b2)] = k1
                links[(a2, b1)] = k2
                pairs[i] = (a1, b2)
                pairs[j] = (a2, b1)
        slices.append(Slice(sl.year, links))
    return TemporalNetwork(net.registry.values(), slices)
