"""Consensus partitioning: association matrix, threshold null, AMI.

An ensemble of optimizer runs is reduced to one representative
partition: co-assignment frequencies are collected in a nodal
association matrix, entries compatible with random reassignment are
zeroed, the surviving weighted graph is re-partitioned, and the member
with maximal average adjusted mutual information against the rest is
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modularity import MultilayerParams, NodeKey, Partition, SupraGraph, optimize
from .netcore import TemporalNetwork


@dataclass
class AssociationMatrix:
    """Symmetric co-assignment frequencies over an ordered key list."""

    keys: list[NodeKey]
    values: np.ndarray
    threshold: float = 0.0


def _aligned_labels(p1: Partition, p2: Partition) -> tuple[np.ndarray, np.ndarray]:
    keys1 = sorted(p1.assignment)
    if sorted(p2.assignment) != keys1:
        raise ValueError("partitions cover different node sets")
    a = _canonical_codes([p1.assignment[k] for k in keys1])
    b = _canonical_codes([p2.assignment[k] for k in keys1])
    return a, b


def _canonical_codes(labels: Sequence[int]) -> np.ndarray:
    mapping: dict[int, int] = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out


def _expected_mi(a_sizes: np.ndarray, b_sizes: np.ndarray, n: int) -> float:
    """Expected mutual information under the hypergeometric permutation model."""
    lg = math.lgamma
    log_n = math.log(n)
    total = 0.0
    for ai in a_sizes:
        for bj in b_sizes:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            base = lg(ai + 1) + lg(bj + 1) + lg(n - ai + 1) + lg(n - bj + 1) - lg(n + 1)
            for nij in range(lo, hi + 1):
                log_p = base - (
                    lg(nij + 1)
                    + lg(ai - nij + 1)
                    + lg(bj - nij + 1)
                    + lg(n - ai - bj + nij + 1)
                )
                total += (nij / n) * (log_n + math.log(nij) - math.log(ai) - math.log(bj)) * math.exp(log_p)
    return total


def ami(p1: Partition, p2: Partition) -> float:
    """Adjusted mutual information with max-entropy normalization.

    AMI = (MI - E[MI]) / (max(H1, H2) - E[MI]), the expectation taken
    over the permutation model with fixed cluster sizes. Identical
    partitions score exactly 1; a degenerate denominator (both
    partitions trivial) scores 1 if the groupings match, else 0.
    """
    a, b = _aligned_labels(p1, p2)
    n = a.size
    if n == 0:
        raise ValueError("empty partitions")
    if np.array_equal(a, b):
        return 1.0
    ka, kb = int(a.max()) + 1, int(b.max()) + 1
    cont = np.zeros((ka, kb), dtype=np.int64)
    np.add.at(cont, (a, b), 1)
    a_sizes = cont.sum(axis=1)
    b_sizes = cont.sum(axis=0)
    mi = 0.0
    for i in range(ka):
        for j in range(kb):
            nij = cont[i, j]
            if nij:
                mi += (nij / n) * math.log(n * nij / (a_sizes[i] * b_sizes[j]))
    h1 = -sum((s / n) * math.log(s / n) for s in a_sizes if s)
    h2 = -sum((s / n) * math.log(s / n) for s in b_sizes if s)
    emi = _expected_mi(a_sizes, b_sizes, n)
    denom = max(h1, h2) - emi
    if abs(denom) < 1e-12:
        return 0.0
    return (mi - emi) / denom


def association_matrix(
    partitions: Sequence[Partition], actor_level: bool = False
) -> AssociationMatrix:
    """Fraction of partitions co-assigning each pair of keys.

    Keys are (actor, year) pairs; with ``actor_level=True`` each actor is
    collapsed to its modal module per partition (reporting convenience).

    Raises
    ------
    ValueError
        If fewer than 2 partitions are given or node sets differ.
    """
    if len(partitions) < 2:
        raise ValueError("need at least 2 partitions")
    keys = sorted(partitions[0].assignment)
    if actor_level:
        actors = sorted({a for a, _ in keys})
        labelings = []
        for p in partitions:
            if sorted(p.assignment) != keys:
                raise ValueError("partitions cover different node sets")
            per_actor: dict[str, dict[int, int]] = {}
            for (a, _), m in p.assignment.items():
                counts = per_actor.setdefault(a, {})
                counts[m] = counts.get(m, 0) + 1
            modal = [
                min(sorted(per_actor[a]), key=lambda m: (-per_actor[a][m], m))
                for a in actors
            ]
            labelings.append(_canonical_codes(modal))
        out_keys: list[NodeKey] = [(a, 0) for a in actors]
    else:
        labelings = []
        for p in partitions:
            if sorted(p.assignment) != keys:
                raise ValueError("partitions cover different node sets")
            labelings.append(_canonical_codes([p.assignment[k] for k in keys]))
        out_keys = keys
    n = len(labelings[0])
    counts = np.zeros((n, n), dtype=np.float64)
    for codes in labelings:
        k = int(codes.max()) + 1
        onehot = np.zeros((n, k))
        onehot[np.arange(n), codes] = 1.0
        counts += onehot @ onehot.T
    return AssociationMatrix(out_keys, counts / len(partitions))


def null_threshold(
    n_nodes: int, n_modules: int, ensemble_size: int, rng_seed: int | tuple = 0
) -> float:
    """Max off-diagonal association frequency of random balanced partitions.

    Nodes are reassigned uniformly at random into ``n_modules``
    communities of mean size n_nodes/n_modules; the returned value is
    the largest co-assignment frequency any pair reaches by chance.
    """
    if n_nodes < 2:
        raise ValueError("need at least 2 nodes")
    if not 1 <= n_modules <= n_nodes:
        raise ValueError("n_modules must be in 1..n_nodes")
    rng = np.random.default_rng(rng_seed)
    labels = np.empty((ensemble_size, n_nodes), dtype=np.int64)
    for s in range(ensemble_size):
        perm = rng.permutation(n_nodes)
        labels[s, perm] = np.arange(n_nodes) % n_modules
    best = 0
    step = max(1, min(n_nodes, 2_000_000 // max(n_nodes, 1)))
    for start in range(0, n_nodes, step):
        stop = min(start + step, n_nodes)
        counts = np.zeros((stop - start, n_nodes), dtype=np.int32)
        for s in range(ensemble_size):
            counts += labels[s, start:stop, None] == labels[s, None, :]
        counts[np.arange(stop - start), np.arange(start, stop)] = 0
        best = max(best, int(counts.max()))
    return best / ensemble_size


def partition_matrix(
    assoc: AssociationMatrix, gamma: float, rng_seed: int | tuple
) -> Partition:
    """Partition a (thresholded) association matrix as a weighted graph."""
    supra = SupraGraph.from_matrix(assoc.values, gamma=gamma)
    if supra.two_mu == 0.0:
        return Partition({key: i for i, key in enumerate(assoc.keys)})
    labels = supra.louvain(np.random.default_rng(rng_seed))
    return Partition({key: int(labels[i]) for i, key in enumerate(assoc.keys)}).relabeled()


def _parallel_map(fn, items, threads: int):
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def representative_partition(
    net: TemporalNetwork,
    params: MultilayerParams,
    ensemble_size: int = 50,
    rng_seed: int = 0,
    binarize: bool = False,
    threads: int = 1,
) -> tuple[Partition, dict]:
    """Stabilized partition: ensemble, thresholded association, max mean AMI.

    Deterministic given (rng_seed, ensemble_size) regardless of worker
    count. Diagnostics carry the pairwise-AMI matrix of the
    re-partitions, the stability score (mean off-diagonal AMI), the
    applied threshold and ensemble module counts.
    """
    if ensemble_size < 2:
        raise ValueError("ensemble_size must be >= 2")
    ensemble = _parallel_map(
        lambda i: optimize(net, params, (rng_seed, 1, i)), range(ensemble_size), threads
    )
    assoc = association_matrix(ensemble)
    n_modules = max(1, round(float(np.mean([p.n_modules for p in ensemble]))))
    threshold = null_threshold(len(assoc.keys), n_modules, ensemble_size, (rng_seed, 2))
    values = assoc.values.copy()
    values[values <= threshold] = 0.0
    if binarize:
        values[values > 0.0] = 1.0
    thresholded = AssociationMatrix(assoc.keys, values, threshold)
    candidates = _parallel_map(
        lambda i: partition_matrix(thresholded, 1.0, (rng_seed, 3, i)),
        range(ensemble_size),
        threads,
    )
    pairwise = np.eye(ensemble_size)
    for i in range(ensemble_size):
        for j in range(i + 1, ensemble_size):
            pairwise[i, j] = pairwise[j, i] = ami(candidates[i], candidates[j])
    mean_ami = (pairwise.sum(axis=1) - 1.0) / (ensemble_size - 1)
    rep_index = int(np.argmax(mean_ami))
    diagnostics = {
        "ensemble_size": ensemble_size,
        "threshold": threshold,
        "null_modules": n_modules,
        "ensemble_module_counts": [p.n_modules for p in ensemble],
        "pairwise_ami": pairwise.tolist(),
        "mean_ami": mean_ami.tolist(),
        "stability": float(mean_ami.mean()),
        "representative_index": rep_index,
        "representative_mean_ami": float(mean_ami[rep_index]),
    }
    return candidates[rep_index], diagnostics
