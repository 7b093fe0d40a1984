"""NODF nestedness and the occupation-probability null ensemble.

NODF scores each ordered row pair (i, j) with fill(i) > fill(j) > 0 as
100 * |overlap| / fill(j), zero otherwise, repeats the same over column
pairs, and averages over all C(R,2) + C(C,2) pairs. Sums use exact
(fsum) accumulation so the result does not depend on summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .netcore import TemporalNetwork, aggregate_window


@dataclass(frozen=True)
class NestednessReport:
    """NODF of one window versus its occupation-null ensemble."""

    year: int
    nodf: float | None
    null_mean: float | None
    null_std: float | None
    z_score: float | None
    n_null: int


def _pair_scores(matrix: np.ndarray) -> list[float]:
    """Scores of all ordered same-axis pairs of a binary matrix's rows."""
    m = np.asarray(matrix)
    overlap = (m @ m.T).astype(float)
    fills = m.sum(axis=1).astype(float)
    n = m.shape[0]
    scores: list[float] = []
    for i in range(n - 1):
        for j in range(i + 1, n):
            lo = min(fills[i], fills[j])
            if lo > 0 and fills[i] != fills[j]:
                scores.append(100.0 * overlap[i, j] / lo)
            else:
                scores.append(0.0)
    return scores


def nodf(matrix: np.ndarray) -> float:
    """NODF nestedness of a binary bipartite incidence matrix, in [0, 100].

    Rows and columns with zero sum are retained and contribute
    zero-score pairs.

    Raises
    ------
    ValueError
        If the matrix has fewer than 2 rows and fewer than 2 columns.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.size == 0:
        raise ValueError("matrix must be nonempty and 2-dimensional")
    if m.shape[0] < 2 and m.shape[1] < 2:
        raise ValueError("matrix needs at least 2 rows or 2 columns")
    m = (m != 0).astype(np.int64)
    scores = _pair_scores(m) + _pair_scores(m.T)
    return math.fsum(scores) / len(scores)


def occupation_probabilities(matrix: np.ndarray) -> np.ndarray:
    """Cell probabilities p_ij = (row fill fraction + column fill fraction) / 2."""
    m = (np.asarray(matrix) != 0).astype(float)
    row_f = m.mean(axis=1)
    col_f = m.mean(axis=0)
    return (row_f[:, None] + col_f[None, :]) / 2.0


def null_occupation_sample(matrix: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One draw from the occupation-probability null model of a matrix."""
    p = occupation_probabilities(matrix)
    return (rng.random(p.shape) < p).astype(np.int64)


def window_matrix(
    net: TemporalNetwork, center_year: int, width: int
) -> tuple[np.ndarray, list[str], list[str]]:
    """Incidence matrix of the aggregated window over actors present in it."""
    sl = aggregate_window(net, center_year, width)
    nags = sorted({a for a, _ in sl.links})
    hss = sorted({b for _, b in sl.links})
    index_a = {aid: i for i, aid in enumerate(nags)}
    index_b = {aid: i for i, aid in enumerate(hss)}
    m = np.zeros((len(nags), len(hss)), dtype=np.int64)
    for a, b in sl.links:
        m[index_a[a], index_b[b]] = 1
    return m, nags, hss


def _window_report(
    net: TemporalNetwork, year: int, window_width: int, n_null: int, rng_seed: int
) -> NestednessReport:
    m, _, _ = window_matrix(net, year, window_width)
    if m.size == 0 or (m.shape[0] < 2 and m.shape[1] < 2):
        return NestednessReport(year, None, None, None, None, n_null)
    observed = nodf(m)
    null_scores = np.empty(n_null)
    for i in range(n_null):
        rng = np.random.default_rng((rng_seed, year, i))
        null_scores[i] = nodf(null_occupation_sample(m, rng))
    mean = float(null_scores.mean())
    std = float(null_scores.std())
    z = (observed - mean) / std if std > 0 else None
    return NestednessReport(year, observed, mean, std, z, n_null)


def nestedness_series(
    net: TemporalNetwork,
    window_width: int = 5,
    n_null: int = 100,
    rng_seed: int = 0,
    threads: int = 1,
) -> list[NestednessReport]:
    """NODF of each sliding window against its occupation-null ensemble.

    Null draws are seeded per (seed, year, replicate) so the series is
    deterministic regardless of evaluation order or worker count.
    Degenerate windows (matrix smaller than 2x2 in both axes, or empty)
    yield a no-value report; a zero-spread null ensemble leaves the
    z-score undefined.
    """
    if n_null < 2:
        raise ValueError("n_null must be >= 2")
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(
                pool.map(
                    lambda year: _window_report(net, year, window_width, n_null, rng_seed),
                    net.years,
                )
            )
    return [_window_report(net, year, window_width, n_null, rng_seed) for year in net.years]
