"""Scikit-learn compatible wrappers around the community detectors.

These expose the temporal optimizer and the consensus pipeline through
the familiar ``fit`` / ``labels_`` / ``get_params`` surface so they plug
into ecosystem tooling (e.g. ``sklearn.metrics`` partition scores). The
fitted sample axis is the network's canonical (actor, year) key list,
available as ``keys_``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .consensus import representative_partition
from .modularity import MultilayerParams, optimize
from .netcore import TemporalNetwork


def _validate_network(net) -> list:
    if not isinstance(net, TemporalNetwork):
        raise TypeError("expected a TemporalNetwork")
    keys = net.present_pairs()
    if not keys:
        raise ValueError("network has no present actors")
    return keys


class TemporalCommunities(ClusterMixin, BaseEstimator):
    """Multislice Louvain as a clusterer over (actor, year) nodes."""

    def __init__(self, gamma: float = 1.0, omega: float = 1.0,
                 bipartite_null: bool = False, seed: int = 0):
        self.gamma = gamma
        self.omega = omega
        self.bipartite_null = bipartite_null
        self.seed = seed

    def fit(self, X: TemporalNetwork, y=None) -> "TemporalCommunities":
        keys = _validate_network(X)
        params = MultilayerParams(self.gamma, self.omega, self.bipartite_null)
        self.partition_ = optimize(X, params, self.seed)
        self.keys_ = keys
        self.labels_ = np.array([self.partition_.assignment[k] for k in keys])
        self.n_modules_ = self.partition_.n_modules
        return self

    def fit_predict(self, X: TemporalNetwork, y=None) -> np.ndarray:
        return self.fit(X).labels_


class ConsensusCommunities(ClusterMixin, BaseEstimator):
    """Stabilized representative partition as a clusterer."""

    def __init__(self, gamma: float = 1.0, omega: float = 1.0,
                 ensemble_size: int = 50, seed: int = 0, binarize: bool = False):
        self.gamma = gamma
        self.omega = omega
        self.ensemble_size = ensemble_size
        self.seed = seed
        self.binarize = binarize

    def fit(self, X: TemporalNetwork, y=None) -> "ConsensusCommunities":
        keys = _validate_network(X)
        params = MultilayerParams(self.gamma, self.omega)
        self.partition_, self.diagnostics_ = representative_partition(
            X, params, self.ensemble_size, self.seed, self.binarize
        )
        self.keys_ = keys
        self.labels_ = np.array([self.partition_.assignment[k] for k in keys])
        self.n_modules_ = self.partition_.n_modules
        return self

    def fit_predict(self, X: TemporalNetwork, y=None) -> np.ndarray:
        return self.fit(X).labels_
