"""guildnet: analysis toolkit for temporal bipartite two-guild networks.

Measures nestedness, temporal modular structure, assembly/disassembly
degree biases, module persistence and actor roles on yearly bipartite
slices, with planted-structure synthetic generators to validate every
estimator. See the CLI (``guildnet --help``) for file-based pipelines.
"""

__version__ = "0.1.0"

from .netcore import (
    ACTIVE,
    BOTH,
    PASSIVE,
    ActorId,
    Guild,
    LinkKind,
    LinkType,
    Slice,
    TemporalNetwork,
    aggregate_window,
    component_count,
    connectance,
    degree,
    project_subnetwork,
)
from .modularity import MultilayerParams, Partition, optimize, quality, yearly_q
from .consensus import ami, association_matrix, representative_partition
from .nestedness import NestednessReport, nestedness_series, nodf
from .estimators import ConsensusCommunities, TemporalCommunities

__all__ = [
    "ACTIVE",
    "BOTH",
    "PASSIVE",
    "ActorId",
    "ConsensusCommunities",
    "Guild",
    "LinkKind",
    "LinkType",
    "MultilayerParams",
    "NestednessReport",
    "Partition",
    "Slice",
    "TemporalCommunities",
    "TemporalNetwork",
    "aggregate_window",
    "ami",
    "association_matrix",
    "component_count",
    "connectance",
    "degree",
    "nestedness_series",
    "nodf",
    "optimize",
    "project_subnetwork",
    "quality",
    "representative_partition",
    "yearly_q",
]
