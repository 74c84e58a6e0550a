"""Exact Ising/Boltzmann inference on small hypergraphs by full enumeration.

The model is p(sigma) proportional to exp(sum_e J_e s_e(sigma) + sum_i h_i sigma_i),
where s_e is the product of the spins on edge e. Only the edge couplings are
treated as parameters unless ``include_fields`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ResourceError
from .hypergraph import Hypergraph, TopologyId, catalog_graph

MAX_NODES = 20


@dataclass(frozen=True)
class ExpFamilyModel:
    host: Hypergraph
    couplings: tuple[float, ...]
    fields: tuple[float, ...]
    include_fields: bool = False

    def __init__(
        self,
        host: Hypergraph,
        couplings: Sequence[float],
        fields: Sequence[float] | None = None,
        include_fields: bool = False,
    ):
        couplings = tuple(float(j) for j in couplings)
        fields = tuple(0.0 for _ in range(host.node_count)) if fields is None else tuple(
            float(h) for h in fields
        )
        if len(couplings) != host.edge_count:
            raise DomainError(f"need {host.edge_count} couplings, got {len(couplings)}")
        if len(fields) != host.node_count:
            raise DomainError(f"need {host.node_count} fields, got {len(fields)}")
        object.__setattr__(self, "host", host)
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "fields", fields)
        object.__setattr__(self, "include_fields", bool(include_fields))

    @classmethod
    def uniform(cls, topology: TopologyId | str | Hypergraph, J: float) -> "ExpFamilyModel":
        """Zero-field model with the same coupling J on every edge."""
        host = topology if isinstance(topology, Hypergraph) else catalog_graph(topology)
        return cls(host, [J] * host.edge_count)

    @property
    def dim(self) -> int:
        return self.host.edge_count + (self.host.node_count if self.include_fields else 0)

    def edge_masks(self) -> np.ndarray:
        masks = [sum(1 << i for i in e) for e in self.host.edges]
        return np.array(masks, dtype=np.uint64)


def _check_size(model: ExpFamilyModel) -> None:
    if model.host.node_count > MAX_NODES:
        raise ResourceError(
            f"exact enumeration limited to {MAX_NODES} nodes, model has {model.host.node_count}"
        )


def moments(model: ExpFamilyModel, backend: str | None = None):
    """Return (log Z, E[s], E[s s^T]) for the sufficient statistics s."""
    _check_size(model)
    k = kernels.get(backend)
    return k.ising_moments(
        model.host.node_count,
        model.edge_masks(),
        np.asarray(model.couplings),
        np.asarray(model.fields),
        model.include_fields,
    )


def log_partition(model: ExpFamilyModel, backend: str | None = None) -> float:
    return moments(model, backend)[0]


def sufficient_statistics(model: ExpFamilyModel, state: Sequence[int]) -> np.ndarray:
    """Edge products of a +/-1 spin state, followed by the spins if fields are parameters."""
    spins = np.asarray(state)
    if spins.shape != (model.host.node_count,) or not np.all(np.abs(spins) == 1):
        raise DomainError(f"state must be {model.host.node_count} entries of +1/-1, got {state!r}")
    stats = [float(np.prod(spins[list(e)])) for e in model.host.edges]
    if model.include_fields:
        stats.extend(float(s) for s in spins)
    return np.array(stats)


def fisher(model: ExpFamilyModel, backend: str | None = None) -> np.ndarray:
    """Fisher information matrix: the covariance of the sufficient statistics."""
    _, mean, second = moments(model, backend)
    cov = second - np.outer(mean, mean)
    return 0.5 * (cov + cov.T)
