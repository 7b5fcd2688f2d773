"""Synthetic graphical models for validation and benchmarks.

Randomness uses numpy's default 64-bit generator (PCG64 via
numpy.random.default_rng); every draw is reproducible from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import DataMatrix
from .errors import ConfigError, InfeasibleDegreeError, NotPositiveDefiniteError, ShapeError

MODEL_KINDS = ("er", "ar1", "hub")

# Redraw budget per node when filling degree targets in the hub model.
_REDRAW_CAP = 100


@dataclass(frozen=True)
class PrecisionModelSpec:
    """A random-graph precision model.

    kind "er"  : each unordered pair is an edge independently with edge_prob.
    kind "ar1" : chain graph, ones on the first off-diagonals.
    kind "hub" : node 0 is connected to ceil(hub_fraction*(p-1)) random nodes;
                 every other node draws a degree target uniformly from
                 [min_deg, max_deg] and fills it with random non-hub partners.
    """

    kind: str
    p: int
    seed: int = 0
    edge_prob: float = 0.05
    hub_fraction: float = 0.2
    min_deg: int = 1
    max_deg: int = 3

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {self.kind!r}")
        if self.p < 2:
            raise ConfigError("p must be at least 2")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ConfigError("edge_prob must lie in [0, 1]")
        if not 0.0 <= self.hub_fraction <= 1.0:
            raise ConfigError("hub_fraction must lie in [0, 1]")
        if not 1 <= self.min_deg <= self.max_deg:
            raise ConfigError("need 1 <= min_deg <= max_deg")


@dataclass(frozen=True)
class GroundTruth:
    """A sampled model: adjacency, true precision, covariance, and partial correlations."""

    adjacency: np.ndarray
    omega_star: np.ndarray
    sigma_star: np.ndarray
    q_star: np.ndarray


def gen_adjacency(spec: PrecisionModelSpec) -> np.ndarray:
    """Draw the 0/1 adjacency matrix for the spec (symmetric, zero diagonal)."""
    p = spec.p
    rng = np.random.default_rng(spec.seed)
    A = np.zeros((p, p), dtype=int)

    if spec.kind == "er":
        ju, ku = np.triu_indices(p, k=1)
        hit = rng.random(ju.size) < spec.edge_prob
        A[ju[hit], ku[hit]] = 1
        A[ku[hit], ju[hit]] = 1
        return A

    if spec.kind == "ar1":
        idx = np.arange(p - 1)
        A[idx, idx + 1] = 1
        A[idx + 1, idx] = 1
        return A

    # hub
    if p < 3:
        raise InfeasibleDegreeError("hub model needs p >= 3")
    if spec.min_deg > p - 2:
        raise InfeasibleDegreeError(
            f"min_deg {spec.min_deg} exceeds the {p - 2} available non-hub partners"
        )
    hub_deg = math.ceil(spec.hub_fraction * (p - 1))
    if hub_deg > 0:
        partners = rng.choice(np.arange(1, p), size=hub_deg, replace=False)
        A[0, partners] = 1
        A[partners, 0] = 1

    # Degrees within the non-hub subgraph; hub attachments are not counted
    # toward the per-node targets, so counted degrees may exceed max_deg by
    # the hub edges alone.
    sub_deg = np.zeros(p, dtype=int)
    for i in range(1, p):
        target = int(rng.integers(spec.min_deg, spec.max_deg + 1))
        tries = 0
        while sub_deg[i] < target and tries < _REDRAW_CAP:
            k = int(rng.integers(1, p))
            # Self-loops, duplicates, and saturated partners are collisions.
            if k == i or A[i, k] == 1 or sub_deg[k] >= spec.max_deg:
                tries += 1
                continue
            A[i, k] = A[k, i] = 1
            sub_deg[i] += 1
            sub_deg[k] += 1
    return A


def adjacency_to_precision(adjacency, seed: int) -> GroundTruth:
    """Turn an adjacency matrix into a positive-definite precision matrix.

    Each unordered edge gets a fair +-1 sign; the diagonal is
    Omega_jj = 1 + sum_k |Omega_jk| (strict diagonal dominance, hence PD).
    Sigma_star is the dense inverse; q_star = -T Omega_star T with
    T = diag(1/sqrt(Omega_jj)).
    """
    A = np.asarray(adjacency)
    p = A.shape[0]
    if A.ndim != 2 or A.shape[1] != p:
        raise ShapeError("adjacency must be square")
    rng = np.random.default_rng(seed)
    ju, ku = np.triu_indices(p, k=1)
    signs = np.where(rng.random(ju.size) < 0.5, -1.0, 1.0)
    omega = np.zeros((p, p))
    omega[ju, ku] = signs * A[ju, ku]
    omega = omega + omega.T
    np.fill_diagonal(omega, 1.0 + np.sum(np.abs(omega), axis=1))

    sigma = np.linalg.solve(omega, np.eye(p))
    sigma = 0.5 * (sigma + sigma.T)
    tau = 1.0 / np.sqrt(np.diag(omega))
    q = -np.outer(tau, tau) * omega
    np.fill_diagonal(q, -1.0)
    return GroundTruth(adjacency=A.copy(), omega_star=omega, sigma_star=sigma, q_star=q)


def sample_gaussian(sigma, n: int, seed: int) -> DataMatrix:
    """Draw n rows from N(0, sigma) via the Cholesky factor."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise ShapeError("sigma must be square")
    if n < 1:
        raise ShapeError("n must be at least 1")
    try:
        C = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"covariance is not positive definite: {exc}") from exc
    Z = np.random.default_rng(seed).standard_normal((n, sigma.shape[0]))
    return DataMatrix(Z @ C.T, centered=False)


def make_ground_truth(spec: PrecisionModelSpec) -> GroundTruth:
    """Adjacency from spec.seed, edge signs from the derived stream (spec.seed, 1)."""
    A = gen_adjacency(spec)
    return adjacency_to_precision(A, seed=np.random.SeedSequence((spec.seed, 1)))
