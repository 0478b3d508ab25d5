"""2D embedding of combined vectors for the scatter overview.

Exact (quadratic) t-SNE: per-point Gaussian bandwidths calibrated to a
target perplexity by binary search, symmetrized joint probabilities,
Student-t low-dimensional kernel, and KL gradient descent with momentum and
adaptive gains.  Determinism is part of the contract: the initial jitter of
every point is derived from a hash of its own data plus the seed, and the
whole computation runs in a canonical data-derived order, so equal inputs
give bit-identical outputs regardless of input order.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, TooFewPoints
from .features import CombinedVector

_MACHINE_EPS = np.finfo(np.float64).eps
_EXAGGERATION_ITERS = 250
_MOMENTUM_SWITCH_ITER = 250
_PERPLEXITY_TOLERANCE = 1e-7
_BINARY_SEARCH_STEPS = 80


@dataclass(frozen=True)
class ProjectionConfig:
    """t-SNE hyperparameters; defaults follow common practice.

    ``perplexity`` is additionally clamped below n/3 at run time for small
    inputs.  ``early_exaggeration`` multiplies the attraction for the first
    250 iterations (or the first half of shorter runs).
    """

    perplexity: float = 30.0
    iterations: int = 500
    learning_rate: float = 200.0
    seed: int = 0
    early_exaggeration: float = 12.0

    def __post_init__(self):
        if self.perplexity < 2:
            raise ValueError("perplexity must be >= 2")
        if self.iterations < 50:
            raise ValueError("iterations must be >= 50")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.early_exaggeration < 1:
            raise ValueError("early_exaggeration must be >= 1")

    def cache_key(self) -> str:
        blob = (
            f"{self.perplexity!r}|{self.iterations}|{self.learning_rate!r}"
            f"|{self.seed}|{self.early_exaggeration!r}"
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class ProjectionPoint:
    """One embedded snapshot; ``time_rank`` orders the time polyline."""

    snapshot_id: str
    x: float
    y: float
    time_rank: int


def project(
    vectors: Sequence[CombinedVector],
    cfg: ProjectionConfig,
    ids: Sequence[str] | None = None,
) -> list[ProjectionPoint]:
    """Embed combined vectors into 2D, one point per input in input order."""
    matrix = _as_matrix(vectors)
    if ids is None:
        ids = [str(i) for i in range(matrix.shape[0])]
    elif len(ids) != matrix.shape[0]:
        raise DimensionMismatch("one id per vector required")
    coords, _, _ = embed(matrix, cfg)
    return [
        ProjectionPoint(snapshot_id=ids[i], x=float(x), y=float(y), time_rank=i)
        for i, (x, y) in enumerate(coords)
    ]


def _as_matrix(vectors: Sequence[CombinedVector]) -> np.ndarray:
    if len(vectors) < 2:
        raise TooFewPoints("projection needs at least two vectors")
    rows = [v.combined() for v in vectors]
    length = rows[0].shape[0]
    if any(row.shape[0] != length for row in rows):
        raise DimensionMismatch("combined vectors have inconsistent lengths")
    return np.asarray(rows, dtype=np.float64)


def embed(data: np.ndarray, cfg: ProjectionConfig) -> tuple[np.ndarray, float, float]:
    """Run t-SNE on row vectors; returns (coords, initial KL, final KL).

    Both KL values are measured against the un-exaggerated joint
    distribution, the initial one at the jittered starting layout.
    """
    data = np.ascontiguousarray(np.asarray(data, dtype=np.float64))
    n = data.shape[0]
    if n < 2:
        raise TooFewPoints("projection needs at least two vectors")

    # Canonical processing order derived from the data itself: any input
    # permutation maps to the same internal arrays, making the embedding a
    # function of the multiset of vectors rather than their order.
    digests = [_point_digest(cfg.seed, row) for row in data]
    order = sorted(range(n), key=lambda i: (digests[i], i))
    inverse = np.empty(n, dtype=np.intp)
    inverse[order] = np.arange(n)

    canonical = data[order]
    P = _joint_probabilities(canonical, _effective_perplexity(cfg.perplexity, n))
    coords = _initial_layout([digests[i] for i in order])

    coords, kl_initial, kl_final = _gradient_descent(coords, P, cfg)
    coords = coords - coords.mean(axis=0)
    return coords[inverse], kl_initial, kl_final


def _effective_perplexity(perplexity: float, n: int) -> float:
    return max(2.0, min(perplexity, (n - 1) / 3.0))


def _point_digest(seed: int, row: np.ndarray) -> bytes:
    h = hashlib.sha256()
    h.update(seed.to_bytes(8, "little", signed=True))
    h.update(row.tobytes())
    return h.digest()


def _initial_layout(digests: Sequence[bytes]) -> np.ndarray:
    """Small-variance Gaussian jitter, two coordinates per point digest."""
    coords = np.empty((len(digests), 2), dtype=np.float64)
    for i, digest in enumerate(digests):
        u1 = (int.from_bytes(digest[:8], "little") + 1) / (2**64 + 2)
        u2 = int.from_bytes(digest[8:16], "little") / 2**64
        radius = math.sqrt(-2.0 * math.log(u1)) * 1e-4
        coords[i, 0] = radius * math.cos(2 * math.pi * u2)
        coords[i, 1] = radius * math.sin(2 * math.pi * u2)
    return coords


def _squared_distances(data: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    norms = np.einsum("ij,ij->i", data, data)
    d2 = np.matmul(data, data.T, out=out)
    d2 *= -2.0
    d2 += norms[:, None]
    d2 += norms[None, :]
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def _joint_probabilities(data: np.ndarray, perplexity: float) -> np.ndarray:
    """Symmetrized p_ij from perplexity-calibrated conditional Gaussians."""
    d2 = _squared_distances(data)
    n = data.shape[0]
    target_entropy = math.log(perplexity)
    cond = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        cond[i] = _calibrated_row(d2[i], i, target_entropy)
    joint = cond + cond.T
    joint /= max(joint.sum(), _MACHINE_EPS)
    np.maximum(joint, _MACHINE_EPS, out=joint)
    np.fill_diagonal(joint, 0.0)
    return joint


def _calibrated_row(sqdist: np.ndarray, i: int, target_entropy: float) -> np.ndarray:
    """Binary-search the precision beta so row entropy matches the target."""
    beta, beta_min, beta_max = 1.0, -np.inf, np.inf
    row = np.zeros_like(sqdist)
    for _ in range(_BINARY_SEARCH_STEPS):
        np.exp(-sqdist * beta, out=row)
        row[i] = 0.0
        total = row.sum()
        if total <= 0.0:
            entropy = 0.0
        else:
            # H = log(sum) + beta * E[d^2] in nats
            entropy = math.log(total) + beta * float(row @ sqdist) / total
        diff = entropy - target_entropy
        if abs(diff) <= _PERPLEXITY_TOLERANCE:
            break
        if diff > 0:
            beta_min = beta
            beta = beta * 2.0 if beta_max == np.inf else (beta + beta_max) / 2.0
        else:
            beta_max = beta
            beta = beta / 2.0 if beta_min == -np.inf else (beta + beta_min) / 2.0
    np.exp(-sqdist * beta, out=row)
    row[i] = 0.0
    total = row.sum()
    if total > 0.0:
        row /= total
    return row


def _student_t_weights(coords: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    """Unnormalized Student-t affinities 1/(1 + ||y_i - y_j||^2), zero diagonal."""
    weights = _squared_distances(coords, out=out)
    weights += 1.0
    np.reciprocal(weights, out=weights)
    np.fill_diagonal(weights, 0.0)
    return weights


def _kl_divergence(p: np.ndarray, weights: np.ndarray) -> float:
    q = weights / max(weights.sum(), _MACHINE_EPS)
    np.maximum(q, _MACHINE_EPS, out=q)
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def _gradient_descent(
    coords: np.ndarray, P: np.ndarray, cfg: ProjectionConfig
) -> tuple[np.ndarray, float, float]:
    n = coords.shape[0]
    exaggeration_iters = min(_EXAGGERATION_ITERS, cfg.iterations // 2)
    update = np.zeros_like(coords)
    gains = np.ones_like(coords)
    exaggerated = P * cfg.early_exaggeration
    weights = np.empty((n, n), dtype=np.float64)
    pq = np.empty((n, n), dtype=np.float64)

    kl_initial = _kl_divergence(P, _student_t_weights(coords, out=weights))

    for iteration in range(cfg.iterations):
        p_eff = exaggerated if iteration < exaggeration_iters else P
        _student_t_weights(coords, out=weights)
        # pq = (p_eff - weights/Z) * weights, built in place
        np.multiply(weights, -1.0 / max(weights.sum(), _MACHINE_EPS), out=pq)
        pq += p_eff
        pq *= weights
        # grad_i = 4 * sum_j pq_ij (y_i - y_j)
        grad = 4.0 * (pq.sum(axis=1)[:, None] * coords - pq @ coords)

        same_direction = (grad > 0) == (update > 0)
        gains[~same_direction] += 0.2
        gains[same_direction] *= 0.8
        np.clip(gains, 0.01, None, out=gains)

        momentum = 0.5 if iteration < _MOMENTUM_SWITCH_ITER else 0.8
        update = momentum * update - cfg.learning_rate * (gains * grad)
        coords = coords + update
        coords = coords - coords.mean(axis=0)

    kl_final = _kl_divergence(P, _student_t_weights(coords, out=weights))
    return coords, kl_initial, kl_final
