"""Seeded k-means (k-means++ initialisation, Lloyd iterations)."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import TooFewPoints

DEFAULT_K = 4


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    wcss_history: list    # within-cluster sum of squares after each iteration
    n_iter: int
    converged: bool

    @property
    def wcss(self):
        return self.wcss_history[-1]


def kmeans_pp_init(X, k, rng):
    n = len(X)
    chosen = [int(rng.integers(n))]
    d2 = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))
        chosen.append(idx)
        d2 = np.minimum(d2, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _repair_empty(X, labels, d2, k):
    """Move the farthest point of a multi-member cluster into each empty cluster."""
    counts = np.bincount(labels, minlength=k)
    for j in np.flatnonzero(counts == 0):
        movable = counts[labels] > 1
        if not movable.any():
            break
        cand = np.where(movable, d2, -1.0)
        i = int(np.argmax(cand))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] += 1
        d2[i] = 0.0
    return labels


def kmeans(X, k=DEFAULT_K, seed=0, max_iter=300, tol=1e-6):
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D array")
    if k < 1 or len(X) < k:
        raise TooFewPoints(f"k-means with k={k} needs at least {max(k, 1)} points, got {len(X)}")
    rng = np.random.default_rng(seed)
    centroids = kmeans_pp_init(X, k, rng)
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        labels, d2 = kernels.assign_labels(X, centroids)
        labels = _repair_empty(X, labels, d2.copy(), k)
        new_centroids, _ = kernels.update_centroids(X, labels, k)
        history.append(float(((X - new_centroids[labels]) ** 2).sum()))
        shift = np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max()
        centroids = new_centroids
        if shift < tol:
            converged = True
            break
    return KMeansResult(labels, centroids, history, it, converged)


def cluster_phrases(vectors, k=DEFAULT_K, seed=0, max_iter=300, tol=1e-6):
    """Group PhraseVectors into k clusters: {cluster id: [PhraseCandidate, ...]}."""
    if len(vectors) < max(k, 1):
        raise TooFewPoints(f"cannot form {k} clusters from {len(vectors)} phrases")
    X = np.vstack([v.vector for v in vectors])
    result = kmeans(X, k=k, seed=seed, max_iter=max_iter, tol=tol)
    clusters = {j: [] for j in range(k)}
    for v, label in zip(vectors, result.labels):
        clusters[int(label)].append(v.phrase)
    return clusters, result
