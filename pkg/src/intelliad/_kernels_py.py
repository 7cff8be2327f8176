"""Pure numpy versions of the compiled kernels in _kernels.pyx.

Signatures and results match the compiled module; ties in nearest-centroid
assignment resolve to the lowest centroid index in both.
"""

import numpy as np


def assign_labels(X, C):
    """Nearest centroid per row of X; returns (labels int64, squared distances)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    C = np.ascontiguousarray(C, dtype=np.float64)
    d2 = ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1).astype(np.int64)
    return labels, d2[np.arange(len(X)), labels]


def update_centroids(X, labels, k):
    """Per-cluster means; rows of empty clusters are zero. Returns (centroids, counts)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    sums = np.zeros((k, X.shape[1]), dtype=np.float64)
    np.add.at(sums, labels, X)
    nonempty = counts > 0
    sums[nonempty] /= counts[nonempty, None]
    return sums, counts


def cooccurrence_counts(tokens, doc_offsets, vocab_size, window):
    """Symmetric co-occurrence counts of token ids within `window` positions.

    doc_offsets has len(docs) + 1 entries; pairs never cross a document
    boundary. Identical ids at distinct positions count on the diagonal.
    """
    tokens = np.asarray(tokens, dtype=np.int64)
    offsets = np.asarray(doc_offsets, dtype=np.int64)
    counts = np.zeros((vocab_size, vocab_size), dtype=np.float64)
    for start, end in zip(offsets[:-1], offsets[1:]):
        doc = tokens[start:end]
        for shift in range(1, window + 1):
            if shift >= len(doc):
                break
            a, b = doc[:-shift], doc[shift:]
            np.add.at(counts, (a, b), 1.0)
            np.add.at(counts, (b, a), 1.0)
    return counts
