"""Word and phrase vectors for phrase clustering.

Two providers: a deterministic PPMI co-occurrence embedding built from the
review corpus itself, and vectors loaded from a word2vec-style text file.
A phrase vector is the mean of its word vectors.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import DimensionMismatch

log = logging.getLogger(__name__)


@dataclass
class PhraseVector:
    phrase: object   # PhraseCandidate
    vector: np.ndarray


class CooccurrencePpmi:
    """PPMI word vectors reduced to `dim` components by SVD.

    Component signs are fixed so the largest-magnitude entry of each singular
    vector is positive; components beyond the matrix rank are zero.
    """

    def __init__(self, docs, dim, window=2):
        self.dim = int(dim)
        self.window = int(window)
        vocab = sorted({w for doc in docs for w in doc})
        self.index = {w: i for i, w in enumerate(vocab)}
        tokens = np.fromiter((self.index[w] for doc in docs for w in doc), dtype=np.int64)
        offsets = np.cumsum([0] + [len(doc) for doc in docs], dtype=np.int64)
        counts = kernels.cooccurrence_counts(tokens, offsets, len(vocab), self.window)
        self.vectors = self._reduce(ppmi(counts), self.dim)

    @staticmethod
    def _reduce(m, dim):
        out = np.zeros((m.shape[0], dim))
        if m.size == 0:
            return out
        u, s, _vt = np.linalg.svd(m)
        r = min(dim, int((s > 1e-12 * max(s[0], 1.0)).sum()))
        for j in range(r):
            col = u[:, j]
            if col[np.argmax(np.abs(col))] < 0:
                col = -col
            out[:, j] = col * s[j]
        return out

    def word_vector(self, word):
        i = self.index.get(word)
        return None if i is None else self.vectors[i]


def ppmi(counts):
    """Positive pointwise mutual information of a symmetric count matrix."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return np.zeros_like(counts)
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.log(counts * total / np.outer(row, col))
    pmi[~np.isfinite(pmi)] = 0.0
    return np.maximum(pmi, 0.0)


class FileBacked:
    """Vectors from a text file: optional "<count> <dim>" header, then "word v1 v2 ..."."""

    def __init__(self, path):
        self.table = {}
        dim = None
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        for n, line in enumerate(lines, start=1):
            parts = line.split()
            if not parts:
                continue
            if n == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            vec = np.array([float(x) for x in parts[1:]])
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise DimensionMismatch(f"{path}:{n}: vector has {len(vec)} entries, expected {dim}")
            self.table[parts[0]] = vec
        self.dim = dim or 0

    def word_vector(self, word):
        return self.table.get(word)


def embed_phrases(candidates, provider, dim=None):
    """One vector per phrase candidate: the mean of its word vectors.

    Words unknown to the provider contribute a zero vector (with a warning).
    """
    dim = provider.dim if dim is None else int(dim)
    if dim != provider.dim:
        raise DimensionMismatch(f"provider dimension {provider.dim} != requested {dim}")
    out = []
    for cand in candidates:
        parts = []
        for word in cand.tokens:
            vec = provider.word_vector(word)
            if vec is None:
                log.warning("no vector for %r; using zeros", word)
                vec = np.zeros(dim)
            parts.append(vec)
        out.append(PhraseVector(cand, np.mean(parts, axis=0)))
    return out
