import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intelliad.cluster import cluster_phrases, kmeans
from intelliad.embedding import CooccurrencePpmi, FileBacked, PhraseVector, embed_phrases, ppmi
from intelliad.errors import DimensionMismatch, TooFewPoints
from intelliad.reviews import PhraseCandidate


def blobs(seed=0, per=10, spread=0.3):
    rng = np.random.default_rng(seed)
    centers = np.array([[0, 0], [10, 0], [0, 10], [10, 10]], dtype=float)
    X = np.vstack([c + spread * rng.standard_normal((per, 2)) for c in centers])
    return X, np.repeat(np.arange(4), per)


def same_partition(a, b):
    return len(set(zip(a.tolist(), b.tolist()))) == len(set(a.tolist())) == len(set(b.tolist()))


def test_blob_recovery():
    X, truth = blobs()
    res = kmeans(X, k=4, seed=0)
    assert same_partition(res.labels, truth)
    assert res.converged


def test_wcss_non_increasing():
    X, _ = blobs(seed=3, spread=3.0)
    h = kmeans(X, k=4, seed=1).wcss_history
    assert all(b <= a + 1e-9 for a, b in zip(h, h[1:]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 6))
def test_wcss_monotone_random(seed, k):
    X = np.random.default_rng(seed).standard_normal((25, 3))
    h = kmeans(X, k=k, seed=seed).wcss_history
    assert all(b <= a + 1e-9 for a, b in zip(h, h[1:]))


def test_repeatable():
    X, _ = blobs(seed=2, spread=2.0)
    a, b = kmeans(X, seed=7), kmeans(X, seed=7)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.centroids, b.centroids)
    assert a.wcss_history == b.wcss_history


def test_k1_single_cluster():
    X, _ = blobs()
    vecs = [PhraseVector(PhraseCandidate((f"w{i}", "x"), 1), x) for i, x in enumerate(X)]
    clusters, _ = cluster_phrases(vecs, k=1)
    assert list(clusters) == [0] and len(clusters[0]) == 40


def test_default_k_is_four():
    X, _ = blobs()
    vecs = [PhraseVector(PhraseCandidate((f"w{i}", "x"), 1), x) for i, x in enumerate(X)]
    clusters, _ = cluster_phrases(vecs)
    assert len(clusters) == 4


def test_duplicate_points_no_empty_cluster():
    X = np.zeros((6, 2))
    res = kmeans(X, k=3, seed=0)
    assert np.bincount(res.labels, minlength=3).min() >= 1


def test_too_few_points():
    with pytest.raises(TooFewPoints):
        kmeans(np.zeros((2, 2)), k=3)


def test_ppmi_hand_case():
    c = np.array([[0, 2], [2, 0]], dtype=float)
    # p(i,j)=0.5, p(i)=p(j)=0.5 -> pmi log 2
    assert np.allclose(ppmi(c), [[0, np.log(2)], [np.log(2), 0]])


def test_ppmi_embedding_deterministic():
    docs = [["battery", "drain", "fast"]]
    a = CooccurrencePpmi(docs, dim=2).vectors
    b = CooccurrencePpmi(docs, dim=2).vectors
    assert np.array_equal(a, b)


def _cos(u, v):
    return float(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))


def test_disjoint_vocabularies_separate():
    g1 = ["battery", "drain", "charge", "power"]
    g2 = ["data", "wifi", "network", "bandwidth"]
    rng = np.random.default_rng(0)
    docs = [list(rng.permutation(g)) for g in (g1, g2) for _ in range(30)]
    emb = CooccurrencePpmi(docs, dim=4)
    intra = min(_cos(emb.word_vector(a), emb.word_vector(b)) for g in (g1, g2)
                for a in g for b in g if a != b)
    inter = max(_cos(emb.word_vector(a), emb.word_vector(b)) for a in g1 for b in g2)
    assert inter < intra


def test_file_backed_mean(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("2 3\nbattery 1 0 2\ndrain 3 2 0\n")
    out = embed_phrases([PhraseCandidate(("battery", "drain"), 4)], FileBacked(p))
    assert np.allclose(out[0].vector, [2, 1, 1])


def test_file_backed_missing_word_zero(tmp_path, caplog):
    p = tmp_path / "v.txt"
    p.write_text("battery 1 1\n")
    out = embed_phrases([PhraseCandidate(("battery", "zzz"), 1)], FileBacked(p))
    assert np.allclose(out[0].vector, [0.5, 0.5])
    assert "zzz" in caplog.text


def test_file_backed_ragged(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("a 1 2\nb 1\n")
    with pytest.raises(DimensionMismatch):
        FileBacked(p)
