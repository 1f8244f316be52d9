"""Distributional word profiles and the similarity measures over them.

Three profiles are built per word: a sentence-level context vector (the
top-K co-occurring lemmas), a dense skip-gram embedding, and a distribution
over document categories.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse

from .errors import FormatError
from .resources import TaggedCorpus

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Co-occurrence and context vectors
# ---------------------------------------------------------------------------


def cooccurrence_counts(corpus: TaggedCorpus) -> dict[str, Counter]:
    """Symmetric sentence-level co-occurrence counts over token instances.

    Every unordered pair of token positions in a sentence contributes one
    count to its two lemmas; pairs of the same lemma are skipped.
    """
    counts: dict[str, Counter] = defaultdict(Counter)
    for sent in corpus.sentences():
        bag = Counter(tok.lemma for tok in sent)
        if len(bag) < 2:
            continue
        items = list(bag.items())
        for i, (a, ca) in enumerate(items):
            row = counts[a]
            for b, cb in items:
                if b != a:
                    row[b] += ca * cb
    return dict(counts)


def build_context_vectors(
    corpus: TaggedCorpus, k: int = 100, min_count: int = 1
) -> dict[str, frozenset[str]]:
    """Top-``k`` co-occurring lemmas for every lemma seen ``min_count`` times.

    Ties at the cutoff are broken by ascending lemma.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    freq = corpus.lemma_counts()
    co = cooccurrence_counts(corpus)
    cvs = {}
    for lemma, n in freq.items():
        if n < min_count:
            continue
        row = co.get(lemma)
        if not row:
            cvs[lemma] = frozenset()
            continue
        ranked = sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))
        cvs[lemma] = frozenset(w for w, _ in ranked[:k])
    return cvs


def save_context_vectors(cvs: Mapping[str, Iterable[str]], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lemma in sorted(cvs):
            fh.write("\t".join([lemma, *sorted(cvs[lemma])]) + "\n")


def load_context_vectors(path) -> dict[str, frozenset[str]]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            cols = line.split("\t")
            if not cols[0]:
                raise FormatError("empty lemma", path, lineno)
            out[cols[0]] = frozenset(c for c in cols[1:] if c)
    return out


def jaccard(a: Iterable, b: Iterable) -> float:
    a, b = set(a), set(b)
    union = len(a | b)
    if union == 0:
        return 0.0
    return len(a & b) / union


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------


@dataclass
class EmbeddingTable:
    words: tuple[str, ...]
    vectors: np.ndarray
    losses: list[float] = field(default_factory=list, compare=False)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.words):
            raise ValueError("vectors must be a (vocab, dim) matrix")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("embedding table contains non-finite values")
        self._index = {w: i for i, w in enumerate(self.words)}

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        return word in self._index

    def __getitem__(self, word: str) -> np.ndarray:
        return self.vectors[self._index[word]]

    def get(self, word: str):
        i = self._index.get(word)
        return None if i is None else self.vectors[i]


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    c = float(np.dot(u, v) / (nu * nv))
    return min(1.0, max(-1.0, c))


def _sentence_ids(corpus, index):
    out = []
    for sent in corpus.sentences():
        ids = [index[t.lemma] for t in sent if t.lemma in index]
        if len(ids) > 1:
            out.append(np.asarray(ids, dtype=np.int64))
    return out


def _skipgram_pairs(sents, window, rng):
    """(center, context) pairs with word2vec-style shrunken windows."""
    flat = np.concatenate(sents)
    sid = np.repeat(np.arange(len(sents)), [len(s) for s in sents])
    reach = rng.integers(1, window + 1, size=len(flat))
    centers, contexts = [], []
    n = len(flat)
    for d in range(1, window + 1):
        if d >= n:
            break
        left = np.arange(n - d)
        right = left + d
        same = sid[left] == sid[right]
        fwd = same & (reach[left] >= d)
        bwd = same & (reach[right] >= d)
        centers += [flat[left[fwd]], flat[right[bwd]]]
        contexts += [flat[right[fwd]], flat[left[bwd]]]
    return np.concatenate(centers), np.concatenate(contexts)


def _scatter_add(table, idx, weights, rows):
    """``table[idx[i]] += weights[i] * rows[i // (len(idx) // len(rows))]``.

    Repeated indices are summed through a sparse product, which is both
    faster than ``np.add.at`` and deterministic.
    """
    uniq, inv = np.unique(idx, return_inverse=True)
    per_row = len(idx) // len(rows)
    cols = np.repeat(np.arange(len(rows)), per_row)
    m = sparse.csr_matrix((weights, (inv, cols)), shape=(len(uniq), len(rows)))
    table[uniq] += m @ rows


def _log_sigmoid(x):
    return -np.logaddexp(0.0, -x)


def train_skipgram(
    corpus: TaggedCorpus,
    dim: int = 300,
    window: int = 5,
    negatives: int = 5,
    epochs: int = 5,
    min_count: int = 5,
    seed: int = 0,
    lr: float = 0.025,
    batch_size: int = 256,
) -> EmbeddingTable:
    """Train skip-gram embeddings with negative sampling.

    Minibatch SGD with a linearly decaying learning rate; noise words are
    drawn from the unigram distribution raised to 3/4. Results are
    deterministic for a fixed ``seed``. The mean loss of each epoch is kept
    in ``table.losses``.
    """
    freq = corpus.lemma_counts()
    vocab = sorted((w for w, c in freq.items() if c >= min_count), key=lambda w: (-freq[w], w))
    if not vocab:
        raise ValueError(f"empty vocabulary: no lemma occurs at least {min_count} times")
    index = {w: i for i, w in enumerate(vocab)}
    sents = _sentence_ids(corpus, index)

    rng = np.random.default_rng(seed)
    V = len(vocab)
    w_in = ((rng.random((V, dim)) - 0.5) / dim).astype(np.float32)
    w_out = np.zeros((V, dim), dtype=np.float32)
    if not sents:
        logger.warning("no trainable sentence pairs; returning initial vectors")
        return EmbeddingTable(tuple(vocab), w_in.astype(np.float64))

    noise = np.array([freq[w] for w in vocab], dtype=np.float64) ** 0.75
    noise_cdf = np.cumsum(noise / noise.sum())
    noise_cdf[-1] = 1.0

    epoch_pairs = [_skipgram_pairs(sents, window, rng) for _ in range(epochs)]
    total = sum(len(c) for c, _ in epoch_pairs)
    seen = 0
    losses = []
    for centers, contexts in epoch_pairs:
        order = rng.permutation(len(centers))
        centers, contexts = centers[order], contexts[order]
        epoch_loss = 0.0
        for start in range(0, len(centers), batch_size):
            c = centers[start:start + batch_size]
            o = contexts[start:start + batch_size]
            b = len(c)
            alpha = lr * max(1e-4, 1.0 - seen / total)
            seen += b
            neg = np.searchsorted(noise_cdf, rng.random((b, negatives)), side="right")
            targets = np.concatenate([o[:, None], neg], axis=1)
            signs = np.empty((b, negatives + 1), dtype=np.float32)
            signs[:, 0] = 1.0
            signs[:, 1:] = -1.0

            v = w_in[c]                       # (b, d)
            u = w_out[targets]                # (b, n+1, d)
            score = np.einsum("bkd,bd->bk", u, v)
            epoch_loss -= float(_log_sigmoid(signs * score).sum())
            # d(-log sigma(sign*x))/dx = -sign * sigma(-sign*x)
            with np.errstate(over="ignore"):
                g = (-signs / (1.0 + np.exp(signs * score))).astype(np.float32)
            grad_v = np.einsum("bk,bkd->bd", g, u)
            _scatter_add(w_out, targets.ravel(), -alpha * g.ravel(), v)
            _scatter_add(w_in, c, np.full(b, -alpha, dtype=np.float32), grad_v)
        losses.append(epoch_loss / len(centers))
        logger.debug("skip-gram epoch %d mean loss %.4f", len(losses), losses[-1])

    return EmbeddingTable(tuple(vocab), w_in.astype(np.float64), losses)


def save_embeddings(table: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table)} {table.dim}\n")
        for w, vec in zip(table.words, table.vectors):
            fh.write(w + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")


def load_embeddings(path) -> EmbeddingTable:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        try:
            count, dim = int(header[0]), int(header[1])
        except (IndexError, ValueError):
            raise FormatError("header must be '<vocab_count> <dim>'", path, 1) from None
        words, rows = [], []
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            cols = line.rstrip("\r\n").split(" ")
            if len(cols) != dim + 1:
                raise FormatError(
                    f"expected {dim} values, got {len(cols) - 1}", path, lineno
                )
            try:
                vec = [float(x) for x in cols[1:]]
            except ValueError as exc:
                raise FormatError(str(exc), path, lineno) from None
            if not all(math.isfinite(x) for x in vec):
                raise FormatError("non-finite value", path, lineno)
            words.append(cols[0])
            rows.append(vec)
    if len(words) != count:
        raise FormatError(f"header declares {count} rows, found {len(words)}", path)
    vectors = np.asarray(rows, dtype=np.float64).reshape(len(words), dim)
    return EmbeddingTable(tuple(words), vectors)


# ---------------------------------------------------------------------------
# Domain distributions
# ---------------------------------------------------------------------------


def build_domain_distributions(
    corpus: TaggedCorpus, categories: Iterable[str] | None = None
) -> dict[str, np.ndarray]:
    """Per-lemma probability of occurring in each document category.

    Vectors follow ``categories`` (default: the corpus' declared order).
    Lemmas never seen in a labeled document are absent.
    """
    cats = tuple(corpus.categories if categories is None else categories)
    pos = {c: i for i, c in enumerate(cats)}
    counts: dict[str, np.ndarray] = {}
    for doc in corpus.documents:
        if doc.category is None:
            continue
        i = pos[doc.category]
        for sent in doc.sentences:
            for tok in sent:
                row = counts.get(tok.lemma)
                if row is None:
                    row = counts[tok.lemma] = np.zeros(len(cats))
                row[i] += 1
    return {w: row / row.sum() for w, row in counts.items()}


def save_domain_distributions(dists: Mapping[str, np.ndarray], categories, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(["#categories", *categories]) + "\n")
        for w in sorted(dists):
            fh.write("\t".join([w, *(repr(float(x)) for x in dists[w])]) + "\n")


def load_domain_distributions(path) -> tuple[tuple[str, ...], dict[str, np.ndarray]]:
    with open(path, encoding="utf-8") as fh:
        head = fh.readline().rstrip("\r\n").split("\t")
        if head[0] != "#categories":
            raise FormatError("first line must list '#categories'", path, 1)
        cats = tuple(head[1:])
        out = {}
        for lineno, line in enumerate(fh, 2):
            if not line.strip():
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) != len(cats) + 1:
                raise FormatError(f"expected {len(cats)} probabilities", path, lineno)
            try:
                out[cols[0]] = np.array([float(x) for x in cols[1:]])
            except ValueError as exc:
                raise FormatError(str(exc), path, lineno) from None
    return cats, out


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence in bits, clamped to [0, 1]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    m = 0.5 * (p + q)
    total = 0.0
    for a in (p, q):
        nz = a > 0
        total += float(np.sum(a[nz] * np.log2(a[nz] / m[nz])))
    return min(1.0, max(0.0, 0.5 * total))


def distribution_similarity(p, q) -> float:
    return 1.0 - math.sqrt(js_divergence(p, q))
