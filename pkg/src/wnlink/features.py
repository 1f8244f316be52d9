"""The seven per-link features used to classify candidate links."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Mapping

import numpy as np

from .candidates import CandidateLink, FeatureContext, build_feature_context, polysemy_of
from .distributional import EmbeddingTable, cosine, distribution_similarity, jaccard
from .errors import FormatError
from .resources import BilingualDictionary, Synset, WordnetIndex

FEATURE_NAMES = ("R", "SS", "CO", "DS", "ME", "SC", "IM")
FEATURE_LABELS = {
    "R": "Relatedness Measure",
    "SS": "Synset Strength",
    "CO": "Context Overlap",
    "DS": "Domain Similarity",
    "ME": "Monosemous English",
    "SC": "Synset Commonality",
    "IM": "Importance",
}
IMPORTANCE_TIES = ("all", "strict")

_EMPTY = frozenset()


@dataclass(frozen=True)
class FeatureVector:
    relatedness: float
    synset_strength: float
    context_overlap: float
    domain_similarity: float
    monosemous_english: int
    synset_commonality: int
    importance: int

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)

    def __iter__(self):
        return iter(astuple(self))


assert len(fields(FeatureVector)) == len(FEATURE_NAMES)


# ---------------------------------------------------------------------------
# Relatedness
# ---------------------------------------------------------------------------


def relatedness_e_s(e: str, synset: Synset, source_cvs: Mapping[str, frozenset]) -> float:
    """Mean Jaccard overlap between the context vector of ``e`` and those of
    the synset's members. Missing context vectors count as empty."""
    cv_e = source_cvs.get(e, _EMPTY)
    total = sum(jaccard(cv_e, source_cvs.get(m, _EMPTY)) for m in synset.members)
    return total / len(synset.members)


def member_closure(synset: Synset, wn: WordnetIndex) -> set[str]:
    """Ids of every synset sharing at least one member with ``synset``."""
    out = {synset.id}
    for m in synset.members:
        out |= wn.synsets_of(m)
    return out


def context_translation(
    link: CandidateLink, target_cvs: Mapping[str, frozenset], dictionary: BilingualDictionary
) -> set[str]:
    cv = target_cvs.get(link.lemma, _EMPTY)
    if not cv:
        return set(link.inducers)
    out = set()
    for w in cv:
        out.update(dictionary.translate(w))
    return out


def relatedness_measure(
    link: CandidateLink,
    target_cvs: Mapping[str, frozenset],
    dictionary: BilingualDictionary,
    wn: WordnetIndex,
    source_cvs: Mapping[str, frozenset],
    cache: dict | None = None,
) -> float:
    """Average relative relatedness of the translated context words to the
    linked synset, normalised over all synsets of the synset's members."""
    cvt = context_translation(link, target_cvs, dictionary)
    if not cvt:
        return 0.0
    if cache is None:
        cache = {}

    def rel(e, sid):
        key = (e, sid)
        if key not in cache:
            cache[key] = relatedness_e_s(e, wn[sid], source_cvs)
        return cache[key]

    closure = sorted(member_closure(wn[link.synset_id], wn))
    total = 0.0
    for e in sorted(cvt):
        denom = sum(rel(e, s) for s in closure)
        if denom > 0:
            total += rel(e, link.synset_id) / denom
    return total / len(cvt)


# ---------------------------------------------------------------------------
# Cohort features
# ---------------------------------------------------------------------------


def _cohort_average(link, ctx: FeatureContext, sim) -> float:
    if ctx.k == 1:
        return 1.0
    total = 0.0
    for other in ctx.cohort:
        if other == link.lemma:
            continue
        total += ctx.weights[other] * sim(other)
    return total / (ctx.k - 1)


def synset_strength(link: CandidateLink, ctx: FeatureContext, emb: EmbeddingTable) -> float:
    v = emb.get(link.lemma)

    def sim(other):
        u = emb.get(other)
        if v is None or u is None:
            return 0.0
        return cosine(v, u)

    return _cohort_average(link, ctx, sim)


def domain_similarity(
    link: CandidateLink, ctx: FeatureContext, domains: Mapping[str, np.ndarray]
) -> float:
    if ctx.k == 1:
        return 1.0
    d_f = domains.get(link.lemma)
    if d_f is None:
        return 0.0

    def sim(other):
        d_o = domains.get(other)
        return 0.0 if d_o is None else distribution_similarity(d_f, d_o)

    return _cohort_average(link, ctx, sim)


# ---------------------------------------------------------------------------
# Gloss overlap
# ---------------------------------------------------------------------------

_LETTERS = re.compile(r"[^\W\d_]+")


def gloss_tokens(gloss: str) -> list[str]:
    return [t for t in _LETTERS.findall(gloss.lower()) if len(t) >= 2]


def gloss_translation(synset: Synset, dictionary: BilingualDictionary) -> set[str]:
    out = set()
    for tok in gloss_tokens(synset.gloss):
        out |= dictionary.inverse(tok)
    return out


def context_overlap(
    link: CandidateLink,
    target_cvs: Mapping[str, frozenset],
    dictionary: BilingualDictionary,
    wn: WordnetIndex,
) -> float:
    gt = gloss_translation(wn[link.synset_id], dictionary)
    return jaccard(gt, target_cvs.get(link.lemma, _EMPTY))


# ---------------------------------------------------------------------------
# Translation-structure features
# ---------------------------------------------------------------------------


def monosemous_english(link: CandidateLink, wn: WordnetIndex, polysemy_scope: str = "pos") -> int:
    return int(any(polysemy_of(wn, e, link.pos, polysemy_scope) == 1 for e in link.inducers))


def synset_commonality(link: CandidateLink) -> int:
    return len(link.inducers)


def importance_counts(
    scores: Mapping[str, tuple[float, ...]], ties: str = "all"
) -> dict[str, int]:
    """For each synset, how many score columns it maximises among ``scores``.

    With ``ties="all"`` every synset attaining the maximum is credited;
    with ``"strict"`` only a unique maximiser is.
    """
    if ties not in IMPORTANCE_TIES:
        raise ValueError(f"unknown tie rule {ties!r}")
    out = {sid: 0 for sid in scores}
    if not scores:
        return out
    ncol = len(next(iter(scores.values())))
    for j in range(ncol):
        best = max(v[j] for v in scores.values())
        winners = [sid for sid, v in scores.items() if v[j] == best]
        if ties == "strict" and len(winners) > 1:
            continue
        for sid in winners:
            out[sid] += 1
    return out


def importance(
    links: Iterable[CandidateLink],
    four: Mapping[tuple[str, str], tuple[float, float, float, float]],
    wn: WordnetIndex,
    ties: str = "all",
) -> dict[tuple[str, str], int]:
    """Link-level importance: the best per-inducer count of R/SS/CO/DS maxima
    over the inducer's synsets that are linked to the same word."""
    links = list(links)
    linked = defaultdict(set)
    for link in links:
        linked[link.lemma].add(link.synset_id)
    per_pair: dict[tuple[str, str], dict[str, int]] = {}
    out = {}
    for link in links:
        best = 0
        for e in link.inducers:
            pair = (link.lemma, e)
            if pair not in per_pair:
                rivals = sorted(wn.synsets_of(e) & linked[link.lemma])
                per_pair[pair] = importance_counts(
                    {sid: four[link.lemma, sid] for sid in rivals}, ties
                )
            best = max(best, per_pair[pair][link.synset_id])
        out[link.key] = best
    return out


# ---------------------------------------------------------------------------
# All features
# ---------------------------------------------------------------------------


def featurize(
    links: Iterable[CandidateLink],
    *,
    wn: WordnetIndex,
    dictionary: BilingualDictionary,
    target_cvs: Mapping[str, frozenset],
    source_cvs: Mapping[str, frozenset],
    embeddings: EmbeddingTable,
    domains: Mapping[str, np.ndarray],
    polysemy_scope: str = "pos",
    importance_ties: str = "all",
) -> dict[tuple[str, str], FeatureVector]:
    """Compute every feature for every link; keys come out sorted."""
    links = sorted(links)
    ctxs = build_feature_context(links, wn, polysemy_scope)
    cache: dict = {}
    four = {}
    for link in links:
        ctx = ctxs[link.synset_id]
        four[link.key] = (
            relatedness_measure(link, target_cvs, dictionary, wn, source_cvs, cache),
            synset_strength(link, ctx, embeddings),
            context_overlap(link, target_cvs, dictionary, wn),
            domain_similarity(link, ctx, domains),
        )
    imp = importance(links, four, wn, importance_ties)
    return {
        link.key: FeatureVector(
            *four[link.key],
            monosemous_english(link, wn, polysemy_scope),
            synset_commonality(link),
            imp[link.key],
        )
        for link in links
    }


def save_features(features: Mapping[tuple[str, str], FeatureVector], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for (f, s) in sorted(features):
            fv = features[f, s]
            vals = [f"{fv.relatedness:.6f}", f"{fv.synset_strength:.6f}",
                    f"{fv.context_overlap:.6f}", f"{fv.domain_similarity:.6f}",
                    str(fv.monosemous_english), str(fv.synset_commonality), str(fv.importance)]
            fh.write("\t".join([f, s, *vals]) + "\n")


def load_features(path) -> dict[tuple[str, str], FeatureVector]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) != 2 + len(FEATURE_NAMES):
                raise FormatError(f"expected {2 + len(FEATURE_NAMES)} columns", path, lineno)
            try:
                fv = FeatureVector(
                    *(float(x) for x in cols[2:6]),
                    *(int(float(x)) for x in cols[6:9]),
                )
            except ValueError as exc:
                raise FormatError(str(exc), path, lineno) from None
            out[cols[0], cols[1]] = fv
    return out
