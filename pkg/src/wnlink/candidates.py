"""Candidate word-to-synset links induced through the bilingual dictionary."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import FormatError
from .resources import BilingualDictionary, Pos, WordnetIndex, pos_of_synset_id

POLYSEMY_SCOPES = ("pos", "all")


@dataclass(frozen=True, order=True)
class CandidateLink:
    """A proposed (word, synset) link and the translations that induced it."""

    lemma: str
    synset_id: str
    inducers: tuple[str, ...]
    pos: Pos

    def __post_init__(self):
        if not self.inducers:
            raise ValueError(f"link ({self.lemma}, {self.synset_id}) has no inducers")

    @property
    def key(self) -> tuple[str, str]:
        return self.lemma, self.synset_id


def generate_candidates(
    vocab: Iterable[str], dictionary: BilingualDictionary, wn: WordnetIndex
) -> list[CandidateLink]:
    """Link each word to every synset containing one of its translations.

    Output is sorted by (lemma, synset id).
    """
    inducers: dict[tuple[str, str], set[str]] = defaultdict(set)
    for f in set(vocab):
        for e in dictionary.translate(f):
            for sid in wn.synsets_of(e):
                inducers[f, sid].add(e)
    return [
        CandidateLink(f, sid, tuple(sorted(es)), wn[sid].pos)
        for (f, sid), es in sorted(inducers.items())
    ]


def prune_pos(
    links: Iterable[CandidateLink],
    profile: Mapping[str, Mapping[Pos, float]],
    threshold: float = 0.0,
) -> list[CandidateLink]:
    """Drop links whose synset POS the word was never (or too rarely) seen with.

    Words missing from the profile carry no evidence and are kept.
    """
    kept = []
    for link in links:
        probs = profile.get(link.lemma)
        if probs is None or probs.get(link.pos, 0.0) > threshold:
            kept.append(link)
    return kept


def polysemy_of(wn: WordnetIndex, lemma: str, pos: Pos, scope: str = "pos") -> int:
    if scope == "pos":
        return wn.polysemy(lemma, pos)
    if scope == "all":
        return wn.polysemy(lemma)
    raise ValueError(f"unknown polysemy scope {scope!r}; expected one of {POLYSEMY_SCOPES}")


@dataclass(frozen=True)
class FeatureContext:
    """The cohort of words linked to one synset, with their link weights.

    ``weights[f]`` sums the inverse polysemy of the translations linking
    ``f`` to the synset.
    """

    synset_id: str
    cohort: tuple[str, ...]
    weights: Mapping[str, float]

    @property
    def k(self) -> int:
        return len(self.cohort)


def build_feature_context(
    links: Iterable[CandidateLink], wn: WordnetIndex, polysemy_scope: str = "pos"
) -> dict[str, FeatureContext]:
    members: dict[str, dict[str, float]] = defaultdict(dict)
    for link in links:
        p = 0.0
        for e in link.inducers:
            n = polysemy_of(wn, e, link.pos, polysemy_scope)
            if n > 0:
                p += 1.0 / n
        members[link.synset_id][link.lemma] = p
    return {
        sid: FeatureContext(sid, tuple(sorted(w)), dict(w)) for sid, w in sorted(members.items())
    }


def save_candidates(links: Iterable[CandidateLink], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for link in sorted(links):
            fh.write(f"{link.lemma}\t{link.synset_id}\t{','.join(link.inducers)}\n")


def load_candidates(path, wn: WordnetIndex | None = None) -> list[CandidateLink]:
    """Read a candidate dump; POS comes from ``wn`` or the synset id suffix."""
    links = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) != 3:
                raise FormatError("expected lemma<TAB>synset_id<TAB>inducers", path, lineno)
            lemma, sid, ind = cols
            if wn is not None and sid in wn:
                pos = wn[sid].pos
            else:
                pos = pos_of_synset_id(sid)
            if pos is None:
                raise FormatError(f"cannot determine POS of synset {sid!r}", path, lineno)
            inducers = tuple(x for x in ind.split(",") if x)
            if not inducers:
                raise FormatError("empty inducer list", path, lineno)
            links.append(CandidateLink(lemma, sid, inducers, pos))
    return links
