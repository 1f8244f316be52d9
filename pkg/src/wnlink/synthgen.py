"""Synthetic bilingual worlds with planted ground truth.

A world is a set of concepts (one reference synset each). Every concept
owns a domain category, a list of context words in both languages and a
cohort of target-language words that lexicalise it. Target words are
translated into members of their true synsets; reference lemmas shared
between synsets are what produce incorrect candidate links. Corpora are
generated concept by concept, so true synonyms share contexts, domains and
embedding neighbourhoods while wrong links do not.
"""

from __future__ import annotations

import json
import string
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .resources import (
    BilingualDictionary,
    Document,
    JudgedLink,
    Pos,
    Synset,
    TaggedCorpus,
    Token,
    WordnetIndex,
    write_corpus,
    write_dictionary,
    write_links,
    write_wordnet,
)

_POS_WEIGHTS = ((Pos.NOUN, 0.6), (Pos.VERB, 0.15), (Pos.ADJECTIVE, 0.2), (Pos.ADVERB, 0.05))
_TAGS = {Pos.NOUN: "N", Pos.VERB: "V", Pos.ADJECTIVE: "ADJ", Pos.ADVERB: "ADV"}


@dataclass(frozen=True)
class WorldSpec:
    seed: int = 0
    synsets: int = 300
    target_words: int = 500
    documents: int = 200
    categories: int = 9
    # share of reference-lemma slots filled by a lemma from another synset
    ambiguity_rate: float = 0.35
    # share of shared lemmas whose other synset sits in the same domain
    misleading_rate: float = 0.2
    # share of target words with a second true sense
    target_polysemy_rate: float = 0.2
    context_words: int = 8
    gloss_length: int = 8
    gloss_noise: float = 0.25
    occurrences_per_sense: int = 12
    source_sentences_per_synset: int = 20
    sentence_context: int = 4
    synonym_rate: float = 0.3
    topic_leak: float = 0.1
    noise_words: int = 150
    noise_rate: float = 0.5
    seed_fraction: float = 0.5
    test_fraction: float = 0.3
    core_fraction: float = 0.2

    def __post_init__(self):
        for name in ("synsets", "target_words", "documents", "categories",
                     "context_words", "gloss_length", "occurrences_per_sense",
                     "source_sentences_per_synset", "sentence_context", "noise_words"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for name in ("ambiguity_rate", "misleading_rate", "target_polysemy_rate",
                     "gloss_noise", "synonym_rate", "topic_leak", "noise_rate",
                     "seed_fraction", "test_fraction", "core_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.sentence_context > self.context_words:
            raise ValueError("sentence_context cannot exceed context_words")
        if self.target_words < self.synsets:
            raise ValueError("need at least one target word per synset")


def _namer(prefix):
    """Yield distinct all-letter pseudo-words: prefix + base-26 suffix."""
    letters = string.ascii_lowercase
    n = 0
    while True:
        k, s = n, ""
        while True:
            s = letters[k % 26] + s
            k //= 26
            if k == 0:
                break
        yield prefix + s
        n += 1


@dataclass
class World:
    spec: WorldSpec
    wordnet: WordnetIndex
    dictionary_pairs: list[tuple[str, str]]
    target_corpus: TaggedCorpus
    source_corpus: TaggedCorpus
    senses: dict[str, tuple[str, ...]]          # target word -> true synset ids
    truth: dict[tuple[str, str], bool]          # every candidate link -> correct?
    seed_links: list[tuple[str, str]]
    test_links: list[JudgedLink]
    core_synsets: list[str]
    manifest: dict = field(default_factory=dict)

    @property
    def dictionary(self) -> BilingualDictionary:
        return BilingualDictionary(self.dictionary_pairs)

    @property
    def membership(self) -> dict[str, tuple[str, ...]]:
        return {s.id: s.members for s in self.wordnet}


def build_world(spec: WorldSpec = WorldSpec()) -> World:
    rng = np.random.default_rng(spec.seed)
    S, C = spec.synsets, spec.categories
    cats = tuple(f"cat{chr(ord('a') + i)}" if i < 26 else f"cat{i}" for i in range(C))

    pos_list = [p for p, _ in _POS_WEIGHTS]
    pos_p = np.array([w for _, w in _POS_WEIGHTS])
    syn_pos = [pos_list[i] for i in rng.choice(4, size=S, p=pos_p)]
    syn_cat = rng.integers(C, size=S)
    ids = [f"{i + 1:08d}-{syn_pos[i].value}" for i in range(S)]

    en_member = _namer("en")
    en_ctx_name = _namer("ec")
    fa_ctx_name = _namer("fc")
    en_noise = [w for w, _ in zip(_namer("ez"), range(spec.noise_words))]
    fa_noise = [w for w, _ in zip(_namer("fz"), range(spec.noise_words))]

    en_ctx = [[next(en_ctx_name) for _ in range(spec.context_words)] for _ in range(S)]
    fa_ctx = [[next(fa_ctx_name) for _ in range(spec.context_words)] for _ in range(S)]

    # reference-wordnet members; shared lemmas create polysemy
    members: list[list[str]] = []
    for i in range(S):
        m = int(rng.choice([1, 2, 3], p=[0.4, 0.4, 0.2]))
        row: list[str] = []
        for _ in range(m):
            if i > 0 and rng.random() < spec.ambiguity_rate:
                same = np.flatnonzero(syn_cat[:i] == syn_cat[i])
                if len(same) and rng.random() < spec.misleading_rate:
                    j = int(rng.choice(same))
                else:
                    j = int(rng.integers(i))
                lemma = members[j][int(rng.integers(len(members[j])))]
                if lemma not in row:
                    row.append(lemma)
                    continue
            row.append(next(en_member))
        members.append(row)

    glosses = []
    for i in range(S):
        toks = []
        for _ in range(spec.gloss_length):
            if rng.random() < spec.gloss_noise:
                toks.append(en_noise[int(rng.integers(len(en_noise)))])
            else:
                toks.append(en_ctx[i][int(rng.integers(spec.context_words))])
        glosses.append(" ".join(toks))
    wn = WordnetIndex(Synset(ids[i], syn_pos[i], tuple(members[i]), glosses[i]) for i in range(S))

    # target words and their true senses
    n_poly = int(round(spec.target_polysemy_rate * spec.target_words))
    slots = list(range(S)) + list(rng.integers(S, size=spec.target_words + n_poly - S))
    slots = [int(x) for x in rng.permutation(slots)]
    fa_name = _namer("fa")
    words = [next(fa_name) for _ in range(spec.target_words)]
    sense_idx: dict[str, list[int]] = {w: [] for w in words}
    cursor = 0
    for w_i, w in enumerate(words):
        take = 2 if w_i < n_poly else 1
        while take and cursor < len(slots):
            s = slots[cursor]
            cursor += 1
            if s not in sense_idx[w]:
                sense_idx[w].append(s)
                take -= 1
    for s in slots[cursor:]:
        w = words[int(rng.integers(len(words)))]
        if s not in sense_idx[w]:
            sense_idx[w].append(s)
    for w in words:
        if not sense_idx[w]:
            sense_idx[w].append(int(rng.integers(S)))
    cohort: list[list[str]] = [[] for _ in range(S)]
    for w in words:
        for s in sense_idx[w]:
            cohort[s].append(w)

    # dictionary: target word -> members of its true synsets; context pairs
    pairs: list[tuple[str, str]] = []
    for w in words:
        for s in sense_idx[w]:
            mem = members[s]
            k = min(len(mem), int(rng.integers(1, 3)))
            for j in sorted(rng.choice(len(mem), size=k, replace=False)):
                pairs.append((w, mem[int(j)]))
    for i in range(S):
        pairs.extend(zip(fa_ctx[i], en_ctx[i]))
    pairs.extend(zip(fa_noise[: len(fa_noise) // 2], en_noise[: len(en_noise) // 2]))

    # target corpus: one sentence per sense realisation, filed under a
    # document of the concept's category
    docs_by_cat = [[] for _ in range(C)]
    doc_cat = [int(c) for c in rng.permutation(np.arange(spec.documents) % C)]
    for d, c in enumerate(doc_cat):
        docs_by_cat[c].append(d)
    doc_sents: list[list[tuple[Token, ...]]] = [[] for _ in range(spec.documents)]
    realisations = [(w, s) for w in words for s in sense_idx[w]]
    for w, s in realisations:
        tag = _TAGS[syn_pos[s]]
        for _ in range(spec.occurrences_per_sense):
            toks = [Token(w, w, tag)]
            for j in rng.choice(spec.context_words, size=spec.sentence_context, replace=False):
                c = fa_ctx[s][int(j)]
                toks.append(Token(c, c, "N"))
            if len(cohort[s]) > 1 and rng.random() < spec.synonym_rate:
                others = [x for x in cohort[s] if x != w]
                x = others[int(rng.integers(len(others)))]
                toks.append(Token(x, x, tag))
            if rng.random() < spec.noise_rate:
                z = fa_noise[int(rng.integers(len(fa_noise)))]
                toks.append(Token(z, z, "N"))
            toks = [toks[int(j)] for j in rng.permutation(len(toks))]
            cat = int(syn_cat[s])
            if rng.random() < spec.topic_leak or not docs_by_cat[cat]:
                d = int(rng.integers(spec.documents))
            else:
                d = docs_by_cat[cat][int(rng.integers(len(docs_by_cat[cat])))]
            doc_sents[d].append(tuple(toks))
    target_corpus = TaggedCorpus(
        tuple(Document(tuple(doc_sents[d]), cats[doc_cat[d]]) for d in range(spec.documents)),
        cats,
    )

    # source-language corpus: sentences per synset with its members and contexts
    en_sents = []
    for i in range(S):
        tag = _TAGS[syn_pos[i]]
        for _ in range(spec.source_sentences_per_synset):
            e = members[i][int(rng.integers(len(members[i])))]
            toks = [Token(e, e, tag)]
            for j in rng.choice(spec.context_words, size=spec.sentence_context, replace=False):
                c = en_ctx[i][int(j)]
                toks.append(Token(c, c, "N"))
            if len(members[i]) > 1 and rng.random() < spec.synonym_rate:
                others = [x for x in members[i] if x != e]
                x = others[int(rng.integers(len(others)))]
                toks.append(Token(x, x, tag))
            if rng.random() < spec.noise_rate:
                z = en_noise[int(rng.integers(len(en_noise)))]
                toks.append(Token(z, z, "N"))
            en_sents.append(tuple(toks[int(j)] for j in rng.permutation(len(toks))))
    source_corpus = TaggedCorpus((Document(tuple(en_sents), None),), ())

    # ground truth over every dictionary-induced candidate link
    senses = {w: tuple(ids[s] for s in sense_idx[w]) for w in words}
    fwd: dict[str, list[str]] = {}
    for a, b in pairs:
        fwd.setdefault(a, []).append(b)
    truth = {}
    for w in words:
        true_ids = set(senses[w])
        for e in fwd.get(w, ()):
            for sid in wn.synsets_of(e):
                truth[w, sid] = sid in true_ids

    correct = sorted(k for k, v in truth.items() if v)
    n_seed = int(round(spec.seed_fraction * len(correct)))
    seed_links = sorted(correct[int(i)] for i in rng.choice(len(correct), n_seed, replace=False))
    seed_set = set(seed_links)
    rest = sorted(k for k in truth if k not in seed_set)
    n_test = int(round(spec.test_fraction * len(rest)))
    test_keys = sorted(rest[int(i)] for i in rng.choice(len(rest), n_test, replace=False))
    test_links = [JudgedLink(f, s, "correct" if truth[f, s] else "incorrect")
                  for f, s in test_keys]
    n_core = max(1, int(round(spec.core_fraction * S)))
    core = sorted(ids[int(i)] for i in rng.choice(S, n_core, replace=False))

    return World(spec, wn, pairs, target_corpus, source_corpus, senses, truth,
                 seed_links, test_links, core)


FILES = {
    "wordnet": "wordnet.jsonl",
    "dictionary": "dictionary.tsv",
    "target_corpus": "target_corpus.vert",
    "source_corpus": "source_corpus.vert",
    "seed_links": "seed_links.tsv",
    "test_links": "test_links.tsv",
    "truth": "truth.tsv",
    "core_synsets": "core_synsets.txt",
}


def generate_world(spec: WorldSpec, out_dir) -> World:
    """Build a world and write every resource file plus ``manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    world = build_world(spec)
    write_wordnet(world.wordnet, out / FILES["wordnet"])
    write_dictionary(world.dictionary_pairs, out / FILES["dictionary"])
    write_corpus(world.target_corpus, out / FILES["target_corpus"])
    write_corpus(world.source_corpus, out / FILES["source_corpus"])
    write_links(world.seed_links, out / FILES["seed_links"])
    write_links(world.test_links, out / FILES["test_links"])
    write_links(
        [(f, s, "correct" if ok else "incorrect") for (f, s), ok in sorted(world.truth.items())],
        out / FILES["truth"],
    )
    with open(out / FILES["core_synsets"], "w", encoding="utf-8") as fh:
        fh.writelines(sid + "\n" for sid in world.core_synsets)

    n_correct = sum(world.truth.values())
    world.manifest = {
        "spec": asdict(world.spec),
        "files": dict(FILES),
        "counts": {
            "synsets": len(world.wordnet),
            "target_words": len(world.senses),
            "dictionary_pairs": len(world.dictionary_pairs),
            "target_sentences": sum(len(d.sentences) for d in world.target_corpus.documents),
            "source_sentences": sum(len(d.sentences) for d in world.source_corpus.documents),
            "candidate_links": len(world.truth),
            "correct_links": n_correct,
            "incorrect_links": len(world.truth) - n_correct,
            "seed_links": len(world.seed_links),
            "test_links": len(world.test_links),
            "core_synsets": len(world.core_synsets),
        },
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(world.manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return world
