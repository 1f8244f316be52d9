"""Loaders and indexes for the reference wordnet, bilingual dictionary,
POS-tagged corpora and seed/test link files.

All containers are immutable once built and can be shared freely.
"""

from __future__ import annotations

import enum
import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import FormatError

logger = logging.getLogger(__name__)

LABELS = ("correct", "incorrect")


class Pos(str, enum.Enum):
    NOUN = "n"
    VERB = "v"
    ADJECTIVE = "a"
    ADVERB = "r"

    @classmethod
    def from_code(cls, code: str) -> "Pos":
        # WordNet satellite adjectives ("s") fold into adjectives
        if code == "s":
            return cls.ADJECTIVE
        return cls(code)

    @classmethod
    def from_tag(cls, tag: str) -> "Pos | None":
        """Map a corpus tag onto the four open classes, or None.

        Accepts single-letter codes, universal tags (NOUN, VERB, ADJ, ADV) and
        prefixed fine-grained tags such as ``N_SING`` or ``ADV_TIME``.
        """
        t = tag.strip().upper()
        if not t:
            return None
        if t in _TAG_ALIASES:
            return _TAG_ALIASES[t]
        head = t.replace("-", "_").split("_", 1)[0]
        if head in _TAG_ALIASES:
            return _TAG_ALIASES[head]
        return None


_TAG_ALIASES = {
    "N": Pos.NOUN, "NOUN": Pos.NOUN, "NN": Pos.NOUN, "NNS": Pos.NOUN,
    "V": Pos.VERB, "VERB": Pos.VERB,
    "A": Pos.ADJECTIVE, "ADJ": Pos.ADJECTIVE, "AJ": Pos.ADJECTIVE, "JJ": Pos.ADJECTIVE,
    "R": Pos.ADVERB, "ADV": Pos.ADVERB, "AV": Pos.ADVERB, "RB": Pos.ADVERB,
}


def pos_of_synset_id(synset_id: str) -> Pos | None:
    """Return the POS encoded in an id suffix like ``00001740-n``."""
    head, sep, tail = synset_id.rpartition("-")
    if sep and len(tail) == 1 and tail in "nvars":
        return Pos.from_code(tail)
    return None


# ---------------------------------------------------------------------------
# Wordnet
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Synset:
    id: str
    pos: Pos
    members: tuple[str, ...]
    gloss: str = ""

    def __post_init__(self):
        if not self.members:
            raise ValueError(f"synset {self.id!r} has no members")
        encoded = pos_of_synset_id(self.id)
        if encoded is not None and encoded is not self.pos:
            raise ValueError(
                f"synset {self.id!r}: id suffix disagrees with pos {self.pos.value!r}"
            )


class WordnetIndex:
    """Synsets by id plus a lemma -> synset-id inverted index."""

    def __init__(self, synsets: Iterable[Synset] = ()):
        self._synsets: dict[str, Synset] = {}
        index: dict[str, set[str]] = defaultdict(set)
        for s in synsets:
            if s.id in self._synsets:
                raise ValueError(f"duplicate synset id {s.id!r}")
            self._synsets[s.id] = s
            for lemma in s.members:
                index[lemma].add(s.id)
        self._index = {k: frozenset(v) for k, v in index.items()}
        counts: Counter = Counter()
        for lemma, ids in self._index.items():
            for sid in ids:
                counts[lemma, self._synsets[sid].pos] += 1
        self._polysemy = dict(counts)

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, synset_id) -> bool:
        return synset_id in self._synsets

    def __iter__(self) -> Iterator[Synset]:
        return iter(self._synsets.values())

    def __getitem__(self, synset_id: str) -> Synset:
        return self._synsets[synset_id]

    def get(self, synset_id: str) -> Synset | None:
        return self._synsets.get(synset_id)

    @property
    def ids(self) -> list[str]:
        return list(self._synsets)

    def lemmas(self) -> list[str]:
        return sorted(self._index)

    def synsets_of(self, lemma: str, pos: Pos | None = None) -> frozenset[str]:
        ids = self._index.get(lemma, frozenset())
        if pos is None:
            return ids
        return frozenset(i for i in ids if self._synsets[i].pos is pos)

    def polysemy(self, lemma: str, pos: Pos | None = None) -> int:
        """Number of synsets containing ``lemma``; restricted to ``pos`` if given."""
        if pos is None:
            return len(self._index.get(lemma, ()))
        return self._polysemy.get((lemma, pos), 0)

    def polysemy_table(self) -> Mapping[tuple[str, Pos], int]:
        return dict(self._polysemy)


def load_wordnet(path) -> WordnetIndex:
    """Read a JSON-lines wordnet, one synset object per line."""
    path = Path(path)
    synsets = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                sid = obj["id"]
                pos = Pos.from_code(obj["pos"])
                members = obj["members"]
                gloss = obj.get("gloss", "")
                if not isinstance(sid, str) or not isinstance(members, list):
                    raise TypeError("id must be a string and members a list")
                syn = Synset(sid, pos, tuple(dict.fromkeys(members)), gloss)
            except (ValueError, KeyError, TypeError) as exc:
                raise FormatError(f"malformed synset: {exc}", path, lineno) from None
            if sid in seen:
                raise FormatError(f"duplicate synset id {sid!r}", path, lineno)
            seen.add(sid)
            synsets.append(syn)
    return WordnetIndex(synsets)


def write_wordnet(index: Iterable[Synset], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in index:
            obj = {"id": s.id, "pos": s.pos.value, "members": list(s.members),
                   "gloss": s.gloss}
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Bilingual dictionary
# ---------------------------------------------------------------------------


class BilingualDictionary:
    """Translation relation from words being linked to reference-wordnet lemmas.

    ``translate(f)`` gives the ordered translations of ``f``; ``inverse(e)``
    gives every word translating to ``e``.
    """

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()):
        fwd: dict[str, dict[str, None]] = {}
        inv: dict[str, set[str]] = defaultdict(set)
        for src, tgt in pairs:
            fwd.setdefault(src, {})[tgt] = None
            inv[tgt].add(src)
        self._forward = {k: tuple(v) for k, v in fwd.items() if v}
        self._inverse = {k: frozenset(v) for k, v in inv.items()}

    def __len__(self) -> int:
        return len(self._forward)

    def __contains__(self, word) -> bool:
        return word in self._forward

    def translate(self, word: str) -> tuple[str, ...]:
        return self._forward.get(word, ())

    def inverse(self, word: str) -> frozenset[str]:
        return self._inverse.get(word, frozenset())

    def sources(self) -> list[str]:
        return list(self._forward)

    def pairs(self) -> Iterator[tuple[str, str]]:
        for src, tgts in self._forward.items():
            for t in tgts:
                yield src, t


def _split_tsv(line: str) -> list[str]:
    return line.rstrip("\r\n").split("\t")


def load_dictionary(path) -> BilingualDictionary:
    path = Path(path)
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            cols = _split_tsv(line)
            if len(cols) < 2 or not cols[0].strip() or not cols[1].strip():
                raise FormatError("expected source<TAB>target", path, lineno)
            pairs.append((cols[0].strip(), cols[1].strip()))
    return BilingualDictionary(pairs)


def write_dictionary(pairs: Iterable[tuple[str, str]], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for src, tgt in pairs:
            fh.write(f"{src}\t{tgt}\n")


# ---------------------------------------------------------------------------
# Tagged corpus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    tag: str = ""

    @property
    def pos(self) -> Pos | None:
        return Pos.from_tag(self.tag)


@dataclass(frozen=True)
class Document:
    sentences: tuple[tuple[Token, ...], ...]
    category: str | None = None


@dataclass(frozen=True)
class TaggedCorpus:
    documents: tuple[Document, ...]
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        declared = set(self.categories)
        for doc in self.documents:
            if doc.category is not None and doc.category not in declared:
                raise ValueError(f"undeclared category {doc.category!r}")

    def sentences(self) -> Iterator[tuple[Token, ...]]:
        for doc in self.documents:
            yield from doc.sentences

    def lemma_counts(self) -> Counter:
        return Counter(tok.lemma for sent in self.sentences() for tok in sent)

    def vocabulary(self, min_count: int = 1) -> set[str]:
        return {w for w, c in self.lemma_counts().items() if c >= min_count}

    @classmethod
    def from_sentences(cls, sentences, category=None, categories=()):
        """Wrap plain lemma lists (or Tokens) into a single-document corpus."""
        sents = tuple(
            tuple(t if isinstance(t, Token) else Token(t, t) for t in s) for s in sentences
        )
        cats = tuple(categories) or ((category,) if category is not None else ())
        return cls((Document(sents, category),), cats)


def read_corpus(path, categories: Iterable[str] | None = None) -> TaggedCorpus:
    """Read the vertical corpus format.

    One token per line as ``surface<TAB>lemma<TAB>tag``; a two-column line is
    ``surface<TAB>tag`` and uses the surface form as lemma. Blank lines end a
    sentence and ``#DOC<TAB>category=<label>`` starts a new document. Tokens
    preceding the first ``#DOC`` line form an unlabeled document.

    ``categories`` fixes the category order; otherwise labels are sorted.
    """
    path = Path(path)
    docs: list[Document] = []
    sents: list[tuple[Token, ...]] = []
    cur: list[Token] = []
    category: str | None = None
    started = False

    def close_doc():
        if cur:
            sents.append(tuple(cur))
            cur.clear()
        if sents or started:
            docs.append(Document(tuple(sents), category))
        sents.clear()

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if line.startswith("#DOC"):
                close_doc()
                started = True
                category = None
                for part in line.split("\t")[1:]:
                    key, eq, val = part.partition("=")
                    if key.strip() == "category" and eq:
                        category = val.strip() or None
                continue
            if not line.strip():
                if cur:
                    sents.append(tuple(cur))
                    cur.clear()
                continue
            cols = line.split("\t")
            if len(cols) == 3:
                surface, lemma, tag = cols
            elif len(cols) == 2:
                surface, tag = cols
                lemma = surface
            else:
                raise FormatError(
                    f"expected 2 or 3 tab-separated columns, got {len(cols)}", path, lineno
                )
            if not surface or not lemma:
                raise FormatError("empty surface or lemma", path, lineno)
            cur.append(Token(surface, lemma, tag))
    close_doc()

    seen = sorted({d.category for d in docs if d.category is not None})
    if categories is None:
        cats = tuple(seen)
    else:
        cats = tuple(categories)
        missing = set(seen) - set(cats)
        if missing:
            raise FormatError(f"undeclared categories {sorted(missing)}", path)
    return TaggedCorpus(tuple(docs), cats)


def write_corpus(corpus: TaggedCorpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            if doc.category is None:
                fh.write("#DOC\n")
            else:
                fh.write(f"#DOC\tcategory={doc.category}\n")
            for sent in doc.sentences:
                for tok in sent:
                    fh.write(f"{tok.surface}\t{tok.lemma}\t{tok.tag}\n")
                fh.write("\n")


def pos_profile(corpus: TaggedCorpus) -> dict[str, dict[Pos, float]]:
    """Relative frequency of each lemma under each of the four POS classes."""
    counts: dict[str, Counter] = defaultdict(Counter)
    for sent in corpus.sentences():
        for tok in sent:
            pos = tok.pos
            if pos is not None:
                counts[tok.lemma][pos] += 1
    profile = {}
    for lemma, c in counts.items():
        total = sum(c.values())
        profile[lemma] = {p: n / total for p, n in c.items()}
    return profile


# ---------------------------------------------------------------------------
# Seed and judged links
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class SeedLink:
    lemma: str
    synset_id: str


@dataclass(frozen=True, order=True)
class JudgedLink:
    lemma: str
    synset_id: str
    label: str = field(compare=False)

    @property
    def key(self) -> tuple[str, str]:
        return self.lemma, self.synset_id

    @property
    def correct(self) -> bool:
        return self.label == "correct"


def _read_link_rows(path, want_label: bool):
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            cols = [c.strip() for c in _split_tsv(line)]
            if len(cols) < 2 or not cols[0] or not cols[1]:
                raise FormatError("expected lemma<TAB>synset_id[<TAB>label]", path, lineno)
            label = cols[2] if len(cols) > 2 and cols[2] else None
            if label is not None and label not in LABELS:
                raise FormatError(f"unknown label {label!r}", path, lineno)
            if want_label and label is None:
                raise FormatError("missing label column", path, lineno)
            yield lineno, cols[0], cols[1], label


def load_seed_links(path, index: WordnetIndex) -> tuple[frozenset[SeedLink], int]:
    """Read seed links, dropping those whose synset is unknown.

    Returns the link set and the number of dropped rows.
    """
    links = set()
    dropped = 0
    for lineno, lemma, sid, _ in _read_link_rows(path, want_label=False):
        if sid not in index:
            dropped += 1
            continue
        links.add(SeedLink(lemma, sid))
    if dropped:
        logger.warning("%s: dropped %d link(s) with unknown synset ids", path, dropped)
    return frozenset(links), dropped


def load_judged_links(path) -> list[JudgedLink]:
    """Read a labeled link file; keys must be unique."""
    out = []
    seen = set()
    for lineno, lemma, sid, label in _read_link_rows(path, want_label=True):
        if (lemma, sid) in seen:
            raise FormatError(f"duplicate link ({lemma}, {sid})", path, lineno)
        seen.add((lemma, sid))
        out.append(JudgedLink(lemma, sid, label))
    return out


def write_links(rows: Iterable, path) -> None:
    """Write ``(lemma, synset_id)`` or ``(lemma, synset_id, label)`` rows."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            if isinstance(row, (SeedLink, JudgedLink)):
                row = (row.lemma, row.synset_id) + (
                    (row.label,) if isinstance(row, JudgedLink) else ()
                )
            fh.write("\t".join(row) + "\n")


def load_core_synsets(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())
