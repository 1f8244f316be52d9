"""Scoring an induced wordnet against judged links, plus size and coverage
statistics."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .resources import JudgedLink, Pos, WordnetIndex, pos_of_synset_id

POS_ORDER = (Pos.NOUN, Pos.ADJECTIVE, Pos.ADVERB, Pos.VERB)
POS_NAMES = {Pos.NOUN: "Noun", Pos.ADJECTIVE: "Adjective", Pos.ADVERB: "Adverb",
             Pos.VERB: "Verb"}


def _pair(row) -> tuple[str, str]:
    if isinstance(row, tuple):
        return row[0], row[1]
    return row.lemma, row.synset_id


def _pos(synset_id, wn):
    if wn is not None and synset_id in wn:
        return wn[synset_id].pos
    pos = pos_of_synset_id(synset_id)
    if pos is None:
        raise ValueError(f"cannot determine POS of synset {synset_id!r}")
    return pos


@dataclass
class LinkScore:
    """Counts behind one row of a precision/recall table."""

    hit_correct: int = 0        # induced links judged correct
    hit_total: int = 0          # induced links present in the judged set
    gold_correct: int = 0       # judged-correct links

    @property
    def precision(self) -> float | None:
        return self.hit_correct / self.hit_total if self.hit_total else None

    @property
    def recall(self) -> float | None:
        return self.hit_correct / self.gold_correct if self.gold_correct else None

    @property
    def f_measure(self) -> float | None:
        p, r = self.precision, self.recall
        if p is None or r is None:
            return None
        return 0.0 if p + r == 0 else 2 * p * r / (p + r)

    def to_dict(self) -> dict:
        return {"evaluated": self.hit_total, "hit_correct": self.hit_correct,
                "gold_correct": self.gold_correct, "precision": self.precision,
                "recall": self.recall, "f_measure": self.f_measure}


def evaluate(
    induced: Iterable, test: Iterable[JudgedLink], wn: WordnetIndex | None = None
) -> dict:
    """Precision over induced links that were judged, recall over judged-correct
    links; overall and per POS. Undefined ratios are ``None``."""
    keys = {_pair(r) for r in induced}
    total = LinkScore()
    per = {p: LinkScore() for p in POS_ORDER}
    for link in test:
        key = (link.lemma, link.synset_id)
        row = per[_pos(link.synset_id, wn)]
        for score in (total, row):
            if link.correct:
                score.gold_correct += 1
            if key in keys:
                score.hit_total += 1
                if link.correct:
                    score.hit_correct += 1
    return {"total": total, "by_pos": per}


@dataclass
class WordnetStats:
    words: int
    synsets: int
    pairs: int
    polysemous_words: int
    by_pos: Mapping[Pos, tuple[int, int, int]]

    @property
    def polysemy_rate(self) -> float:
        return self.polysemous_words / self.words if self.words else 0.0

    def to_dict(self) -> dict:
        return {
            "words": self.words, "synsets": self.synsets, "word_sense_pairs": self.pairs,
            "polysemous_words": self.polysemous_words, "polysemy_rate": self.polysemy_rate,
            "by_pos": {POS_NAMES[p]: {"words": w, "synsets": s, "word_sense_pairs": n}
                       for p, (w, s, n) in self.by_pos.items()},
        }


def wordnet_stats(induced: Iterable, wn: WordnetIndex | None = None) -> WordnetStats:
    pairs = {_pair(r) for r in induced}
    senses = defaultdict(set)
    for f, s in pairs:
        senses[f].add(s)
    by_pos = {}
    for p in POS_ORDER:
        sub = {(f, s) for f, s in pairs if _pos(s, wn) is p}
        by_pos[p] = (len({f for f, _ in sub}), len({s for _, s in sub}), len(sub))
    return WordnetStats(
        words=len(senses),
        synsets=len({s for _, s in pairs}),
        pairs=len(pairs),
        polysemous_words=sum(1 for v in senses.values() if len(v) > 1),
        by_pos=by_pos,
    )


def coverage(
    induced: Iterable,
    vocab: Iterable[str],
    wn: WordnetIndex,
    core: Iterable[str] = (),
) -> dict:
    pairs = {_pair(r) for r in induced}
    words = {f for f, _ in pairs}
    synsets = {s for _, s in pairs}
    vocab = set(vocab)
    core = set(core)
    return {
        "corpus_words_covered": len(words & vocab),
        "corpus_vocabulary": len(vocab),
        "synsets_covered": len(synsets & set(wn.ids)),
        "synset_coverage": len(synsets & set(wn.ids)) / len(wn) if len(wn) else 0.0,
        "core_synsets": len(core),
        "core_coverage": (len(synsets & core) / len(core)) if core else None,
    }


# ---------------------------------------------------------------------------
# Plain-text tables
# ---------------------------------------------------------------------------


def _pct(x) -> str:
    return "n/a" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{100 * x:.2f}"


def _table(header, rows) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_evaluation(result: Mapping) -> str:
    rows = [[POS_NAMES[p], _pct(s.precision), _pct(s.recall), _pct(s.f_measure)]
            for p, s in result["by_pos"].items()]
    t = result["total"]
    rows.append(["Total", _pct(t.precision), _pct(t.recall), _pct(t.f_measure)])
    return _table(["POS", "Precision", "Recall", "F-measure"], rows)


def render_stats(stats: WordnetStats) -> str:
    rows = [[POS_NAMES[p], *v] for p, v in stats.by_pos.items()]
    rows.append(["Total", stats.words, stats.synsets, stats.pairs])
    main = _table(["POS", "Words", "Synsets", "Word-sense Pairs"], rows)
    return main + f"\n\nPolysemy rate: {stats.polysemy_rate:.2f}"


def render_coverage(cov: Mapping) -> str:
    core = "n/a" if cov["core_coverage"] is None else f"{100 * cov['core_coverage']:.2f}%"
    rows = [[f"{cov['corpus_words_covered']} / {cov['corpus_vocabulary']}",
             f"{100 * cov['synset_coverage']:.2f}%", core]]
    return _table(["Corpus words", "Synsets", "Core synsets"], rows)


def render_incremental(rows) -> str:
    from .features import FEATURE_LABELS

    out = []
    for i, row in enumerate(rows):
        name = FEATURE_LABELS.get(row["features"][-1], row["features"][-1])
        out.append([name if i == 0 else "+ " + name, _pct(row["precision"]),
                    _pct(row["recall"]), _pct(row["f_measure"])])
    return _table(["Features", "Precision", "Recall", "F-measure"], out)
