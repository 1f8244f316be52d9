"""Training-set construction, link classifiers, cross-validation and
feature ranking."""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import FormatError, InvariantError
from .features import FEATURE_NAMES, FeatureVector

logger = logging.getLogger(__name__)

VAR_FLOOR = 1e-9
MODEL_FORMAT = "wnlink-gaussian-nb"
MODEL_VERSION = 1


# ---------------------------------------------------------------------------
# Training set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    key: tuple[str, str]
    features: FeatureVector
    label: str

    @property
    def correct(self) -> bool:
        return self.label == "correct"


@dataclass
class TrainSet:
    instances: list[Instance]
    provenance: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.instances)

    @property
    def keys(self) -> list[tuple[str, str]]:
        return [i.key for i in self.instances]

    @property
    def X(self) -> np.ndarray:
        if not self.instances:
            return np.empty((0, len(FEATURE_NAMES)))
        return np.stack([i.features.as_array() for i in self.instances])

    @property
    def y(self) -> np.ndarray:
        return np.array([i.correct for i in self.instances], dtype=bool)


def _key(link) -> tuple[str, str]:
    if isinstance(link, tuple):
        return link[0], link[1]
    if hasattr(link, "key"):
        return link.key
    return link.lemma, link.synset_id


def build_train_set(
    seed_links: Iterable,
    candidates: Iterable,
    featurized: Mapping[tuple[str, str], FeatureVector],
    negative_count: int,
    test_keys: Iterable = (),
    seed: int = 0,
) -> TrainSet:
    """Seed links found among the candidates become positives; negatives are
    drawn uniformly without replacement from the remaining candidates.
    Links in ``test_keys`` never enter the set."""
    seed_keys = {_key(s) for s in seed_links}
    cand_keys = {_key(c) for c in candidates}
    test = {_key(t) for t in test_keys}

    seeded = seed_keys & cand_keys
    positives = sorted(seeded - test)
    pool = sorted(cand_keys - seed_keys - test)
    if negative_count > len(pool):
        raise ValueError(
            f"negative_count={negative_count} exceeds the negative pool of {len(pool)} links"
        )
    rng = np.random.default_rng(seed)
    picked = np.sort(rng.choice(len(pool), size=negative_count, replace=False))
    negatives = [pool[i] for i in picked]

    missing = [k for k in positives + negatives if k not in featurized]
    if missing:
        raise ValueError(f"{len(missing)} training links lack features, e.g. {missing[0]}")

    instances = [Instance(k, featurized[k], "correct") for k in positives]
    instances += [Instance(k, featurized[k], "incorrect") for k in negatives]

    keys = [i.key for i in instances]
    if len(set(keys)) != len(keys):
        raise InvariantError("duplicate key in training set")
    if test & set(keys):
        raise InvariantError("training set overlaps the test set")
    provenance = {
        "seed_positives": len(positives),
        "random_negatives": len(negatives),
        "excluded_overlaps": len(seeded & test),
        "seed_not_candidates": len(seed_keys - cand_keys),
    }
    return TrainSet(instances, provenance)


def save_train_set(ts: TrainSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for inst in ts.instances:
            fh.write(f"{inst.key[0]}\t{inst.key[1]}\t{inst.label}\n")


def load_train_set(path, featurized: Mapping[tuple[str, str], FeatureVector]) -> TrainSet:
    instances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) != 3 or cols[2] not in ("correct", "incorrect"):
                raise FormatError("expected lemma<TAB>synset_id<TAB>label", path, lineno)
            key = (cols[0], cols[1])
            if key not in featurized:
                raise FormatError(f"no features for link {key}", path, lineno)
            instances.append(Instance(key, featurized[key], cols[2]))
    return TrainSet(instances)


# ---------------------------------------------------------------------------
# Classifiers
# ---------------------------------------------------------------------------


def _check_finite(X):
    X = np.asarray(X, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite feature value")
    return X


class GaussianNB:
    """Two-class Gaussian naive Bayes over continuous features.

    Index 0 of the fitted arrays is the ``correct`` class, index 1 ``incorrect``.
    Variances use the unbiased estimator and are floored at ``VAR_FLOOR``.
    """

    def __init__(self, feature_names: Sequence[str] = FEATURE_NAMES):
        self.feature_names = tuple(feature_names)
        self.priors = None
        self.means = None
        self.variances = None

    def fit(self, X, y) -> "GaussianNB":
        X = _check_finite(X)
        y = np.asarray(y, dtype=bool)
        priors, means, variances = [], [], []
        for cls in (True, False):
            rows = X[y == cls]
            if len(rows) < 2:
                name = "correct" if cls else "incorrect"
                raise ValueError(f"class {name!r} has {len(rows)} instance(s); need at least 2")
            priors.append(len(rows) / len(X))
            means.append(rows.mean(axis=0))
            variances.append(np.maximum(rows.var(axis=0, ddof=1), VAR_FLOOR))
        self.priors = np.array(priors)
        self.means = np.array(means)
        self.variances = np.array(variances)
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = _check_finite(np.atleast_2d(X))
        out = np.empty((len(X), 2))
        for c in range(2):
            var = self.variances[c]
            ll = -0.5 * (np.log(2 * np.pi * var) + (X - self.means[c]) ** 2 / var)
            out[:, c] = ll.sum(axis=1) + math.log(self.priors[c])
        return out

    def predict_proba(self, X) -> np.ndarray:
        """Posterior probability of the ``correct`` class."""
        jll = self.joint_log_likelihood(X)
        # p = 1 / (1 + exp(l_incorrect - l_correct))
        return 1.0 / (1.0 + np.exp(np.clip(jll[:, 1] - jll[:, 0], -745, 709)))

    def predict(self, X) -> np.ndarray:
        return self.predict_proba(X) > 0.5

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "features": list(self.feature_names),
            "classes": ["correct", "incorrect"],
            "priors": self.priors.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GaussianNB":
        if d.get("format") != MODEL_FORMAT or d.get("version") != MODEL_VERSION:
            raise ValueError("unsupported model format")
        m = cls(d["features"])
        m.priors = np.array(d["priors"], dtype=np.float64)
        m.means = np.array(d["means"], dtype=np.float64)
        m.variances = np.array(d["variances"], dtype=np.float64)
        if m.means.shape != (2, len(m.feature_names)) or m.variances.shape != m.means.shape:
            raise ValueError("model arrays do not match feature list")
        return m


def train_nb(ts: TrainSet, feature_idx: Sequence[int] | None = None) -> GaussianNB:
    X = ts.X
    names = FEATURE_NAMES
    if feature_idx is not None:
        X = X[:, list(feature_idx)]
        names = tuple(FEATURE_NAMES[i] for i in feature_idx)
    return GaussianNB(names).fit(X, ts.y)


def predict_nb(model: GaussianNB, fv) -> tuple[str, float]:
    x = fv.as_array() if isinstance(fv, FeatureVector) else np.asarray(fv, dtype=np.float64)
    if len(model.feature_names) != len(FEATURE_NAMES) and isinstance(fv, FeatureVector):
        x = x[[FEATURE_NAMES.index(n) for n in model.feature_names]]
    p = float(model.predict_proba(x)[0])
    return ("correct" if p > 0.5 else "incorrect"), p


def save_model(model: GaussianNB, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_dict(), fh, indent=2)
        fh.write("\n")


def load_model(path) -> GaussianNB:
    with open(path, encoding="utf-8") as fh:
        try:
            return GaussianNB.from_dict(json.load(fh))
        except (ValueError, KeyError) as exc:
            raise FormatError(f"bad model file: {exc}", path) from None


class KNearest:
    """k-nearest-neighbour vote on z-scored features.

    Zero-variance features are left out of the distance. Equal distances
    keep training order; a split vote goes to ``incorrect``.
    """

    def __init__(self, k: int = 10):
        self.k = k

    def fit(self, X, y) -> "KNearest":
        X = _check_finite(X)
        if self.k > len(X):
            raise ValueError(f"k={self.k} exceeds training size {len(X)}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        self.mean = X.mean(axis=0)
        self.std = X.std(axis=0)
        self.keep = self.std > 0
        self.Z = (X[:, self.keep] - self.mean[self.keep]) / self.std[self.keep]
        self.y = np.asarray(y, dtype=bool)
        return self

    def _votes(self, X) -> np.ndarray:
        X = _check_finite(np.atleast_2d(X))
        Z = (X[:, self.keep] - self.mean[self.keep]) / self.std[self.keep]
        out = np.empty(len(Z))
        for i, z in enumerate(Z):
            d = np.sum((self.Z - z) ** 2, axis=1)
            nearest = np.argsort(d, kind="stable")[: self.k]
            out[i] = self.y[nearest].sum()
        return out

    def predict_proba(self, X) -> np.ndarray:
        return self._votes(X) / self.k

    def predict(self, X) -> np.ndarray:
        votes = self._votes(X)
        return votes > self.k - votes


def train_knn(ts: TrainSet, k: int = 10) -> KNearest:
    return KNearest(k).fit(ts.X, ts.y)


def predict_knn(model: KNearest, fv) -> str:
    x = fv.as_array() if isinstance(fv, FeatureVector) else fv
    return "correct" if model.predict(x)[0] else "incorrect"


def make_classifier(spec: str = "nb"):
    """Build an unfitted classifier from ``"nb"``, ``"knn"`` or ``"knn:<k>"``."""
    name, _, arg = spec.partition(":")
    if name == "nb":
        return GaussianNB()
    if name == "knn":
        return KNearest(int(arg) if arg else 10)
    raise ValueError(f"unknown classifier spec {spec!r}")


# ---------------------------------------------------------------------------
# Evaluation of classifiers
# ---------------------------------------------------------------------------


def _ratio(a, b):
    return a / b if b else float("nan")


def _f1(p, r):
    if math.isnan(p) or math.isnan(r) or p + r == 0:
        return float("nan") if math.isnan(p) or math.isnan(r) else 0.0
    return 2 * p * r / (p + r)


@dataclass
class MetricsReport:
    """Confusion counts with the ``correct`` class as positive."""

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __add__(self, other: "MetricsReport") -> "MetricsReport":
        return MetricsReport(self.tp + other.tp, self.fp + other.fp,
                             self.fn + other.fn, self.tn + other.tn)

    @classmethod
    def from_predictions(cls, y_true, y_pred) -> "MetricsReport":
        t = np.asarray(y_true, dtype=bool)
        p = np.asarray(y_pred, dtype=bool)
        return cls(int(np.sum(t & p)), int(np.sum(~t & p)),
                   int(np.sum(t & ~p)), int(np.sum(~t & ~p)))

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def correct_precision(self) -> float:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def correct_recall(self) -> float:
        return _ratio(self.tp, self.tp + self.fn)

    @property
    def correct_f(self) -> float:
        return _f1(self.correct_precision, self.correct_recall)

    @property
    def incorrect_precision(self) -> float:
        return _ratio(self.tn, self.tn + self.fn)

    @property
    def incorrect_recall(self) -> float:
        return _ratio(self.tn, self.tn + self.fp)

    def _weighted(self, a, b):
        # class-support weighted average; undefined class values count as 0
        n_c, n_i = self.tp + self.fn, self.tn + self.fp
        a = 0.0 if math.isnan(a) else a
        b = 0.0 if math.isnan(b) else b
        return _ratio(a * n_c + b * n_i, n_c + n_i)

    @property
    def precision(self) -> float:
        return self._weighted(self.correct_precision, self.incorrect_precision)

    @property
    def recall(self) -> float:
        return self._weighted(self.correct_recall, self.incorrect_recall)

    def to_dict(self) -> dict:
        def clean(x):
            return None if isinstance(x, float) and math.isnan(x) else x

        return {
            "confusion": {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn},
            "correct": {"precision": clean(self.correct_precision),
                        "recall": clean(self.correct_recall),
                        "f_measure": clean(self.correct_f)},
            "incorrect": {"precision": clean(self.incorrect_precision),
                          "recall": clean(self.incorrect_recall)},
            "weighted": {"precision": clean(self.precision), "recall": clean(self.recall)},
            "instances": self.total,
        }


def stratified_folds(y, folds: int = 10, seed: int = 0) -> np.ndarray:
    """Fold index per instance.

    Each class is shuffled and dealt round-robin, continuing the deal across
    classes, so both per-class and total fold sizes differ by at most one.
    """
    y = np.asarray(y, dtype=bool)
    rng = np.random.default_rng(seed)
    assign = np.empty(len(y), dtype=np.int64)
    offset = 0
    for cls in (True, False):
        idx = np.flatnonzero(y == cls)
        if len(idx) < folds:
            name = "correct" if cls else "incorrect"
            raise ValueError(f"class {name!r} has {len(idx)} instances, fewer than {folds} folds")
        idx = idx[rng.permutation(len(idx))]
        assign[idx] = (offset + np.arange(len(idx))) % folds
        offset += len(idx)
    return assign


def cross_validate(
    ts: TrainSet,
    folds: int = 10,
    seed: int = 0,
    classifier: str = "nb",
    feature_idx: Sequence[int] | None = None,
    workers: int = 1,
) -> MetricsReport:
    """Stratified k-fold cross-validation with metrics pooled over folds."""
    X, y = ts.X, ts.y
    if feature_idx is not None:
        X = X[:, list(feature_idx)]
    assign = stratified_folds(y, folds, seed)

    def run(fold):
        test = assign == fold
        model = make_classifier(classifier).fit(X[~test], y[~test])
        return MetricsReport.from_predictions(y[test], model.predict(X[test]))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(folds)))
    else:
        parts = [run(f) for f in range(folds)]
    total = MetricsReport()
    for part in parts:
        total = total + part
    return total


# ---------------------------------------------------------------------------
# Feature ranking
# ---------------------------------------------------------------------------


def entropy_bits(labels) -> float:
    labels = np.asarray(labels)
    if len(labels) == 0:
        return 0.0
    _, counts = np.unique(labels, return_counts=True)
    p = counts / counts.sum()
    return float(-np.sum(p * np.log2(p)))


def equal_frequency_bins(values, bins: int = 10) -> np.ndarray:
    """Bin index per value, depending only on the order of the values.

    Features with at most ``bins`` distinct values keep one bin per value;
    otherwise a value goes to bin ``floor(bins * rank / n)`` where rank is the
    number of strictly smaller values, so ties always share a bin.
    """
    v = np.asarray(values, dtype=np.float64)
    uniq, inverse = np.unique(v, return_inverse=True)
    if len(uniq) <= bins:
        return inverse
    below = np.searchsorted(np.sort(v), uniq, side="left")
    return np.minimum(bins * below // len(v), bins - 1)[inverse]


def information_gain(
    ts: TrainSet, bins: int = 10, feature_names: Sequence[str] = FEATURE_NAMES
) -> list[tuple[str, float]]:
    """Information gain (bits) of each binned feature about the label,
    sorted descending; equal scores keep declaration order."""
    X, y = ts.X, ts.y
    h = entropy_bits(y)
    scores = []
    for j, name in enumerate(feature_names):
        b = equal_frequency_bins(X[:, j], bins)
        cond = 0.0
        for val in np.unique(b):
            mask = b == val
            cond += mask.mean() * entropy_bits(y[mask])
        scores.append((name, max(0.0, h - cond)))
    order = sorted(range(len(scores)), key=lambda i: (-scores[i][1], i))
    return [scores[i] for i in order]


def incremental_feature_eval(
    ts: TrainSet,
    ranking: Sequence,
    classifier: str = "nb",
    folds: int = 10,
    seed: int = 0,
    workers: int = 1,
) -> list[dict]:
    """Cross-validate on each prefix of the feature ranking."""
    names = [r[0] if isinstance(r, tuple) else r for r in ranking]
    rows = []
    for n in range(1, len(names) + 1):
        idx = [FEATURE_NAMES.index(x) for x in names[:n]]
        rep = cross_validate(ts, folds, seed, classifier, idx, workers)
        rows.append({
            "features": names[:n],
            "precision": rep.correct_precision,
            "recall": rep.correct_recall,
            "f_measure": rep.correct_f,
            "report": rep,
        })
    return rows


# ---------------------------------------------------------------------------
# Induction
# ---------------------------------------------------------------------------


def induce_wordnet(
    model,
    candidates: Iterable,
    featurized: Mapping[tuple[str, str], FeatureVector],
    seed_links: Iterable = (),
) -> list[tuple[str, str, float]]:
    """Candidate links the model accepts, minus the seed links, sorted."""
    seed = {_key(s) for s in seed_links}
    keys = sorted({_key(c) for c in candidates} - seed)
    if not keys:
        return []
    X = np.stack([featurized[k].as_array() for k in keys])
    if isinstance(model, GaussianNB) and len(model.feature_names) != len(FEATURE_NAMES):
        X = X[:, [FEATURE_NAMES.index(n) for n in model.feature_names]]
    proba = model.predict_proba(X)
    accepted = model.predict(X)
    return [(f, s, float(p)) for (f, s), p, ok in zip(keys, proba, accepted) if ok]


def save_induced(rows: Iterable[tuple[str, str, float]], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for f, s, p in sorted(rows):
            fh.write(f"{f}\t{s}\t{p:.4f}\n")


def load_induced(path) -> list[tuple[str, str, float]]:
    """Read an induced wordnet; a missing posterior column reads as 1."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            cols = line.rstrip("\r\n").split("\t")
            if len(cols) < 2:
                raise FormatError("expected lemma<TAB>synset_id[<TAB>posterior]", path, lineno)
            try:
                p = float(cols[2]) if len(cols) > 2 else 1.0
            except ValueError:
                raise FormatError(f"bad posterior {cols[2]!r}", path, lineno) from None
            out.append((cols[0], cols[1], p))
    return out
