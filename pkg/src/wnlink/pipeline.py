"""File-backed pipeline stages sharing one flat ``key = value`` config.

Each stage reads its inputs from the configured resource paths or from the
work directory and writes one documented artifact back to it, so stages can
be run, inspected and re-run independently.
"""

from __future__ import annotations

import configparser
import json
import logging
import math
from dataclasses import dataclass, fields
from pathlib import Path

from . import candidates as cand
from . import distributional as dist
from . import evaluation as ev
from . import features as feat
from . import learning as learn
from .errors import FormatError
from .resources import (
    load_core_synsets,
    load_dictionary,
    load_judged_links,
    load_seed_links,
    load_wordnet,
    pos_profile,
    read_corpus,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

ARTIFACTS = {
    "cv_target": "cv_target.tsv",
    "cv_source": "cv_source.tsv",
    "embeddings": "embeddings.txt",
    "domains": "domains.tsv",
    "candidates_raw": "candidates_raw.tsv",
    "candidates": "candidates.tsv",
    "features": "features.tsv",
    "trainset": "trainset.tsv",
    "model": "model.json",
    "crossval": "crossval.json",
    "ranking": "ranking.json",
    "induced": "induced.tsv",
    "evaluation": "evaluation.json",
    "stats": "stats.json",
}

_PATH_KEYS = ("wordnet", "dictionary", "target_corpus", "source_corpus", "domain_corpus",
              "seed_links", "test_links", "core_synsets", "embeddings", "workdir")


@dataclass
class PipelineConfig:
    wordnet: str | None = None
    dictionary: str | None = None
    target_corpus: str | None = None
    source_corpus: str | None = None
    domain_corpus: str | None = None       # defaults to target_corpus
    seed_links: str | None = None
    test_links: str | None = None
    core_synsets: str | None = None
    embeddings: str | None = None          # pre-trained vectors skip training
    workdir: str = "work"

    cv_k: int = 100
    cv_min_count: int = 1
    emb_dim: int = 300
    emb_window: int = 5
    emb_negatives: int = 5
    emb_epochs: int = 5
    emb_min_count: int = 5
    emb_seed: int = 0
    emb_lr: float = 0.025

    min_word_freq: int = 1
    pos_threshold: float = 0.0
    polysemy_scope: str = "pos"
    importance_ties: str = "all"

    negative_count: int | None = None      # None: as many as positives, capped by the pool
    trainset_seed: int = 0
    classifier: str = "nb"
    folds: int = 10
    cv_seed: int = 0
    ig_bins: int = 10
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        positive = ("cv_k", "emb_dim", "emb_window", "emb_epochs", "folds", "ig_bins", "workers")
        for name in positive:
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for name in ("cv_min_count", "emb_negatives", "emb_min_count", "min_word_freq"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not 0.0 <= self.pos_threshold < 1.0:
            raise ValueError("pos_threshold must lie in [0, 1)")
        if not self.emb_lr > 0:
            raise ValueError("emb_lr must be positive")
        if self.polysemy_scope not in cand.POLYSEMY_SCOPES:
            raise ValueError(f"polysemy_scope must be one of {cand.POLYSEMY_SCOPES}")
        if self.importance_ties not in feat.IMPORTANCE_TIES:
            raise ValueError(f"importance_ties must be one of {feat.IMPORTANCE_TIES}")
        if self.negative_count is not None and self.negative_count < 0:
            raise ValueError("negative_count must be non-negative")
        learn.make_classifier(self.classifier)

    def artifact(self, name: str) -> Path:
        return Path(self.workdir) / ARTIFACTS[name]

    def require(self, *names: str) -> None:
        """Fail early when a configured input is unset or missing."""
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise FileNotFoundError(f"config key {name!r} is not set")
            if not Path(value).exists():
                raise FileNotFoundError(f"{name}: no such file: {value}")

    def require_artifact(self, *names: str) -> None:
        for name in names:
            path = self.artifact(name)
            if not path.exists():
                raise FileNotFoundError(f"missing intermediate artifact {path}; run its stage first")

    @classmethod
    def from_file(cls, path, overrides: dict | None = None) -> "PipelineConfig":
        """Read a flat INI file; relative paths resolve against its directory."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"config: no such file: {path}")
        parser = configparser.ConfigParser(interpolation=None)
        text = path.read_text(encoding="utf-8")
        try:
            parser.read_string("[pipeline]\n" + text, source=str(path))
        except configparser.Error as exc:
            raise FormatError(str(exc), path) from None
        raw = dict(parser["pipeline"])
        for key in list(raw):
            if key in _PATH_KEYS and raw[key]:
                p = Path(raw[key])
                raw[key] = str(p if p.is_absolute() else path.parent / p)
        raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_mapping(raw, source=path)

    @classmethod
    def from_mapping(cls, raw: dict, source=None) -> "PipelineConfig":
        kinds = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, value in raw.items():
            if key not in kinds:
                raise FormatError(f"unknown config key {key!r}", source)
            kind = str(kinds[key])
            if isinstance(value, str):
                value = value.strip()
                if value in ("", "none", "None"):
                    value = None
            try:
                if value is not None and kind.startswith("int"):
                    value = int(value)
                elif value is not None and kind.startswith("float"):
                    value = float(value)
            except ValueError:
                raise FormatError(f"bad value for {key}: {value!r}", source) from None
            kwargs[key] = value
        return cls(**kwargs)

    def to_ini(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name} = {'' if value is None else value}")
        return "\n".join(lines) + "\n"


def _write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _workdir(cfg) -> Path:
    p = Path(cfg.workdir)
    p.mkdir(parents=True, exist_ok=True)
    return p


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def stage_build_cv(cfg: PipelineConfig) -> None:
    cfg.require("target_corpus", "source_corpus")
    _workdir(cfg)
    for name, key in (("cv_target", "target_corpus"), ("cv_source", "source_corpus")):
        corpus = read_corpus(getattr(cfg, key))
        cvs = dist.build_context_vectors(corpus, cfg.cv_k, cfg.cv_min_count)
        dist.save_context_vectors(cvs, cfg.artifact(name))
        logger.info("%s: %d context vectors", name, len(cvs))


def stage_train_embeddings(cfg: PipelineConfig) -> None:
    _workdir(cfg)
    if cfg.embeddings:
        cfg.require("embeddings")
        table = dist.load_embeddings(cfg.embeddings)
    else:
        cfg.require("target_corpus")
        table = dist.train_skipgram(
            read_corpus(cfg.target_corpus), dim=cfg.emb_dim, window=cfg.emb_window,
            negatives=cfg.emb_negatives, epochs=cfg.emb_epochs,
            min_count=cfg.emb_min_count, seed=cfg.emb_seed, lr=cfg.emb_lr,
        )
        logger.info("skip-gram epoch losses: %s", ", ".join(f"{x:.4f}" for x in table.losses))
    dist.save_embeddings(table, cfg.artifact("embeddings"))


def stage_build_domains(cfg: PipelineConfig) -> None:
    path = cfg.domain_corpus or cfg.target_corpus
    cfg.require("domain_corpus" if cfg.domain_corpus else "target_corpus")
    _workdir(cfg)
    corpus = read_corpus(path)
    if not corpus.categories:
        logger.warning("%s has no category labels; domain distributions will be empty", path)
    dists = dist.build_domain_distributions(corpus)
    dist.save_domain_distributions(dists, corpus.categories, cfg.artifact("domains"))


def stage_gen_candidates(cfg: PipelineConfig) -> None:
    cfg.require("wordnet", "dictionary", "target_corpus")
    _workdir(cfg)
    wn = load_wordnet(cfg.wordnet)
    dictionary = load_dictionary(cfg.dictionary)
    corpus = read_corpus(cfg.target_corpus)
    raw = cand.generate_candidates(corpus.vocabulary(cfg.min_word_freq), dictionary, wn)
    kept = cand.prune_pos(raw, pos_profile(corpus), cfg.pos_threshold)
    cand.save_candidates(raw, cfg.artifact("candidates_raw"))
    cand.save_candidates(kept, cfg.artifact("candidates"))
    logger.info("candidates: %d generated, %d after POS pruning", len(raw), len(kept))


def stage_featurize(cfg: PipelineConfig) -> None:
    cfg.require("wordnet", "dictionary")
    cfg.require_artifact("candidates", "cv_target", "cv_source", "embeddings", "domains")
    wn = load_wordnet(cfg.wordnet)
    links = cand.load_candidates(cfg.artifact("candidates"), wn)
    _, domains = dist.load_domain_distributions(cfg.artifact("domains"))
    fv = feat.featurize(
        links,
        wn=wn,
        dictionary=load_dictionary(cfg.dictionary),
        target_cvs=dist.load_context_vectors(cfg.artifact("cv_target")),
        source_cvs=dist.load_context_vectors(cfg.artifact("cv_source")),
        embeddings=dist.load_embeddings(cfg.artifact("embeddings")),
        domains=domains,
        polysemy_scope=cfg.polysemy_scope,
        importance_ties=cfg.importance_ties,
    )
    feat.save_features(fv, cfg.artifact("features"))


def _seed_links(cfg, wn):
    links, _ = load_seed_links(cfg.seed_links, wn)
    return links


def _test_keys(cfg):
    if cfg.test_links and Path(cfg.test_links).exists():
        return {link.key for link in load_judged_links(cfg.test_links)}
    return set()


def stage_build_trainset(cfg: PipelineConfig) -> learn.TrainSet:
    cfg.require("wordnet", "seed_links")
    cfg.require_artifact("candidates", "features")
    wn = load_wordnet(cfg.wordnet)
    seed = _seed_links(cfg, wn)
    links = cand.load_candidates(cfg.artifact("candidates"), wn)
    fv = feat.load_features(cfg.artifact("features"))
    test = _test_keys(cfg)
    n_neg = cfg.negative_count
    if n_neg is None:
        keys = {link.key for link in links}
        seed_keys = {(s.lemma, s.synset_id) for s in seed}
        n_pos = len((seed_keys & keys) - test)
        n_neg = min(n_pos, len(keys - seed_keys - test))
    ts = learn.build_train_set(seed, links, fv, n_neg, test, cfg.trainset_seed)
    learn.save_train_set(ts, cfg.artifact("trainset"))
    logger.info("training set: %s", ts.provenance)
    return ts


def _load_trainset(cfg):
    cfg.require_artifact("trainset", "features")
    return learn.load_train_set(cfg.artifact("trainset"), feat.load_features(cfg.artifact("features")))


def stage_train(cfg: PipelineConfig) -> None:
    ts = _load_trainset(cfg)
    learn.save_model(learn.train_nb(ts), cfg.artifact("model"))


def stage_crossval(cfg: PipelineConfig) -> dict:
    ts = _load_trainset(cfg)
    rep = learn.cross_validate(ts, cfg.folds, cfg.cv_seed, cfg.classifier, workers=cfg.workers)
    out = {"classifier": cfg.classifier, "folds": cfg.folds, "seed": cfg.cv_seed, **rep.to_dict()}
    _write_json(out, cfg.artifact("crossval"))
    return out


def _clean(x):
    return None if isinstance(x, float) and math.isnan(x) else x


def stage_rank_features(cfg: PipelineConfig) -> dict:
    ts = _load_trainset(cfg)
    ranking = learn.information_gain(ts, cfg.ig_bins)
    rows = learn.incremental_feature_eval(ts, ranking, cfg.classifier, cfg.folds,
                                          cfg.cv_seed, cfg.workers)
    out = {
        "information_gain": [{"feature": n, "ig": g} for n, g in ranking],
        "incremental": [
            {"features": r["features"], "precision": _clean(r["precision"]),
             "recall": _clean(r["recall"]), "f_measure": _clean(r["f_measure"])}
            for r in rows
        ],
    }
    _write_json(out, cfg.artifact("ranking"))
    print(ev.render_incremental(rows))
    return out


def stage_induce(cfg: PipelineConfig) -> None:
    cfg.require("wordnet", "seed_links")
    cfg.require_artifact("model", "candidates", "features")
    wn = load_wordnet(cfg.wordnet)
    model = learn.load_model(cfg.artifact("model"))
    links = cand.load_candidates(cfg.artifact("candidates"), wn)
    fv = feat.load_features(cfg.artifact("features"))
    rows = learn.induce_wordnet(model, links, fv, _seed_links(cfg, wn))
    learn.save_induced(rows, cfg.artifact("induced"))
    logger.info("induced wordnet: %d links", len(rows))


def stage_evaluate(cfg: PipelineConfig) -> dict:
    cfg.require("wordnet", "test_links")
    cfg.require_artifact("induced")
    wn = load_wordnet(cfg.wordnet)
    induced = learn.load_induced(cfg.artifact("induced"))
    result = ev.evaluate(induced, load_judged_links(cfg.test_links), wn)
    out = {"total": result["total"].to_dict(),
           "by_pos": {ev.POS_NAMES[p]: s.to_dict() for p, s in result["by_pos"].items()}}
    _write_json(out, cfg.artifact("evaluation"))
    print(ev.render_evaluation(result))
    return out


def stage_stats(cfg: PipelineConfig) -> dict:
    cfg.require("wordnet", "target_corpus")
    cfg.require_artifact("induced")
    wn = load_wordnet(cfg.wordnet)
    induced = learn.load_induced(cfg.artifact("induced"))
    stats = ev.wordnet_stats(induced, wn)
    core = load_core_synsets(cfg.core_synsets) if cfg.core_synsets else ()
    vocab = read_corpus(cfg.target_corpus).vocabulary(cfg.min_word_freq)
    cov = ev.coverage(induced, vocab, wn, core)
    out = {"size": stats.to_dict(), "coverage": cov}
    _write_json(out, cfg.artifact("stats"))
    print(ev.render_stats(stats))
    print()
    print(ev.render_coverage(cov))
    return out


STAGES = {
    "build-cv": stage_build_cv,
    "train-embeddings": stage_train_embeddings,
    "build-domains": stage_build_domains,
    "gen-candidates": stage_gen_candidates,
    "featurize": stage_featurize,
    "build-trainset": stage_build_trainset,
    "train": stage_train,
    "crossval": stage_crossval,
    "rank-features": stage_rank_features,
    "induce": stage_induce,
    "evaluate": stage_evaluate,
    "stats": stage_stats,
}


def run_pipeline(cfg: PipelineConfig, stages=None) -> None:
    """Run stages in order, stopping at the first failure."""
    for name in stages or STAGES:
        if name == "evaluate" and not cfg.test_links:
            logger.warning("no test_links configured; skipping evaluate")
            continue
        logger.info("stage %s", name)
        STAGES[name](cfg)
