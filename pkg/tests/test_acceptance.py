"""End-to-end acceptance criteria.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""

import math
import time

import numpy as np
import pytest

from wnlink import cli
from wnlink.evaluation import wordnet_stats
from wnlink.features import FEATURE_NAMES, FeatureVector, load_features
from wnlink.learning import (
    GaussianNB,
    Instance,
    KNearest,
    TrainSet,
    cross_validate,
    entropy_bits,
    incremental_feature_eval,
    information_gain,
    load_induced,
    load_train_set,
    predict_nb,
    stratified_folds,
)
from wnlink.distributional import js_divergence
from wnlink.synthgen import WorldSpec, build_world

import oracles
from test_features import run_featurize, run_oracle
from microworld import micro_world


@pytest.fixture(scope="module")
def default_run(tmp_path_factory):
    """Synthesize the default world and run the whole pipeline with defaults."""
    out = tmp_path_factory.mktemp("acceptance") / "world"
    start = time.perf_counter()
    assert cli.main(["synth", str(out)]) == 0
    assert cli.main(["pipeline", "-c", str(out / "pipeline.ini")]) == 0
    elapsed = time.perf_counter() - start
    work = out / "work"
    feats = load_features(work / "features.tsv")
    ts = load_train_set(work / "trainset.tsv", feats)
    return out, work, ts, elapsed


def test_1_feature_oracles(criterion):
    with criterion(1, "feature oracle suite") as c:
        start = time.perf_counter()
        worlds = links = 0
        worst = 0.0
        for seed in range(60):
            mw = micro_world(seed)
            ours, ref = run_featurize(mw), run_oracle(mw)
            assert set(ours) == set(ref)
            for key, fv in ours.items():
                worst = max(worst, max(abs(a - b) for a, b in zip(fv, ref[key])))
            worlds += 1
            links += len(ours)
        elapsed = time.perf_counter() - start
        assert worlds >= 50 and worst <= 1e-9, f"max deviation {worst}"
        assert elapsed < 30, f"took {elapsed:.1f}s"
        c["msg"] = f"{worlds} worlds, {links} links, max |diff| {worst:.1e}, {elapsed:.1f}s"


def test_2_metric_suite(criterion):
    with criterion(2, "Jensen-Shannon metric suite") as c:
        start = time.perf_counter()
        rng = np.random.default_rng(0)
        worst_slack = -math.inf
        for _ in range(1000):
            k = int(rng.integers(2, 12))
            alpha = float(rng.choice([0.1, 1.0, 5.0]))
            p, q, r = rng.dirichlet(np.ones(k) * alpha, size=3)
            for a, b in ((p, q), (q, r), (p, r)):
                assert js_divergence(a, b) == js_divergence(b, a)
                assert 0 <= js_divergence(a, b) <= 1
            assert abs(js_divergence(p, p)) <= 1e-12
            d = lambda a, b: math.sqrt(js_divergence(a, b))
            slack = d(p, r) - d(p, q) - d(q, r)
            worst_slack = max(worst_slack, slack)
            assert slack <= 1e-9
        assert js_divergence([1, 0], [0, 1]) == pytest.approx(1.0)
        elapsed = time.perf_counter() - start
        assert elapsed < 5, f"took {elapsed:.1f}s"
        c["msg"] = f"1000 triples, worst triangle slack {worst_slack:.2e}, {elapsed:.2f}s"


def test_3_classifier_hand_check(criterion):
    with criterion(3, "classifier hand-check") as c:
        m = GaussianNB(["x"])
        m.priors = np.array([0.5, 0.5])
        m.means = np.array([[2.0], [-2.0]])
        m.variances = np.array([[2.0], [2.0]])
        label, p = predict_nb(m, [1.0])
        assert abs(p - 0.8808) <= 1e-3 and label == "correct", p
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(100):
            X = rng.normal(size=(30, 7)).round(1)
            X[:, int(rng.integers(7))] = 0.5
            y = rng.random(30) < 0.5
            k = int(rng.integers(1, 12))
            model = KNearest(k).fit(X, y)
            Q = np.vstack([rng.normal(size=(5, 7)).round(1), X[:3]])
            for q, got in zip(Q, model.predict(Q)):
                assert got == oracles.knn_predict(X.tolist(), y.tolist(), q.tolist(), k)
                checked += 1
        c["msg"] = f"posterior {p:.4f}; kNN agrees on {checked} queries over 100 sets"


def _ts(X, y):
    return TrainSet([Instance((str(i), "x"), FeatureVector(*row), "correct" if t else "incorrect")
                     for i, (row, t) in enumerate(zip(X, y))])


def test_4_information_gain(criterion, default_run):
    with criterion(4, "information gain") as c:
        rng = np.random.default_rng(0)
        y = rng.random(500) < 0.35
        X = rng.normal(size=(500, 7))
        X[:, 0] = y
        X[:, 1] = 3.0
        gains = dict(information_gain(_ts(X, y)))
        assert abs(gains["R"] - entropy_bits(y)) <= 1e-9
        assert gains["SS"] == 0

        _, _, ts, _ = default_run
        col = FEATURE_NAMES.index("R")
        X = ts.X.copy()
        X[:, col] = rng.permutation(X[:, col])
        ranking = information_gain(_ts(X, ts.y))
        assert ranking[-1][0] == "R", ranking
        c["msg"] = (f"perfect {gains['R']:.6f} = H(label); shuffled R ranks last "
                    f"(IG {ranking[-1][1]:.4f} < {ranking[-2][0]} {ranking[-2][1]:.4f})")


def test_5_cross_validation(criterion, default_run):
    with criterion(5, "cross-validation") as c:
        _, _, ts, _ = default_run
        assign = stratified_folds(ts.y, 10, 0)
        for mask in (ts.y, ~ts.y):
            per = np.bincount(assign[mask], minlength=10)
            assert per.max() - per.min() <= 1
        a = cross_validate(ts, seed=3)
        assert a == cross_validate(ts, seed=3)
        y = np.array([True] * 10864 + [False] * 4994)
        sizes = np.bincount(stratified_folds(y, 10, 0), minlength=10)
        assert set(sizes.tolist()) <= {1585, 1586} and sizes.sum() == 15858
        c["msg"] = f"fold sizes {sorted(set(sizes.tolist()))}; reproducible reports"


def test_6_end_to_end(criterion, default_run):
    with criterion(6, "end-to-end synthetic run") as c:
        out, work, ts, elapsed = default_run
        world = build_world(WorldSpec())
        seed = set(world.seed_links)
        induced = {r[:2] for r in load_induced(work / "induced.tsv")}
        gold = {k for k, v in world.truth.items() if v and k not in seed}
        hits = len(induced & gold)
        precision = hits / len(induced)
        recall = hits / len(gold)
        assert precision >= 0.90 and recall >= 0.40, (precision, recall)
        assert elapsed < 60, f"took {elapsed:.1f}s"
        c["msg"] = (f"precision {precision:.4f}, recall {recall:.4f} over {len(induced)} "
                    f"induced links; {elapsed:.1f}s")


def test_7_incremental_table(criterion, default_run):
    with criterion(7, "incremental feature table") as c:
        _, _, ts, _ = default_run
        ranking = information_gain(ts)
        rows = incremental_feature_eval(ts, ranking)
        assert len(rows) == 7
        for n, row in enumerate(rows, 1):
            idx = [FEATURE_NAMES.index(name) for name, _ in ranking[:n]]
            rep = cross_validate(ts, feature_idx=idx)
            assert row["report"] == rep
            assert (row["precision"], row["recall"]) == (rep.correct_precision, rep.correct_recall)
        c["msg"] = "7 rows match independent cross-validation: " + ", ".join(n for n, _ in ranking)


def test_8_statistics(criterion):
    with criterion(8, "wordnet statistics") as c:
        links = [("w1", "1-n"), ("w1", "2-n"), ("w2", "2-n"), ("w3", "3-v"), ("w3", "4-v"),
                 ("w3", "1-n"), ("w4", "5-a"), ("w5", "6-r"), ("w6", "5-a"), ("w7", "7-n")]
        s = wordnet_stats(links)
        assert (s.words, s.synsets, s.pairs) == (7, 7, 10)
        assert s.polysemous_words == 2 and s.polysemy_rate == 2 / 7
        c["msg"] = "7 words, 7 synsets, 10 pairs, polysemy rate 2/7"
