"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test registers a pass/fail line that pytest prints in its terminal
summary (see conftest). Trend criteria run on the bundled synthetic
corpora at seed 42 with default hyperparameters.
"""

import math
import random
import time

import numpy as np
import pytest

from conftest import criterion

from sarkas import learners
from sarkas.corpus import Document
from sarkas.evaluation import (experiment_method, experiment_sarcasm,
                               experiment_sentiment_score)
from sarkas.features import FeatureSpace, FeatureVector
from sarkas.generator import CorpusSpec, generate_synthetic_corpus
from sarkas.lexicon import merge_translations
from sarkas.normalizer import collapse_vowel_runs, convert_numerics, normalize
from sarkas.pipeline import (PipelineConfig, classify, load_pipeline,
                             save_pipeline, train_pipeline)

SEED = 42


@pytest.fixture(scope="module")
def default_corpus(lex, aux):
    return generate_synthetic_corpus(CorpusSpec.default(), SEED, lex, aux)


@pytest.fixture(scope="module")
def sarcasm_corpus(lex, aux):
    return generate_synthetic_corpus(CorpusSpec.sarcasm_default(), SEED,
                                     lex, aux)


@pytest.fixture(scope="module")
def trained_pipeline(default_corpus, lex, aux):
    return train_pipeline(default_corpus, lex, aux,
                          PipelineConfig(seed=SEED))


def make_space(d):
    return FeatureSpace(terms=tuple(f"t{i:02d}" for i in range(d)),
                        mode="lexical", groups=frozenset(["unigram"]))


def make_vec(space, values):
    fv = FeatureVector(space)
    for i, x in enumerate(values):
        fv.set(i, x)
    return fv


def test_criterion_1_normalizer_fidelity(aux, default_corpus):
    with criterion(1, "normalizer fidelity + corpus idempotence, < 1 s"):
        start = time.perf_counter()
        assert convert_numerics("ga2l") == "gagal"
        assert collapse_vowel_runs("cemunguuudh") == "cemungudh"
        assert normalize("ga2l", aux) == ["gagal"]
        assert normalize("cemungudh", aux) == ["semangat"]
        assert normalize("cemunguuudh", aux) == ["semangat"]
        for doc in default_corpus:
            once = normalize(doc.text, aux)
            assert normalize(" ".join(once), aux) == once
        assert time.perf_counter() - start < 1.0


def test_criterion_2_lexicon_averaging():
    with criterion(2, "lexicon averaging exact + permutation invariance"):
        lex = merge_translations([("cocok", 0.5, 0.0),
                                  ("memajukan", 0.375, 0.0)])
        assert lex.entries["cocok"].pos_score == 0.5
        assert lex.entries["memajukan"].pos_score == 0.375
        merged = merge_translations([("cocok", 0.625, 0.0),
                                     ("cocok", 0.375, 0.0),
                                     ("memajukan", 0.375, 0.0)])
        assert merged.entries["cocok"].pos_score == 0.5
        assert merged.entries["memajukan"].pos_score == 0.375

        rows = [("a", 0.1, 0.2), ("b", 0.5, 0.0), ("a", 0.3, 0.1),
                ("c", 0.25, 0.25), ("a", 0.7, 0.05), ("b", 0.1, 0.4),
                ("c", 0.0, 1.0), ("a", 0.42, 0.13)]
        reference = merge_translations(rows)
        rng = random.Random(SEED)
        for _ in range(1000):
            shuffled = rows[:]
            rng.shuffle(shuffled)
            assert merge_translations(shuffled) == reference


def test_criterion_3_nb_oracle_equivalence():
    with criterion(3, "NB posteriors match brute-force oracle to 1e-9, "
                      "< 10 s"):
        start = time.perf_counter()
        rng = np.random.default_rng(SEED)
        for _ in range(200):
            d = int(rng.integers(1, 4))
            n = int(rng.integers(2, 9))
            k = int(rng.integers(2, 4))
            while True:
                y = rng.integers(0, k, size=n).tolist()
                if len(set(y)) >= 2:
                    break
            X = np.round(rng.uniform(0, 3, (n, d))
                         * (rng.random((n, d)) < 0.7), 3)
            space = make_space(d)
            classes = tuple(chr(65 + i) for i in range(k))
            data = learners.Dataset([make_vec(space, row) for row in X],
                                    y, classes)
            model = learners.train(data, "nb")
            query = np.round(rng.uniform(0, 3, d), 3)
            dist = learners.predict_dist(model, make_vec(space, query))
            joint = []
            for c in range(k):
                rows = X[np.asarray(y) == c]
                prior = len(rows) / n
                sums = rows.sum(axis=0)
                theta = (sums + 1.0) / (sums.sum() + 1.0 * d)
                p = prior
                for f in range(d):
                    p *= math.pow(theta[f], query[f])
                joint.append(p)
            z = sum(joint)
            for c in range(k):
                assert abs(dist[classes[c]] - joint[c] / z) < 1e-9
        assert time.perf_counter() - start < 10.0


def test_criterion_4_maxent_gradient_check():
    with criterion(4, "maxent gradient vs central differences, rel err "
                      "<= 1e-4"):
        rng = np.random.default_rng(SEED)
        h = 1e-5
        for _ in range(20):
            n = int(rng.integers(2, 9))
            d = int(rng.integers(1, 6))
            k = int(rng.integers(2, 4))
            X = rng.normal(size=(n, d))
            Y = np.zeros((n, k))
            Y[np.arange(n), rng.integers(0, k, n)] = 1.0
            lam = 1e-3
            for _ in range(10):
                W = rng.normal(size=(d, k))
                b = rng.normal(size=k)
                _, gw, gb = learners.maxent_objective(X, Y, W, b, lam)
                analytic = np.concatenate([gw.ravel(), gb])
                numeric = []
                flat = W.ravel()
                for idx in range(flat.size):
                    wp, wm = flat.copy(), flat.copy()
                    wp[idx] += h
                    wm[idx] -= h
                    op = learners.maxent_objective(
                        X, Y, wp.reshape(d, k), b, lam)[0]
                    om = learners.maxent_objective(
                        X, Y, wm.reshape(d, k), b, lam)[0]
                    numeric.append((op - om) / (2 * h))
                for j in range(k):
                    bp, bm = b.copy(), b.copy()
                    bp[j] += h
                    bm[j] -= h
                    op = learners.maxent_objective(X, Y, W, bp, lam)[0]
                    om = learners.maxent_objective(X, Y, W, bm, lam)[0]
                    numeric.append((op - om) / (2 * h))
                numeric = np.asarray(numeric)
                rel = (np.linalg.norm(analytic - numeric)
                       / max(np.linalg.norm(numeric), 1e-12))
                assert rel <= 1e-4


def test_criterion_5_svm_separable_convergence():
    with criterion(5, "SVM 100% training accuracy on 50 separable sets "
                      "within 100 epochs"):
        for trial in range(50):
            rng = np.random.default_rng(1000 + trial)
            n = int(rng.integers(4, 21))
            d = int(rng.integers(2, 5))
            direction = rng.normal(size=d)
            direction /= np.linalg.norm(direction)
            rows, labels = [], []
            for i in range(n):
                lab = i % 2
                point = ((1.0 if lab else -1.0) * direction
                         + rng.normal(size=d) * 0.25)
                proj = point @ direction
                # pin every point at least 0.55 from the hyperplane, so
                # the separation margin is >= 0.55 > 0.1
                if lab and proj < 0.55:
                    point += (0.55 - proj) * direction
                if not lab and proj > -0.55:
                    point -= (proj + 0.55) * direction
                rows.append(point)
                labels.append(lab)
            margin = min(abs(np.asarray(rows) @ direction))
            assert margin >= 0.1
            space = make_space(d)
            data = learners.Dataset([make_vec(space, r) for r in rows],
                                    labels, ("A", "B"))
            model = learners.train(data, "svm",
                                   hyperparams={"epochs": 100}, seed=trial)
            preds = [learners.predict(model, v) for v in data.vectors]
            assert preds == [("A", "B")[lab] for lab in labels]


def test_criterion_6_score_beats_lexical(default_corpus, lex, aux):
    with criterion(6, "SCORE >= LEXICAL per learner, mean gain >= 2 pts, "
                      "< 60 s"):
        start = time.perf_counter()
        report = experiment_sentiment_score(default_corpus, lex, aux,
                                            seed=SEED)
        gains = []
        for alg in report.algorithms:
            lexical = report.accuracy(alg, "lexical")
            score = report.accuracy(alg, "score")
            assert score >= lexical, f"{alg}: {score} < {lexical}"
            gains.append(100 * (score - lexical))
        assert sum(gains) / len(gains) >= 2.0
        assert time.perf_counter() - start < 60.0


def test_criterion_7_sarcasm_cues_help(sarcasm_corpus, lex, aux):
    with criterion(7, "negativity+interjection gain >= 5 pts per learner, "
                      "< 60 s"):
        start = time.perf_counter()
        report = experiment_sarcasm(sarcasm_corpus, lex, aux, seed=SEED)
        for alg in report.algorithms:
            for mode in ("gold", "predicted"):
                base = report.accuracy(alg, f"unigram/{mode}")
                full = report.accuracy(alg, f"unigram+neg+intj/{mode}")
                gain = 100 * (full - base)
                assert gain >= 5.0, f"{alg}/{mode}: gain {gain:.1f} < 5"
        assert time.perf_counter() - start < 60.0


def test_criterion_8_method_harness(default_corpus, lex, aux, capsys):
    with criterion(8, "method harness: 3x2 cells + sub-rows, leveled "
                      "composition bound"):
        report = experiment_method(default_corpus, lex, aux, seed=SEED)
        cells = {(a, c) for a in report.algorithms
                 for c in ("direct", "leveled")}
        assert cells <= set(report.cells)
        directions = []
        for alg in report.algorithms:
            leveled = report.accuracy(alg, "leveled")
            gate = report.accuracy(alg, "leveled/gate")
            polarity = report.accuracy(alg, "leveled/polarity")
            assert leveled <= gate + 1e-12
            assert leveled <= polarity + 1e-12
            direct = report.accuracy(alg, "direct")
            directions.append(
                f"{alg}: direct {direct:.3f} vs leveled {leveled:.3f} "
                f"({'direct' if direct >= leveled else 'leveled'} ahead)")
        # the direct-vs-leveled direction is reported, not asserted
        with capsys.disabled():
            print("\n[criterion 8] direct-vs-leveled on this corpus:")
            for line in directions:
                print(f"  {line}")


def test_criterion_9_pipeline_contract(trained_pipeline, lex, aux):
    with criterion(9, "sarcasm verdict iff positive; negative on sarcasm; "
                      "deterministic classify (1000 inputs)"):
        probe = generate_synthetic_corpus(
            CorpusSpec.from_counts(400, 320, 280, sarcasm_rate=0.5),
            SEED + 1, lex, aux)
        assert len(probe) == 1000
        rng = random.Random(SEED)
        for doc in probe:
            topic = doc.topic if rng.random() < 0.9 else None
            pred = classify(trained_pipeline, doc.text, topic)
            assert (pred.sarcasm is not None) == (pred.sentiment == "pos")
            assert ("sarcasm" in pred.stage_scores) == \
                (pred.sentiment == "pos")
            if pred.sarcasm:
                assert pred.final_label == "neg"
            else:
                assert pred.final_label == pred.sentiment
            assert classify(trained_pipeline, doc.text, topic) == pred


def test_criterion_10_persistence(tmp_path, trained_pipeline, default_corpus,
                                  lex, aux):
    with criterion(10, "save/load identity on 500 inputs; byte-deterministic "
                       "artifacts"):
        bundle = tmp_path / "bundle"
        save_pipeline(trained_pipeline, bundle)
        loaded = load_pipeline(bundle)
        probe = generate_synthetic_corpus(
            CorpusSpec.from_counts(200, 160, 140, sarcasm_rate=0.5),
            SEED + 2, lex, aux)
        assert len(probe) == 500
        for doc in probe:
            assert classify(loaded, doc.text, doc.topic) == \
                classify(trained_pipeline, doc.text, doc.topic)

        again = tmp_path / "again"
        retrained = train_pipeline(default_corpus, lex, aux,
                                   PipelineConfig(seed=SEED))
        save_pipeline(retrained, again)
        import os
        rels = sorted(os.path.relpath(os.path.join(root, f), bundle)
                      for root, _, fs in os.walk(bundle) for f in fs)
        assert rels
        for rel in rels:
            assert (bundle / rel).read_bytes() == (again / rel).read_bytes(), \
                f"{rel} not byte-deterministic"
