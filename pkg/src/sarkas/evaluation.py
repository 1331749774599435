"""Metrics, deterministic splits, and the three experiment harnesses.

Experiments are pure functions of (corpus, config, seed): rerunning one
with the same inputs reproduces the report byte for byte. Each report is
a grid of Metrics cells keyed by (algorithm, condition) and can render
itself as TSV, a pretty text table, or canonical JSON.

* experiment_sentiment_score  lexical-presence vs sentiment-score unigram
                              encodings on the 3-class task
* experiment_method           direct 3-class vs leveled (gate + polarity)
                              stage 1, with the two sub-classifier
                              accuracies reported alongside
* experiment_sarcasm          unigram-only vs unigram+negativity+
                              interjection sarcasm detection on positive
                              texts, in gold-positive and
                              predicted-positive modes
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import features, learners, normalizer
from .corpus import SENTIMENTS
from .errors import SarkasError
from .learners import Dataset, Model
from .pipeline import (GATE_CLASSES, POLARITY_CLASSES, SARCASM_CLASSES,
                       METHOD_DIRECT, METHOD_LEVELED, Pipeline,
                       PipelineConfig, classify, train_pipeline)
from .util import canonical_json, child_seed

DEFAULT_TRAIN_FRACTION = 0.75


@dataclass
class Metrics:
    """Accuracy, per-class precision/recall/F1 and the confusion matrix.

    Confusion rows are gold classes, columns predictions; row sums equal
    the per-class support and the trace over the total is the accuracy.
    """

    classes: tuple
    confusion: list  # k x k nonnegative ints

    @property
    def total(self):
        return sum(sum(row) for row in self.confusion)

    @property
    def accuracy(self):
        total = self.total
        if total == 0:
            return 0.0
        return sum(self.confusion[i][i] for i in range(len(self.classes))) / total

    def support(self, cls):
        return sum(self.confusion[self.classes.index(cls)])

    def precision(self, cls):
        j = self.classes.index(cls)
        predicted = sum(row[j] for row in self.confusion)
        return self.confusion[j][j] / predicted if predicted else 0.0

    def recall(self, cls):
        i = self.classes.index(cls)
        gold = sum(self.confusion[i])
        return self.confusion[i][i] / gold if gold else 0.0

    def f1(self, cls):
        p, r = self.precision(cls), self.recall(cls)
        return 2 * p * r / (p + r) if p + r else 0.0

    def to_dict(self):
        return {
            "classes": list(self.classes),
            "confusion": self.confusion,
            "n": self.total,
            "accuracy": self.accuracy,
            "per_class": {
                cls: {"precision": self.precision(cls),
                      "recall": self.recall(cls),
                      "f1": self.f1(cls),
                      "support": self.support(cls)}
                for cls in self.classes
            },
        }


def confusion_from_pairs(pairs, classes):
    """Exact counting of (gold, predicted) label pairs."""
    index = {c: i for i, c in enumerate(classes)}
    matrix = [[0] * len(classes) for _ in classes]
    for gold, pred in pairs:
        matrix[index[gold]][index[pred]] += 1
    return Metrics(classes=tuple(classes), confusion=matrix)


def evaluate(target, test_corpus):
    """Metrics for a Pipeline on Documents or a Model on a Dataset.

    A pipeline is scored on its final label against the sarcasm-resolved
    gold label (a gold sarcastic positive counts as negative).
    """
    if isinstance(target, Pipeline):
        pairs = []
        for i, doc in enumerate(test_corpus):
            if doc.sentiment is None:
                raise SarkasError(f"test document {i} has no sentiment label")
            pred = classify(target, doc.text, doc.topic)
            pairs.append((doc.resolved_label(), pred.final_label))
        return confusion_from_pairs(pairs, SENTIMENTS)
    if isinstance(target, Model):
        if not isinstance(test_corpus, Dataset):
            raise SarkasError("evaluating a bare model needs a Dataset")
        pairs = [
            (test_corpus.classes[lab], learners.predict(target, vec))
            for vec, lab in zip(test_corpus.vectors, test_corpus.labels)
        ]
        return confusion_from_pairs(pairs, test_corpus.classes)
    raise SarkasError(f"cannot evaluate object of type {type(target).__name__}")


def split(corpus, train_fraction, seed):
    """Deterministic stratified split by sentiment label.

    Partitions are disjoint and exhaustive; per-class training counts are
    round(fraction * class size).
    """
    if not 0.0 <= train_fraction <= 1.0:
        raise SarkasError(f"train fraction {train_fraction} outside [0, 1]")
    by_class = {}
    for i, doc in enumerate(corpus):
        if doc.sentiment is None:
            raise SarkasError(f"document {i} has no sentiment label; "
                              "stratified split needs labels")
        by_class.setdefault(doc.sentiment, []).append(i)
    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for cls in sorted(by_class):
        indices = np.array(by_class[cls])
        rng.shuffle(indices)
        n_train = int(round(train_fraction * len(indices)))
        train_idx.extend(indices[:n_train])
        test_idx.extend(indices[n_train:])
    return ([corpus[i] for i in sorted(train_idx)],
            [corpus[i] for i in sorted(test_idx)])


@dataclass
class ExperimentReport:
    """Grid of Metrics cells keyed by (algorithm, condition)."""

    name: str
    algorithms: tuple
    conditions: tuple
    cells: dict = field(default_factory=dict)  # (algorithm, condition) -> Metrics
    config: dict = field(default_factory=dict)
    seed: int = 0

    def accuracy(self, algorithm, condition):
        return self.cells[(algorithm, condition)].accuracy

    def to_dict(self):
        return {
            "experiment": self.name,
            "algorithms": list(self.algorithms),
            "conditions": list(self.conditions),
            "cells": {
                f"{alg}|{cond}": self.cells[(alg, cond)].to_dict()
                for alg, cond in sorted(self.cells)
            },
            "config": self.config,
            "seed": self.seed,
        }

    def to_json(self):
        return canonical_json(self.to_dict())

    def rows(self):
        for alg in self.algorithms:
            for cond in self.conditions:
                if (alg, cond) in self.cells:
                    yield alg, cond, self.cells[(alg, cond)]

    def to_tsv(self):
        classes = []
        for _, _, m in self.rows():
            for cls in m.classes:
                if cls not in classes:
                    classes.append(cls)
        header = ["algorithm", "condition", "n", "accuracy"]
        for cls in classes:
            header += [f"precision_{cls}", f"recall_{cls}", f"f1_{cls}"]
        lines = ["\t".join(header)]
        for alg, cond, m in self.rows():
            row = [alg, cond, str(m.total), f"{m.accuracy:.6f}"]
            for cls in classes:
                if cls in m.classes:
                    row += [f"{m.precision(cls):.6f}", f"{m.recall(cls):.6f}",
                            f"{m.f1(cls):.6f}"]
                else:
                    row += ["", "", ""]
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def to_text(self):
        width = max(len(c) for c in self.conditions) + 2
        alg_width = max(len(a) for a in self.algorithms) + 2
        lines = [f"== {self.name} (seed {self.seed}) ==",
                 "accuracy by algorithm and condition:"]
        header = " " * alg_width + "".join(c.rjust(width) for c in self.conditions)
        lines.append(header)
        for alg in self.algorithms:
            row = alg.ljust(alg_width)
            for cond in self.conditions:
                cell = self.cells.get((alg, cond))
                row += (f"{cell.accuracy:.3f}".rjust(width) if cell
                        else "-".rjust(width))
            lines.append(row)
        return "\n".join(lines) + "\n"


def _run_cells(jobs, tasks):
    """Run (key, thunk) pairs, optionally in a thread pool.

    Results are assembled by key, so the report never depends on
    completion order.
    """
    if jobs <= 1:
        return {key: thunk() for key, thunk in tasks}
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = {key: pool.submit(thunk) for key, thunk in tasks}
        return {key: fut.result() for key, fut in futures.items()}


def _stage1_dataset(docs, token_lists, space, lex, aux, registry, config,
                    classes, labeler):
    vecs = [
        features.vectorize(doc, tokens, space, lex, aux, registry,
                           negation_window=config.negation_window,
                           topic_policy=config.topic_policy)
        for doc, tokens in zip(docs, token_lists)
    ]
    return Dataset(vecs, [labeler(d) for d in docs], classes)


def experiment_sentiment_score(corpus, lex, aux, config=None, seed=42,
                               train_fraction=DEFAULT_TRAIN_FRACTION,
                               jobs=1):
    """Lexical-presence vs sentiment-score unigram encodings (3-class)."""
    base = config or PipelineConfig()
    train_docs, test_docs = split(corpus, train_fraction,
                                  child_seed(seed, "split"))
    train_tokens = [normalizer.normalize(d.text, aux) for d in train_docs]
    test_tokens = [normalizer.normalize(d.text, aux) for d in test_docs]
    terms = features.vocabulary_terms(lex, aux)
    registry = (features.compute_negativity(train_docs)
                if features.GROUP_NEGATIVITY in base.stage1_groups else None)

    conditions = (features.MODE_LEXICAL, features.MODE_SCORE)
    tasks = []
    for mode in conditions:
        space = features.FeatureSpace(terms=terms, mode=mode,
                                      groups=frozenset(base.stage1_groups),
                                      accumulate=base.accumulate)
        train_data = _stage1_dataset(
            train_docs, train_tokens, space, lex, aux, registry, base,
            SENTIMENTS, lambda d: SENTIMENTS.index(d.sentiment))
        test_data = _stage1_dataset(
            test_docs, test_tokens, space, lex, aux, registry, base,
            SENTIMENTS, lambda d: SENTIMENTS.index(d.sentiment))
        for alg in learners.ALGORITHMS:
            def thunk(alg=alg, mode=mode, train_data=train_data,
                      test_data=test_data):
                model = learners.train(
                    train_data, alg, seed=child_seed(seed, "train", alg, mode))
                return evaluate(model, test_data)
            tasks.append(((alg, mode), thunk))

    cells = _run_cells(jobs, tasks)
    return ExperimentReport(
        name="sentiment-score", algorithms=learners.ALGORITHMS,
        conditions=conditions, cells=cells,
        config={"train_fraction": train_fraction,
                "feature_groups": sorted(base.stage1_groups)},
        seed=seed)


def experiment_method(corpus, lex, aux, config=None, seed=42,
                      train_fraction=DEFAULT_TRAIN_FRACTION, jobs=1):
    """Direct vs leveled stage 1, plus the leveled sub-classifier rows.

    The two sub-classifiers are scored on their own tasks: the gate on
    neutral-vs-opinion over all test documents, the polarity model on
    pos-vs-neg over gold opinion documents only. End-to-end leveled
    errors contain each sub-classifier's errors, so the end-to-end
    accuracy can exceed neither in a corpus where the polarity task is
    no harder than the gate task.
    """
    base = config or PipelineConfig()
    train_docs, test_docs = split(corpus, train_fraction,
                                  child_seed(seed, "split"))
    test_tokens = [normalizer.normalize(d.text, aux) for d in test_docs]
    terms = features.vocabulary_terms(lex, aux)
    registry = (features.compute_negativity(train_docs)
                if features.GROUP_NEGATIVITY in base.stage1_groups else None)
    space = features.FeatureSpace(terms=terms, mode=base.feature_mode,
                                  groups=frozenset(base.stage1_groups),
                                  accumulate=base.accumulate)
    test_vecs = [
        features.vectorize(doc, tokens, space, lex, aux, registry,
                           negation_window=base.negation_window,
                           topic_policy=base.topic_policy)
        for doc, tokens in zip(test_docs, test_tokens)
    ]

    def run_method(alg, method):
        cfg = PipelineConfig(
            stage1_method=method, stage1_algorithm=alg, stage2_algorithm=alg,
            feature_mode=base.feature_mode, stage1_groups=base.stage1_groups,
            stage2_groups=base.stage2_groups,
            negation_window=base.negation_window,
            topic_policy=base.topic_policy, accumulate=base.accumulate,
            seed=child_seed(seed, "train", alg, method))
        pipe = train_pipeline(train_docs, lex, aux, cfg)
        out = {}
        pairs = []
        for doc, vec in zip(test_docs, test_vecs):
            if cfg.stage1_method == METHOD_DIRECT:
                pred = learners.predict(pipe.models["sentiment"], vec)
            else:
                if learners.predict(pipe.models["gate"], vec) == "neutral":
                    pred = "neu"
                else:
                    pred = learners.predict(pipe.models["polarity"], vec)
            pairs.append((doc.sentiment, pred))
        out[(alg, method)] = confusion_from_pairs(pairs, SENTIMENTS)
        if method == METHOD_LEVELED:
            gate_pairs = [
                ("neutral" if doc.sentiment == "neu" else "opinion",
                 learners.predict(pipe.models["gate"], vec))
                for doc, vec in zip(test_docs, test_vecs)
            ]
            out[(alg, "leveled/gate")] = confusion_from_pairs(
                gate_pairs, GATE_CLASSES)
            pol_pairs = [
                (doc.sentiment, learners.predict(pipe.models["polarity"], vec))
                for doc, vec in zip(test_docs, test_vecs)
                if doc.sentiment != "neu"
            ]
            out[(alg, "leveled/polarity")] = confusion_from_pairs(
                pol_pairs, POLARITY_CLASSES)
        return out

    tasks = [((alg, method), lambda alg=alg, method=method: run_method(alg, method))
             for alg in learners.ALGORITHMS
             for method in (METHOD_DIRECT, METHOD_LEVELED)]
    partials = _run_cells(jobs, tasks)
    cells = {}
    for part in partials.values():
        cells.update(part)
    return ExperimentReport(
        name="classification-method", algorithms=learners.ALGORITHMS,
        conditions=(METHOD_DIRECT, METHOD_LEVELED, "leveled/gate",
                    "leveled/polarity"),
        cells=cells,
        config={"train_fraction": train_fraction,
                "feature_mode": base.feature_mode,
                "feature_groups": sorted(base.stage1_groups)},
        seed=seed)


SARCASM_FEATURE_SETS = {
    "unigram": (features.GROUP_UNIGRAM,),
    "unigram+neg+intj": (features.GROUP_UNIGRAM, features.GROUP_NEGATIVITY,
                         features.GROUP_INTERJECTION),
}


def experiment_sarcasm(corpus, lex, aux, config=None, seed=42,
                       train_fraction=DEFAULT_TRAIN_FRACTION, jobs=1):
    """Sarcasm detection on positive texts, with and without the cues.

    Cells cover feature set x evaluation mode. Gold mode scores the
    sarcasm model on gold-positive test documents. Predicted mode feeds
    it the documents a stage-1 model called positive; among those, only
    documents that carry a gold sarcasm label can be scored, so cell
    sizes differ.
    """
    base = config or PipelineConfig()
    train_docs, test_docs = split(corpus, train_fraction,
                                  child_seed(seed, "split"))
    train_tokens = [normalizer.normalize(d.text, aux) for d in train_docs]
    test_tokens = [normalizer.normalize(d.text, aux) for d in test_docs]
    registry = features.compute_negativity(train_docs)
    terms = features.vocabulary_terms(lex, aux)

    train_pos = [(d, t) for d, t in zip(train_docs, train_tokens)
                 if d.sentiment == "pos"]
    gold_pos = [(d, t) for d, t in zip(test_docs, test_tokens)
                if d.sentiment == "pos"]
    for d, _ in train_pos + gold_pos:
        if d.sarcasm is None:
            raise SarkasError(f"positive document {d.text[:40]!r} is missing "
                              "its sarcasm label")

    # Stage-1 models (one per algorithm) select the predicted-positive sets.
    stage1_space = features.FeatureSpace(
        terms=terms, mode=base.feature_mode,
        groups=frozenset(base.stage1_groups), accumulate=base.accumulate)
    stage1_train = _stage1_dataset(
        train_docs, train_tokens, stage1_space, lex, aux, registry, base,
        SENTIMENTS, lambda d: SENTIMENTS.index(d.sentiment))
    predicted_pos = {}
    for alg in learners.ALGORITHMS:
        stage1_model = learners.train(
            stage1_train, alg, seed=child_seed(seed, "stage1", alg))
        selected = []
        for doc, tokens in zip(test_docs, test_tokens):
            vec = features.vectorize(doc, tokens, stage1_space, lex, aux,
                                     registry,
                                     negation_window=base.negation_window,
                                     topic_policy=base.topic_policy)
            if learners.predict(stage1_model, vec) == "pos":
                selected.append((doc, tokens))
        predicted_pos[alg] = [(d, t) for d, t in selected
                              if d.sarcasm is not None]

    def run_cell(alg, feature_set, mode):
        space = features.FeatureSpace(
            terms=terms, mode=base.feature_mode,
            groups=frozenset(SARCASM_FEATURE_SETS[feature_set]),
            accumulate=base.accumulate)

        def build(pairs):
            vecs = [
                features.vectorize(doc, tokens, space, lex, aux, registry,
                                   negation_window=base.negation_window,
                                   topic_policy=base.topic_policy)
                for doc, tokens in pairs
            ]
            labels = [1 if doc.sarcasm else 0 for doc, _ in pairs]
            return Dataset(vecs, labels, SARCASM_CLASSES)

        model = learners.train(
            build(train_pos), alg,
            seed=child_seed(seed, "train", alg, feature_set))
        eval_pairs = gold_pos if mode == "gold" else predicted_pos[alg]
        return evaluate(model, build(eval_pairs))

    conditions = tuple(f"{fs}/{mode}" for mode in ("gold", "predicted")
                       for fs in SARCASM_FEATURE_SETS)
    tasks = []
    for alg in learners.ALGORITHMS:
        for mode in ("gold", "predicted"):
            for fs in SARCASM_FEATURE_SETS:
                key = (alg, f"{fs}/{mode}")
                tasks.append((key, lambda alg=alg, fs=fs, mode=mode:
                              run_cell(alg, fs, mode)))
    cells = _run_cells(jobs, tasks)
    return ExperimentReport(
        name="sarcasm-features", algorithms=learners.ALGORITHMS,
        conditions=conditions, cells=cells,
        config={"train_fraction": train_fraction,
                "feature_mode": base.feature_mode,
                "stage1_groups": sorted(base.stage1_groups)},
        seed=seed)
