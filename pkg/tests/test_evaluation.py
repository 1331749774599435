import pytest

from sarkas.corpus import Document, SENTIMENTS
from sarkas.errors import SarkasError
from sarkas.evaluation import (Metrics, confusion_from_pairs, evaluate,
                               experiment_method, experiment_sarcasm,
                               experiment_sentiment_score, split)
from sarkas.generator import CorpusSpec, generate_synthetic_corpus
from sarkas.pipeline import PipelineConfig, train_pipeline


@pytest.fixture(scope="module")
def small_corpus(lex, aux):
    spec = CorpusSpec.from_counts(100, 70, 60, sarcasm_rate=0.5)
    return generate_synthetic_corpus(spec, 5, lex, aux)


class TestMetrics:
    def test_perfect_predictor(self):
        pairs = [("neg", "neg")] * 3 + [("neu", "neu")] * 5 + \
            [("pos", "pos")] * 2
        m = confusion_from_pairs(pairs, SENTIMENTS)
        assert m.accuracy == 1.0
        assert m.confusion == [[3, 0, 0], [0, 5, 0], [0, 0, 2]]
        for cls in SENTIMENTS:
            assert m.precision(cls) == m.recall(cls) == m.f1(cls) == 1.0

    def test_constant_neutral_on_paper_test_shape(self):
        pairs = [("neu", "neu")] * 200 + [("pos", "neu")] * 60 + \
            [("neg", "neu")] * 40
        m = confusion_from_pairs(pairs, SENTIMENTS)
        assert m.total == 300
        assert m.accuracy == pytest.approx(200 / 300)
        assert m.recall("pos") == 0.0
        assert m.precision("pos") == 0.0  # zero-denominator convention

    def test_row_sums_are_support(self):
        pairs = [("neg", "pos"), ("neg", "neg"), ("pos", "pos")]
        m = confusion_from_pairs(pairs, SENTIMENTS)
        assert m.support("neg") == 2
        assert m.support("pos") == 1
        assert m.total == 3

    def test_to_dict_shape(self):
        m = Metrics(classes=("a", "b"), confusion=[[1, 1], [0, 2]])
        d = m.to_dict()
        assert d["n"] == 4
        assert d["accuracy"] == 0.75
        assert set(d["per_class"]) == {"a", "b"}


class TestEvaluate:
    def test_pipeline_conservation(self, small_corpus, lex, aux):
        pipe = train_pipeline(small_corpus, lex, aux, PipelineConfig(seed=1))
        metrics = evaluate(pipe, small_corpus)
        assert metrics.total == len(small_corpus)

    def test_unlabeled_doc_is_error(self, small_corpus, lex, aux):
        pipe = train_pipeline(small_corpus, lex, aux, PipelineConfig(seed=1))
        with pytest.raises(SarkasError, match="label"):
            evaluate(pipe, [Document(text="tanpa label")])

    def test_rejects_unknown_target(self):
        with pytest.raises(SarkasError, match="cannot evaluate"):
            evaluate(object(), [])


class TestSplit:
    def test_full_fraction_gives_empty_test(self, small_corpus):
        train, test = split(small_corpus, 1.0, seed=0)
        assert not test
        assert len(train) == len(small_corpus)

    def test_paper_ratio_preserves_proportions(self, lex, aux):
        spec = CorpusSpec.from_counts(702, 310, 268, sarcasm_rate=0.4)
        corpus = generate_synthetic_corpus(spec, 3, lex, aux)
        fraction = 980 / 1280
        train, _ = split(corpus, fraction, seed=1)
        for cls, total in (("neu", 702), ("pos", 310), ("neg", 268)):
            got = sum(1 for d in train if d.sentiment == cls)
            assert abs(got - fraction * total) <= 1.0

    def test_deterministic_and_disjoint(self, small_corpus):
        a_train, a_test = split(small_corpus, 0.75, seed=9)
        b_train, b_test = split(small_corpus, 0.75, seed=9)
        assert a_train == b_train and a_test == b_test
        assert len(a_train) + len(a_test) == len(small_corpus)
        train_texts = {id(d) for d in a_train}
        assert all(id(d) not in train_texts for d in a_test)

    def test_bad_fraction_rejected(self, small_corpus):
        with pytest.raises(SarkasError):
            split(small_corpus, 1.5, seed=0)

    def test_unlabeled_rejected(self):
        with pytest.raises(SarkasError, match="label"):
            split([Document(text="x")], 0.5, seed=0)


class TestExperimentShapes:
    def test_sentiment_score_shape(self, small_corpus, lex, aux):
        report = experiment_sentiment_score(small_corpus, lex, aux, seed=3)
        assert set(report.cells) == {
            (alg, cond) for alg in ("nb", "maxent", "svm")
            for cond in ("lexical", "score")}
        sizes = {m.total for m in report.cells.values()}
        assert len(sizes) == 1  # same test split everywhere

    def test_method_shape_and_bound(self, small_corpus, lex, aux):
        report = experiment_method(small_corpus, lex, aux, seed=3)
        for alg in report.algorithms:
            for cond in ("direct", "leveled", "leveled/gate",
                         "leveled/polarity"):
                assert (alg, cond) in report.cells
            # a gate error always propagates to the end-to-end label, so
            # this bound is a theorem on any corpus (the polarity bound is
            # not: its accuracy has a smaller denominator)
            leveled = report.accuracy(alg, "leveled")
            assert leveled <= report.accuracy(alg, "leveled/gate") + 1e-12

    def test_sarcasm_shape_and_modes(self, small_corpus, lex, aux):
        report = experiment_sarcasm(small_corpus, lex, aux, seed=3)
        conds = {f"{fs}/{mode}" for fs in ("unigram", "unigram+neg+intj")
                 for mode in ("gold", "predicted")}
        assert set(report.conditions) == conds
        assert set(report.cells) == {(a, c) for a in report.algorithms
                                     for c in conds}
        n_pos = sum(1 for d in small_corpus if d.sentiment == "pos")
        gold_sizes = {report.cells[(a, c)].total
                      for a, c in report.cells if c.endswith("/gold")}
        assert gold_sizes == {n_pos - round(0.75 * n_pos)}

    def test_reports_deterministic(self, small_corpus, lex, aux):
        a = experiment_sentiment_score(small_corpus, lex, aux, seed=4)
        b = experiment_sentiment_score(small_corpus, lex, aux, seed=4)
        assert a.to_json() == b.to_json()

    def test_jobs_do_not_change_results(self, small_corpus, lex, aux):
        serial = experiment_sarcasm(small_corpus, lex, aux, seed=4, jobs=1)
        threaded = experiment_sarcasm(small_corpus, lex, aux, seed=4, jobs=3)
        assert serial.to_json() == threaded.to_json()

    def test_renderings(self, small_corpus, lex, aux):
        report = experiment_method(small_corpus, lex, aux, seed=3)
        tsv = report.to_tsv()
        assert tsv.startswith("algorithm\tcondition\tn\taccuracy")
        assert len(tsv.strip().splitlines()) == 1 + 3 * 4
        text = report.to_text()
        assert "direct" in text and "leveled/polarity" in text
        payload = report.to_json()
        assert '"experiment":"classification-method"' in payload
