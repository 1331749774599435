import os

import pytest

from sarkas.corpus import Document
from sarkas.errors import ModelFormatError, SarkasError, TrainingError
from sarkas.generator import CorpusSpec, generate_synthetic_corpus
from sarkas.learners import predict
from sarkas.pipeline import (PipelineConfig, classify, classify_leveled_stage1,
                             load_pipeline, save_pipeline, train_pipeline)


@pytest.fixture(scope="module")
def small_corpus(lex, aux):
    spec = CorpusSpec.from_counts(80, 60, 50, sarcasm_rate=0.5)
    return generate_synthetic_corpus(spec, 7, lex, aux)


@pytest.fixture(scope="module")
def paper_corpus(lex, aux):
    return generate_synthetic_corpus(CorpusSpec.default(), 42, lex, aux)


@pytest.fixture(scope="module")
def direct_pipe(small_corpus, lex, aux):
    return train_pipeline(small_corpus, lex, aux,
                          PipelineConfig(seed=11))


@pytest.fixture(scope="module")
def leveled_pipe(small_corpus, lex, aux):
    return train_pipeline(small_corpus, lex, aux,
                          PipelineConfig(stage1_method="leveled", seed=11))


class TestTrain:
    def test_stage2_trains_on_positives_only(self, paper_corpus, lex, aux):
        pipe = train_pipeline(paper_corpus, lex, aux, PipelineConfig(seed=3))
        assert pipe.training_sizes["sentiment"] == 980
        assert pipe.training_sizes["sarcasm"] == 250

    def test_leveled_split_sizes(self, paper_corpus, lex, aux):
        pipe = train_pipeline(paper_corpus, lex, aux,
                              PipelineConfig(stage1_method="leveled", seed=3))
        assert pipe.training_sizes["gate"] == 980
        assert pipe.training_sizes["polarity"] == 478
        assert pipe.training_sizes["sarcasm"] == 250

    def test_no_positives_is_error(self, lex, aux):
        corpus = [Document(text="berita hari ini", topic="t",
                           sentiment="neu")] * 4 + \
                 [Document(text="buruk sekali", topic="t", sentiment="neg")] * 4
        with pytest.raises(TrainingError, match="positive"):
            train_pipeline(corpus, lex, aux)

    def test_missing_sarcasm_label_is_error(self, lex, aux):
        corpus = [
            Document(text="bagus", topic="t", sentiment="pos"),  # no sarcasm
            Document(text="buruk", topic="t", sentiment="neg"),
            Document(text="berita", topic="t", sentiment="neu"),
        ]
        with pytest.raises(TrainingError, match="sarcasm"):
            train_pipeline(corpus, lex, aux)

    def test_unlabeled_document_is_error(self, lex, aux):
        with pytest.raises(TrainingError, match="sentiment"):
            train_pipeline([Document(text="x")], lex, aux)

    def test_config_validation(self):
        with pytest.raises(SarkasError, match="unigram"):
            PipelineConfig(stage2_groups=("negativity",))
        with pytest.raises(SarkasError, match="method"):
            PipelineConfig(stage1_method="cascade")
        with pytest.raises(SarkasError, match="algorithm"):
            PipelineConfig(stage1_algorithm="forest")


class TestClassify:
    def test_prediction_invariants(self, direct_pipe, small_corpus):
        for doc in small_corpus[:120]:
            pred = classify(direct_pipe, doc.text, doc.topic)
            assert (pred.sarcasm is not None) == (pred.sentiment == "pos")
            if pred.sarcasm:
                assert pred.final_label == "neg"
            else:
                assert pred.final_label == pred.sentiment
            assert ("sarcasm" in pred.stage_scores) == \
                (pred.sentiment == "pos")

    def test_short_circuit_on_neutral(self, direct_pipe):
        pred = classify(direct_pipe, "siapa yang tahu jadwal acara ini?")
        assert pred.sentiment == "neu"
        assert pred.sarcasm is None
        assert pred.final_label == "neu"
        assert set(pred.stage_scores) == {"sentiment"}

    def test_sarcastic_positive_flips_to_negative(self, direct_pipe,
                                                  small_corpus):
        flipped = 0
        for doc in small_corpus:
            if doc.sentiment == "pos" and doc.sarcasm:
                pred = classify(direct_pipe, doc.text, doc.topic)
                if pred.sarcasm:
                    flipped += 1
                    assert pred.sentiment == "pos"
                    assert pred.final_label == "neg"
        assert flipped > 0

    def test_replay_is_deterministic(self, direct_pipe, small_corpus):
        doc = small_corpus[0]
        assert classify(direct_pipe, doc.text, doc.topic) == \
            classify(direct_pipe, doc.text, doc.topic)

    def test_unknown_topic_lenient_by_default(self, direct_pipe):
        pred = classify(direct_pipe, "bagus sekali acara ini",
                        topic="topik-misterius")
        assert pred.final_label in ("pos", "neg", "neu")

    def test_unknown_topic_strict_raises(self, small_corpus, lex, aux):
        pipe = train_pipeline(small_corpus, lex, aux,
                              PipelineConfig(topic_policy="strict", seed=11))
        positive_doc = next(d for d in small_corpus if d.sentiment == "pos")
        with pytest.raises(SarkasError, match="registry"):
            classify(pipe, positive_doc.text, topic="topik-misterius")


class TestLeveled:
    def test_gate_short_circuits_polarity(self, leveled_pipe, small_corpus):
        saw_gated = saw_opinion = False
        for doc in small_corpus[:150]:
            pred = classify(leveled_pipe, doc.text, doc.topic)
            if pred.sentiment == "neu":
                assert "polarity" not in pred.stage_scores
                saw_gated = True
            else:
                assert "polarity" in pred.stage_scores
                assert pred.sentiment in ("pos", "neg")
                saw_opinion = True
        assert saw_gated and saw_opinion

    def test_matches_manual_composition(self, leveled_pipe, small_corpus,
                                        lex, aux):
        from sarkas import features, normalizer
        for doc in small_corpus[:80]:
            tokens = normalizer.normalize(doc.text, aux)
            vec = features.vectorize(
                Document(text=doc.text, topic=doc.topic), tokens,
                leveled_pipe.stage1_space, lex, aux, leveled_pipe.registry)
            if predict(leveled_pipe.models["gate"], vec) == "neutral":
                expected = "neu"
            else:
                expected = predict(leveled_pipe.models["polarity"], vec)
            assert classify_leveled_stage1(leveled_pipe, tokens) == expected

    def test_leveled_stage1_requires_leveled_pipe(self, direct_pipe):
        with pytest.raises(SarkasError, match="leveled"):
            classify_leveled_stage1(direct_pipe, ["bagus"])


class TestBundle:
    def test_round_trip_predictions(self, tmp_path, direct_pipe,
                                    small_corpus):
        bundle = tmp_path / "bundle"
        save_pipeline(direct_pipe, bundle)
        loaded = load_pipeline(bundle)
        assert loaded.training_sizes == direct_pipe.training_sizes
        for doc in small_corpus[:60]:
            assert classify(loaded, doc.text, doc.topic) == \
                classify(direct_pipe, doc.text, doc.topic)

    def test_bundle_bytes_deterministic(self, tmp_path, small_corpus, lex,
                                        aux):
        paths = []
        for name in ("one", "two"):
            pipe = train_pipeline(small_corpus, lex, aux,
                                  PipelineConfig(seed=99))
            bundle = tmp_path / name
            save_pipeline(pipe, bundle)
            paths.append(bundle)
        files = sorted(os.path.relpath(os.path.join(root, f), paths[0])
                       for root, _, fs in os.walk(paths[0]) for f in fs)
        assert files
        for rel in files:
            a = (paths[0] / rel).read_bytes()
            b = (paths[1] / rel).read_bytes()
            assert a == b, f"{rel} differs between identical trainings"

    def test_manifest_version_gate(self, tmp_path, direct_pipe):
        bundle = tmp_path / "bundle"
        save_pipeline(direct_pipe, bundle)
        manifest = bundle / "manifest.json"
        manifest.write_text(manifest.read_text().replace(
            '"format_version":1', '"format_version":9'))
        with pytest.raises(ModelFormatError, match="version"):
            load_pipeline(bundle)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ModelFormatError, match="manifest"):
            load_pipeline(tmp_path / "nothing")

    def test_leveled_bundle_round_trip(self, tmp_path, leveled_pipe,
                                       small_corpus):
        bundle = tmp_path / "leveled"
        save_pipeline(leveled_pipe, bundle)
        loaded = load_pipeline(bundle)
        for doc in small_corpus[:40]:
            assert classify(loaded, doc.text, doc.topic) == \
                classify(leveled_pipe, doc.text, doc.topic)
