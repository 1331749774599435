"""Two-stage classification pipeline.

Stage 1 assigns one of three sentiment classes (positive, negative,
neutral), either directly with a single 3-class model or with the
leveled method: a neutral-vs-opinion gate followed by a positive-vs-
negative model that only ever sees opinion texts. Stage 2 runs a sarcasm
model, but only on texts stage 1 called positive. A sarcastic positive
is reported with final label negative (sarcasm flips the apparent
polarity to its opposite) while the raw stage outputs stay available on
the Prediction.

A trained pipeline persists as a bundle directory holding the stage
models, the topic-negativity registry, the lexicon and auxiliary word
lists it was trained with, and a canonical JSON manifest; a bundle is
byte-deterministic under a fixed seed and fully self-contained for
prediction.
"""

import json
import os
from dataclasses import dataclass, field

from . import features, learners, lexicon, normalizer
from .corpus import Document, SENTIMENTS
from .errors import ModelFormatError, SarkasError, TrainingError
from .util import canonical_json, child_seed

METHOD_DIRECT = "direct"
METHOD_LEVELED = "leveled"

GATE_CLASSES = ("neutral", "opinion")
POLARITY_CLASSES = ("neg", "pos")
SARCASM_CLASSES = ("literal", "sarcastic")

BUNDLE_MAGIC = "SARKAS-BUNDLE"
BUNDLE_VERSION = 1

DEFAULT_STAGE1_GROUPS = (features.GROUP_UNIGRAM, features.GROUP_QUESTION)
DEFAULT_STAGE2_GROUPS = (features.GROUP_UNIGRAM, features.GROUP_NEGATIVITY,
                         features.GROUP_INTERJECTION)


@dataclass(frozen=True)
class PipelineConfig:
    stage1_method: str = METHOD_DIRECT
    stage1_algorithm: str = "nb"
    stage2_algorithm: str = "nb"
    feature_mode: str = features.MODE_SCORE
    stage1_groups: tuple = DEFAULT_STAGE1_GROUPS
    stage2_groups: tuple = DEFAULT_STAGE2_GROUPS
    negation_window: int = features.DEFAULT_NEGATION_WINDOW
    topic_policy: str = "lenient"
    accumulate: str = "sum"
    stage1_hyperparams: dict | None = None
    stage2_hyperparams: dict | None = None
    seed: int = 42

    def __post_init__(self):
        if self.stage1_method not in (METHOD_DIRECT, METHOD_LEVELED):
            raise SarkasError(f"unknown stage-1 method {self.stage1_method!r}")
        for alg in (self.stage1_algorithm, self.stage2_algorithm):
            if alg not in learners.ALGORITHMS:
                raise SarkasError(f"unknown algorithm {alg!r}")
        if features.GROUP_UNIGRAM not in self.stage2_groups:
            raise SarkasError("stage-2 feature groups must include unigram")
        if self.topic_policy not in ("lenient", "strict"):
            raise SarkasError(f"unknown topic policy {self.topic_policy!r}")

    def to_dict(self):
        return {
            "stage1_method": self.stage1_method,
            "stage1_algorithm": self.stage1_algorithm,
            "stage2_algorithm": self.stage2_algorithm,
            "feature_mode": self.feature_mode,
            "stage1_groups": sorted(self.stage1_groups),
            "stage2_groups": sorted(self.stage2_groups),
            "negation_window": self.negation_window,
            "topic_policy": self.topic_policy,
            "accumulate": self.accumulate,
            "stage1_hyperparams": self.stage1_hyperparams,
            "stage2_hyperparams": self.stage2_hyperparams,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, obj):
        obj = dict(obj)
        obj["stage1_groups"] = tuple(obj["stage1_groups"])
        obj["stage2_groups"] = tuple(obj["stage2_groups"])
        return cls(**obj)


@dataclass
class Prediction:
    """Stage outputs for one text.

    sarcasm is present exactly when stage 1 said positive; final_label is
    negative whenever sarcasm is true, otherwise it equals sentiment.
    """

    sentiment: str
    sarcasm: bool | None
    final_label: str
    stage_scores: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "sentiment": self.sentiment,
            "sarcasm": self.sarcasm,
            "final_label": self.final_label,
            "stage_scores": self.stage_scores,
        }


@dataclass
class Pipeline:
    config: PipelineConfig
    lex: object
    aux: object
    stage1_space: features.FeatureSpace
    stage2_space: features.FeatureSpace
    models: dict  # name -> Model; keys: sentiment | gate,polarity; sarcasm
    registry: features.TopicNegativityRegistry | None
    training_sizes: dict = field(default_factory=dict)


def _needs_registry(config):
    return (features.GROUP_NEGATIVITY in config.stage1_groups
            or features.GROUP_NEGATIVITY in config.stage2_groups)


def _build_spaces(lex, aux, config):
    terms = features.vocabulary_terms(lex, aux)
    stage1 = features.FeatureSpace(terms=terms, mode=config.feature_mode,
                                   groups=frozenset(config.stage1_groups),
                                   accumulate=config.accumulate)
    stage2 = features.FeatureSpace(terms=terms, mode=config.feature_mode,
                                   groups=frozenset(config.stage2_groups),
                                   accumulate=config.accumulate)
    return stage1, stage2


def _vectorize_all(docs, token_lists, space, lex, aux, registry, config):
    return [
        features.vectorize(doc, tokens, space, lex, aux, registry,
                           negation_window=config.negation_window,
                           topic_policy=config.topic_policy)
        for doc, tokens in zip(docs, token_lists)
    ]


def train_pipeline(train_corpus, lex, aux, config=None):
    """Train stage-1 and stage-2 models plus the negativity registry."""
    config = config or PipelineConfig()
    for i, doc in enumerate(train_corpus):
        if doc.sentiment is None:
            raise TrainingError(f"training document {i} has no sentiment label")
    positives = [d for d in train_corpus if d.sentiment == "pos"]
    if not positives:
        raise TrainingError("no positive documents: the sarcasm stage is "
                            "untrainable")
    for doc in positives:
        if doc.sarcasm is None:
            raise TrainingError(
                f"positive document {doc.text[:40]!r} is missing its sarcasm "
                "label")

    registry = features.compute_negativity(train_corpus) \
        if _needs_registry(config) else None
    stage1_space, stage2_space = _build_spaces(lex, aux, config)
    token_lists = [normalizer.normalize(d.text, aux) for d in train_corpus]

    models = {}
    sizes = {}
    stage1_vecs = _vectorize_all(train_corpus, token_lists, stage1_space,
                                 lex, aux, registry, config)
    if config.stage1_method == METHOD_DIRECT:
        labels = [SENTIMENTS.index(d.sentiment) for d in train_corpus]
        data = learners.Dataset(stage1_vecs, labels, SENTIMENTS)
        sizes["sentiment"] = len(train_corpus)
        models["sentiment"] = learners.train(
            data, config.stage1_algorithm, config.stage1_hyperparams,
            seed=child_seed(config.seed, "stage1"))
    else:
        gate_labels = [0 if d.sentiment == "neu" else 1 for d in train_corpus]
        gate_data = learners.Dataset(stage1_vecs, gate_labels, GATE_CLASSES)
        sizes["gate"] = len(train_corpus)
        models["gate"] = learners.train(
            gate_data, config.stage1_algorithm, config.stage1_hyperparams,
            seed=child_seed(config.seed, "stage1-gate"))
        opinion = [(v, d) for v, d in zip(stage1_vecs, train_corpus)
                   if d.sentiment != "neu"]
        pol_vecs = [v for v, _ in opinion]
        pol_labels = [POLARITY_CLASSES.index(d.sentiment) for _, d in opinion]
        pol_data = learners.Dataset(pol_vecs, pol_labels, POLARITY_CLASSES)
        sizes["polarity"] = len(opinion)
        models["polarity"] = learners.train(
            pol_data, config.stage1_algorithm, config.stage1_hyperparams,
            seed=child_seed(config.seed, "stage1-polarity"))

    pos_pairs = [(d, t) for d, t in zip(train_corpus, token_lists)
                 if d.sentiment == "pos"]
    stage2_vecs = _vectorize_all([d for d, _ in pos_pairs],
                                 [t for _, t in pos_pairs],
                                 stage2_space, lex, aux, registry, config)
    stage2_labels = [1 if d.sarcasm else 0 for d, _ in pos_pairs]
    stage2_data = learners.Dataset(stage2_vecs, stage2_labels, SARCASM_CLASSES)
    sizes["sarcasm"] = len(pos_pairs)
    models["sarcasm"] = learners.train(
        stage2_data, config.stage2_algorithm, config.stage2_hyperparams,
        seed=child_seed(config.seed, "stage2"))

    return Pipeline(config=config, lex=lex, aux=aux,
                    stage1_space=stage1_space, stage2_space=stage2_space,
                    models=models, registry=registry, training_sizes=sizes)


def _stage1_sentiment(pipe, doc, tokens):
    """Run stage 1; returns (sentiment, stage_scores in invocation order)."""
    config = pipe.config
    vec = features.vectorize(doc, tokens, pipe.stage1_space, pipe.lex,
                             pipe.aux, pipe.registry,
                             negation_window=config.negation_window,
                             topic_policy=config.topic_policy)
    scores = {}
    if config.stage1_method == METHOD_DIRECT:
        model = pipe.models["sentiment"]
        scores["sentiment"] = learners.predict_dist(model, vec)
        sentiment = learners.predict(model, vec)
    else:
        gate = pipe.models["gate"]
        scores["gate"] = learners.predict_dist(gate, vec)
        if learners.predict(gate, vec) == "neutral":
            sentiment = "neu"
        else:
            polarity = pipe.models["polarity"]
            scores["polarity"] = learners.predict_dist(polarity, vec)
            sentiment = learners.predict(polarity, vec)
    return sentiment, scores


def classify_leveled_stage1(pipe, tokens):
    """Leveled stage-1 verdict for an already normalized token list.

    The polarity model is invoked only when the gate says opinion, which
    is observable in classify()'s stage_scores.
    """
    if pipe.config.stage1_method != METHOD_LEVELED:
        raise SarkasError("pipeline was not trained with the leveled method")
    sentiment, _ = _stage1_sentiment(pipe, Document(text=""), tokens)
    return sentiment


def classify(pipe, text, topic=None):
    """Normalize, run stage 1, and run the sarcasm stage on positives."""
    doc = Document(text=text, topic=topic)
    tokens = normalizer.normalize(text, pipe.aux)
    sentiment, stage_scores = _stage1_sentiment(pipe, doc, tokens)
    sarcasm = None
    final = sentiment
    if sentiment == "pos":
        vec = features.vectorize(doc, tokens, pipe.stage2_space, pipe.lex,
                                 pipe.aux, pipe.registry,
                                 negation_window=pipe.config.negation_window,
                                 topic_policy=pipe.config.topic_policy)
        model = pipe.models["sarcasm"]
        stage_scores["sarcasm"] = learners.predict_dist(model, vec)
        sarcasm = learners.predict(model, vec) == "sarcastic"
        final = "neg" if sarcasm else "pos"
    return Prediction(sentiment=sentiment, sarcasm=sarcasm,
                      final_label=final, stage_scores=stage_scores)


_RESOURCE_FILES = {
    "lexicon": "resources/lexicon.tsv",
    "informal_dict": "resources/informal.tsv",
    "negations": "resources/negations.txt",
    "interjections": "resources/interjections.txt",
    "question_words": "resources/question_words.txt",
    "context_overrides": "resources/context_overrides.tsv",
    "affix_overrides": "resources/affix_overrides.tsv",
}


def save_pipeline(pipe, bundle_dir):
    """Write a self-contained, byte-deterministic bundle directory."""
    os.makedirs(bundle_dir, exist_ok=True)
    os.makedirs(os.path.join(bundle_dir, "resources"), exist_ok=True)
    model_files = {}
    for name, model in sorted(pipe.models.items()):
        fname = f"{name}.model"
        learners.save_model(model, os.path.join(bundle_dir, fname))
        model_files[name] = fname

    lexicon.save_lexicon(pipe.lex,
                         os.path.join(bundle_dir, _RESOURCE_FILES["lexicon"]))
    lexicon.save_aux_lists(
        pipe.aux,
        **{key: os.path.join(bundle_dir, rel)
           for key, rel in _RESOURCE_FILES.items() if key != "lexicon"})

    registry_file = None
    if pipe.registry is not None:
        registry_file = "negativity.tsv"
        pipe.registry.save(os.path.join(bundle_dir, registry_file))

    manifest = {
        "magic": BUNDLE_MAGIC,
        "format_version": BUNDLE_VERSION,
        "config": pipe.config.to_dict(),
        "models": model_files,
        "registry": registry_file,
        "resources": _RESOURCE_FILES,
        "training_sizes": pipe.training_sizes,
    }
    with open(os.path.join(bundle_dir, "manifest.json"), "w",
              encoding="utf-8") as fh:
        fh.write(canonical_json(manifest) + "\n")


def load_pipeline(bundle_dir):
    manifest_path = os.path.join(bundle_dir, "manifest.json")
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise ModelFormatError(f"{bundle_dir}: not a pipeline bundle "
                               "(no manifest.json)")
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{manifest_path}: corrupt manifest ({exc.msg})")
    if manifest.get("magic") != BUNDLE_MAGIC:
        raise ModelFormatError(f"{manifest_path}: missing {BUNDLE_MAGIC} magic")
    if manifest.get("format_version") != BUNDLE_VERSION:
        raise ModelFormatError(
            f"{manifest_path}: bundle version {manifest.get('format_version')}"
            f", expected {BUNDLE_VERSION}")

    config = PipelineConfig.from_dict(manifest["config"])
    lex = lexicon.load_lexicon(
        os.path.join(bundle_dir, manifest["resources"]["lexicon"]))
    aux = lexicon.load_aux_lists(
        **{key: os.path.join(bundle_dir, rel)
           for key, rel in manifest["resources"].items() if key != "lexicon"})
    models = {name: learners.load_model(os.path.join(bundle_dir, fname))
              for name, fname in manifest["models"].items()}
    registry = None
    if manifest.get("registry"):
        registry = features.TopicNegativityRegistry.load(
            os.path.join(bundle_dir, manifest["registry"]))
    # Take the spaces off the loaded models so the space-identity check in
    # predict cannot drift from the rebuilt resources.
    stage1_model = models.get("sentiment") or models["gate"]
    stage1_space = stage1_model.feature_space
    stage2_space = models["sarcasm"].feature_space
    return Pipeline(config=config, lex=lex, aux=aux,
                    stage1_space=stage1_space, stage2_space=stage2_space,
                    models=models, registry=registry,
                    training_sizes=manifest.get("training_sizes", {}))
