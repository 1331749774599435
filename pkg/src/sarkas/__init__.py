"""Indonesian social-media sentiment analysis with sarcasm detection.

Normalizes noisy text, extracts lexicon-scored and sarcasm-oriented
features, and runs a two-stage classification: three-way sentiment, then
sarcasm detection on the texts called positive.
"""

from .corpus import Document, read_jsonl, write_jsonl
from .errors import (DataFormatError, ModelFormatError, SarkasError,
                     TrainingError)
from .features import (FeatureSpace, FeatureVector, TopicNegativityRegistry,
                       compute_negativity, interjection_count, question_flag,
                       score_unigrams, vectorize)
from .generator import CorpusSpec, TopicSpec, generate_synthetic_corpus
from .learners import (Dataset, Model, load_model, predict, predict_dist,
                       save_model, train)
from .lexicon import (AuxLists, LexiconEntry, SentimentLexicon,
                      load_aux_lists, load_lexicon, lookup,
                      merge_translations, save_lexicon)
from .normalizer import normalize, tokenize
from .pipeline import (Pipeline, PipelineConfig, Prediction, classify,
                       classify_leveled_stage1, load_pipeline, save_pipeline,
                       train_pipeline)
from .evaluation import (ExperimentReport, Metrics, evaluate,
                         experiment_method, experiment_sarcasm,
                         experiment_sentiment_score, split)
from .resources import default_aux, default_lexicon

__version__ = "0.1.0"
