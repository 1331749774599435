"""Feature extraction: scored unigrams plus the three sarcasm-oriented cues.

A document becomes a sparse vector over a frozen FeatureSpace. The unigram
block covers the sentiment vocabulary (lexicon terms plus override surface
terms); out-of-vocabulary tokens never create features. On top of the
unigram block sit three optional scalar slots:

* NEGATIVITY         per-topic fraction of negative training texts
* INTERJECTION_COUNT number of interjection tokens in the text
* QUESTION_FLAG      1 if any question word occurs, else 0

Unigram encoding comes in two modes. LEXICAL stores occurrence counts,
one column per term. SCORE stores the sentiment masses, two paired
columns per term (positive channel, negative channel), after three
adjustments applied in a fixed order of precedence: a context-pair
override beats an affix override beats the base lexicon score, and a
negation word within the preceding window swaps the two channels of the
closest following sentiment word. Keeping the masses in two nonnegative
channels (instead of one signed value) is what lets the multinomial
Naive Bayes learner consume them as fractional counts.
"""

from dataclasses import dataclass, field

from .errors import DataFormatError, SarkasError
from .lexicon import lookup

GROUP_UNIGRAM = "unigram"
GROUP_NEGATIVITY = "negativity"
GROUP_INTERJECTION = "interjection"
GROUP_QUESTION = "question"
ALL_GROUPS = (GROUP_UNIGRAM, GROUP_NEGATIVITY, GROUP_INTERJECTION,
              GROUP_QUESTION)

MODE_LEXICAL = "lexical"
MODE_SCORE = "score"

DEFAULT_NEGATION_WINDOW = 3
UNKNOWN_TOPIC_NEGATIVITY = 0.5


def vocabulary_terms(lex, aux):
    """Sentiment vocabulary: lexicon terms plus override surface terms."""
    terms = set(lex.terms())
    terms.update(aux.affix_overrides)
    terms.update(target for _, target in aux.context_overrides)
    return tuple(sorted(terms))


@dataclass(frozen=True)
class FeatureSpace:
    """Frozen, densely indexed feature layout.

    Column layout: the unigram block first (one column per term in
    LEXICAL mode, a (pos, neg) column pair per term in SCORE mode),
    then the enabled extra slots in the fixed order NEGATIVITY,
    INTERJECTION_COUNT, QUESTION_FLAG.
    """

    terms: tuple
    mode: str = MODE_SCORE
    groups: frozenset = frozenset(ALL_GROUPS)
    accumulate: str = "sum"  # "sum" or "binary" occurrence handling

    def __post_init__(self):
        if self.mode not in (MODE_LEXICAL, MODE_SCORE):
            raise SarkasError(f"unknown feature mode {self.mode!r}")
        unknown = set(self.groups) - set(ALL_GROUPS)
        if unknown:
            raise SarkasError(f"unknown feature groups {sorted(unknown)}")
        if self.accumulate not in ("sum", "binary"):
            raise SarkasError(f"unknown accumulate policy {self.accumulate!r}")
        object.__setattr__(self, "_slot",
                           {t: i for i, t in enumerate(self.terms)})

    @property
    def columns_per_term(self):
        return 2 if self.mode == MODE_SCORE else 1

    @property
    def unigram_width(self):
        if GROUP_UNIGRAM not in self.groups:
            return 0
        return len(self.terms) * self.columns_per_term

    @property
    def dim(self):
        extras = sum(1 for g in (GROUP_NEGATIVITY, GROUP_INTERJECTION,
                                 GROUP_QUESTION) if g in self.groups)
        return self.unigram_width + extras

    def term_columns(self, term):
        """Column index (LEXICAL) or (pos, neg) pair (SCORE) for a term."""
        i = self._slot[term]
        if self.mode == MODE_SCORE:
            return 2 * i, 2 * i + 1
        return i

    def extra_slot(self, group):
        offset = self.unigram_width
        for g in (GROUP_NEGATIVITY, GROUP_INTERJECTION, GROUP_QUESTION):
            if g in self.groups:
                if g == group:
                    return offset
                offset += 1
        raise SarkasError(f"group {group!r} not enabled in this space")

    def to_dict(self):
        return {
            "terms": list(self.terms),
            "mode": self.mode,
            "groups": sorted(self.groups),
            "accumulate": self.accumulate,
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(terms=tuple(obj["terms"]), mode=obj["mode"],
                   groups=frozenset(obj["groups"]),
                   accumulate=obj["accumulate"])


@dataclass
class FeatureVector:
    """Sparse map column index -> value, tied to its FeatureSpace."""

    space: FeatureSpace
    values: dict = field(default_factory=dict)

    def set(self, index, value):
        if value != 0.0:
            self.values[index] = float(value)


def _signed_to_channels(score):
    """Signed override score to (pos_mass, neg_mass) channels."""
    if score >= 0:
        return abs(score), 0.0
    return 0.0, abs(score)


def _unigram_occurrences(tokens, lex, aux, negation_window):
    """Per-occurrence sentiment masses, after overrides and negation.

    Returns a list of (position, term, pos_mass, neg_mass) in text order.
    Precedence per occurrence: context pair > affix override > lexicon.
    Each negation word flips the channels of the closest sentiment-bearing
    occurrence within `negation_window` following tokens, and flips at
    most that one; two negations landing on the same occurrence cancel.
    """
    occurrences = []
    by_position = {}
    for pos, token in enumerate(tokens):
        prev = tokens[pos - 1] if pos > 0 else None
        if prev is not None and (prev, token) in aux.context_overrides:
            masses = _signed_to_channels(aux.context_overrides[(prev, token)])
        elif token in aux.affix_overrides:
            masses = _signed_to_channels(aux.affix_overrides[token])
        else:
            entry = lookup(lex, token)
            if entry is None:
                continue
            masses = (entry.pos_score, entry.neg_score)
        by_position[pos] = len(occurrences)
        occurrences.append([pos, token, masses[0], masses[1]])

    for pos, token in enumerate(tokens):
        if token not in aux.negations:
            continue
        for target in range(pos + 1, min(pos + 1 + negation_window, len(tokens))):
            if target in by_position:
                occ = occurrences[by_position[target]]
                occ[2], occ[3] = occ[3], occ[2]
                break
    return [(p, t, pm, nm) for p, t, pm, nm in occurrences]


def score_unigrams(tokens, lex, aux, negation_window=DEFAULT_NEGATION_WINDOW,
                   accumulate="sum"):
    """Aggregate per-term (pos_mass, neg_mass) for the vocabulary terms.

    Repeated terms accumulate additively; with accumulate="binary" only
    the first occurrence of each term contributes.
    """
    out = {}
    for _, term, pos_mass, neg_mass in _unigram_occurrences(
            tokens, lex, aux, negation_window):
        if term in out:
            if accumulate == "binary":
                continue
            old = out[term]
            out[term] = (old[0] + pos_mass, old[1] + neg_mass)
        else:
            out[term] = (pos_mass, neg_mass)
    return out


def interjection_count(tokens, aux):
    """Number of tokens (with multiplicity) in the interjection list."""
    return sum(1 for tok in tokens if tok in aux.interjections)


def question_flag(tokens, aux):
    """True iff any token is a question word."""
    return any(tok in aux.question_words for tok in tokens)


class TopicNegativityRegistry:
    """Per-topic fraction of negative texts, with the sample sizes."""

    def __init__(self, fractions=None, sample_sizes=None):
        self.fractions = dict(fractions or {})
        self.sample_sizes = dict(sample_sizes or {})

    def __eq__(self, other):
        if not isinstance(other, TopicNegativityRegistry):
            return NotImplemented
        return (self.fractions == other.fractions
                and self.sample_sizes == other.sample_sizes)

    def __contains__(self, topic):
        return topic in self.fractions

    def get(self, topic, policy="lenient"):
        """Negativity for a topic; unknown topics follow the policy.

        Sarcastic one-liners often have no recognizable global topic, so
        the lenient default substitutes an uninformative 0.5 instead of
        failing.
        """
        if topic is not None and topic in self.fractions:
            return self.fractions[topic]
        if policy == "strict":
            raise SarkasError(f"topic {topic!r} not in negativity registry")
        return UNKNOWN_TOPIC_NEGATIVITY

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# topic\tfraction\tsample_size\n")
            for topic in sorted(self.fractions):
                fh.write(f"{topic}\t{self.fractions[topic]!r}"
                         f"\t{self.sample_sizes[topic]}\n")

    @classmethod
    def load(cls, path):
        fractions, sizes = {}, {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) != 3:
                    raise DataFormatError(
                        f"expected 3 columns, got {len(cols)}", path, lineno)
                try:
                    fractions[cols[0]] = float(cols[1])
                    sizes[cols[0]] = int(cols[2])
                except ValueError as exc:
                    raise DataFormatError(str(exc), path, lineno)
        return cls(fractions, sizes)


def compute_negativity(corpus):
    """Per-topic negative fraction over a sentiment-labeled corpus."""
    neg = {}
    total = {}
    for i, doc in enumerate(corpus):
        if doc.topic is None:
            raise SarkasError(
                f"document {i} ({doc.text[:40]!r}) has no topic; negativity "
                "needs a topic on every document")
        if doc.sentiment is None:
            raise SarkasError(
                f"document {i} ({doc.text[:40]!r}) has no sentiment label")
        total[doc.topic] = total.get(doc.topic, 0) + 1
        if doc.sentiment == "neg":
            neg[doc.topic] = neg.get(doc.topic, 0) + 1
    fractions = {t: neg.get(t, 0) / n for t, n in total.items()}
    return TopicNegativityRegistry(fractions, total)


def vectorize(doc, tokens, space, lex, aux, registry=None,
              negation_window=DEFAULT_NEGATION_WINDOW,
              topic_policy="lenient"):
    """Build the feature vector for one normalized document."""
    vec = FeatureVector(space)
    if GROUP_UNIGRAM in space.groups:
        occurrences = _unigram_occurrences(tokens, lex, aux, negation_window)
        if space.mode == MODE_SCORE:
            masses = {}
            for _, term, pm, nm in occurrences:
                if term in masses:
                    if space.accumulate == "binary":
                        continue
                    old = masses[term]
                    masses[term] = (old[0] + pm, old[1] + nm)
                else:
                    masses[term] = (pm, nm)
            for term, (pm, nm) in masses.items():
                pos_col, neg_col = space.term_columns(term)
                vec.set(pos_col, pm)
                vec.set(neg_col, nm)
        else:
            counts = {}
            for _, term, _, _ in occurrences:
                counts[term] = counts.get(term, 0) + 1
            for term, count in counts.items():
                if space.accumulate == "binary":
                    count = 1
                vec.set(space.term_columns(term), count)
    if GROUP_NEGATIVITY in space.groups:
        if registry is None:
            raise SarkasError("negativity enabled but no registry supplied")
        vec.set(space.extra_slot(GROUP_NEGATIVITY),
                registry.get(doc.topic, policy=topic_policy))
    if GROUP_INTERJECTION in space.groups:
        vec.set(space.extra_slot(GROUP_INTERJECTION),
                interjection_count(tokens, aux))
    if GROUP_QUESTION in space.groups:
        vec.set(space.extra_slot(GROUP_QUESTION),
                1.0 if question_flag(tokens, aux) else 0.0)
    return vec
