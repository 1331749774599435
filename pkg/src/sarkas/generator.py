"""Synthetic corpus generator for desk-scale experiments.

The original Twitter corpus is private, so experiments run on generated
documents whose recipe plants the same phenomena the features target:

* negative texts are often written as a negated positive word ("tidak
  bagus"), invisible to lexical-presence features because negation words
  are not lexicon terms, but visible to score features via the channel
  swap;
* neutral texts carry low-score lexicon words ("bisa") and question
  words;
* sarcastic texts look lexically positive but sit on high-negativity
  topics and carry interjections, while genuine praise sits on benign
  topics and rarely uses them.

Topics are integer allocations, so each topic's realized negativity is
an exact rational of its document counts. A slice of tokens is
roughed up with reversible slang noise (vowel stretching, leet digits,
"ga2l"-style reduplication, informal words) that normalization undoes.

Everything is deterministic under the seed.
"""

import random
from dataclasses import dataclass, field, replace

from .corpus import Document
from .errors import SarkasError
from .resources import default_aux, default_lexicon
from .util import child_seed

# Out-of-lexicon glue words; anything that collides with a loaded lexicon
# or auxiliary list is dropped defensively at generation time.
FILLER_WORDS = (
    "di", "ke", "dari", "yang", "dan", "untuk", "pada", "ini", "itu",
    "saat", "hari", "orang", "warga", "kota", "acara", "jalan", "rumah",
    "pasar", "kabar", "berita", "foto", "jadwal", "lokasi", "daerah",
    "musim", "menu", "tempat", "sekali", "juga", "sudah", "masih",
    "kemarin", "besok", "minggu", "bulan", "tahun", "jakarta", "bandung",
    "surabaya", "begitu", "terlalu", "katanya", "soal", "tentang",
)

DEGREE_WORDS = ("begitu", "terlalu")

BENIGN_TOPICS = ("kuliner-bandung", "liburan-bali", "film-baru",
                 "konser-musik", "festival-kota")
SENSITIVE_TOPICS = ("pemilu-gubernur", "korupsi-anggaran",
                    "layanan-operator", "harga-bbm", "banjir-jakarta")


@dataclass(frozen=True)
class TopicSpec:
    """Integer document composition of one topic."""

    name: str
    n_neutral: int
    n_positive: int   # genuine, non-sarcastic positives
    n_sarcastic: int  # sarcastic texts, labeled positive with sarcasm=True
    n_negative: int

    @property
    def total(self):
        return self.n_neutral + self.n_positive + self.n_sarcastic \
            + self.n_negative

    @property
    def negativity(self):
        return self.n_negative / self.total


@dataclass(frozen=True)
class CorpusSpec:
    """Topic allocation plus text-shape knobs for the generator."""

    topics: tuple

    # neutral text shape
    question_rate_neutral: float = 0.55
    low_pos_rate_neutral: float = 0.25
    low_neg_rate_neutral: float = 0.20

    # opinion text shape
    question_rate_opinion: float = 0.04
    low_pos_rate_positive: float = 0.75
    negated_neg_rate_positive: float = 0.12
    negative_styles: tuple = (("plain", 0.40), ("negated", 0.45),
                              ("mixed", 0.15))

    # sarcasm cues
    interjection_rate_sarcastic: float = 0.85
    interjection_rate_genuine: float = 0.15
    interjection_rate_other: float = 0.08

    # reversible slang noise
    noise_vowel_rate: float = 0.12
    noise_leet_rate: float = 0.08
    noise_informal_rate: float = 0.10
    noise_redup_rate: float = 0.05

    def class_counts(self):
        counts = {"neu": 0, "pos": 0, "neg": 0}
        for t in self.topics:
            counts["neu"] += t.n_neutral
            counts["pos"] += t.n_positive + t.n_sarcastic
            counts["neg"] += t.n_negative
        return counts

    def sarcastic_count(self):
        return sum(t.n_sarcastic for t in self.topics)

    def topic_negativity(self):
        """Exact per-topic negativity realized by the allocation."""
        return {t.name: t.negativity for t in self.topics}

    @classmethod
    def from_counts(cls, n_neutral, n_positive, n_negative, sarcasm_rate=0.4,
                    benign_topics=BENIGN_TOPICS,
                    sensitive_topics=SENSITIVE_TOPICS, **knobs):
        """Apportion class counts over benign and sensitive topics.

        Negatives and sarcastic positives concentrate on the sensitive
        topics, so their realized negativity separates cleanly from the
        benign ones.
        """
        if not 0.0 <= sarcasm_rate <= 1.0:
            raise SarkasError(f"sarcasm rate {sarcasm_rate} outside [0, 1]")
        n_sarcastic = int(round(n_positive * sarcasm_rate))
        n_genuine = n_positive - n_sarcastic

        shares = {
            # (benign share, sensitive share) per bucket
            "neu": (0.70, 0.30),
            "genuine": (0.88, 0.12),
            "sarcastic": (0.08, 0.92),
            "neg": (0.10, 0.90),
        }
        buckets = {"neu": n_neutral, "genuine": n_genuine,
                   "sarcastic": n_sarcastic, "neg": n_negative}
        per_topic = {name: [0, 0, 0, 0]
                     for name in tuple(benign_topics) + tuple(sensitive_topics)}
        order = ("neu", "genuine", "sarcastic", "neg")
        for slot, bucket in enumerate(order):
            benign_share, sensitive_share = shares[bucket]
            group_totals = _apportion(buckets[bucket],
                                      [benign_share, sensitive_share])
            for group, topics in ((0, benign_topics), (1, sensitive_topics)):
                alloc = _apportion(group_totals[group], [1.0] * len(topics))
                for name, n in zip(topics, alloc):
                    per_topic[name][slot] += n
        topics = tuple(
            TopicSpec(name, n_neutral=c[0], n_positive=c[1],
                      n_sarcastic=c[2], n_negative=c[3])
            for name, c in per_topic.items() if sum(c) > 0
        )
        return cls(topics=topics, **knobs)

    @classmethod
    def default(cls, **knobs):
        """Corpus shaped like the 980-document training collection."""
        return cls.from_counts(502, 250, 228, sarcasm_rate=0.4, **knobs)

    @classmethod
    def sarcasm_default(cls, **knobs):
        """Positive-heavy corpus sized for the sarcasm experiment."""
        return cls.from_counts(240, 360, 300, sarcasm_rate=0.5, **knobs)


def _apportion(total, weights):
    """Largest-remainder apportionment of `total` over `weights`."""
    weight_sum = sum(weights)
    quotas = [total * w / weight_sum for w in weights]
    out = [int(q) for q in quotas]
    remainder = total - sum(out)
    by_frac = sorted(range(len(weights)), key=lambda i: (out[i] - quotas[i], i))
    for i in by_frac[:remainder]:
        out[i] += 1
    return out


class _Pools:
    """Word pools derived from the lexicon and auxiliary lists."""

    def __init__(self, lex, aux):
        entries = [lex.entries[t] for t in sorted(lex.terms())]
        self.strong_pos = [e.term for e in entries
                           if e.pos_score >= 0.5 and e.neg_score == 0.0]
        self.strong_neg = [e.term for e in entries
                           if e.neg_score >= 0.5 and e.pos_score == 0.0]
        self.low_pos = [e.term for e in entries
                        if 0.0 < e.pos_score <= 0.25 and e.neg_score == 0.0]
        self.low_neg = [e.term for e in entries
                        if 0.0 < e.neg_score <= 0.25 and e.pos_score == 0.0]
        # positives lean on a handful of low-score words ("bisa" and
        # friends); presence encodings then learn them as positive cues
        # and misread neutral texts that mention them, while the score
        # encoding keeps their pull proportional to their tiny mass
        by_low = sorted((lex.entries[t].pos_score, t) for t in self.low_pos)
        self.low_pos_trap = sorted(t for _, t in by_low[:5])
        self.negations = sorted(aux.negations)
        self.interjections = sorted(aux.interjections)
        self.questions = sorted(aux.question_words)
        reserved = set(lex.terms()) | aux.negations | aux.interjections \
            | aux.question_words | set(aux.informal_dict) \
            | set(aux.affix_overrides) \
            | {t for pair in aux.context_overrides for t in pair}
        self.fillers = [w for w in FILLER_WORDS if w not in reserved]
        self.degree = [w for w in DEGREE_WORDS if w in self.fillers]
        # formal -> informal variants, for reversible slang noise
        self.informal_variants = {}
        for informal, formal in aux.informal_dict.items():
            self.informal_variants.setdefault(formal, []).append(informal)
        for variants in self.informal_variants.values():
            variants.sort()
        for pool in ("strong_pos", "strong_neg", "low_pos", "low_neg",
                     "negations", "interjections", "questions", "fillers"):
            if not getattr(self, pool):
                raise SarkasError(f"generator needs a non-empty {pool} pool; "
                                  "check the lexicon and auxiliary lists")


def _negated(rng, pools, word):
    segment = [rng.choice(pools.negations)]
    if rng.random() < 0.4:
        segment.append(rng.choice(pools.degree or pools.fillers))
    segment.append(word)
    return segment


def _neutral_segments(rng, pools, spec):
    segments = [[rng.choice(pools.fillers)]
                for _ in range(rng.randint(4, 8))]
    if rng.random() < spec.low_pos_rate_neutral:
        pool = pools.low_pos_trap if rng.random() < 0.5 else pools.low_pos
        segments.append([rng.choice(pool)])
    if rng.random() < spec.low_neg_rate_neutral:
        segments.append([rng.choice(pools.low_neg)])
    question = rng.random() < spec.question_rate_neutral
    if question:
        segments.insert(0, [rng.choice(pools.questions)])
    return segments, question


def _positive_segments(rng, pools, spec, sarcastic):
    segments = [[rng.choice(pools.fillers)]
                for _ in range(rng.randint(3, 6))]
    for _ in range(1 + (rng.random() < 0.55)):
        segments.append([rng.choice(pools.strong_pos)])
    if rng.random() < spec.low_pos_rate_positive:
        for _ in range(rng.randint(1, 2)):
            segments.append([rng.choice(pools.low_pos_trap)])
    if not sarcastic and rng.random() < spec.negated_neg_rate_positive:
        segments.append(_negated(rng, pools, rng.choice(pools.strong_neg)))
    question = rng.random() < spec.question_rate_opinion
    if question:
        segments.insert(0, [rng.choice(pools.questions)])
    return segments, question


def _negative_segments(rng, pools, spec):
    styles = [s for s, _ in spec.negative_styles]
    weights = [w for _, w in spec.negative_styles]
    style = rng.choices(styles, weights=weights)[0]
    segments = [[rng.choice(pools.fillers)]
                for _ in range(rng.randint(3, 6))]
    if style in ("plain", "mixed"):
        for _ in range(1 + (style == "plain" and rng.random() < 0.5)):
            segments.append([rng.choice(pools.strong_neg)])
    if style in ("negated", "mixed"):
        segments.append(_negated(rng, pools, rng.choice(pools.strong_pos)))
        if style == "negated" and rng.random() < 0.5:
            segments.append(_negated(rng, pools, rng.choice(pools.strong_pos)))
    if rng.random() < 0.3:
        segments.append([rng.choice(pools.low_neg)])
    # low-score positive words show up in complaints too ("bisa", "cukup");
    # without them presence encodings could spot negated texts by their
    # absence
    if rng.random() < 0.55:
        segments.append([rng.choice(pools.low_pos_trap)])
    question = rng.random() < spec.question_rate_opinion
    if question:
        segments.insert(0, [rng.choice(pools.questions)])
    return segments, question


_LEET_INVERSE = {"o": "0", "i": "1", "e": "3", "a": "4", "s": "5", "t": "7"}
_VOWELS = "aeiou"


def _stretch_vowel(rng, token):
    """Stretch one single-occurrence vowel into a collapsible run."""
    spots = [i for i, ch in enumerate(token)
             if ch in _VOWELS
             and (i == 0 or token[i - 1] != ch)
             and (i == len(token) - 1 or token[i + 1] != ch)]
    if not spots:
        return token
    i = rng.choice(spots)
    return token[:i] + token[i] * rng.randint(3, 5) + token[i + 1:]


def _leet_token(rng, token):
    spots = [i for i, ch in enumerate(token) if ch in _LEET_INVERSE]
    if len(spots) < 1 or sum(ch.isalpha() for ch in token) < 2:
        return token
    i = rng.choice(spots)
    return token[:i] + _LEET_INVERSE[token[i]] + token[i + 1:]


def _redup_token(token):
    """Compress a leading reduplication: 'gagal' -> 'ga2l'."""
    if len(token) >= 5 and token[:2] == token[2:4] and token[:4].isalpha():
        return token[:2] + "2" + token[4:]
    return token


def _apply_noise(rng, tokens, pools, spec):
    noisy = []
    for token in tokens:
        roll = rng.random()
        if roll < spec.noise_redup_rate:
            token = _redup_token(token)
        elif roll < spec.noise_redup_rate + spec.noise_vowel_rate:
            token = _stretch_vowel(rng, token)
        elif roll < (spec.noise_redup_rate + spec.noise_vowel_rate
                     + spec.noise_leet_rate):
            token = _leet_token(rng, token)
        elif token in pools.informal_variants and \
                roll < (spec.noise_redup_rate + spec.noise_vowel_rate
                        + spec.noise_leet_rate + spec.noise_informal_rate):
            token = rng.choice(pools.informal_variants[token])
        noisy.append(token)
    return noisy


def _assemble(rng, segments, question, interjections):
    rng.shuffle(segments)
    for interjection in interjections:
        segments.insert(0, [interjection])
    tokens = [tok for seg in segments for tok in seg]
    return tokens, ("?" if question else ("!" if rng.random() < 0.25 else "."))


def _render(rng, tokens, ending):
    words = list(tokens)
    if rng.random() < 0.3:
        words[0] = words[0].capitalize()
    return " ".join(words) + ending


def _make_document(rng, pools, spec, topic, cls, sarcastic):
    if cls == "neu":
        segments, question = _neutral_segments(rng, pools, spec)
        interjection_rate = spec.interjection_rate_other
    elif cls == "pos":
        segments, question = _positive_segments(rng, pools, spec, sarcastic)
        interjection_rate = (spec.interjection_rate_sarcastic if sarcastic
                             else spec.interjection_rate_genuine)
    else:
        segments, question = _negative_segments(rng, pools, spec)
        interjection_rate = spec.interjection_rate_other
    interjections = []
    if rng.random() < interjection_rate:
        count = rng.choices([1, 2, 3], weights=[0.45, 0.4, 0.15])[0] \
            if sarcastic else 1
        interjections = [rng.choice(pools.interjections) for _ in range(count)]
    tokens, ending = _assemble(rng, segments, question, interjections)
    tokens = _apply_noise(rng, tokens, pools, spec)
    return Document(text=_render(rng, tokens, ending), topic=topic,
                    sentiment=cls, sarcasm=(sarcastic if cls == "pos" else None))


def generate_synthetic_corpus(spec, seed, lex=None, aux=None):
    """Emit the documents for a CorpusSpec; deterministic under seed."""
    lex = lex if lex is not None else default_lexicon()
    aux = aux if aux is not None else default_aux()
    pools = _Pools(lex, aux)
    rng = random.Random(child_seed(seed, "corpus"))
    docs = []
    for topic in spec.topics:
        for _ in range(topic.n_neutral):
            docs.append(_make_document(rng, pools, spec, topic.name, "neu",
                                       False))
        for _ in range(topic.n_positive):
            docs.append(_make_document(rng, pools, spec, topic.name, "pos",
                                       False))
        for _ in range(topic.n_sarcastic):
            docs.append(_make_document(rng, pools, spec, topic.name, "pos",
                                       True))
        for _ in range(topic.n_negative):
            docs.append(_make_document(rng, pools, spec, topic.name, "neg",
                                       False))
    rng.shuffle(docs)
    return docs
