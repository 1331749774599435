"""Sentiment lexicon and auxiliary word lists.

The lexicon maps each term to a (pos_score, neg_score) pair following the
SentiWordNet convention: both scores in [0, 1] and pos + neg <= 1, with
objectivity absorbing the remainder. The lexicon ships pre-translated as
data; a term that was reached through several translations appears as
several input rows and is merged to the arithmetic mean of its scores.

File formats (UTF-8, '#'-prefixed comment lines ignored):

* lexicon TSV:            term<TAB>pos_score<TAB>neg_score
                          (an optional 4th column carries the merge count,
                          written by save_lexicon so that a save/load
                          round trip is exact)
* informal dictionary:    informal<TAB>formal
* word lists:             one term per line (negations, interjections,
                          question words)
* context overrides TSV:  context_term<TAB>target_term<TAB>signed_score
* affix overrides TSV:    surface_term<TAB>signed_score
"""

import math
import unicodedata
import warnings
from dataclasses import dataclass, field

from .errors import DataFormatError

_SCORE_EPS = 1e-9


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    pos_score: float
    neg_score: float


class SentimentLexicon:
    """Immutable merged lexicon: term -> LexiconEntry plus merge counts."""

    def __init__(self, entries, source_count):
        self.entries = dict(entries)
        self.source_count = dict(source_count)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, term):
        return term.lower() in self.entries

    def __eq__(self, other):
        if not isinstance(other, SentimentLexicon):
            return NotImplemented
        return (self.entries == other.entries
                and self.source_count == other.source_count)

    def terms(self):
        return self.entries.keys()


@dataclass
class AuxLists:
    """All auxiliary word lists used by normalization and feature scoring."""

    informal_dict: dict = field(default_factory=dict)
    negations: set = field(default_factory=set)
    interjections: set = field(default_factory=set)
    question_words: set = field(default_factory=set)
    # (context_term, target_term) -> signed score in [-1, 1]
    context_overrides: dict = field(default_factory=dict)
    # surface_term -> signed score in [-1, 1]
    affix_overrides: dict = field(default_factory=dict)


def _check_term(term, path=None, line=None):
    if not term:
        raise DataFormatError("empty term", path, line)
    if any(ch.isspace() for ch in term):
        raise DataFormatError(f"term {term!r} contains whitespace", path, line)


def _check_scores(term, pos, neg, path=None, line=None):
    for name, value in (("pos_score", pos), ("neg_score", neg)):
        if not math.isfinite(value) or not -_SCORE_EPS <= value <= 1 + _SCORE_EPS:
            raise DataFormatError(
                f"term {term!r}: {name}={value!r} outside [0, 1]", path, line)
    if pos + neg > 1 + _SCORE_EPS:
        raise DataFormatError(
            f"term {term!r}: pos_score + neg_score = {pos + neg!r} exceeds 1",
            path, line)


def merge_translations(raw, counts=None, source=None, lines=None):
    """Merge (term, pos_score, neg_score) triples into a lexicon.

    Duplicate terms are averaged per channel. `counts` optionally weights
    each triple (used when re-loading an already merged lexicon); plain
    triples count as one translation each. The result is independent of
    input order: channel sums use math.fsum and the mean is clamped into
    the [min, max] envelope of its inputs to kill 1-ulp rounding drift.
    """
    acc = {}  # term -> [pos_list, neg_list, count]
    for i, (term, pos, neg) in enumerate(raw):
        line = lines[i] if lines is not None else None
        term = unicodedata.normalize("NFC", term).lower()
        _check_term(term, source, line)
        pos, neg = float(pos), float(neg)
        _check_scores(term, pos, neg, source, line)
        weight = counts[i] if counts is not None else 1
        slot = acc.setdefault(term, [[], [], 0])
        slot[0].append((pos, weight))
        slot[1].append((neg, weight))
        slot[2] += weight

    entries = {}
    source_count = {}
    for term, (pos_pairs, neg_pairs, total) in acc.items():
        scores = []
        for pairs in (pos_pairs, neg_pairs):
            mean = math.fsum(v * w for v, w in pairs) / total
            lo = min(v for v, _ in pairs)
            hi = max(v for v, _ in pairs)
            scores.append(min(max(mean, lo), hi))
        entries[term] = LexiconEntry(term, scores[0], scores[1])
        source_count[term] = total
    return SentimentLexicon(entries, source_count)


def lookup(lex, term):
    """Case-folded lookup; returns the LexiconEntry or None."""
    return lex.entries.get(term.lower())


def _data_lines(path):
    """Yield (lineno, NFC-normalized line) skipping comments and blanks."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = unicodedata.normalize("NFC", line.rstrip("\n"))
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def _parse_float(text, what, path, lineno):
    try:
        return float(text)
    except ValueError:
        raise DataFormatError(f"bad {what} {text!r}", path, lineno)


def load_lexicon(path):
    """Parse a lexicon TSV; duplicate rows are merged via averaging."""
    raw, counts, lines = [], [], []
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise DataFormatError(
                f"expected 3 or 4 tab-separated columns, got {len(cols)}",
                path, lineno)
        pos = _parse_float(cols[1], "pos_score", path, lineno)
        neg = _parse_float(cols[2], "neg_score", path, lineno)
        if len(cols) == 4:
            try:
                count = int(cols[3])
            except ValueError:
                count = -1
            if count < 1:
                raise DataFormatError(f"bad merge count {cols[3]!r}", path, lineno)
        else:
            count = 1
        raw.append((cols[0].strip(), pos, neg))
        counts.append(count)
        lines.append(lineno)
    return merge_translations(raw, counts=counts, source=path, lines=lines)


def save_lexicon(lex, path):
    """Write a merged lexicon; load(save(lex)) reproduces it exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# term\tpos_score\tneg_score\tmerged_translations\n")
        for term in sorted(lex.entries):
            e = lex.entries[term]
            fh.write(f"{term}\t{e.pos_score!r}\t{e.neg_score!r}"
                     f"\t{lex.source_count[term]}\n")


def _load_word_list(path):
    out = set()
    for lineno, line in _data_lines(path):
        term = line.strip().lower()
        _check_term(term, path, lineno)
        out.add(term)
    return out


def _load_informal_dict(path):
    mapping = {}
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 2:
            raise DataFormatError(
                f"expected 2 tab-separated columns, got {len(cols)}", path, lineno)
        informal = cols[0].strip().lower()
        formal = cols[1].strip().lower()
        _check_term(informal, path, lineno)
        _check_term(formal, path, lineno)
        mapping[informal] = formal
    # Values must be fixed points or normalize() loses idempotence.
    for informal, formal in mapping.items():
        if formal in mapping and mapping[formal] != formal:
            warnings.warn(
                f"{path}: informal dictionary value {formal!r} (for "
                f"{informal!r}) is itself remapped; translation is "
                "single-pass so the chain is not followed")
    return mapping


def _check_signed(value, path, lineno):
    if not math.isfinite(value) or not -1 - _SCORE_EPS <= value <= 1 + _SCORE_EPS:
        raise DataFormatError(
            f"signed score {value!r} outside [-1, 1]", path, lineno)
    return value


def _load_context_overrides(path):
    out = {}
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 3:
            raise DataFormatError(
                f"expected 3 tab-separated columns, got {len(cols)}", path, lineno)
        context = cols[0].strip().lower()
        target = cols[1].strip().lower()
        _check_term(context, path, lineno)
        _check_term(target, path, lineno)
        score = _parse_float(cols[2], "signed score", path, lineno)
        out[(context, target)] = _check_signed(score, path, lineno)
    return out


def _load_affix_overrides(path):
    out = {}
    for lineno, line in _data_lines(path):
        cols = line.split("\t")
        if len(cols) != 2:
            raise DataFormatError(
                f"expected 2 tab-separated columns, got {len(cols)}", path, lineno)
        term = cols[0].strip().lower()
        _check_term(term, path, lineno)
        score = _parse_float(cols[1], "signed score", path, lineno)
        out[term] = _check_signed(score, path, lineno)
    return out


def save_aux_lists(aux, informal_dict=None, negations=None, interjections=None,
                   question_words=None, context_overrides=None,
                   affix_overrides=None):
    """Write whichever auxiliary files are given, in canonical order."""
    def _write(path, lines):
        with open(path, "w", encoding="utf-8") as fh:
            for line in lines:
                fh.write(line + "\n")

    if informal_dict is not None:
        _write(informal_dict, (f"{k}\t{v}" for k, v in
                               sorted(aux.informal_dict.items())))
    if negations is not None:
        _write(negations, sorted(aux.negations))
    if interjections is not None:
        _write(interjections, sorted(aux.interjections))
    if question_words is not None:
        _write(question_words, sorted(aux.question_words))
    if context_overrides is not None:
        _write(context_overrides,
               (f"{c}\t{t}\t{s!r}" for (c, t), s in
                sorted(aux.context_overrides.items())))
    if affix_overrides is not None:
        _write(affix_overrides, (f"{t}\t{s!r}" for t, s in
                                 sorted(aux.affix_overrides.items())))


def load_aux_lists(informal_dict=None, negations=None, interjections=None,
                   question_words=None, context_overrides=None,
                   affix_overrides=None):
    """Load whichever auxiliary files are given; missing ones stay empty."""
    aux = AuxLists()
    if informal_dict is not None:
        aux.informal_dict = _load_informal_dict(informal_dict)
    if negations is not None:
        aux.negations = _load_word_list(negations)
    if interjections is not None:
        aux.interjections = _load_word_list(interjections)
    if question_words is not None:
        aux.question_words = _load_word_list(question_words)
    if context_overrides is not None:
        aux.context_overrides = _load_context_overrides(context_overrides)
    if affix_overrides is not None:
        aux.affix_overrides = _load_affix_overrides(affix_overrides)
    return aux
