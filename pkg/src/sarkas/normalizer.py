"""Noisy-text normalization: tokenize plus three cleanup passes.

Social-media Indonesian writes numerals for letters ("ga2l"), stretches
vowels ("cemunguuudh") and swaps in slang ("cemungudh" for "semangat").
The passes run in that order, because a stretched token has to be
collapsed before it can match an informal-dictionary key:

    tokenize -> convert_numerics -> collapse_vowel_runs -> translate_informal
"""

import re
import string

_PUNCT = set(string.punctuation)
_VOWELS = "aeiou"

# Narrow emoticon shapes kept intact by the tokenizer (":p", ":-)", "(:").
_EMOTICON_RE = re.compile(
    r"^(?:[:;=8][-'^]?[()\[\]{}|\\/<>pdo3*$@c]+|[()\[\]{}|\\/<>dp]+[-'^]?[:;=8])$")

# digit -> letter substitutions common in leetspeak-style slang
LEET_TABLE = {"0": "o", "1": "i", "3": "e", "4": "a", "5": "s", "7": "t"}

DEFAULT_VOWEL_RUN = 3


def tokenize(text):
    """Lowercase whitespace tokenization with edge-punctuation stripping.

    Tokens that are pure punctuation, or that look like an emoticon, are
    kept whole so a later emoticon feature stays possible.
    """
    tokens = []
    for token in text.lower().split():
        if _EMOTICON_RE.match(token):
            tokens.append(token)
            continue
        stripped = token.strip(string.punctuation)
        if stripped:
            tokens.append(stripped)
        elif token:
            # all punctuation: keep as-is (":p" relatives like "...", ":-)")
            tokens.append(token)
    return tokens


def convert_numerics(token):
    """Rewrite digits used as letters; pure numbers pass through.

    A '2' after at least two alphabetic characters doubles them
    ("ga2l" -> "gagal"); other digits go through LEET_TABLE. Tokens with
    no alphabetic character at all (years, bare numbers, emoticons) are
    left alone.
    """
    if not any(ch.isalpha() for ch in token):
        return token
    out = []
    for ch in token:
        if ch == "2" and len(out) >= 2 and out[-1].isalpha() and out[-2].isalpha():
            out.extend((out[-2], out[-1]))
            continue
        out.append(LEET_TABLE.get(ch, ch))
    return "".join(out)


def collapse_vowel_runs(token, threshold=DEFAULT_VOWEL_RUN):
    """Collapse runs of >= threshold identical vowels to one occurrence.

    Runs below the threshold survive: "maaf" is a legitimate double vowel.
    """
    out = []
    i = 0
    n = len(token)
    while i < n:
        ch = token[i]
        j = i + 1
        while j < n and token[j] == ch:
            j += 1
        run = j - i
        if ch in _VOWELS and run >= threshold:
            out.append(ch)
        else:
            out.append(ch * run)
        i = j
    return "".join(out)


def translate_informal(tokens, informal_dict):
    """One substitution pass through the informal dictionary, no chaining."""
    return [informal_dict.get(tok, tok) for tok in tokens]


def normalize(text, aux, vowel_run_threshold=DEFAULT_VOWEL_RUN):
    """Full normalization pipeline for one raw text."""
    tokens = tokenize(text)
    tokens = [convert_numerics(tok) for tok in tokens]
    tokens = [collapse_vowel_runs(tok, vowel_run_threshold) for tok in tokens]
    return translate_informal(tokens, aux.informal_dict)
