"""Packaged default lexicon and auxiliary word lists."""

from importlib import resources

from .lexicon import load_aux_lists, load_lexicon

_DATA_FILES = {
    "lexicon": "lexicon.tsv",
    "informal_dict": "informal.tsv",
    "negations": "negations.txt",
    "interjections": "interjections.txt",
    "question_words": "question_words.txt",
    "context_overrides": "context_overrides.tsv",
    "affix_overrides": "affix_overrides.tsv",
}


def data_path(name):
    """Filesystem path of one packaged data file."""
    return str(resources.files("sarkas").joinpath("data", _DATA_FILES[name]))


def default_lexicon():
    return load_lexicon(data_path("lexicon"))


def default_aux():
    return load_aux_lists(
        **{key: data_path(key) for key in _DATA_FILES if key != "lexicon"})
