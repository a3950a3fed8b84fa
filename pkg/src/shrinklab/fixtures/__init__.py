"""Bundled example grammars (``.ig`` files)."""

from importlib import resources

from ..grammar import parse_grammar

NAMES = ("pow2", "anbncn", "anbn", "mixed")


def fixture_text(name):
    return resources.files(__name__).joinpath(f"{name}.ig").read_text()


def load_fixture(name):
    return parse_grammar(fixture_text(name))
