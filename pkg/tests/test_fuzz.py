"""Mutation fuzzing of the parser stays crash-free."""

import random

from dopalg.fuzz import fuzz_parser, mutate, seed_corpus
from dopalg.sysdsl import parse


def test_seed_corpus_parses():
    corpus = seed_corpus()
    assert len(corpus) >= 5
    for text in corpus:
        assert parse(text)


def test_mutate_is_deterministic():
    a = mutate("vars x; unknowns u; system s { eq: u; }", random.Random(3))
    b = mutate("vars x; unknowns u; system s { eq: u; }", random.Random(3))
    assert a == b


def test_short_fuzz_run():
    out = fuzz_parser(1500, seed=11)
    assert out["crashes"] == 0, out["first_crash"]
    assert out["parsed"] + out["structured_errors"] == 1500
    assert out["structured_errors"] > 0
