import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import levenshtein_oracle, similarity_oracle
from umlkit import textsim
from umlkit.textsim import is_similar, levenshtein, normalize_name, similarity


def test_normalize_trims_collapses_and_casefolds():
    assert normalize_name("  Make   Payment ") == "make payment"
    assert normalize_name("LOGIN") == "login"
    assert normalize_name("") == ""
    assert normalize_name(" \t\n ") == ""


def test_similarity_spot_values():
    assert similarity("actor", "actor") == 1.0
    assert similarity("user", "users") == 0.8
    assert similarity("login", "logout") == 0.5


def test_similarity_empty_rules():
    assert similarity("", "") == 1.0
    assert similarity("   ", "\t") == 1.0
    assert similarity("", "x") == 0.0
    assert similarity("x", "") == 0.0


def test_similarity_ignores_case_and_whitespace():
    assert similarity("  Make   Payment ", "make payment") == 1.0


def test_threshold_edges():
    # distance 1 over length 4 is exactly the threshold
    assert similarity("abcd", "abcx") == 0.75
    assert is_similar("abcd", "abcx")
    # distance 13 over length 50 is 0.74, just below
    base = "a" * 50
    varied = "b" * 13 + "a" * 37
    assert similarity(base, varied) == pytest.approx(0.74)
    assert not is_similar(base, varied)


def test_levenshtein_against_dp_oracle():
    rng = random.Random(7)
    alphabet = "abcdef "
    for _ in range(100):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 12)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 12)))
        assert levenshtein(a, b) == levenshtein_oracle(a, b)


def test_python_fallback_matches_compiled_kernel():
    if textsim.KERNEL != "c":
        pytest.skip("compiled kernel not built")
    rng = random.Random(11)
    alphabet = "abcdefgh"
    for _ in range(200):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 16)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 16)))
        assert textsim._levenshtein_py(a, b) == textsim._levenshtein_impl(a, b)


def test_kernel_handles_non_ascii():
    assert levenshtein("caffè", "caffe") == 1
    assert levenshtein("日本語", "日本") == 1


@given(st.text(max_size=20), st.text(max_size=20))
def test_similarity_symmetric_and_bounded(a, b):
    value = similarity(a, b)
    assert 0.0 <= value <= 1.0
    assert value == similarity(b, a)


@given(st.text(max_size=20))
def test_similarity_identity(a):
    assert similarity(a, a) == 1.0


@given(st.text(max_size=12), st.text(max_size=12))
def test_similarity_equals_oracle(a, b):
    assert similarity(a, b) == similarity_oracle(a, b)
