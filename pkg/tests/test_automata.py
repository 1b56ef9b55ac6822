import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homauto.automata import (
    MTA, MWA, all_words, automaton_from_json, automaton_to_json, mta_eval, mta_kron, mta_minus, mta_sum,
    mwa_as_mta, mwa_eval, mwa_kron, mwa_minus, mwa_sum, term_to_word, word_to_term, zero_mta, zero_mwa,
)
from homauto.ratlinalg import QMatrix
from oracles import build_mwa, eval_word_dense, random_mwa_data

AB = ("a", "b")


def scalar(c, alphabet=("a",)):
    return MWA(1, alphabet, {a: QMatrix.from_rows([[c]]) for a in alphabet},
               QMatrix.from_rows([[1]]), QMatrix.from_rows([[1]]))


def random_pair(seed, states=2):
    rng = random.Random(seed)
    return build_mwa(*random_mwa_data(rng, states, AB)), build_mwa(*random_mwa_data(rng, states, AB))


def test_empty_word_is_alpha_eta():
    A = build_mwa([1, 2], {"a": [[0, 0], [0, 0]]}, [3, 4])
    assert mwa_eval(A, ()) == 11


def test_scalar_powers():
    A = scalar(2)
    assert [mwa_eval(A, "a" * k) for k in range(5)] == [1, 2, 4, 8, 16]


def test_zero_automaton():
    Z = zero_mwa(AB)
    assert Z.states == 0
    assert all(mwa_eval(Z, w) == 0 for w in all_words(AB, 3))


@pytest.mark.parametrize("seed", range(5))
def test_eval_matches_dense(seed):
    rng = random.Random(seed)
    data = random_mwa_data(rng, 3, AB)
    A = build_mwa(*data)
    for w in all_words(AB, 3):
        assert mwa_eval(A, w) == eval_word_dense(*data, w)


@pytest.mark.parametrize("seed", range(5))
def test_series_operations(seed):
    A, B = random_pair(seed)
    S, D, K, Z = mwa_sum(A, B), mwa_minus(A, A), mwa_kron(A, B), mwa_sum(zero_mwa(AB), A)
    for w in all_words(AB, 4):
        a, b = mwa_eval(A, w), mwa_eval(B, w)
        assert mwa_eval(S, w) == a + b
        assert mwa_eval(D, w) == 0
        assert mwa_eval(K, w) == a * b
        assert mwa_eval(Z, w) == a


def test_alphabet_mismatch():
    with pytest.raises(ValueError):
        mwa_sum(scalar(1, ("a",)), scalar(1, ("b",)))


def test_shape_validation():
    with pytest.raises(ValueError):
        MWA(2, ("a",), {"a": QMatrix.identity(3)}, QMatrix.zeros(1, 2), QMatrix.zeros(2, 1))
    with pytest.raises(ValueError):
        MTA(2, (("g", 2),), {"g": QMatrix.zeros(2, 2)}, QMatrix.zeros(2, 1))


@pytest.mark.parametrize("seed", range(3))
def test_mwa_embedding_agrees(seed):
    A, _ = random_pair(seed, 3)
    T = mwa_as_mta(A)
    for w in all_words(AB, 4):
        t = word_to_term(w)
        assert term_to_word(t) == w
        assert mta_eval(T, t) == mwa_eval(A, w)


def _product_mta():
    """Two states; leaves e1, e2, a binary symbol selecting the Kronecker diagonal."""
    s = 2
    prod = QMatrix.from_sparse(s * s, s, {(i * s + i, i): 1 for i in range(s)})
    return MTA(s, (("x", 0), ("y", 0), ("m", 2)),
               {"x": QMatrix.from_rows([[2, 3]]), "y": QMatrix.from_rows([[5, -1]]), "m": prod},
               QMatrix.from_rows([[1], [1]]))


def test_leaf_value():
    T = _product_mta()
    assert mta_eval(T, ("x",)) == 5


def test_diagonal_selector_is_entrywise_product():
    T = _product_mta()
    assert T.run(("m", ("x",), ("y",))) == {0: 10, 1: -3}
    assert mta_eval(T, ("m", ("x",), ("m", ("x",), ("y",)))) == 2 * 2 * 5 + 3 * 3 * (-1)


def test_mta_operations():
    T = _product_mta()
    terms = [("x",), ("y",), ("m", ("x",), ("y",)), ("m", ("m", ("y",), ("y",)), ("x",))]
    S, D, K = mta_sum(T, T), mta_minus(T, T), mta_kron(T, T)
    Z = mta_sum(zero_mta(T.ranked_alphabet), T)
    for t in terms:
        v = mta_eval(T, t)
        assert mta_eval(S, t) == 2 * v
        assert mta_eval(D, t) == 0
        assert mta_eval(K, t) == v * v
        assert mta_eval(Z, t) == v


def test_arity_error():
    T = _product_mta()
    with pytest.raises(ValueError):
        mta_eval(T, ("m", ("x",)))


@pytest.mark.parametrize("make", [lambda: random_pair(7)[0], _product_mta])
def test_json_round_trip(make):
    A = make()
    assert automaton_from_json(automaton_to_json(A)) == A


def test_json_rationals():
    A = MWA(1, ("a",), {"a": QMatrix.from_rows([[Fraction(1, 2)]])}, QMatrix.from_rows([[1]]),
            QMatrix.from_rows([[-3]]))
    d = automaton_to_json(A)
    assert d["transitions"]["a"] == [["1/2"]]
    assert automaton_from_json(d) == A


@pytest.mark.parametrize("bad", [{}, {"states": 1, "alphabet": ["a"], "transitions": {}, "final": [1]},
                                 {"states": 1, "alphabet": ["a"], "transitions": {"a": [[1, 2]]},
                                  "initial": [1], "final": [1]}])
def test_malformed_json(bad):
    with pytest.raises(ValueError):
        automaton_from_json(bad)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(AB), max_size=5))
def test_word_term_round_trip(word):
    assert term_to_word(word_to_term(tuple(word))) == tuple(word)
