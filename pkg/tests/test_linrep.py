import itertools

import numpy as np
import pytest

from fibdecide import arith
from fibdecide import automata as au
from fibdecide import linrep
from fibdecide import numeration as nu
from fibdecide import seqs
from fibdecide import synth


@pytest.fixture(scope="module")
def a_rel(catalog):
    return synth.guess_synchronized(seqs.oracle("a105774"), 16384)


@pytest.fixture(scope="module")
def sorted_rel(catalog):
    return synth.guess_synchronized(seqs.oracle("sorted"), 16384)


def test_carlitz_base_cases():
    assert linrep.carlitz_C("b") == 0
    assert linrep.carlitz_C("d") == 1
    assert linrep.carlitz_C("bb") == 1
    with pytest.raises(ValueError):
        linrep.carlitz_C("")
    with pytest.raises(ValueError):
        linrep.carlitz_C("xz")


def test_carlitz_linrep_matches_recursion():
    lr = linrep.carlitz_linrep()
    assert linrep.evaluate(lr, "b") == 0
    assert linrep.evaluate(lr, "d") == 1
    assert linrep.evaluate(lr, "bb") == 1
    for size in range(1, 11):
        for u in itertools.product("bd", repeat=size):
            word = "".join(u)
            assert linrep.carlitz_C(word) == linrep.evaluate(lr, word)


def test_carlitz_derived_relations():
    c = linrep.carlitz_C
    for size in range(1, 9):
        for v in ("".join(t) for t in itertools.product("bd", repeat=size)):
            assert c(v + "bb") == c(v) + c(v + "b") + c(v + "d")
            assert c(v + "bd") == c(v + "d")
            assert c(v + "db") == c(v + "b") + 2 * c(v + "d")
            assert c(v + "dd") == c(v) + c(v + "b") + c(v + "d")


def test_counting_values(a_rel):
    lr = linrep.counting_linrep(a_rel)
    c = seqs.count_c_table(200)
    assert linrep.evaluate(lr, [0, 0] + linrep.count_word(4)) == 2 == c[4]
    assert linrep.evaluate(lr, [0, 0] + linrep.count_word(3)) == 0 == c[3]
    for n in range(150):
        assert linrep.evaluate(lr, linrep.count_word(n)) == int(c[n])


def test_counting_eq_relation():
    lr = linrep.counting_linrep(arith.eq())
    for n in range(100):
        assert linrep.evaluate(lr, [0] + linrep.count_word(n)) == 1


def test_counting_requires_binary():
    with pytest.raises(au.ArityError):
        linrep.counting_linrep(arith.valid())


def test_subtract_and_zero(a_rel):
    lr = linrep.counting_linrep(a_rel)
    diff = linrep.subtract(lr, lr)
    assert linrep.is_zero(diff)
    zero = linrep.LinRep((0, 0), {0: ((1, 0), (0, 1)), 1: ((0, 1), (1, 0))}, (1, 1))
    assert linrep.is_zero(zero)
    nonzero = linrep.counting_linrep(arith.eq())
    assert not linrep.is_zero(nonzero)
    assert linrep.zero_witness(nonzero) is not None


def test_subtract_mixed_value(a_rel):
    lr_eq = linrep.counting_linrep(arith.eq())
    lr_zero = linrep.subtract(lr_eq, lr_eq)
    diff = linrep.subtract(lr_eq, lr_zero)
    assert linrep.evaluate(diff, [0] + linrep.count_word(5)) == 1


def test_alphabet_mismatch():
    with pytest.raises(ValueError, match="alphabet"):
        linrep.subtract(linrep.carlitz_linrep(), linrep.counting_linrep(arith.eq()))


def test_check_permutation(a_rel, sorted_rel, catalog):
    assert linrep.check_permutation(a_rel, sorted_rel, catalog)
    assert linrep.check_permutation(a_rel, a_rel, catalog)
    assert not linrep.check_permutation(a_rel, arith.eq(), catalog)


def test_check_permutation_requires_function(a_rel, catalog):
    not_function = au.zero_normalize(au.union(arith.eq(), arith.const_mul(2)))
    with pytest.raises(ValueError, match="certified"):
        linrep.check_permutation(a_rel, not_function, catalog)


def test_check_distinct_transform(a_rel, catalog):
    dist_rel = synth.guess_synchronized(seqs.oracle("distinct"), 16384)
    ok, failed = linrep.check_distinct_transform(a_rel, dist_rel, catalog)
    assert ok, failed
    ok_eq, _ = linrep.check_distinct_transform(arith.eq(), arith.eq(), catalog)
    assert ok_eq
    bad, failed = linrep.check_distinct_transform(a_rel, arith.eq(), catalog)
    assert not bad and failed


def test_mutation_makes_nonzero(a_rel):
    delta = np.array(a_rel.delta)
    delta[1, 3] = (delta[1, 3] + 1) % a_rel.n_states
    mutated = au.Automaton(2, delta, a_rel.outputs, a_rel.initial)
    diff = linrep.subtract(
        linrep.counting_linrep(a_rel), linrep.counting_linrep(mutated)
    )
    assert linrep.zero_witness(diff) is not None


def test_padding_stability(a_rel):
    from fibdecide.reproduce import linrep_padding_stability

    ok, detail = linrep_padding_stability(a_rel)
    assert ok, detail


def test_bounded_length_completeness():
    # on small instances, zero-equivalence agrees with exhaustive evaluation
    lr_a = linrep.counting_linrep(arith.eq())
    lr_b = linrep.counting_linrep(au.swap_tracks(arith.eq(), [1, 0]))
    diff = linrep.subtract(lr_a, lr_b)
    bound = lr_a.dim + lr_b.dim
    exhaustive_zero = all(
        linrep.evaluate(diff, [int(b) for b in f"{w:0{L}b}"]) == 0
        for L in range(bound + 1)
        for w in range(1 << L)
    )
    assert exhaustive_zero == linrep.is_zero(diff)


def test_linrep_serialization_roundtrip():
    lr = linrep.carlitz_linrep()
    text = linrep.serialize_linrep(lr)
    back = linrep.deserialize_linrep(text)
    assert back == lr
    lr2 = linrep.counting_linrep(arith.eq())
    assert linrep.deserialize_linrep(linrep.serialize_linrep(lr2)) == lr2
    with pytest.raises(ValueError):
        linrep.deserialize_linrep("bogus")


def test_counting_equals_brute_membership(a_rel):
    lr = linrep.counting_linrep(a_rel)
    limit = 1000
    xs, ns = [], []
    for n in range(limit):
        for x in range(3 * n + 4):
            xs.append(x)
            ns.append(n)
    got = arith.accepts_number_pairs(a_rel, np.array(xs), np.array(ns))
    counts = np.zeros(limit, dtype=np.int64)
    np.add.at(counts, np.array(ns)[got], 1)
    for n in range(limit):
        assert linrep.evaluate(lr, [0, 0] + linrep.count_word(n)) == counts[n]
