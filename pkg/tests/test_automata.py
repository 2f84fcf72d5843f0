import numpy as np
import pytest

from fibdecide import arith
from fibdecide import automata as au
from fibdecide import numeration as nu


def small_dfa(pattern):
    return au.regex_compile(pattern, 1)


def test_boolean_algebra_examples():
    a = arith.valid()
    assert au.is_empty(au.intersect(a, au.complement(a)))
    assert au.equivalent(au.minimize(au.intersect(a, a)), au.minimize(a))


def test_union_even_odd_covers_valid(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    even = s.define("ev", "Ek n=2*k")
    odd = s.define("od", "Ek n=2*k+1")
    assert au.equivalent(au.union(even, odd), arith.valid())


def test_complement_flips_membership():
    v = arith.valid()
    c = au.complement(v)
    assert not c.accepts("10")
    assert c.accepts("11")


def test_determinize_roundtrip():
    d = small_dfa("0*10*")
    nfa = au.Nfa.from_dfa(d)
    assert au.equivalent(au.determinize(nfa), d)
    empty = au.Nfa(1, 1, (), (), {})
    dd = au.determinize(empty)
    assert au.is_empty(dd)


def test_determinize_single_one():
    # one 1 surrounded by zeros: exactly the Fibonacci numbers
    d = small_dfa("0*10*")
    for k in range(2, 26):
        assert d.accepts(nu.encode(nu.fib(k)))
    assert not d.accepts("101")


def test_minimize_idempotent_and_canonical():
    d = small_dfa("10(100*10)*0*")
    m = au.minimize(d)
    m2 = au.minimize(m)
    assert m.n_states == m2.n_states
    assert np.array_equal(m.delta, m2.delta)


def test_minimize_merges():
    # two states recognizing the same residual collapse
    delta = np.array([[1, 2], [1, 2], [1, 2]], dtype=np.int32)
    out = np.array([0, 0, 0], dtype=np.int32)
    assert au.minimize(au.Automaton(1, delta, out, 0)).n_states == 1


def test_equivalent_pipelines_give_identical_canonical_forms(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    via_engine = s.define("half", "z=n/2")
    direct = arith.const_div(2)
    assert au.equivalent(via_engine, direct)
    ca, cb = au.minimize(via_engine), au.minimize(direct)
    assert np.array_equal(ca.delta, cb.delta)
    assert np.array_equal(ca.outputs, cb.outputs)


def test_project_examples():
    assert au.equivalent(au.project(arith.eq(), 0), arith.valid())
    # totality of n -> floor(n/2): projecting the value track leaves all n
    assert au.equivalent(au.project(arith.const_div(2), 1), arith.valid())


def test_project_requires_normalization():
    raw = au.regex_compile("10", 1)
    with pytest.raises(au.AutomatonError):
        au.project(au.cylindrify(raw, [0], 2), 0)


def test_zero_normalize_examples():
    d = au.zero_normalize(small_dfa("010"))
    assert d.accepts("10") and d.accepts("010") and d.accepts("0010")
    assert not d.accepts("100") and not d.accepts("1")
    v = arith.valid()
    assert au.equivalent(au.zero_normalize(v), v)
    for n in range(200):
        w = nu.encode(n)
        assert d.accepts(w) == d.accepts("0" + w)


def test_cylindrify_examples():
    eqr = arith.eq()
    assert au.equivalent(au.cylindrify(eqr, [0, 1], 2), eqr)
    lifted = au.cylindrify(eqr, [0, 2], 3)  # (x, z, y) with x = y
    assert lifted.accepts_numbers(5, 3, 5)
    assert not lifted.accepts_numbers(5, 3, 4)
    back = au.project(lifted, 1)
    assert au.equivalent(back, eqr)


def test_swap_tracks():
    lt = arith.lt()
    gt = au.swap_tracks(lt, [1, 0])
    assert gt.accepts_numbers(7, 4) and not gt.accepts_numbers(4, 7)


def test_combine_examples(catalog):
    universal = arith.valid()
    const7 = au.combine([(universal, 7)])
    assert const7.value_at(0) == 7 and const7.value_at(100) == 7
    with pytest.raises(au.AutomatonError, match="witness"):
        au.combine([(universal, 1), (universal, 2)], domain=arith.valid())


def test_regex_examples():
    adjacent = au.regex_compile("[0,0]*[0,1][1,0][0,0]*", 2)
    assert adjacent.accepts_numbers(1, 2)
    for k in range(2, 20):
        assert adjacent.accepts_numbers(nu.fib(k), nu.fib(k + 1))
    assert not adjacent.accepts_numbers(2, 5)
    sm = au.regex_compile("10(100*10)*0*", 1)
    # first members by oracle scan: 2, 3, 5, 8, 13, 20, ...
    assert sm.accepts("10") and sm.accepts("100") and sm.accepts("101010")
    assert not sm.accepts("1010") and not sm.accepts("10100")


def test_regex_parse_error_position():
    with pytest.raises(au.RegexError, match="position"):
        au.regex_compile("10(", 1)
    with pytest.raises(au.RegexError):
        au.regex_compile("[0,1]", 1)  # wrong arity


def test_accepts_and_values(catalog):
    fw = catalog["fibword"]
    assert fw.value_at(1) == 1
    assert fw.value_at(0) == 0
    assert fw.value_at(6) == 1
    m3 = arith.mod_dfao(3, verify_bound=5000)
    assert m3.value_at(7) == 1
    d = small_dfa("0*")
    assert d.accepts("")


def test_is_empty_equivalent_sample():
    empty = au.intersect(arith.valid(), au.complement(arith.valid()))
    assert au.is_empty(empty)
    two_halves_a = arith.const_div(2)
    two_halves_b = au.minimize(arith.const_div(2))
    assert au.equivalent(two_halves_a, two_halves_b)


def test_sample_language_matches_scan():
    from fibdecide import seqs

    raw = au.regex_compile("10(100*10)*0*", 1)
    samples = au.sample_language(raw, 8)
    decoded = [nu.decode(w) for w in samples]
    a = seqs.a105774_table(3000)
    later_min = np.minimum.accumulate(a[::-1])[::-1]
    scan = [n for n in range(1, 400) if a[n] < later_min[n + 1]]
    assert decoded == scan[:8]


def test_serialize_roundtrip():
    add = arith.add()
    text = au.serialize(add)
    back = au.deserialize(text)
    assert au.equivalent(add, back)
    m3 = arith.mod_dfao(3, verify_bound=2000)
    assert "output" in au.serialize(m3)
    back_m3 = au.deserialize(au.serialize(m3))
    assert [back_m3.value_at(n) for n in range(20)] == [m3.value_at(n) for n in range(20)]


def test_deserialize_errors():
    with pytest.raises(au.AutomatonError, match="line"):
        au.deserialize("fibaut 1\narity 1\nstates 2\ninitial 0\naccepting 0\ntrans 0 [0] 5\ntrans 0 [1] 0\ntrans 1 [0] 0\ntrans 1 [1] 0\n")
    with pytest.raises(au.AutomatonError):
        au.deserialize("not an automaton")


def test_export_dot_structure():
    v = arith.valid()
    dot = au.export_dot(v, "valid")
    assert dot.count("->") == v.n_states * v.n_symbols + 1  # plus initial arrow
    assert "doublecircle" in dot
    m3 = arith.mod_dfao(3, verify_bound=2000)
    assert "/2" in au.export_dot(m3)


def test_partial_state_count_mod(catalog):
    for k in (2, 3):
        dfao = arith.mod_dfao(k, verify_bound=5000)
        assert au.partial_state_count(dfao, arith.valid()) == 2 * k * k


def test_word_coercions():
    eqr = arith.eq()
    assert eqr.accepts("[1,1][0,0]")
    assert eqr.accepts([(1, 1), (0, 0)])
    assert eqr.accepts([3, 0])
    with pytest.raises(au.AutomatonError):
        eqr.accepts([(1,)])


def test_random_nfa_determinize_agreement():
    import random

    rng = random.Random(4242)
    for trial in range(15):
        n = rng.randrange(1, 6)
        moves = {}
        for q in range(n):
            for s in range(2):
                moves[(q, s)] = tuple(
                    t for t in range(n) if rng.random() < 0.4
                )
        initial = tuple(q for q in range(n) if rng.random() < 0.5) or (0,)
        accepting = tuple(q for q in range(n) if rng.random() < 0.4)
        nfa = au.Nfa(1, n, initial, accepting, moves)
        dfa = au.determinize(nfa)

        def nfa_accepts(word):
            cur = set(nfa.initial)
            for sym in word:
                cur = set().union(*(nfa.moves.get((q, sym), ()) for q in cur)) if cur else set()
            return bool(cur & nfa.accepting)

        for length in range(0, 13):
            for probe in range(min(1 << length, 64)):
                word = [(probe >> i) & 1 for i in range(length)]
                assert dfa.accepts(word) == nfa_accepts(word), (trial, word)
