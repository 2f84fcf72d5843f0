import numpy as np
import pytest

from fibdecide import arith
from fibdecide import automata as au
from fibdecide import numeration as nu
from fibdecide import seqs
from fibdecide import synth


def test_guess_dfa_accept_all():
    learned = synth.guess_dfa(lambda w: True, 1, bound=10)
    assert learned.n_states == 1
    assert learned.accepts("10110")


def test_guess_dfa_valid_language():
    member = lambda w: "11" not in "".join(str(s) for s in w)
    learned = synth.guess_dfa(member, 1, bound=12)
    assert au.equivalent(au.zero_normalize(learned), arith.valid())


def test_guess_dfa_even_numbers():
    member = lambda w: ("11" not in "".join(map(str, w))) and (
        nu.decode("".join(map(str, w))) % 2 == 0
    )
    learned = synth.guess_dfa(member, 1, bound=14, zero_run=14)
    ns = np.arange(2000)
    got = arith.accepts_number_pairs(au.zero_normalize(learned), ns)
    assert np.array_equal(got, ns % 2 == 0)


def test_guess_dfa_budget_exhaustion():
    # membership depends on exact length: no finite automaton fits in 3 states
    member = lambda w: len(w) in (5, 9, 13, 17)
    with pytest.raises(synth.SynthesisError):
        synth.guess_dfa(member, 1, bound=18, max_states=3)


def test_guess_synchronized_identity():
    ident = seqs.SequenceOracle("ident", lambda n: n, lambda n: np.arange(n))
    learned = synth.guess_synchronized(ident, 4096)
    assert au.equivalent(learned, arith.eq())


def test_guess_synchronized_floor_phi(catalog):
    learned = synth.guess_synchronized(seqs.oracle("phi"), 8192)
    assert au.equivalent(learned, catalog["phin"])


def test_certify_function_examples(catalog):
    good = synth.certify_function(arith.eq(), catalog)
    assert good.ok and good.failures == []
    # a relation accepting both (0,0) and (0,1) fails uniqueness
    c0 = arith.const(0)
    c01 = au.union(
        au.intersect(au.cylindrify(c0, [0], 2), au.cylindrify(c0, [1], 2)),
        au.intersect(au.cylindrify(c0, [0], 2), au.cylindrify(arith.const(1), [1], 2)),
    )
    bad_rel = au.zero_normalize(au.union(c01, arith.eq()))
    bad = synth.certify_function(bad_rel, catalog)
    assert not bad.ok
    assert "fn_unique" in bad.failures or "function_unique" in bad.failures


def test_certify_recurrence_main(catalog):
    rel = synth.guess_synchronized(seqs.oracle("a105774"), 16384)
    verdict = synth.certify_recurrence(rel, catalog, kind="fib")
    assert verdict.ok
    # the identity relation does not satisfy the recurrence
    wrong = synth.certify_recurrence(arith.eq(), catalog, kind="fib")
    assert not wrong.ok


def test_synthesize_certified_reports(catalog):
    report = synth.synthesize_certified(
        seqs.oracle("a105774"),
        [synth.function_certificate("fn"), synth.recurrence_certificate("fib")],
        schedule=(16384,),
        catalog=catalog,
    )
    assert report.verdict == "CERTIFIED"
    assert report.samples_used == 16384
    text = report.to_text()
    assert "CERTIFIED" in text and "fibaut 1" in text


def test_synthesize_exhaustion_on_hard_case(catalog):
    report = synth.synthesize_certified(
        seqs.oracle("axy_3_2"),
        [synth.function_certificate("fn"),
         synth.recurrence_certificate("fib", x=3, y=2)],
        schedule=(1024, 2048),
        catalog=catalog,
        learn_kwargs=dict(max_states=300, replay_rounds=5),
    )
    assert report.verdict == "EXHAUSTED"
    assert report.detail


def test_guess_dfao_count_sequence():
    dfao = synth.guess_dfao(seqs.oracle("count"), values=(0, 1, 2), n_samples=4096)
    got = [dfao.value_at(n) for n in range(6)]
    assert got == [1, 2, 1, 0, 2, 0]
    want = seqs.count_c_table(2000)
    vals = arith.dfao_values(dfao, np.arange(2000))
    assert np.array_equal(vals, want)


def test_guess_dfao_constant():
    dfao = synth.guess_dfao(lambda n: 3, values=(3,), batch=lambda ns: np.full(ns.size, 3))
    assert dfao.n_states == 1
    assert dfao.value_at(77) == 3


def test_guess_dfao_mod3_states():
    dfao = synth.guess_dfao(lambda n: n % 3, values=range(3), batch=lambda ns: ns % 3)
    assert au.partial_state_count(dfao, arith.valid()) == 18


def test_learner_roundtrip_property():
    from fibdecide.reproduce import learner_roundtrip

    ok, detail = learner_roundtrip(20240901)
    assert ok, detail


def test_certified_candidate_replays_oracle(catalog):
    report = synth.synthesize_certified(
        seqs.oracle("nested"),
        [synth.function_certificate("fn"), synth.recurrence_certificate("fib_nested")],
        schedule=(16384,),
        catalog=catalog,
    )
    assert report.verdict == "CERTIFIED"
    want = seqs.oracle("nested").table(report.samples_used)
    ok = arith.accepts_number_pairs(
        report.candidate, np.arange(report.samples_used), want
    )
    assert bool(ok.all())


def test_observation_table_unknowns_never_merge_known_conflicts():
    words = synth._suffix_words(2, 2, 4, 1)
    sfx = synth._SuffixData(words, 2)
    table_vals = seqs.oracle("a105774").table(64)
    src = synth._PairSource(sfx, table=np.asarray(table_vals))
    tab = synth.ObservationTable(src, max_states=256, max_depth=12)
    hyp = tab.hypothesis()
    # states with fully known, different signatures stayed distinct
    sigs = {s.tobytes() for s in tab.sigs}
    assert len(sigs) == len(tab.sigs)


def test_certification_ignores_state_numbering(catalog):
    import numpy as np

    rel = synth.guess_synchronized(seqs.oracle("a105774"), 16384)
    n = rel.n_states
    rng = np.random.default_rng(7)
    perm = rng.permutation(n).astype(np.int32)
    inv = np.empty(n, dtype=np.int32)
    inv[perm] = np.arange(n, dtype=np.int32)
    shuffled = au.Automaton(
        rel.arity,
        perm[rel.delta[inv]],
        rel.outputs[inv],
        int(perm[rel.initial]),
        zero_normalized=True,
    )
    assert au.equivalent(shuffled, rel)
    verdict = synth.certify_recurrence(shuffled, catalog, kind="fib")
    assert verdict.ok
