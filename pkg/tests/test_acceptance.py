"""Acceptance suite: every exit criterion at its stated bound.

One test per criterion; each prints its PASS/FAIL line(s).  The whole
reproduction (catalog, certified syntheses, scripted identities, counting
representations, state counts, closed forms, property suites) is built
once for the session.

Criterion 8's t-recurrence is asserted over the stated range n >= 5 and is
a strict expected failure: t(5) = 11 while t(4)+t(2)+t(1) = 10, an
off-by-one in the source material (the recurrence provably holds from
n = 6; see test_seqs.test_t_recurrence_actual_range for the verified
fact).
"""

import pytest

from fibdecide import reproduce as rp
from fibdecide import seqs


@pytest.fixture(scope="module")
def results():
    run = rp.Reproduction(
        schedule=(16384, 65536, 262144),
        verify_bound=100_000,
        phin_verify=1 << 20,
        seed=20240901,
    )
    out = {}
    for res in run.run():
        out.setdefault(res.name, res)
    return out


def _check(results, *names):
    for name in names:
        res = results[name]
        print(res.line())
        assert res.ok, f"{res.name}: {res.detail}"


def test_criterion_01_main_sequence_automaton(results):
    _check(results, "a105774_certified", "a105774_oracle_agreement")


def test_criterion_02_scripted_identities(results):
    _check(results, "scripted_identities")


def test_criterion_03_count_dfao(results):
    _check(results, "count_dfao_table")


def test_criterion_04_permutation(results):
    _check(results, "permutation_linrep", "permutation_mutation_witness")


def test_criterion_05_distinctness(results):
    _check(results, "distinctness_transform")


def test_criterion_06_mod_state_counts(results):
    _check(results, "mod_dfao_state_counts")


def test_criterion_07_variant_state_counts(results):
    _check(results, "variant_state_counts")


def test_criterion_08_closed_forms(results):
    _check(results, "closed_forms")


@pytest.mark.xfail(
    strict=True,
    reason="stated range starts at n=5 but t(5)=11 != t(4)+t(2)+t(1)=10; "
    "the recurrence holds for 6 <= n <= 30 (verified in test_seqs)",
)
def test_criterion_08_special_value_recurrences_stated_range(results):
    _check(results, "special_value_recurrences")


def test_criterion_08_s_recurrence_stated_range():
    s = [seqs.s_value(n) for n in range(31)]
    assert all(s[n] == s[n - 1] + s[n - 3] + s[n - 4] for n in range(4, 31))


def test_criterion_09_regex_characterizations(results):
    _check(results, "suffix_minima_regex", "fixed_points_regex")


def test_criterion_10_run_lengths(results):
    _check(results, "run_length_encoding")


def test_criterion_11_carlitz(results):
    _check(results, "carlitz_constants", "carlitz_main_identity")


def test_criterion_12_property_suites(results):
    _check(
        results,
        "automata_algebra_laws",
        "learner_roundtrip",
        "linrep_padding_stability",
        "engine_soundness",
    )
