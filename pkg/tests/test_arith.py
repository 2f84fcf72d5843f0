import numpy as np
import pytest

from fibdecide import arith
from fibdecide import automata as au
from fibdecide import numeration as nu


def test_valid_examples():
    v = arith.valid()
    assert v.accepts("10010001")
    assert v.accepts("")
    assert not v.accepts("0110")
    assert v.zero_normalized


def test_eq_lt_leq_examples():
    assert arith.eq().accepts_numbers(5, 5)
    assert not arith.eq().accepts_numbers(5, 6)
    assert arith.lt().accepts_numbers(4, 7)
    assert not arith.lt().accepts_numbers(4, 4)
    assert arith.leq().accepts_numbers(4, 4)


def test_lt_matches_decode_order():
    lt = arith.lt()
    for x in range(40):
        for y in range(40):
            assert lt.accepts_numbers(x, y) == (x < y)


def test_lt_equals_additive_construction(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    additive = s.define("lt2", "Et t>=1 & x+t=y")
    assert au.equivalent(additive, arith.lt())


def test_add_examples_and_totality():
    add = arith.add()
    assert add.accepts_numbers(1, 1, 2)
    for n in range(0, 1000, 37):
        assert add.accepts_numbers(0, n, n)
    assert not add.accepts_numbers(2, 3, 4)


def test_add_total_function_small():
    add = arith.add()
    limit = 300
    xs, ys = np.meshgrid(np.arange(limit), np.arange(limit), indexing="ij")
    xs, ys = xs.ravel(), ys.ravel()
    assert bool(arith.accepts_number_pairs(add, xs, ys, xs + ys).all())
    assert not arith.accepts_number_pairs(add, xs, ys, xs + ys + 1).any()
    assert not arith.accepts_number_pairs(add, xs[1:], ys[1:], xs[1:] + ys[1:] - 1).any()


def test_add_commutes():
    add = arith.add()
    swapped = au.swap_tracks(add, [1, 0, 2])
    assert au.equivalent(add, swapped)


def test_const_mul_div_examples():
    assert arith.const_mul(1).accepts_numbers(9, 9)
    assert arith.const_mul(2).accepts_numbers(6, 12)
    assert not arith.const_mul(2).accepts_numbers(6, 11)
    d2 = arith.const_div(2)
    assert d2.accepts_numbers(7, 3)
    for n in range(200):
        assert d2.accepts_numbers(n, n // 2)
    with pytest.raises(ValueError):
        arith.const_mul(0)
    with pytest.raises(ValueError):
        arith.const_div(0)


def test_catalog_contents(catalog):
    for name in ("valid", "eq", "lt", "leq", "add", "phin", "phi2n",
                 "a007067", "a007064", "a004937", "a003623", "a035487",
                 "fibword", "F"):
        assert name in catalog


def test_phin_examples(catalog):
    phin = catalog["phin"]
    assert phin.accepts_numbers(0, 0)
    assert phin.accepts_numbers(10, 16)
    assert not phin.accepts_numbers(10, 17)


def test_phin_steps(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    assert s.eval("An,y,z ($phin(n,y) & $phin(n+1,z)) => (z=y+1 | z=y+2)")


def test_beatty_partition_inside_engine(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    assert s.eval(
        "Ax (x>=1) => ((En n>=1 & $phin(n,x)) <=> (~Em m>=1 & $phi2n(m,x)))"
    )


def test_phi2n_examples(catalog):
    phi2n = catalog["phi2n"]
    assert phi2n.accepts_numbers(0, 0)
    assert phi2n.accepts_numbers(1, 2)
    assert phi2n.accepts_numbers(10, 26)


def test_beatty_catalog_examples(catalog):
    assert catalog["a007067"].accepts_numbers(1, 2)
    assert catalog["a004937"].accepts_numbers(1, 3)


def test_beatty_ranges_disjoint(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    assert s.eval("Ax (Em $a007067(m,x)) <=> (~En $a007064(n,x))")


def test_fibword_values(catalog):
    fw = catalog["fibword"]
    got = [fw.value_at(n) for n in range(14)]
    assert got == list(arith.fibword_prefix(14))
    assert got[:5] == [0, 1, 0, 0, 1]


def test_mod_dfao_examples():
    m3 = arith.mod_dfao(3, verify_bound=20000)
    assert m3.value_at(7) == 1
    assert au.partial_state_count(m3, arith.valid()) == 18
    m2 = arith.mod_dfao(2, verify_bound=20000)
    vals = arith.dfao_values(m2, np.arange(500))
    assert np.array_equal(vals, np.arange(500) % 2)
    with pytest.raises(ValueError):
        arith.mod_dfao(1)


def test_mod2_matches_engine_even(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    even = s.define("even", "Ek n=2*k")
    m2 = arith.mod_dfao(2, verify_bound=5000)
    even_from_mod = au.zero_normalize(
        au.intersect(
            au.Automaton(1, m2.delta, (m2.outputs == 0).astype(np.int32), m2.initial),
            arith.valid(),
        )
    )
    assert au.equivalent(even, even_from_mod)


def test_add_unique_inside_engine(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    assert s.eval("Ax,y Ez $add(x,y,z)")
    assert s.eval("~Ex,y,z1,z2 z1!=z2 & $add(x,y,z1) & $add(x,y,z2)")


def test_lt_strict_total_order(catalog):
    from fibdecide import logic

    s = logic.Session(catalog)
    assert s.eval("~Ex $lt(x,x)")
    assert s.eval("Ax,y,z ($lt(x,y) & $lt(y,z)) => $lt(x,z)")
    assert s.eval("Ax,y $lt(x,y) | $lt(y,x) | $eq(x,y)")
    assert s.eval("~Ex,y $lt(x,y) & $eq(x,y)")
