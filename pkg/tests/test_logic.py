import numpy as np
import pytest

from fibdecide import arith
from fibdecide import automata as au
from fibdecide import logic
from fibdecide import numeration as nu


@pytest.fixture()
def session(catalog):
    return logic.Session(catalog)


def test_parse_quantifier_scope():
    f = logic.parse_formula(
        '?msd_fib An,x,y (x<y & $a(x,n) & $a(y,n)) => y=x+1'
    )
    assert isinstance(f, logic.Quant)
    assert f.names == ("n", "x", "y")
    assert isinstance(f.body, logic.BoolOp) and f.body.op == "=>"


def test_parse_negated_quantifier_scope():
    f = logic.parse_formula("~En,x1,x2 x1!=x2 & $a(n,x1) & $a(n,x2)")
    assert isinstance(f, logic.Not)
    assert isinstance(f.body, logic.Quant)
    assert logic.free_vars(f) == set()


def test_parse_def_free_vars():
    f = logic.parse_formula("?msd_fib Ek n=2*k")
    assert logic.free_vars(f) == {"n"}


def test_parse_error_reports_position():
    with pytest.raises(logic.ParseError, match="line"):
        logic.parse_formula("x &")
    with pytest.raises(logic.ParseError):
        logic.parse_formula("En, x")  # missing body
    with pytest.raises(logic.ParseError):
        logic.parse_formula("_bad = 1")


def test_parse_dfao_test():
    f = logic.parse_formula("An C[n]=@1 <=> Ek $p1(k,n)")
    assert isinstance(f, logic.Quant)
    left = f.body.left
    assert isinstance(left, logic.DfaoTest)
    assert left.name == "C" and left.value == 1


def test_script_parser_multiline_and_comments():
    cmds = logic.parse_script(
        'reg four msd_fib msd_fib msd_fib msd_fib\n'
        '   "[0,0,0,0]*[1,0,0,0][0,1,0,0][0,0,0,0][0,0,1,0][0,0,0,1][0,0,0,0]*":\n'
        "# a comment\n"
        'def even "?msd_fib Ek n=2*k":\n'
        'eval check "?msd_fib Ax x=x":\n'
        "combine C s1=1 s2=2 s0=0:\n"
    )
    kinds = [type(c).__name__ for c in cmds]
    assert kinds == ["RegCmd", "DefCmd", "EvalCmd", "CombineCmd"]
    assert cmds[0].arity == 4
    assert cmds[3].parts == [("s1", 1), ("s2", 2), ("s0", 0)]


def test_script_unknown_command():
    with pytest.raises(logic.ParseError, match="unknown command"):
        logic.parse_script("frobnicate x:")


def test_eval_examples(session):
    assert session.eval("Ax x=x")
    assert not session.eval("Ex x=x+1")
    assert session.eval("Ax,y x+y=y+x")
    assert session.eval("Ax x+0=x")


def test_eval_requires_closed(session):
    with pytest.raises(logic.CompileError, match="free"):
        session.eval("x=1")


def test_unknown_automaton(session):
    with pytest.raises(logic.CompileError, match=r"\$nosuch"):
        session.eval("Ax $nosuch(x)")


def test_arity_mismatch(session):
    with pytest.raises(logic.CompileError, match="arguments"):
        session.eval("Ax $phin(x)")


def test_define_even_matches_scan(session):
    even = session.define("even", "?msd_fib Ek n=2*k")
    ns = np.arange(4000)
    got = arith.accepts_number_pairs(even, ns)
    assert np.array_equal(got, ns % 2 == 0)


def test_compile_x_equals_x_is_valid(session):
    q = session.compile("x=x")
    assert au.equivalent(q.aut, arith.valid())


def test_tracks_sorted_by_name(session):
    # z appears before n in the formula, yet n gets track 0
    q = session.compile("z=n/2")
    assert q.variables == ("n", "z")
    assert q.aut.accepts_numbers(7, 3)


def test_renaming_bound_vars_is_equivalent(session):
    a = session.compile("Ek n=2*k")
    b = session.compile("Em n=2*m")
    assert au.equivalent(a.aut, b.aut)


def test_quantifier_law(session):
    lhs = session.compile("Ex x=2*y")
    rhs = session.compile("~(Ax ~(x=2*y))")
    assert au.equivalent(lhs.aut, rhs.aut)


def test_relational_subtraction(session):
    assert session.eval("Ax,y (x<y) => Ez z=y-x & z>=1")
    assert not session.eval("Ex x=1-2")
    # guarded use as in the bracketing scripts
    assert session.eval("Ak,x (x<k) => Et t=k-x & t+x=k")


def test_division_examples(session):
    assert session.eval("Ax Ez z=(x+1)/2 & 2*z<=x+1 & x+1<2*z+2")
    with pytest.raises(logic.CompileError, match="divisor"):
        session.eval("Ex,y x=y/x")
    with pytest.raises(logic.CompileError, match="constant"):
        session.eval("Ex,y,z z=x*y")


def test_dfao_value_atom(catalog):
    s = logic.Session(catalog)
    # the Fibonacci word letters partition the naturals
    assert s.eval("An F[n]=@0 | F[n]=@1")
    assert s.eval("~En F[n]=@0 & F[n]=@1")
    assert s.eval("F[1]=@1 & F[0]=@0 & F[6]=@1")
    assert s.eval("An (n>=1) => (F[n-1]=@0 | F[n-1]=@1)")


def test_define_redefinition_policy(session):
    session.define("thing", "n<5")
    session.define("thing", "n<5")  # equivalent restatement: fine
    with pytest.raises(logic.CompileError, match="force"):
        session.define("thing", "n<6")
    session.define("thing", "n<6", force=True)


def test_define_automaton_and_listing(session):
    session.define_automaton("box", arith.valid())
    assert "box" in session.names()
    assert session.automaton("box").accepts("10")


def test_run_script_report(session):
    report = session.run_script(
        'def t "n<5":\n'
        'eval good "?msd_fib Ex $t(x)":\n'
        'eval bad "?msd_fib Ax $t(x)":\n'
    )
    assert report.evals == [("good", True), ("bad", False)]
    assert not report.all_true


def test_constant_automaton_compile(session):
    q = session.compile("x=144")
    assert q.aut.accepts_numbers(144)
    assert not q.aut.accepts_numbers(143)


def test_apply_with_term_args(catalog):
    s = logic.Session(catalog)
    assert s.eval("Ak $phin(2*k, 2*k) => k=0")
    assert s.eval("$phin(2*3+4, 16)")


def test_apply_repeated_variable(catalog):
    s = logic.Session(catalog)
    fixed = s.define("diag", "$eq(n,n)")
    assert au.equivalent(fixed, arith.valid())


def test_soundness_spotcheck(catalog):
    from fibdecide.reproduce import engine_soundness

    ok, detail = engine_soundness(99, catalog)
    assert ok, detail


def test_define_wseq_matches_oracle(catalog):
    from fibdecide import seqs, synth

    s = logic.Session(catalog)
    s.define_automaton(
        "a105774", synth.guess_synchronized(seqs.oracle("a105774"), 16384)
    )
    s.define(
        "wseq",
        "(Em $a105774(x,m) & m>=n) & (Ai,p (i<x & $a105774(i,p)) => p<n)",
    )
    want = seqs.w_table(10_000)
    got = arith.accepts_number_pairs(
        s.automaton("wseq"), np.arange(10_000), want
    )
    assert bool(got.all())


def test_package_exports():
    import fibdecide

    assert fibdecide.encode(43) == "10010001"
    assert fibdecide.decode("11") == 3
    assert fibdecide.oracle("a105774").value(9) == 12
    assert fibdecide.__version__
