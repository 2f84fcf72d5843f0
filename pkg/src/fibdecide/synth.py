"""Guess-and-check synthesis of automata from finite oracle data.

The learner builds an observation table over (prefix, suffix) pairs with
three-valued entries: accept, reject, or unknown.  Unknown entries appear
only beyond the training bound (for sequence-backed oracles: pairs whose
argument exceeds the sample count) and never participate in state merges;
two prefixes fall into one state only when their signatures agree on every
mutually known entry.  A guessed automaton is never trusted: callers
certify it with first-order queries through the logic engine, and
:func:`synthesize_certified` escalates the sample count until a candidate
passes or the schedule runs out.

Prefixes are tracked in closed form rather than as strings: after reading
u, the value of any completion u.e is p*F(|e|+2) + q*F(|e|+1) + [e] for an
integer pair (p, q) updated per digit, which lets a whole signature row be
computed with a handful of vector operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import automata as au
from . import numeration as nu
from .automata import Automaton

__all__ = [
    "SynthesisError",
    "BoundExhausted",
    "InconsistencyError",
    "ObservationTable",
    "guess_dfa",
    "guess_synchronized",
    "guess_dfao",
    "Verdict",
    "SynthesisReport",
    "function_certificate",
    "query_certificate",
    "recurrence_certificate",
    "certify_function",
    "certify_recurrence",
    "synthesize_certified",
    "DEFAULT_SCHEDULE",
]

UNKNOWN = 2
DEFAULT_SCHEDULE = (4096, 16384, 65536, 262144)


class SynthesisError(RuntimeError):
    pass


class BoundExhausted(SynthesisError):
    """The observation table ran out of depth or states before closing."""


class InconsistencyError(SynthesisError):
    """No deterministic merge exists; carries a witness prefix pair."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _compatible(a: np.ndarray, b: np.ndarray) -> bool:
    return not bool(np.any((a != b) & (a != UNKNOWN) & (b != UNKNOWN)))


def _join(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(a == UNKNOWN, b, a).astype(np.uint8)


class ObservationTable:
    """Signature-indexed state table shared by every learner front end.

    source must provide: n_symbols, init(), step(state, sym),
    signature(state) -> uint8 ternary vector (entry 0 is the empty
    suffix), and describe(state) for diagnostics.
    """

    def __init__(self, source, max_states: int, max_depth: int):
        self.source = source
        self.max_states = max_states
        self.max_depth = max_depth
        self.sigs: list[np.ndarray] = []
        self.reps: list = []
        self.depths: list[int] = []
        self._exact: dict[bytes, int] = {}

    def _lookup(self, sig: np.ndarray) -> int | None:
        hit = self._exact.get(sig.tobytes())
        if hit is not None:
            return hit
        for i, existing in enumerate(self.sigs):
            if _compatible(existing, sig):
                joined = _join(existing, sig)
                if not np.array_equal(joined, existing):
                    del self._exact[existing.tobytes()]
                    self.sigs[i] = joined
                    self._exact[joined.tobytes()] = i
                return i
        return None

    def _add(self, sig: np.ndarray, state, depth: int) -> int:
        if len(self.reps) >= self.max_states:
            raise BoundExhausted(
                f"state budget {self.max_states} exhausted at prefix "
                f"{self.source.describe(state)}"
            )
        if depth > self.max_depth:
            raise BoundExhausted(
                f"no merge within depth {self.max_depth} for prefix "
                f"{self.source.describe(state)}"
            )
        idx = len(self.reps)
        self.sigs.append(sig)
        self.reps.append(state)
        self.depths.append(depth)
        self._exact[sig.tobytes()] = idx
        return idx

    def hypothesis(self) -> Automaton:
        """Close the table breadth-first and read off the automaton."""
        src = self.source
        init = src.init()
        self._add(src.signature(init), init, 0)
        rows: list[list[int]] = []
        qi = 0
        while qi < len(self.reps):
            row = []
            for sym in range(src.n_symbols):
                nxt = src.step(self.reps[qi], sym)
                sig = src.signature(nxt)
                target = self._lookup(sig)
                if target is None:
                    target = self._add(sig, nxt, self.depths[qi] + 1)
                row.append(target)
            rows.append(row)
            qi += 1
        outputs = np.array(
            [1 if s[0] == 1 else 0 for s in self.sigs], dtype=np.int32
        )
        return Automaton(
            src.arity, np.array(rows, dtype=np.int32), outputs, 0
        )


# -- suffix sets -------------------------------------------------------------


def _suffix_words(n_symbols: int, max_len: int, zero_run: int, tail_len: int):
    """Empty word, all short words, and zero-runs with short tails."""
    words = [()]
    level = [()]
    for _ in range(max_len):
        level = [w + (s,) for w in level for s in range(n_symbols)]
        words.extend(level)
    seen = set(words)
    tails = [()]
    level = [()]
    for _ in range(tail_len):
        level = [w + (s,) for w in level for s in range(n_symbols)]
        tails.extend(level)
    for j in range(1, zero_run + 1):
        run = (0,) * j
        for t in tails:
            w = run + t
            if w not in seen:
                seen.add(w)
                words.append(w)
    return words


class _SuffixData:
    """Per-suffix descriptors enabling vectorized signature rows."""

    def __init__(self, words, arity):
        self.count = len(words)
        lens = np.array([len(w) for w in words], dtype=np.int64)
        self.f2 = np.array([nu.fib(int(L) + 2) for L in lens], dtype=np.int64)
        self.f1 = np.array([nu.fib(int(L) + 1) for L in lens], dtype=np.int64)
        self.values = []
        self.valid = []
        self.first = []
        for tr in range(arity):
            shift = arity - 1 - tr
            vals = np.zeros(self.count, dtype=np.int64)
            ok = np.ones(self.count, dtype=bool)
            first = np.zeros(self.count, dtype=bool)
            for i, w in enumerate(words):
                bits = [(s >> shift) & 1 for s in w]
                v = 0
                prev = 0
                good = True
                for b in bits:
                    if prev and b:
                        good = False
                    prev = b
                t = len(bits)
                for pos, b in enumerate(bits):
                    if b:
                        v += nu.fib(t - pos + 1)
                vals[i] = v
                ok[i] = good
                first[i] = bool(bits[0]) if bits else False
            self.values.append(vals)
            self.valid.append(ok)
            self.first.append(first)


# -- learner sources ----------------------------------------------------------


class _PairSource:
    """Synchronized-relation oracle: accepts (n, x) iff x = f(n), both tracks valid.

    With `batch` set the oracle is evaluated exactly everywhere (entries
    are never unknown).  Otherwise knowledge stops at the table: n beyond
    it yields UNKNOWN unless the string is invalid (then reject, known).
    """

    arity = 2
    n_symbols = 4

    def __init__(self, suffixes: _SuffixData, table=None, batch=None):
        self.table = table
        self.batch = batch
        self.n_known = len(table) if table is not None else None
        self.sfx = suffixes

    def init(self):
        return (0, 0, 0, 0, 0, 0, True, ())

    def step(self, st, sym):
        p0, q0, p1, q1, l0, l1, ok, word = st
        b0, b1 = (sym >> 1) & 1, sym & 1
        ok = ok and not (l0 and b0) and not (l1 and b1)
        return (p0 + q0 + b0, p0, p1 + q1 + b1, p1, b0, b1, ok, word + (sym,))

    def describe(self, st):
        return au._word_text(list(st[7]), 2)

    def signature(self, st) -> np.ndarray:
        p0, q0, p1, q1, l0, l1, ok, _ = st
        sfx = self.sfx
        if not ok:
            return np.zeros(sfx.count, dtype=np.uint8)
        vmask = sfx.valid[0] & sfx.valid[1]
        if l0:
            vmask = vmask & ~sfx.first[0]
        if l1:
            vmask = vmask & ~sfx.first[1]
        n = p0 * sfx.f2 + q0 * sfx.f1 + sfx.values[0]
        x = p1 * sfx.f2 + q1 * sfx.f1 + sfx.values[1]
        if self.batch is not None:
            want = self.batch(n[vmask])
            sig = np.zeros(sfx.count, dtype=np.uint8)
            sig[vmask] = (want == x[vmask]).astype(np.uint8)
            return sig
        known = n < self.n_known
        hit = np.zeros(sfx.count, dtype=bool)
        idx = known & vmask
        hit[idx] = self.table[n[idx]] == x[idx]
        sig = np.where(
            ~vmask, 0, np.where(known, hit.astype(np.uint8), UNKNOWN)
        ).astype(np.uint8)
        return sig


class _SeqSource:
    """Classifier oracle for one output value of a sequence DFAO.

    Member(w) = (f([w]) == value) under the total [.]-interpretation of
    arbitrary bit strings; with a bounded table, entries above the bound
    are UNKNOWN.
    """

    arity = 1
    n_symbols = 2

    def __init__(self, value, suffixes: _SuffixData, table=None, batch=None):
        self.value = value
        self.sfx = suffixes
        self.table = table
        self.batch = batch

    def init(self):
        return (0, 0, ())

    def step(self, st, sym):
        p, q, word = st
        return (p + q + sym, p, word + (sym,))

    def describe(self, st):
        return "".join(str(s) for s in st[2])

    def signature(self, st) -> np.ndarray:
        p, q, _ = st
        sfx = self.sfx
        n = p * sfx.f2 + q * sfx.f1 + sfx.values[0]
        if self.batch is not None:
            vals = self.batch(n)
            return (vals == self.value).astype(np.uint8)
        known = n < len(self.table)
        hit = np.zeros(sfx.count, dtype=bool)
        hit[known] = self.table[n[known]] == self.value
        return np.where(known, hit.astype(np.uint8), UNKNOWN).astype(np.uint8)


class _StringSource:
    """Generic membership source for :func:`guess_dfa`.

    member(word) may return True, False, or None (unknown); it must be
    total (not None) for words up to the bound.
    """

    def __init__(self, member, arity, suffixes, bound):
        self.member = member
        self.arity = arity
        self.n_symbols = 1 << arity
        self.suffixes = suffixes
        self.bound = bound

    def init(self):
        return ()

    def step(self, st, sym):
        return st + (sym,)

    def describe(self, st):
        return au._word_text(list(st), self.arity)

    def signature(self, st) -> np.ndarray:
        out = np.empty(len(self.suffixes), dtype=np.uint8)
        for i, e in enumerate(self.suffixes):
            w = st + e
            if len(w) > self.bound:
                out[i] = UNKNOWN
                continue
            got = self.member(w)
            out[i] = UNKNOWN if got is None else (1 if got else 0)
        return out


# -- front ends ---------------------------------------------------------------


def guess_dfa(
    member,
    arity: int,
    bound: int,
    *,
    suffix_len: int = 6,
    zero_run: int = 12,
    tail_len: int = 1,
    max_states: int = 512,
) -> Automaton:
    """Minimal DFA consistent with all observations of `member` up to `bound`.

    States are residual classes of prefixes, discovered breadth-first and
    distinguished by the suffix battery (all short words plus zero-runs).
    """
    if arity > 2:
        suffix_len = min(suffix_len, 3)
    suffixes = _suffix_words(1 << arity, suffix_len, zero_run, tail_len)
    suffixes = [e for e in suffixes if len(e) <= bound]
    src = _StringSource(member, arity, suffixes, bound)
    max_depth = max(bound - suffix_len, 2)
    table = ObservationTable(src, max_states, max_depth)
    return au.minimize(table.hypothesis())


def guess_synchronized(
    oracle,
    n_samples: int,
    *,
    suffix_len: int = 4,
    zero_run: int = 16,
    tail_len: int = 2,
    max_states: int = 1024,
    max_depth: int | None = None,
    replay_rounds: int = 24,
) -> Automaton:
    """Learn the relation {(n, x) : x = oracle(n)} from samples n < n_samples.

    Oracles with cheap scalar evaluation are observed exactly at any
    depth; table-only oracles leave entries beyond the sample unknown.
    After each hypothesis the training sample is replayed; a disagreement
    word is fed back as fresh distinguishing suffixes (its tails), which
    repairs any premature state merge.  The result is intersected with
    track validity, zero-normalized, and minimized — certification is
    still the caller's job.
    """
    from . import arith

    if max_depth is None:
        max_depth = len(nu.encode(max(n_samples, 2))) + 8
    words = _suffix_words(4, suffix_len, zero_run, tail_len)
    batch = oracle.batch if getattr(oracle, "cheap_scalar", False) else None
    table_vals = None
    if batch is None:
        table_vals = np.asarray(oracle.table(n_samples), dtype=np.int64)
    probe = min(n_samples, 50_000)
    ns = np.arange(probe)
    want = oracle.table(probe)
    extra: list[tuple] = []
    for _ in range(replay_rounds):
        sfx = _SuffixData(words + extra, 2)
        src = _PairSource(sfx, table=table_vals, batch=batch)
        table = ObservationTable(src, max_states, max_depth)
        raw = table.hypothesis()
        cand = au.zero_normalize(
            au.minimize(au.intersect(raw, arith.valid_tracks(2)))
        )
        agreed = arith.accepts_number_pairs(cand, ns, want)
        if bool(agreed.all()):
            return cand
        bad = int(np.flatnonzero(~agreed)[0])
        word = tuple(au.encode_pair_word((bad, int(want[bad]))))
        fresh = [word[i:] for i in range(len(word))]
        fresh = [w for w in fresh if w not in set(words) | set(extra)]
        if not fresh:
            raise InconsistencyError(
                f"replay keeps failing at n={bad} with no new separators",
                witness=(bad, int(want[bad])),
            )
        extra.extend(fresh)
    raise BoundExhausted(f"replay did not stabilize within {replay_rounds} rounds")


def guess_dfao(
    scalar,
    *,
    values,
    batch=None,
    n_samples: int = 65536,
    suffix_len: int = 8,
    zero_run: int = 24,
    tail_len: int = 2,
    max_states: int = 512,
    max_depth: int | None = None,
) -> Automaton:
    """Learn a DFAO for a finite-range sequence: one classifier DFA per value.

    With `batch` given the oracle is total on every bit string (via the
    numeric value of the string), so there are no unknown entries; with
    only a table, entries beyond n_samples are unknown.
    """
    words = _suffix_words(2, suffix_len, zero_run, tail_len)
    sfx = _SuffixData(words, 1)
    table = None
    if batch is None:
        from .seqs import SequenceOracle

        if isinstance(scalar, SequenceOracle):
            table = np.asarray(scalar.table(n_samples), dtype=np.int64)
        else:
            table = np.array([scalar(i) for i in range(n_samples)], dtype=np.int64)
    if max_depth is None:
        max_depth = 48
    parts = []
    for v in values:
        src = _SeqSource(v, sfx, table=table, batch=batch)
        t = ObservationTable(src, max_states, max_depth)
        parts.append((au.minimize(t.hypothesis()), int(v)))
    return au.combine(parts)


# -- certification -------------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    checks: list = field(default_factory=list)  # (name, bool)

    @property
    def failures(self):
        return [name for name, good in self.checks if not good]

    def __bool__(self):
        return self.ok


@dataclass
class SynthesisReport:
    oracle_name: str
    candidate: Automaton | None
    samples_used: int
    verdict: str  # CERTIFIED | FAILED | EXHAUSTED
    checks: list = field(default_factory=list)
    detail: str = ""

    def to_text(self) -> str:
        lines = [
            f"oracle {self.oracle_name}",
            f"samples {self.samples_used}",
            f"verdict {self.verdict}",
        ]
        for name, good in self.checks:
            lines.append(f"check {name} {'TRUE' if good else 'FALSE'}")
        if self.detail:
            lines.append(f"detail {self.detail}")
        if self.candidate is not None:
            lines.append("candidate")
            lines.append(au.serialize(self.candidate))
        return "\n".join(lines) + "\n"


CANDIDATE_NAME = "cand"


def _session_with(candidate: Automaton, catalog):
    from . import logic

    session = logic.Session(catalog)
    session.define_automaton(CANDIDATE_NAME, candidate)
    return session


def function_certificate(label: str):
    """Totality and uniqueness: exactly one x per n."""

    queries = [
        ("total", f"An Ex ${CANDIDATE_NAME}(n,x)"),
        (
            "unique",
            f"~En,x1,x2 x1!=x2 & ${CANDIDATE_NAME}(n,x1) & ${CANDIDATE_NAME}(n,x2)",
        ),
    ]

    def run(candidate, catalog):
        session = _session_with(candidate, catalog)
        checks = []
        for name, body in queries:
            got = session.eval(body)
            checks.append((f"{label}_{name}", got))
            if not got:
                break
        return Verdict(all(g for _, g in checks), checks)

    return run


def query_certificate(label: str, queries, defs=()):
    """Arbitrary closed queries; $cand refers to the candidate."""

    def run(candidate, catalog):
        session = _session_with(candidate, catalog)
        for name, body in defs:
            session.define(name, body.replace("$cand", f"${CANDIDATE_NAME}"))
        checks = []
        for name, body in queries:
            got = session.eval(body.replace("$cand", f"${CANDIDATE_NAME}"))
            checks.append((f"{label}_{name}" if label else name, got))
            if not got:
                break
        return Verdict(all(g for _, g in checks), checks)

    return run


_ADJ_FIB = '[0,0]*[0,1][1,0][0,0]*'
_ADJ_LUCAS = '[0,0]*[0,1][1,0][0,1][1,0][0,0]*'


def recurrence_certificate(kind: str, x: int = 1, y: int = 1, base_checks=None):
    """Certificate that a candidate relation satisfies its defining recurrence.

    kind 'fib': a(k) = x*F(j+1) - y*a(k - F(j)) on Fibonacci brackets;
    kind 'fib_nested': b(k) = F(j+1) - b(b(k - F(j)));
    kind 'lucas': a(k) = L(j+1) - a(k - L(j)) on Lucas brackets (j >= 3 via
    the bracket regex; smaller k pinned by explicit value checks).
    """

    def run(candidate, catalog):
        from . import logic, seqs

        session = _session_with(candidate, catalog)
        c = CANDIDATE_NAME
        checks = []
        if kind in ("fib", "fib_nested"):
            session.define_automaton("adjbracket", au.regex_compile(_ADJ_FIB, 2))
            session.define("trapbracket", "$adjbracket(x,y) & x<k & y>=k")
            if kind == "fib":
                lhs = "y" if x == 1 else f"{x}*y"
                rhs = "z+t" if y == 1 else f"z+{y}*t"
                rec = (
                    f"Ak,x,y,z,t ($trapbracket(k,x,y) & ${c}(k,z) & ${c}(k-x,t))"
                    f" => {lhs}={rhs}"
                )
            else:
                rec = (
                    f"Ak,x,y,z,t,u ($trapbracket(k,x,y) & ${c}(k,z) & ${c}(k-x,t)"
                    f" & ${c}(t,u)) => y=z+u"
                )
            checks.append(("recurrence", session.eval(rec)))
            bases = base_checks if base_checks is not None else [(0, 0), (1, 1)]
        else:
            session.define_automaton("adjbracket", au.regex_compile(_ADJ_LUCAS, 2))
            session.define("trapbracket", "$adjbracket(x,y) & x<k & y>=k")
            rec = (
                f"Ak,x,y,z,t ($trapbracket(k,x,y) & ${c}(k,z) & ${c}(k-x,t))"
                f" => y=z+t"
            )
            checks.append(("recurrence", session.eval(rec)))
            if base_checks is not None:
                bases = base_checks
            else:
                bases = [(k, seqs.lucas_variant(k)) for k in range(5)]
        for n, v in bases:
            checks.append((f"base_{n}", session.eval(f"${c}({n},{v})")))
        return Verdict(all(g for _, g in checks), checks)

    return run


def certify_function(candidate: Automaton, catalog) -> Verdict:
    return function_certificate("function")(candidate, catalog)


def certify_recurrence(candidate: Automaton, catalog, kind="fib", **kw) -> Verdict:
    return recurrence_certificate(kind, **kw)(candidate, catalog)


def synthesize_certified(
    oracle,
    certificates,
    *,
    schedule=DEFAULT_SCHEDULE,
    catalog=None,
    learn_kwargs=None,
    post_check=None,
) -> SynthesisReport:
    """Loop guess -> certify over an escalating sample schedule."""
    learn_kwargs = dict(learn_kwargs or {})
    last_checks = []
    last_detail = ""
    last_n = 0
    for i, n in enumerate(schedule):
        last_n = n
        kw = dict(learn_kwargs)
        # widen the distinguishing battery along with the data
        kw.setdefault("zero_run", 16 + 4 * i)
        kw.setdefault("suffix_len", 4)
        try:
            candidate = guess_synchronized(oracle, n, **kw)
        except SynthesisError as exc:
            last_detail = f"learning failed at {n} samples: {exc}"
            last_checks = []
            continue
        # cheap sanity gate before any engine query: the candidate must at
        # least reproduce the sample it was learned from
        from . import arith

        probe = min(n, 50_000)
        ns = np.arange(probe)
        agreed = arith.accepts_number_pairs(candidate, ns, oracle.table(probe))
        if not bool(agreed.all()):
            bad = int(np.flatnonzero(~agreed)[0])
            last_detail = f"candidate contradicts its own sample at n={bad}"
            last_checks = [("sample_replay", False)]
            continue
        checks = []
        ok = True
        for cert in certificates:
            try:
                verdict = cert(candidate, catalog)
            except au.DeterminizationLimit as exc:
                # a blown-up query is evidence of a junk candidate, not of
                # the property: treat as a failed check and escalate
                verdict = Verdict(False, [("engine_limit", False)])
                last_detail = str(exc)
            checks.extend(verdict.checks)
            if not verdict.ok:
                ok = False
                break
        if ok and post_check is not None:
            name, good = post_check(candidate)
            checks.append((name, good))
            ok = good
        if ok:
            return SynthesisReport(
                oracle.name, candidate, n, "CERTIFIED", checks
            )
        last_checks = checks
        failed = [name for name, good in checks if not good]
        last_detail = f"failed: {', '.join(failed)}"
    return SynthesisReport(
        getattr(oracle, "name", "?"), None, last_n, "EXHAUSTED", last_checks, last_detail
    )
