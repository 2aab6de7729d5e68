"""Executable checks of the duality identities and their corollaries.

Each check computes the two sides of an identity by independent walks (with
transformed initial matrices or a moved root) and returns a :class:`Verdict`.
A sign-coherence failure met on the way is reported as a violated assumption,
which is distinct from an identity that fails with coherent signs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import MixedSigns, NotUnimodular
from .fpoly import analyze_f
from .matrix import ExchangeMatrix, IntMat, determinant, int_inverse, jay, select, truncate_positive
from .oracle import separation_check, symbolic_walk, tropical_y_walk
from .pattern import (
    PatternPoint,
    Walker,
    column_signs,
    is_sign_coherent,
    mutate_c_unconditional,
    mutate_matrix,
    reroot_word,
    sign_of_column,
    step_general,
    step_left,
    step_right,
    validate_word,
    walk,
)
from .verdict import FAIL, PASS, STATUSES, VIOLATED, Verdict, worst


def _walk(b0, word, walker: Walker | None = None, track_f: bool = False) -> PatternPoint:
    if walker is not None and walker.b0 == b0 and (walker.track_f or not track_f):
        return walker.point(word)
    return walk(b0, word, track_f=track_f)


def _base(b0: ExchangeMatrix, word: Sequence[int], k: int | None = None) -> dict:
    w = {"matrix": b0.to_json(), "word": list(word)}
    if k is not None:
        w["k"] = k
    return w


def _violated(check: str, b0, word, exc: MixedSigns, route: str, k=None) -> Verdict:
    w = _base(b0, word, k)
    w.update(route=route, sign_violation=exc.witness())
    return Verdict(check, VIOLATED, w)


def _mismatch(name: str, lhs: IntMat, rhs: IntMat) -> dict:
    return {"identity": name, "lhs": lhs.tolist(), "rhs": rhs.tolist()}


def _finish(check: str, b0, word, failures: list[dict], k=None) -> Verdict:
    if not failures:
        return Verdict(check, PASS)
    w = _base(b0, word, k)
    w["failures"] = failures
    return Verdict(check, FAIL, w)


class _Route:
    """Runs one named walk, remembering the name for violation reports."""

    def __init__(self):
        self.name = "engine"

    def __call__(self, name: str, b0, word, walker=None, track_f=False) -> PatternPoint:
        self.name = name
        return _walk(b0, word, walker, track_f)


def _inverse_or_none(m: IntMat) -> IntMat | None:
    try:
        return int_inverse(m)
    except NotUnimodular:
        return None


def verify_theorem(b0: ExchangeMatrix, word: Sequence[int], walker: Walker | None = None) -> Verdict:
    """Both duality identities and their combination, each side walked independently.

    * ``G^T == inverse(C')`` where C' is walked from ``-B^T`` along ``word``;
    * ``C == inverse(C'')`` where C'' is walked from ``-B_t`` back along the reversed word;
    * ``G^T == C'''`` where C''' is walked from ``B_t^T`` back along the reversed word.

    For skew-symmetric ``B`` it also checks ``G^T == inverse(C)``.
    """
    check = "theorem"
    word = validate_word(word, b0.n)
    back = tuple(reversed(word))
    route = _Route()
    try:
        p = route("engine", b0, word, walker)
        c_dual = route("-B^T from t0", ExchangeMatrix(-b0.b.T), word).c
        c_back = route("-B_t from t", -p.b_t, back).c
        c_comb = route("B_t^T from t", ExchangeMatrix(p.b_t.b.T), back).c
    except MixedSigns as exc:
        return _violated(check, b0, word, exc, route.name)

    failures = []
    gt = p.g.T

    def expect_inverse(name: str, lhs: IntMat, m: IntMat) -> None:
        inv = _inverse_or_none(m)
        if inv is None:
            failures.append({"identity": name, "lhs": lhs.tolist(), "not_unimodular": m.tolist()})
        elif lhs != inv:
            failures.append(_mismatch(name, lhs, inv))

    expect_inverse("G^T = (C^{-B^T})^{-1}", gt, c_dual)
    expect_inverse("C = (C_{t0}^{-B_t;t})^{-1}", p.c, c_back)
    if gt != c_comb:
        failures.append(_mismatch("G^T = C_{t0}^{B_t^T;t}", gt, c_comb))
    if b0.is_skew_symmetric():
        expect_inverse("G^T = C^{-1} (skew-symmetric)", gt, p.c)
    return _finish(check, b0, word, failures)


def conjugate_by_d(c: IntMat, d: Sequence[int]) -> IntMat | None:
    """``D C D^{-1}``, or ``None`` if it is not an integer matrix."""
    n = c.nrows
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            q, r = divmod(d[i] * c[i, j], d[j])
            if r:
                return None
            row.append(q)
        rows.append(row)
    return IntMat(rows)


def verify_auxiliary(b0: ExchangeMatrix, word: Sequence[int], walker: Walker | None = None) -> Verdict:
    """``G B_t = B C``, ``D B_t = C^T D B C``, the D-conjugation law and equal column signs."""
    check = "auxiliary"
    word = validate_word(word, b0.n)
    route = _Route()
    try:
        p = route("engine", b0, word, walker)
        c_dual = route("-B^T from t0", ExchangeMatrix(-b0.b.T), word).c
        signs = column_signs(p.c)
        route.name = "-B^T from t0"
        signs_dual = column_signs(c_dual)
    except MixedSigns as exc:
        return _violated(check, b0, word, exc, route.name)

    b, c, g, bt = b0.b, p.c, p.g, p.b_t.b
    dm = b0.D
    failures = []
    if g @ bt != b @ c:
        failures.append(_mismatch("G B_t = B C", g @ bt, b @ c))
    lhs, rhs = dm @ bt, c.T @ dm @ b @ c
    if lhs != rhs:
        failures.append(_mismatch("D B_t = C^T D B C", lhs, rhs))
    conj = conjugate_by_d(c, b0.d)
    if conj is None:
        failures.append({"identity": "D C D^{-1} integral", "c": c.tolist(), "d": list(b0.d)})
    elif conj != c_dual:
        failures.append(_mismatch("C^{-B^T} = D C D^{-1}", c_dual, conj))
    if signs != signs_dual:
        failures.append(
            {"identity": "eps(C^{-B^T}) = eps(C)", "lhs": list(signs_dual), "rhs": list(signs)}
        )
    return _finish(check, b0, word, failures)


def verify_sign_coherence(
    b0: ExchangeMatrix, word: Sequence[int], walker: Walker | None = None
) -> Verdict:
    """Every column of every C-matrix along the word is sign-coherent."""
    check = "sign-coherence"
    word = validate_word(word, b0.n)
    walker = walker if walker is not None and walker.b0 == b0 else Walker(b0, track_f=False)
    for cut in range(len(word) + 1):
        prefix = word[:cut]
        try:
            p = walker.point(prefix)
            column_signs(p.c)
        except MixedSigns as exc:
            exc = exc if exc.word is not None else exc.with_word(prefix)
            return _violated(check, b0, word, exc, "engine")
    return Verdict(check, PASS)


def g_transform(g: Sequence[int], b0: ExchangeMatrix, k: int) -> tuple[int, ...]:
    """g-vector of the same cluster variable after moving the root in direction ``k``."""
    p = k - 1
    gk = g[p]
    out = []
    for i, gi in enumerate(g):
        if i == p:
            out.append(-gk)
        else:
            bik = b0[i, p]
            out.append(gi + max(bik, 0) * gk - bik * min(gk, 0))
    return tuple(out)


def verify_conjecture41(
    b0: ExchangeMatrix, k: int, word: Sequence[int], walker: Walker | None = None
) -> Verdict:
    """Constant term and dominant monomial of every F, row sign-coherence and
    unimodularity of G, and the g-vector transformation under a root move."""
    check = "conjecture41"
    n = b0.n
    word = validate_word(word, n)
    validate_word((k,), n)
    route = _Route()
    try:
        p = route("engine", b0, word, walker, track_f=True)
        b1 = mutate_matrix(b0, k)
        g1 = route("mu_k(B) from t1", b1, reroot_word(word, k)).g
    except MixedSigns as exc:
        return _violated(check, b0, word, exc, route.name, k)

    failures = []
    for j, fj in enumerate(p.f, start=1):
        a = analyze_f(fj)
        if not a.constant_term_one:
            failures.append({"part": "i", "j": j, "f": fj.to_json()})
        if not a.unique_max_monomial:
            failures.append({"part": "ii", "j": j, "f": fj.to_json()})
    for i, row in enumerate(p.g.rows(), start=1):
        if not is_sign_coherent(row):
            failures.append({"part": "iii", "row": i, "g": p.g.tolist()})
    det = determinant(p.g)
    if det not in (1, -1):
        failures.append({"part": "iv", "det": det, "g": p.g.tolist()})
    for j in range(n):
        want = g_transform(p.g.column(j), b0, k)
        if want != g1.column(j):
            failures.append(
                {"part": "v", "j": j + 1, "predicted": list(want), "walked": list(g1.column(j))}
            )
    for eps in (1, -1):
        pred = (jay(n, k) + select(truncate_positive(b0.b * eps), "column", k)) @ p.g + b0.b @ select(
            truncate_positive(p.g * -eps), "row", k
        )
        if pred != g1:
            failures.append({"part": "v-matrix", "eps": eps, **_mismatch("G' formula", g1, pred)})
    return _finish(check, b0, word, failures, k)


def verify_scalar_identity(bound: int) -> Verdict:
    """Exhaustive check of the two max-plus identities for ``|b|, |c| <= bound``."""
    if bound < 1:
        raise ValueError("bound must be at least 1")

    def pos(x: int) -> int:
        return x if x > 0 else 0

    cases = 0
    bad = []
    for b in range(-bound, bound + 1):
        if pos(b) - pos(-b) != b:
            bad.append({"identity": "[b]+ - [-b]+ = b", "b": b})
        for c in range(-bound, bound + 1):
            for eps in (1, -1):
                cases += 1
                lhs = pos(c) * pos(b) - pos(-c) * pos(-b)
                rhs = c * pos(eps * b) + b * pos(-eps * c)
                if lhs != rhs:
                    bad.append({"b": b, "c": c, "eps": eps, "lhs": lhs, "rhs": rhs})
    if bad:
        return Verdict("scalar-identity", FAIL, {"bound": bound, "cases": cases, "failures": bad})
    return Verdict("scalar-identity", PASS)


def scalar_identity_cases(bound: int) -> int:
    return (2 * bound + 1) ** 2 * 2


def _signed_unit(col: Sequence[int], k: int) -> int | None:
    """``eps`` if ``col == eps * e_k`` (1-based k), else ``None``."""
    v = col[k - 1]
    if v in (1, -1) and all(x == 0 for i, x in enumerate(col) if i != k - 1):
        return v
    return None


def verify_inverse_column_fact(c: IntMat, k: int, ell: int) -> Verdict:
    """Column ``ell`` of C is ``eps e_k`` iff column ``k`` of C^{-1} is ``eps e_ell``."""
    inv = int_inverse(c)
    n = c.nrows
    if not (1 <= k <= n and 1 <= ell <= n):
        raise IndexError(f"indices ({k}, {ell}) out of range 1..{n}")
    s1 = _signed_unit(c.column(ell - 1), k)
    s2 = _signed_unit(inv.column(k - 1), ell)
    off1 = any(c[i, ell - 1] != 0 for i in range(n) if i != k - 1)
    off2 = any(inv[i, k - 1] != 0 for i in range(n) if i != ell - 1)
    if s1 == s2 and off1 == off2:
        return Verdict("inverse-column", PASS)
    return Verdict(
        "inverse-column",
        FAIL,
        {"c": c.tolist(), "inverse": inv.tolist(), "k": k, "ell": ell,
         "unit_signs": [s1, s2], "off_entries": [off1, off2]},
    )


def verify_step_left(
    b0: ExchangeMatrix, k: int, word: Sequence[int], walker: Walker | None = None
) -> Verdict:
    """The left-end recurrence against a fresh walk from the moved root, plus the
    sign flip of column ``k`` between the two backward walks."""
    check = "step-left"
    n = b0.n
    word = validate_word(word, n)
    validate_word((k,), n)
    word1 = reroot_word(word, k)
    route = _Route()
    try:
        p = route("engine", b0, word, walker)
        direct = route("mu_k(B) from t1", mutate_matrix(b0, k), word1).c
        back0 = route("-B_t from t to t0", -p.b_t, tuple(reversed(word))).c
        back1 = route("-B_t from t to t1", -p.b_t, tuple(reversed(word1))).c
        route.name = "step_left"
        left = step_left(b0, k, p.c)
        route.name = "-B_t from t to t0"
        eps0 = sign_of_column(back0, k).value
        route.name = "-B_t from t to t1"
        eps1 = sign_of_column(back1, k).value
        route.name = "inverse of C"
        eps_inv = sign_of_column(int_inverse(p.c), k).value
    except MixedSigns as exc:
        return _violated(check, b0, word, exc, route.name, k)
    except NotUnimodular as exc:
        w = _base(b0, word, k)
        w["failures"] = [{"identity": "C unimodular", "det": exc.det}]
        return Verdict(check, FAIL, w)

    failures = []
    if left != direct:
        failures.append(_mismatch("step_left = walk from t1", left, direct))
    if eps_inv != eps0:
        failures.append({"identity": "eps from inverse = eps from backward walk",
                         "lhs": eps_inv, "rhs": eps0})
    if eps1 != -eps0:
        failures.append({"identity": "eps flips between t0 and t1", "lhs": eps1, "rhs": eps0})
    col0, col1 = select(back0, "column", k), select(back1, "column", k)
    if col1 != -col0:
        failures.append(_mismatch("column k negates between t0 and t1", col1, -col0))
    return _finish(check, b0, word, failures, k)


def verify_tropical(b0: ExchangeMatrix, word: Sequence[int], walker: Walker | None = None) -> Verdict:
    """The tropical coefficient run reproduces the engine's C-matrix."""
    check = "tropical"
    word = validate_word(word, b0.n)
    trop = tropical_y_walk(b0, word)
    try:
        c = _walk(b0, word, walker).c
    except MixedSigns as exc:
        return _violated(check, b0, word, exc, "engine")
    if c != trop:
        return _finish(check, b0, word, [_mismatch("C = tropical y exponents", c, trop)])
    return Verdict(check, PASS)


def verify_separation(b0: ExchangeMatrix, word: Sequence[int], walker: Walker | None = None) -> Verdict:
    """Both separation formulas against the symbolic seed with principal coefficients."""
    check = "separation"
    word = validate_word(word, b0.n)
    try:
        p = _walk(b0, word, walker, track_f=True)
    except MixedSigns as exc:
        return _violated(check, b0, word, exc, "engine")
    results = separation_check(p, symbolic_walk(b0, word), b0)
    bad = [
        {"kind": r.kind, "j": r.j, "formula": r.expected, "seed": r.got} for r in results if not r.ok
    ]
    return _finish(check, b0, word, bad)


def verify_recurrences(b0: ExchangeMatrix, word: Sequence[int], walker: Walker | None = None) -> Verdict:
    """At the endpoint, for every direction: the general-sign step gives the same
    answer for both signs and matches the sign-coherent and unconditional steps."""
    check = "recurrences"
    n = b0.n
    word = validate_word(word, n)
    try:
        p = _walk(b0, word, walker)
        failures = []
        for ell in range(1, n + 1):
            c_r, g_r = step_right(p.c, p.g, p.b_t, ell)
            c_u = mutate_c_unconditional(p.b_t, p.c, ell)
            c_p, g_p = step_general(p.c, p.g, b0, p.b_t, ell, 1)
            c_m, g_m = step_general(p.c, p.g, b0, p.b_t, ell, -1)
            for name, got, want in (
                ("unconditional C", c_u, c_r),
                ("general C, eps=+1", c_p, c_r),
                ("general C, eps=-1", c_m, c_r),
                ("general G, eps=+1", g_p, g_r),
                ("general G, eps=-1", g_m, g_r),
            ):
                if got != want:
                    failures.append({"ell": ell, **_mismatch(name, got, want)})
    except MixedSigns as exc:
        return _violated(check, b0, word, exc.with_word(word) if exc.word is None else exc, "engine")
    return _finish(check, b0, word, failures)


# checks taking (b0, word) and checks taking (b0, k, word)
WORD_CHECKS: dict[str, Callable[..., Verdict]] = {
    "theorem": verify_theorem,
    "auxiliary": verify_auxiliary,
    "sign-coherence": verify_sign_coherence,
    "recurrences": verify_recurrences,
    "tropical": verify_tropical,
    "separation": verify_separation,
}
DIRECTION_CHECKS: dict[str, Callable[..., Verdict]] = {
    "conjecture41": verify_conjecture41,
    "step-left": verify_step_left,
}
ALL_CHECKS = tuple(WORD_CHECKS) + tuple(DIRECTION_CHECKS)


def parse_checks(text: str | None) -> tuple[str, ...]:
    if text is None or text.strip() in ("", "all"):
        return ALL_CHECKS
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    unknown = [t for t in names if t not in ALL_CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {list(ALL_CHECKS)}")
    return names


@dataclass
class Report:
    """Per-check tallies plus every non-pass verdict; merging is commutative."""

    tallies: dict[str, Counter] = field(default_factory=dict)
    problems: list[Verdict] = field(default_factory=list)

    def add(self, v: Verdict) -> None:
        self.tallies.setdefault(v.check, Counter())[v.status] += 1
        if not v.passed:
            self.problems.append(v)

    def merge(self, other: "Report") -> None:
        for name, counts in other.tallies.items():
            self.tallies.setdefault(name, Counter()).update(counts)
        self.problems.extend(other.problems)

    @property
    def status(self) -> str:
        return worst(self.problems)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "tallies": {
                name: {s: self.tallies[name].get(s, 0) for s in STATUSES}
                for name in sorted(self.tallies)
            },
            "problems": [v.to_json() for v in self.problems],
        }


def run_checks(
    b0: ExchangeMatrix,
    words: Iterable[Sequence[int]],
    checks: Sequence[str] = ALL_CHECKS,
    walker: Walker | None = None,
) -> Report:
    """Run the named checks at every word (direction checks for every k)."""
    report = Report()
    if walker is None:
        walker = Walker(b0, track_f="conjecture41" in checks or "separation" in checks)
    for word in words:
        for name in checks:
            if name in WORD_CHECKS:
                report.add(WORD_CHECKS[name](b0, word, walker=walker))
            else:
                for k in range(1, b0.n + 1):
                    report.add(DIRECTION_CHECKS[name](b0, k, word, walker=walker))
    return report
