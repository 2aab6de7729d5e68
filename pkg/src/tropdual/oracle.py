"""Ground truth computed from the defining seed dynamics, not from matrix recurrences.

Two semifields are supported.  In the tropical one an element is an integer
exponent vector of a Laurent monomial in ``y_1..y_n`` and addition is the
componentwise minimum.  In the rational one elements are reduced fractions in
``x_1..x_n, y_1..y_n`` (principal coefficients) and addition is ordinary.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from sympy.polys.domains import ZZ
from sympy.polys.fields import FracElement, field

from .errors import InvalidWord
from .matrix import ExchangeMatrix, IntMat, _check_index
from .pattern import PatternPoint, mutate_matrix, validate_word

TropMonomial = tuple[int, ...]
RatFn = FracElement


class TropicalSemifield:
    def __init__(self, n: int):
        self.n = n

    def one(self) -> TropMonomial:
        return (0,) * self.n

    def unit(self, i: int) -> TropMonomial:
        return tuple(int(p == i) for p in range(self.n))

    def mul(self, a: TropMonomial, b: TropMonomial) -> TropMonomial:
        return tuple(x + y for x, y in zip(a, b))

    def add(self, a: TropMonomial, b: TropMonomial) -> TropMonomial:
        return tuple(min(x, y) for x, y in zip(a, b))

    def inv(self, a: TropMonomial) -> TropMonomial:
        return tuple(-x for x in a)

    def power(self, a: TropMonomial, k: int) -> TropMonomial:
        return tuple(k * x for x in a)


@lru_cache(maxsize=None)
def principal_field(n: int):
    """Rational function field in ``x_1..x_n, y_1..y_n`` and its generators."""
    names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    K, *gens = field(names, ZZ)
    return K, tuple(gens[:n]), tuple(gens[n:])


class RationalSemifield:
    """Sympy fractions are reduced by a gcd after every operation."""

    def __init__(self, n: int):
        self.n = n
        self.field, self.x, self.y = principal_field(n)

    def one(self) -> RatFn:
        return self.field.one

    def mul(self, a: RatFn, b: RatFn) -> RatFn:
        return a * b

    def add(self, a: RatFn, b: RatFn) -> RatFn:
        return a + b

    def inv(self, a: RatFn) -> RatFn:
        return 1 / a

    def power(self, a: RatFn, k: int) -> RatFn:
        return a**k


def y_mutate(ys: Sequence, b: ExchangeMatrix, k: int, sf) -> tuple:
    """Coefficient tuple after mutation in direction ``k`` over the semifield ``sf``."""
    p = _check_index(k, b.n, "direction")
    yk = ys[p]
    yk_plus_one = sf.add(yk, sf.one())
    out = []
    for j, yj in enumerate(ys):
        if j == p:
            out.append(sf.inv(yk))
            continue
        bkj = b[p, j]
        v = yj
        if bkj > 0:
            v = sf.mul(v, sf.power(yk, bkj))
        if bkj:
            v = sf.mul(v, sf.power(yk_plus_one, -bkj))
        out.append(v)
    return tuple(out)


def tropical_y_walk(b0: ExchangeMatrix, word: Sequence[int]) -> IntMat:
    """Exponent matrix of the tropical coefficients at ``word``, one column per y_j."""
    n = b0.n
    word = validate_word(word, n)
    sf = TropicalSemifield(n)
    ys = tuple(sf.unit(i) for i in range(n))
    b = b0
    for k in word:
        ys = y_mutate(ys, b, k, sf)
        b = mutate_matrix(b, k)
    return IntMat.from_columns(ys)


@dataclass(frozen=True)
class SymbolicSeed:
    x: tuple[RatFn, ...]
    y: tuple[RatFn, ...]
    b_t: ExchangeMatrix
    word: tuple[int, ...]


def symbolic_walk(b0: ExchangeMatrix, word: Sequence[int]) -> SymbolicSeed:
    """Full seed with principal coefficients, by the exchange relation.

    Meant for small ranks and short words; sizes grow quickly.
    """
    n = b0.n
    word = validate_word(word, n)
    sf = RationalSemifield(n)
    one = sf.one()
    xs, ys, b = tuple(sf.x), tuple(sf.y), b0
    for k in word:
        p = k - 1
        pos, neg = ys[p], one
        for i in range(n):
            bik = b[i, p]
            if bik > 0:
                pos = pos * xs[i] ** bik
            elif bik < 0:
                neg = neg * xs[i] ** (-bik)
        new_x = (pos + neg) / ((ys[p] + one) * xs[p])
        ys = y_mutate(ys, b, k, sf)
        xs = tuple(new_x if i == p else xs[i] for i in range(n))
        b = mutate_matrix(b, k)
    return SymbolicSeed(xs, ys, b, word)


@dataclass(frozen=True)
class SeparationResult:
    kind: str  # "x" or "y"
    j: int
    ok: bool
    expected: str
    got: str


def _compare(kind: str, j: int, seed_value: RatFn, formula: RatFn) -> SeparationResult:
    if seed_value == formula:
        return SeparationResult(kind, j, True, "", "")
    return SeparationResult(kind, j, False, str(formula.as_expr()), str(seed_value.as_expr()))


def separation_check(
    point: PatternPoint, sym: SymbolicSeed, b0: ExchangeMatrix
) -> list[SeparationResult]:
    """Compare both separation formulas with the symbolic seed, for every j.

    ``b0`` is the root matrix (used for the hatted variables).
    """
    if point.f is None:
        raise ValueError("separation_check needs a walk with F-polynomials")
    if point.word != sym.word:
        raise InvalidWord(f"point is at {list(point.word)}, seed at {list(sym.word)}")
    n = point.n
    sf = RationalSemifield(n)
    xs, ys = sf.x, sf.y
    y_hat = []
    for j in range(n):
        v = ys[j]
        for i in range(n):
            if b0[i, j]:
                v = v * xs[i] ** b0[i, j]
        y_hat.append(v)
    f_at_y = [fj.evaluate_in(sf, ys) for fj in point.f]
    results = []
    for j in range(n):
        rhs = sf.one()
        for i in range(n):
            if point.c[i, j]:
                rhs = rhs * ys[i] ** point.c[i, j]
            b = point.b_t[i, j]
            if b:
                rhs = rhs * f_at_y[i] ** b
        results.append(_compare("y", j + 1, sym.y[j], rhs))
    for j in range(n):
        rhs = point.f[j].evaluate_in(sf, y_hat) / f_at_y[j]
        for i in range(n):
            if point.g[i, j]:
                rhs = rhs * xs[i] ** point.g[i, j]
        results.append(_compare("x", j + 1, sym.x[j], rhs))
    return results
