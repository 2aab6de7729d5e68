"""Sparse integer polynomials in ``u_1..u_n`` and the F-polynomial recurrence."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotDivisible
from .matrix import ExchangeMatrix, IntMat, _check_index

Exponent = tuple[int, ...]


def _grlex_key(e: Exponent) -> tuple[int, Exponent]:
    return (sum(e), e)


def _heap_key(e: Exponent) -> tuple[int, Exponent]:
    return (-sum(e), tuple(-x for x in e))


def _heap_exp(key: tuple[int, Exponent]) -> Exponent:
    return tuple(-x for x in key[1])


class SparsePoly:
    """Polynomial stored as ``{exponent vector: nonzero int coefficient}``.

    Instances are immutable and canonical: zero coefficients are never stored,
    so equal polynomials compare and hash equal.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            acc[exp] = acc.get(exp, 0) + int(coeff)
        self.nvars = nvars
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, int]) -> "SparsePoly":
        p = object.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, nvars: int, c: int = 1) -> "SparsePoly":
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "SparsePoly":
        return cls.constant(nvars, 1)

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls._raw(nvars, {})

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff: int = 1) -> "SparsePoly":
        return cls(len(exp), {tuple(exp): coeff})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "SparsePoly":
        """The variable ``u_i`` (1-based)."""
        k = _check_index(i, nvars, "variable")
        return cls._raw(nvars, {tuple(int(p == k) for p in range(nvars)): 1})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exp: Sequence[int]) -> int:
        return self._terms.get(tuple(exp), 0)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        """Terms in graded lexicographic order, largest first."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=_grlex_key)
        return e, self._terms[e]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self == SparsePoly.constant(self.nvars, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return SparsePoly.constant(self.nvars, other)
        raise TypeError(f"cannot combine SparsePoly with {type(other).__name__}")

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return SparsePoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("power must be a nonnegative integer")
        result = SparsePoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def divmod(self, q: "SparsePoly") -> tuple["SparsePoly", "SparsePoly"]:
        """Multivariate division by ``q`` using the grlex leading term."""
        q = self._coerce(q)
        if q.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lq_exp, lq_coeff = q.leading_term()
        q_terms = list(q._terms.items())
        quot: dict[Exponent, int] = {}
        rem: dict[Exponent, int] = {}
        work = dict(self._terms)
        # max-heap on grlex via negated keys; stale entries are skipped on pop
        heap = [_heap_key(e) for e in work]
        heapq.heapify(heap)
        while heap:
            e = _heap_exp(heapq.heappop(heap))
            c = work.pop(e, 0)
            if not c:
                continue
            while heap and _heap_exp(heap[0]) == e:
                heapq.heappop(heap)
            shift = tuple(a - b for a, b in zip(e, lq_exp))
            if min(shift) >= 0 and c % lq_coeff == 0:
                f = c // lq_coeff
                quot[shift] = f
                for qe, qc in q_terms:
                    te = tuple(a + b for a, b in zip(qe, shift))
                    if te == e:
                        continue
                    v = work.get(te, 0) - f * qc
                    if v:
                        if te not in work:
                            heapq.heappush(heap, _heap_key(te))
                        work[te] = v
                    else:
                        work.pop(te, None)
            else:
                rem[e] = c
        return SparsePoly._raw(self.nvars, quot), SparsePoly._raw(self.nvars, rem)

    def exact_div(self, q: "SparsePoly") -> "SparsePoly":
        quot, rem = self.divmod(q)
        if not rem.is_zero():
            raise NotDivisible(f"{self} is not divisible by {q}")
        return quot

    def __floordiv__(self, q) -> "SparsePoly":
        return self.exact_div(q)

    def __call__(self, *values: int) -> int:
        """Evaluate at integer (or any ring) values."""
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        total = 0
        for e, c in self._terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def evaluate_in(self, semifield, args: Sequence):
        """Evaluate a polynomial with positive coefficients in a semifield.

        ``semifield`` supplies ``one()``, ``mul``, ``add``, ``inv`` and
        ``power``; a coefficient ``c`` means the ``c``-fold semifield sum.
        """
        if len(args) != self.nvars:
            raise ValueError(f"expected {self.nvars} arguments, got {len(args)}")
        if not self._terms:
            raise ValueError("the zero polynomial has no value in a semifield")
        if any(c < 0 for c in self._terms.values()):
            raise ValueError("only polynomials with positive coefficients evaluate in a semifield")
        total = None
        for e, c in self.sorted_terms():
            term = semifield.one()
            for a, k in zip(args, e):
                if k:
                    term = semifield.mul(term, semifield.power(a, k))
            term = _repeat_add(semifield, term, c)
            total = term if total is None else semifield.add(total, term)
        return total

    def __repr__(self) -> str:
        return f"SparsePoly({self.nvars}, {self.sorted_terms()!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"u{i + 1}" if k == 1 else f"u{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> list[dict]:
        return [{"coeff": str(c), "exp": list(e)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, obj: list[dict], nvars: int | None = None) -> "SparsePoly":
        if nvars is None:
            if not obj:
                raise ValueError("cannot infer the variable count of an empty polynomial")
            nvars = len(obj[0]["exp"])
        return cls(nvars, [(t["exp"], int(t["coeff"])) for t in obj])


def _repeat_add(semifield, x, times: int):
    """``times``-fold semifield sum of ``x`` by doubling."""
    result = None
    while times:
        if times & 1:
            result = x if result is None else semifield.add(result, x)
        times >>= 1
        if times:
            x = semifield.add(x, x)
    return result


def _mono(exp: Sequence[int]) -> SparsePoly:
    return SparsePoly._raw(len(exp), {tuple(exp): 1})


def f_step(
    f: Sequence[SparsePoly], c: IntMat, b_t: ExchangeMatrix, ell: int
) -> tuple[SparsePoly, ...]:
    """Mutate the F-polynomials in direction ``ell`` (1-based).

    ``c`` and ``b_t`` are the C-matrix and exchange matrix at the current
    vertex, before mutation.  Only ``F_ell`` changes; the numerator must be
    exactly divisible by the old ``F_ell``.
    """
    n = len(f)
    l = _check_index(ell, n, "direction")
    col_c = c.column(l)
    pos = _mono([x if x > 0 else 0 for x in col_c])
    neg = _mono([-x if x < 0 else 0 for x in col_c])
    for i in range(n):
        b = b_t[i, l]
        if b > 0:
            pos = pos * f[i] ** b
        elif b < 0:
            neg = neg * f[i] ** (-b)
    new = (pos + neg).exact_div(f[l])
    return tuple(new if i == l else f[i] for i in range(n))


@dataclass(frozen=True)
class FAnalysis:
    constant_term_one: bool
    unique_max_monomial: bool


def analyze_f(p: SparsePoly) -> FAnalysis:
    """Constant term 1, and a coefficient-1 monomial dividing-dominating all others."""
    if p.is_zero():
        raise ValueError("analyze_f needs a nonzero polynomial")
    const_one = p.coefficient((0,) * p.nvars) == 1
    exps = list(p.terms)
    unique_max = False
    for top in exps:
        if p.coefficient(top) != 1:
            continue
        if all(all(a >= b for a, b in zip(top, e)) for e in exps):
            unique_max = True
            break
    return FAnalysis(const_one, unique_max)


def has_positive_coefficients(p: SparsePoly) -> bool:
    return all(c > 0 for _, c in p.items())


def divisible_by_variable(p: SparsePoly) -> int | None:
    """Return a 1-based ``i`` such that ``u_i`` divides ``p``, or ``None``."""
    for i in range(p.nvars):
        if all(e[i] > 0 for e, _ in p.items()):
            return i + 1
    return None
