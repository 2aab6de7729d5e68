"""Mutation dynamics of exchange matrices, C-matrices and G-matrices.

Vertices of the n-regular tree are addressed by reduced words of 1-based
directions read from the root.  :func:`walk` folds the sign-coherent right-end
recurrence over a word; the unconditional and general-sign forms are kept as
separate functions so they can be checked against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import InvalidWord, MixedSigns, NotUnimodular
from .fpoly import SparsePoly, f_step
from .matrix import (
    ExchangeMatrix,
    IntMat,
    _check_index,
    determinant,
    int_inverse,
    jay,
    select,
    truncate_positive,
)

Word = tuple[int, ...]


def validate_word(word: Sequence[int], n: int) -> Word:
    """Return ``word`` as a tuple after checking ranges and adjacent repeats."""
    out = []
    for pos, k in enumerate(word):
        if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= n:
            raise InvalidWord(f"direction {k!r} at position {pos + 1} is outside 1..{n}")
        if out and out[-1] == k:
            raise InvalidWord(f"direction {k} repeats at positions {pos} and {pos + 1}")
        out.append(k)
    return tuple(out)


def parse_word(text: str, n: int) -> Word:
    """Parse a comma-separated list of 1-based directions."""
    text = text.strip()
    if not text:
        return ()
    try:
        raw = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise InvalidWord(f"cannot parse word {text!r}") from None
    return validate_word(raw, n)


def words_up_to(n: int, depth: int) -> Iterator[Word]:
    """All reduced words of length <= depth, in lexicographic order."""

    def rec(prefix: Word) -> Iterator[Word]:
        yield prefix
        if len(prefix) == depth:
            return
        for k in range(1, n + 1):
            if not prefix or prefix[-1] != k:
                yield from rec(prefix + (k,))

    return rec(())


def count_words(n: int, depth: int) -> int:
    if n == 1:
        return 1 + (depth >= 1)
    return 1 + sum(n * (n - 1) ** (d - 1) for d in range(1, depth + 1))


def reduce_word(word: Sequence[int]) -> Word:
    """Cancel adjacent repeated directions (each mutation is an involution)."""
    out: list[int] = []
    for k in word:
        if out and out[-1] == k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


def reroot_word(word: Sequence[int], k: int) -> Word:
    """Address of the vertex ``word`` as seen from the root's neighbour in direction k."""
    return reduce_word((k, *word))


def mutate_matrix(b: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation in direction ``k``; the symmetrizer is carried along."""
    n = b.n
    p = _check_index(k, n, "direction")
    rows = b.b.rows()
    col_k = [r[p] for r in rows]
    row_k = rows[p]
    out = []
    for i in range(n):
        bik = col_k[i]
        r = rows[i]
        if i == p:
            out.append(tuple(-x for x in r))
            continue
        new = []
        for j in range(n):
            if j == p:
                new.append(-r[j])
                continue
            bkj = row_k[j]
            v = r[j]
            if bik > 0 and bkj > 0:
                v += bik * bkj
            elif bik < 0 and bkj < 0:
                v -= bik * bkj
            new.append(v)
        out.append(tuple(new))
    return ExchangeMatrix._trusted(IntMat._trusted(tuple(out)), b.d)


def mutate_c_unconditional(b_t: ExchangeMatrix, c: IntMat, ell: int) -> IntMat:
    """Bottom block of the extended-matrix mutation; needs no sign assumption."""
    n = b_t.n
    l = _check_index(ell, n, "direction")
    row_b = b_t.b.row(l)
    out = []
    for r in c.rows():
        cil = r[l]
        new = []
        for j, cij in enumerate(r):
            if j == l:
                new.append(-cij)
                continue
            b = row_b[j]
            if cil > 0 and b > 0:
                cij += cil * b
            elif cil < 0 and b < 0:
                cij -= cil * b
            new.append(cij)
        out.append(tuple(new))
    return IntMat._trusted(tuple(out))


@dataclass(frozen=True)
class ColumnSign:
    value: int

    def __post_init__(self):
        if self.value not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, not {self.value}")

    def __int__(self) -> int:
        return self.value

    def __neg__(self) -> "ColumnSign":
        return ColumnSign(-self.value)


PLUS = ColumnSign(1)
MINUS = ColumnSign(-1)


def sign_of_column(c: IntMat, j: int) -> ColumnSign:
    """Sign of a sign-coherent column ``j`` (1-based).

    Raises :class:`MixedSigns` when the column has entries of both signs.  A
    zero column cannot occur for a unimodular matrix and is rejected.
    """
    col = c.column(_check_index(j, c.ncols, "column"))
    has_pos = any(x > 0 for x in col)
    has_neg = any(x < 0 for x in col)
    if has_pos and has_neg:
        raise MixedSigns(c, j)
    if has_pos:
        return PLUS
    if has_neg:
        return MINUS
    raise ValueError(f"column {j} is zero; its sign is undefined")


def _sign(eps) -> int:
    v = int(eps)
    if v not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, not {eps!r}")
    return v


def _right_factors(b_t: ExchangeMatrix, ell: int, eps: int) -> tuple[IntMat, IntMat]:
    n = b_t.n
    j = jay(n, ell)
    c_fac = j + select(truncate_positive(b_t.b * eps), "row", ell)
    g_fac = j + select(truncate_positive(b_t.b * -eps), "column", ell)
    return c_fac, g_fac


def step_right(c: IntMat, g: IntMat, b_t: ExchangeMatrix, ell: int) -> tuple[IntMat, IntMat]:
    """Sign-coherent recurrence for (C, G) when the far end moves in direction ``ell``."""
    eps = sign_of_column(c, ell).value
    c_fac, g_fac = _right_factors(b_t, ell, eps)
    return c @ c_fac, g @ g_fac


def step_general(
    c: IntMat,
    g: IntMat,
    b0: ExchangeMatrix,
    b_t: ExchangeMatrix,
    ell: int,
    eps,
) -> tuple[IntMat, IntMat]:
    """The recurrence valid for either choice of sign, with its correction terms."""
    e = _sign(eps)
    c_fac, g_fac = _right_factors(b_t, ell, e)
    corr = select(truncate_positive(c * -e), "column", ell)
    return c @ c_fac + corr @ b_t.b, g @ g_fac - b0.b @ corr


def step_left(b0: ExchangeMatrix, k: int, c_t: IntMat) -> IntMat:
    """C-matrix of the same vertex after moving the root one step in direction ``k``.

    The sign is read off column ``k`` of ``c_t``'s inverse.
    """
    inv = int_inverse(c_t)
    eps = sign_of_column(inv, k).value
    n = b0.n
    return (jay(n, k) + select(truncate_positive(b0.b * -eps), "row", k)) @ c_t


@dataclass(frozen=True)
class PatternPoint:
    """Tropical data at one vertex: B_t, C_t, G_t and the F-polynomials.

    ``f`` is ``None`` when the walk was run without F-polynomials.
    """

    b_t: ExchangeMatrix
    c: IntMat
    g: IntMat
    f: tuple[SparsePoly, ...] | None
    word: Word = ()

    @property
    def n(self) -> int:
        return self.b_t.n

    def c_vector(self, j: int) -> tuple[int, ...]:
        return self.c.column(j - 1)

    def g_vector(self, j: int) -> tuple[int, ...]:
        return self.g.column(j - 1)


def initial_point(b0: ExchangeMatrix, track_f: bool = True) -> PatternPoint:
    n = b0.n
    ident = IntMat.identity(n)
    f = tuple(SparsePoly.one(n) for _ in range(n)) if track_f else None
    return PatternPoint(b0, ident, ident, f, ())


def _assert_unimodular(m: IntMat, name: str, word: Word) -> None:
    det = determinant(m)
    if det not in (1, -1):
        raise NotUnimodular(
            f"det({name}) = {det} at word {list(word)}", matrix=m, det=det
        )


def advance(point: PatternPoint, ell: int, b0: ExchangeMatrix) -> PatternPoint:
    """One step of the walk in direction ``ell``."""
    word = point.word + (ell,)
    try:
        c, g = step_right(point.c, point.g, point.b_t, ell)
    except MixedSigns as exc:
        raise exc.with_word(point.word) from None
    f = None
    if point.f is not None:
        f = f_step(point.f, point.c, point.b_t, ell)
    _assert_unimodular(c, "C", word)
    _assert_unimodular(g, "G", word)
    return PatternPoint(mutate_matrix(point.b_t, ell), c, g, f, word)


@dataclass
class Walker:
    """Walks from a fixed root, memoizing every visited prefix.

    Cached points are immutable and keyed by word, so sharing a walker between
    threads is safe: a racing write stores an identical value.
    """

    b0: ExchangeMatrix
    track_f: bool = True
    use_cache: bool = True
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._root = initial_point(self.b0, self.track_f)

    def point(self, word: Sequence[int]) -> PatternPoint:
        word = validate_word(word, self.b0.n)
        if not self.use_cache:
            p = self._root
            for k in word:
                p = advance(p, k, self.b0)
            return p
        # longest cached prefix, then extend
        cut = len(word)
        while cut > 0 and word[:cut] not in self._cache:
            cut -= 1
        p = self._cache[word[:cut]] if cut else self._root
        for k in word[cut:]:
            p = advance(p, k, self.b0)
            self._cache.setdefault(p.word, p)
        return p

    def clear(self) -> None:
        self._cache.clear()


def walk(
    b0: ExchangeMatrix, word: Sequence[int], track_f: bool = True, walker: Walker | None = None
) -> PatternPoint:
    """Tropical data at the vertex ``word`` of the pattern rooted at ``b0``."""
    if walker is not None:
        if walker.b0 != b0:
            raise ValueError("walker is rooted at a different matrix")
        return walker.point(word)
    p = initial_point(b0, track_f)
    for k in validate_word(word, b0.n):
        p = advance(p, k, b0)
    return p


def column_signs(c: IntMat) -> tuple[int, ...]:
    """Signs of every column, raising :class:`MixedSigns` on the first bad one."""
    return tuple(sign_of_column(c, j).value for j in range(1, c.ncols + 1))


def is_sign_coherent(vec: Sequence[int]) -> bool:
    return not (any(x > 0 for x in vec) and any(x < 0 for x in vec))


def alternating_word(n_steps: int, a: int = 1, b: int = 2) -> Word:
    return tuple(itertools.islice(itertools.cycle((a, b)), n_steps))
