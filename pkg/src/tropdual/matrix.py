"""Exact integer matrices and the shaping operators used by the mutation rules.

Entries are Python ints, so nothing overflows.  Container access ``m[i, j]`` is
0-based like any Python sequence; direction arguments (``k`` in :func:`select`,
:func:`jay`, and everywhere else in the package) are 1-based labels, matching
how directions are written in mutation words.
"""

from __future__ import annotations

import math
import operator
from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotSkewSymmetrizable, NotUnimodular


class IntMat:
    """Immutable dense matrix of arbitrary-precision integers."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]]):
        data = tuple(tuple(_as_int(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise ValueError("ragged rows")
        self._rows = data
        self._hash = None

    @classmethod
    def _trusted(cls, data: tuple[tuple[int, ...], ...]) -> "IntMat":
        m = object.__new__(cls)
        m._rows = data
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls._trusted(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "IntMat":
        cols = rows if cols is None else cols
        return cls._trusted(tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntMat":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntMat":
        return cls(zip(*cols))

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self._rows))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMat):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        return f"IntMat({self.tolist()!r})"

    @property
    def T(self) -> "IntMat":
        return IntMat._trusted(tuple(zip(*self._rows)))

    def __neg__(self) -> "IntMat":
        return IntMat._trusted(tuple(tuple(-x for x in r) for r in self._rows))

    def _check_same_shape(self, other: "IntMat") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "IntMat") -> "IntMat":
        if not isinstance(other, IntMat):
            return NotImplemented
        self._check_same_shape(other)
        return IntMat._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "IntMat") -> "IntMat":
        if not isinstance(other, IntMat):
            return NotImplemented
        self._check_same_shape(other)
        return IntMat._trusted(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        )

    def __mul__(self, scalar: int) -> "IntMat":
        if not isinstance(scalar, int):
            return NotImplemented
        return IntMat._trusted(tuple(tuple(scalar * x for x in r) for r in self._rows))

    __rmul__ = __mul__

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if not isinstance(other, IntMat):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other._rows))
        return IntMat._trusted(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self._rows)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def to_json(self) -> dict:
        return {"rows": self.nrows, "cols": self.ncols, "entries": self.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "IntMat":
        try:
            entries = obj["entries"]
        except (TypeError, KeyError):
            raise ValueError("matrix JSON needs an 'entries' array") from None
        m = cls(entries)
        if "rows" in obj and obj["rows"] != m.nrows:
            raise ValueError(f"'rows' is {obj['rows']} but entries have {m.nrows} rows")
        if "cols" in obj and obj["cols"] != m.ncols:
            raise ValueError(f"'cols' is {obj['cols']} but entries have {m.ncols} columns")
        return m


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError(f"matrix entries must be integers, got {x!r}")
    try:
        return operator.index(x)
    except TypeError:
        raise TypeError(f"matrix entries must be integers, got {x!r}") from None


def as_intmat(m) -> IntMat:
    return m if isinstance(m, IntMat) else IntMat(m)


def _check_index(k: int, size: int, what: str = "index") -> int:
    if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= size:
        raise IndexError(f"{what} {k!r} out of range 1..{size}")
    return k - 1


def truncate_positive(m: IntMat) -> IntMat:
    """Entrywise ``max(x, 0)``."""
    return IntMat._trusted(tuple(tuple(x if x > 0 else 0 for x in r) for r in m.rows()))


def select(m: IntMat, axis: str, k: int) -> IntMat:
    """Zero every entry outside row ``k`` (axis ``"row"``) or column ``k`` (``"column"``)."""
    if axis == "row":
        i = _check_index(k, m.nrows, "row")
        return IntMat._trusted(
            tuple(r if p == i else (0,) * m.ncols for p, r in enumerate(m.rows()))
        )
    if axis == "column":
        j = _check_index(k, m.ncols, "column")
        return IntMat._trusted(
            tuple(tuple(x if q == j else 0 for q, x in enumerate(r)) for r in m.rows())
        )
    raise ValueError(f"axis must be 'row' or 'column', not {axis!r}")


def jay(n: int, k: int) -> IntMat:
    """Identity of size ``n`` with the ``(k, k)`` entry replaced by -1."""
    i = _check_index(k, n)
    return IntMat._trusted(
        tuple(tuple((-1 if p == i else 1) if p == q else 0 for q in range(n)) for p in range(n))
    )


def determinant(m: IntMat) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    a = m.tolist()
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _minor(rows: tuple[tuple[int, ...], ...], i: int, j: int) -> IntMat:
    return IntMat._trusted(
        tuple(r[:j] + r[j + 1 :] for p, r in enumerate(rows) if p != i)
    )


def int_inverse(m: IntMat) -> IntMat:
    """Inverse of a unimodular matrix, computed as ``det * adj(m)``.

    Raises :class:`NotUnimodular` unless the determinant is +1 or -1.
    """
    if not m.is_square:
        raise ValueError(f"cannot invert a non-square {m.shape} matrix")
    det = determinant(m)
    if det not in (1, -1):
        raise NotUnimodular(f"determinant is {det}, not +1 or -1", matrix=m, det=det)
    n = m.nrows
    if n == 1:
        return IntMat._trusted(((det,),))
    rows = m.rows()
    cof = [
        [(-1) ** (i + j) * determinant(_minor(rows, i, j)) for j in range(n)]
        for i in range(n)
    ]
    # adjugate is the transposed cofactor matrix; 1/det == det here
    return IntMat._trusted(tuple(tuple(det * cof[j][i] for j in range(n)) for i in range(n)))


def find_skew_symmetrizer(b: IntMat) -> tuple[int, ...]:
    """Minimal positive ``d`` with ``d_j * b_ji == -d_i * b_ij`` for all i, j.

    Ratios are propagated along the nonzero pattern of ``b``; each connected
    component is scaled so its entries are coprime integers, and isolated
    indices get 1.
    """
    if not b.is_square:
        raise NotSkewSymmetrizable(f"matrix is {b.nrows}x{b.ncols}, not square")
    n = b.nrows
    for i in range(n):
        if b[i, i] != 0:
            raise NotSkewSymmetrizable(f"diagonal entry ({i + 1},{i + 1}) is {b[i, i]}, not 0")
        for j in range(i + 1, n):
            bij, bji = b[i, j], b[j, i]
            if (bij == 0) != (bji == 0):
                raise NotSkewSymmetrizable(
                    f"entries ({i + 1},{j + 1})={bij} and ({j + 1},{i + 1})={bji}: "
                    "exactly one is zero"
                )
            if bij * bji > 0:
                raise NotSkewSymmetrizable(
                    f"entries ({i + 1},{j + 1})={bij} and ({j + 1},{i + 1})={bji} have the same sign"
                )

    ratio: list[Fraction | None] = [None] * n
    d = [0] * n
    for root in range(n):
        if ratio[root] is not None:
            continue
        ratio[root] = Fraction(1)
        component = [root]
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j == i or b[i, j] == 0:
                    continue
                want = ratio[i] * Fraction(-b[i, j], b[j, i])
                if ratio[j] is None:
                    ratio[j] = want
                    component.append(j)
                    queue.append(j)
                elif ratio[j] != want:
                    raise NotSkewSymmetrizable(
                        f"inconsistent ratios around a cycle through indices {i + 1} and {j + 1}"
                    )
        scale = math.lcm(*(ratio[i].denominator for i in component))
        ints = [ratio[i].numerator * (scale // ratio[i].denominator) for i in component]
        g = math.gcd(*ints)
        for i, v in zip(component, ints):
            d[i] = v // g
    return tuple(d)


class ExchangeMatrix:
    """A skew-symmetrizable square matrix together with its symmetrizer ``d``.

    When ``d`` is omitted the canonical (componentwise coprime) symmetrizer is
    computed; an explicit ``d`` is only checked.
    """

    __slots__ = ("b", "d")

    def __init__(self, b, d: Sequence[int] | None = None):
        b = as_intmat(b)
        if d is None:
            d = find_skew_symmetrizer(b)
        else:
            d = tuple(_as_int(x) for x in d)
            _check_symmetrizer(b, d)
        self.b = b
        self.d = d

    @classmethod
    def _trusted(cls, b: IntMat, d: tuple[int, ...]) -> "ExchangeMatrix":
        e = object.__new__(cls)
        e.b = b
        e.d = d
        return e

    @property
    def n(self) -> int:
        return self.b.nrows

    def __getitem__(self, idx: tuple[int, int]) -> int:
        return self.b[idx]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExchangeMatrix):
            return NotImplemented
        return self.b == other.b and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.b, self.d))

    def __repr__(self) -> str:
        return f"ExchangeMatrix({self.b.tolist()!r}, d={list(self.d)!r})"

    @property
    def D(self) -> IntMat:
        return IntMat.diagonal(self.d)

    def is_skew_symmetric(self) -> bool:
        return self.b == -self.b.T

    def __neg__(self) -> "ExchangeMatrix":
        return ExchangeMatrix._trusted(-self.b, self.d)

    def to_json(self) -> dict:
        obj = self.b.to_json()
        obj["d"] = list(self.d)
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "ExchangeMatrix":
        return cls(IntMat.from_json(obj), obj.get("d"))


def _check_symmetrizer(b: IntMat, d: tuple[int, ...]) -> None:
    n = b.nrows
    if not b.is_square:
        raise NotSkewSymmetrizable(f"matrix is {b.nrows}x{b.ncols}, not square")
    if len(d) != n:
        raise NotSkewSymmetrizable(f"symmetrizer has {len(d)} entries, matrix has size {n}")
    if any(x <= 0 for x in d):
        raise NotSkewSymmetrizable(f"symmetrizer entries must be positive: {list(d)}")
    for i in range(n):
        for j in range(n):
            if d[j] * b[j, i] != -d[i] * b[i, j]:
                raise NotSkewSymmetrizable(
                    f"d={list(d)} does not skew-symmetrize entry ({i + 1},{j + 1})"
                )
