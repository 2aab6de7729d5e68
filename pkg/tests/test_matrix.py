import itertools
import math
from collections import deque
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropdual.errors import NotSkewSymmetrizable, NotUnimodular
from tropdual.matrix import (
    ExchangeMatrix,
    IntMat,
    determinant,
    find_skew_symmetrizer,
    int_inverse,
    jay,
    select,
    truncate_positive,
)

from conftest import exchange_matrices, int_matrices


def leibniz_det(m: IntMat) -> int:
    n = m.nrows
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = (-1) ** inversions
        for i, p in enumerate(perm):
            term *= m[i, p]
        total += term
    return total


def fraction_inverse(m: IntMat) -> list[list[Fraction]]:
    n = m.nrows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.tolist())]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@st.composite
def unimodular(draw, max_n=4):
    """Products of elementary integer matrices and sign flips."""
    n = draw(st.integers(1, max_n))
    m = IntMat.identity(n)
    for _ in range(draw(st.integers(0, 8))):
        if n > 1 and draw(st.booleans()):
            i, j = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            e = [[int(p == q) for q in range(n)] for p in range(n)]
            e[i][j] = draw(st.integers(-3, 3))
            m = m @ IntMat(e)
        else:
            m = m @ jay(n, draw(st.integers(1, n)))
    return m


class TestTruncateSelect:
    def test_truncate_examples(self):
        assert truncate_positive(IntMat([[0, 2], [-1, 0]])) == IntMat([[0, 2], [0, 0]])
        assert truncate_positive(IntMat.zeros(3)) == IntMat.zeros(3)
        assert truncate_positive(IntMat([[-3]])) == IntMat([[0]])

    def test_select_examples(self):
        m = IntMat([[0, 2], [-1, 0]])
        assert select(m, "row", 1) == IntMat([[0, 2], [0, 0]])
        assert select(m, "column", 1) == IntMat([[0, 0], [-1, 0]])

    @pytest.mark.parametrize("axis,k", [("row", 0), ("row", 3), ("column", -1), ("column", 3)])
    def test_select_out_of_range(self, axis, k):
        with pytest.raises(IndexError):
            select(IntMat([[0, 2], [-1, 0]]), axis, k)

    def test_select_bad_axis(self):
        with pytest.raises(ValueError):
            select(IntMat([[1]]), "diagonal", 1)

    @given(int_matrices(square=False), st.data())
    def test_select_commutes_with_truncate(self, m, data):
        for axis, size in (("row", m.nrows), ("column", m.ncols)):
            k = data.draw(st.integers(1, size))
            assert select(truncate_positive(m), axis, k) == truncate_positive(select(m, axis, k))


class TestJay:
    def test_examples(self):
        assert jay(2, 1) == IntMat([[-1, 0], [0, 1]])
        assert jay(1, 1) == IntMat([[-1]])
        assert jay(3, 2) @ jay(3, 2) == IntMat.identity(3)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            jay(2, 3)

    @given(int_matrices(), st.data())
    def test_transpose_and_inverse_laws(self, m, data):
        n = m.nrows
        ell = data.draw(st.integers(1, n))
        rows = m.tolist()
        rows[ell - 1][ell - 1] = 0
        m = IntMat(rows)
        j = jay(n, ell)
        assert (j + select(m, "column", ell)).T == j + select(m.T, "row", ell)
        x = j + select(m, "row", ell)
        assert x @ x == IntMat.identity(n)
        assert int_inverse(x) == x


class TestDeterminantInverse:
    @given(int_matrices())
    def test_determinant_matches_leibniz(self, m):
        assert determinant(m) == leibniz_det(m)

    def test_inverse_examples(self):
        m = IntMat([[-1, 1], [0, 1]])
        assert int_inverse(m) == m
        assert int_inverse(IntMat.identity(3)) == IntMat.identity(3)
        with pytest.raises(NotUnimodular) as info:
            int_inverse(IntMat([[2, 0], [0, 1]]))
        assert info.value.det == 2

    def test_inverse_non_square(self):
        with pytest.raises(ValueError):
            int_inverse(IntMat([[1, 0]]))

    @given(unimodular())
    def test_inverse_is_exact(self, m):
        inv = int_inverse(m)
        n = m.nrows
        assert inv @ m == IntMat.identity(n)
        assert m @ inv == IntMat.identity(n)
        assert inv.tolist() == fraction_inverse(m)

    def test_big_entries_do_not_overflow(self):
        big = 2**80
        m = IntMat([[1, big], [0, 1]])
        assert int_inverse(m) == IntMat([[1, -big], [0, 1]])


class TestSkewSymmetrizer:
    def test_examples(self):
        assert find_skew_symmetrizer(IntMat([[0, 2], [-1, 0]])) == (1, 2)
        assert find_skew_symmetrizer(IntMat([[0, 1], [-1, 0]])) == (1, 1)
        assert find_skew_symmetrizer(IntMat([[0, 3], [-1, 0]])) == (1, 3)

    @pytest.mark.parametrize(
        "rows",
        [
            [[0, 1], [1, 0]],  # same sign
            [[1, 0], [0, 0]],  # nonzero diagonal
            [[0, 1], [0, 0]],  # zero/nonzero mismatch
            [[0, 1, 1], [-1, 0, 1], [-2, -1, 0]],  # inconsistent cycle
        ],
    )
    def test_rejects(self, rows):
        with pytest.raises(NotSkewSymmetrizable):
            find_skew_symmetrizer(IntMat(rows))

    def test_non_square(self):
        with pytest.raises(NotSkewSymmetrizable):
            find_skew_symmetrizer(IntMat([[0, 1, 2]]))

    def test_components_are_normalized_separately(self):
        # two blocks plus an isolated index
        b = IntMat([
            [0, 4, 0, 0, 0],
            [-2, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 3],
            [0, 0, 0, -1, 0],
        ])
        assert find_skew_symmetrizer(b) == (1, 2, 1, 1, 3)

    @given(exchange_matrices())
    def test_symmetrizes_and_is_minimal(self, e):
        d = find_skew_symmetrizer(e.b)
        db = IntMat.diagonal(d) @ e.b
        assert db.T == -db
        # gcd 1 on every connected component of the nonzero pattern
        n = e.n
        seen = set()
        for r in range(n):
            if r in seen:
                continue
            comp, queue = [r], deque([r])
            seen.add(r)
            while queue:
                i = queue.popleft()
                for j in range(n):
                    if e.b[i, j] and j not in seen:
                        seen.add(j)
                        comp.append(j)
                        queue.append(j)
            assert math.gcd(*(d[i] for i in comp)) == 1

    def test_exchange_matrix_explicit_d(self):
        e = ExchangeMatrix([[0, 2], [-1, 0]], d=[2, 4])
        assert e.d == (2, 4)
        with pytest.raises(NotSkewSymmetrizable):
            ExchangeMatrix([[0, 2], [-1, 0]], d=[1, 1])


class TestIntMat:
    def test_json_roundtrip(self):
        m = IntMat([[1, -2, 3], [4, 5, -6]])
        assert m.to_json() == {"rows": 2, "cols": 3, "entries": [[1, -2, 3], [4, 5, -6]]}
        assert IntMat.from_json(m.to_json()) == m

    def test_json_shape_mismatch(self):
        with pytest.raises(ValueError):
            IntMat.from_json({"rows": 3, "cols": 2, "entries": [[1, 2], [3, 4]]})

    @pytest.mark.parametrize("rows", [[], [[]], [[1, 2], [3]], [[1.5]], [[True]]])
    def test_rejects_bad_entries(self, rows):
        with pytest.raises((ValueError, TypeError)):
            IntMat(rows)

    def test_arithmetic(self):
        a = IntMat([[1, 2], [3, 4]])
        b = IntMat([[0, 1], [1, 0]])
        assert a @ b == IntMat([[2, 1], [4, 3]])
        assert a + b - b == a
        assert 2 * a == a + a
        assert a.T == IntMat([[1, 3], [2, 4]])
        assert hash(a) == hash(IntMat([[1, 2], [3, 4]]))
