import re

import pytest
from hypothesis import strategies as st

from tropdual.matrix import ExchangeMatrix, IntMat

A2 = [[0, 1], [-1, 0]]
B2 = [[0, 2], [-1, 0]]
G2 = [[0, 3], [-1, 0]]
A3 = [[0, 1, 0], [-1, 0, 1], [0, -1, 0]]


@pytest.fixture
def a2():
    return ExchangeMatrix(A2)


@pytest.fixture
def b2():
    return ExchangeMatrix(B2)


@pytest.fixture(params=[A2, B2, G2, A3], ids=["A2", "B2", "G2", "A3"])
def small_b(request):
    return ExchangeMatrix(request.param)


@st.composite
def exchange_matrices(draw, max_rank=4, bound=3, min_rank=1):
    """Random skew-symmetrizable matrices built from a random symmetrizer."""
    n = draw(st.integers(min_rank, max_rank))
    d = draw(st.lists(st.sampled_from([1, 2, 3]), min_size=n, max_size=n))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            # d_i b_ij = -d_j b_ji = s, pick s a common multiple so both are integers
            s = draw(st.integers(-bound, bound)) * d[i] * d[j]
            rows[i][j] = s // d[i]
            rows[j][i] = -s // d[j]
    b = IntMat(rows)
    return ExchangeMatrix(b)


@st.composite
def reduced_words(draw, n, max_len=6):
    length = draw(st.integers(0, max_len if n > 1 else min(max_len, 1)))
    word = []
    for _ in range(length):
        choices = [k for k in range(1, n + 1) if not word or k != word[-1]]
        word.append(draw(st.sampled_from(choices)))
    return tuple(word)


@st.composite
def matrix_and_word(draw, max_rank=4, bound=3, max_len=6):
    b = draw(exchange_matrices(max_rank=max_rank, bound=bound))
    return b, draw(reduced_words(b.n, max_len))


@st.composite
def int_matrices(draw, max_n=4, bound=5, square=True):
    n = draw(st.integers(1, max_n))
    m = n if square else draw(st.integers(1, max_n))
    entries = draw(
        st.lists(st.lists(st.integers(-bound, bound), min_size=m, max_size=m), min_size=n, max_size=n)
    )
    return IntMat(entries)


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, in criterion order."""
    found = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_criterion_(\d+)", getattr(rep, "nodeid", ""))
            if not m or (outcome != "error" and rep.when != "call"):
                continue
            props = dict(rep.user_properties)
            secs = rep.duration + props.get("setup_seconds", 0.0)
            found[int(m.group(1))] = (outcome == "passed", props.get("label", rep.nodeid), secs)
    if not found:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(found):
        ok, label, secs = found[number]
        terminalreporter.write_line(f"criterion {number} {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {label}")
