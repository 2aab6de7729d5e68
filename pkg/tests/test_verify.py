import json

import pytest
from hypothesis import given, settings, strategies as st

import tropdual.pattern as pattern
from tropdual.errors import NotUnimodular
from tropdual.matrix import ExchangeMatrix, IntMat, jay
from tropdual.pattern import mutate_matrix, walk, words_up_to
from tropdual.verdict import FAIL, PASS, VIOLATED, Verdict, worst
from tropdual.verify import (
    ALL_CHECKS,
    conjugate_by_d,
    g_transform,
    parse_checks,
    run_checks,
    scalar_identity_cases,
    verify_auxiliary,
    verify_conjecture41,
    verify_inverse_column_fact,
    verify_recurrences,
    verify_scalar_identity,
    verify_separation,
    verify_sign_coherence,
    verify_step_left,
    verify_theorem,
    verify_tropical,
)

from conftest import A2, A3, B2, G2, matrix_and_word
from test_matrix import unimodular


def _drop_g_correction(c, g, b_t, ell):
    """A deliberately wrong G-recurrence: keeps only the sign flip."""
    c2, _ = _real_step_right(c, g, b_t, ell)
    return c2, g @ jay(b_t.n, ell)


_real_step_right = pattern.step_right


def _mixed_initial(b0, track_f=True):
    bad = IntMat([[1, 0], [-1, 1]])
    return pattern.PatternPoint(b0, bad, bad, None, ())


class TestTheorem:
    def test_examples(self):
        assert verify_theorem(ExchangeMatrix(A2), (1,)).passed
        assert verify_theorem(ExchangeMatrix(B2), (1,)).passed
        assert verify_theorem(ExchangeMatrix(G2), ()).passed

    def test_b2_hand_values(self):
        b = ExchangeMatrix(B2)
        minus_bt = ExchangeMatrix(-b.b.T)
        assert minus_bt.b == IntMat([[0, 1], [-2, 0]])
        c_dual = walk(minus_bt, (1,), track_f=False).c
        assert c_dual == IntMat([[-1, 1], [0, 1]])
        assert walk(b, (1,)).g.T == c_dual  # self-inverse

    @settings(max_examples=60, deadline=None)
    @given(matrix_and_word(max_len=7))
    def test_random(self, bw):
        assert verify_theorem(*bw).passed

    def test_detects_broken_g_recurrence(self, monkeypatch):
        monkeypatch.setattr(pattern, "step_right", _drop_g_correction)
        v = verify_theorem(ExchangeMatrix(B2), (1,))
        assert v.status == FAIL
        names = [f["identity"] for f in v.witness["failures"]]
        assert "G^T = (C^{-B^T})^{-1}" in names
        assert v.witness["word"] == [1]
        assert v.witness["matrix"]["entries"] == B2

    def test_violated_assumption(self, monkeypatch):
        monkeypatch.setattr(pattern, "initial_point", _mixed_initial)
        v = verify_theorem(ExchangeMatrix(A2), (2, 1))
        assert v.status == VIOLATED
        assert v.witness["route"] == "engine"
        assert v.witness["sign_violation"]["word"] == [2]


class TestAuxiliary:
    def test_examples(self):
        assert verify_auxiliary(ExchangeMatrix(B2), (1,)).passed
        for rows in (A2, B2, G2, A3):
            assert verify_auxiliary(ExchangeMatrix(rows), ()).passed

    def test_b2_hand_values(self):
        b = ExchangeMatrix(B2)
        assert b.d == (1, 2)
        p = walk(b, (1,), track_f=False)
        assert p.c == IntMat([[-1, 2], [0, 1]])
        assert b.D @ p.b_t.b == p.c.T @ b.D @ b.b @ p.c

    def test_conjugation_reduces_for_skew_symmetric(self):
        b = ExchangeMatrix(A3)
        for word in words_up_to(3, 3):
            c = walk(b, word, track_f=False).c
            assert conjugate_by_d(c, b.d) == c
            assert walk(ExchangeMatrix(-b.b.T), word, track_f=False).c == c

    def test_conjugate_by_d_non_integral(self):
        assert conjugate_by_d(IntMat([[1, 1], [0, 1]]), (1, 2)) is None

    @settings(max_examples=60, deadline=None)
    @given(matrix_and_word(max_len=7))
    def test_random(self, bw):
        assert verify_auxiliary(*bw).passed

    def test_explicit_nonminimal_d(self):
        b = ExchangeMatrix(B2, d=(3, 6))
        for word in words_up_to(2, 4):
            assert verify_auxiliary(b, word).passed

    def test_detects_broken_g_recurrence(self, monkeypatch):
        monkeypatch.setattr(pattern, "step_right", _drop_g_correction)
        v = verify_auxiliary(ExchangeMatrix(B2), (1,))
        assert v.status == FAIL
        assert "G B_t = B C" in [f["identity"] for f in v.witness["failures"]]


class TestSignCoherence:
    def test_examples(self):
        assert verify_sign_coherence(ExchangeMatrix(A2), ()).passed
        for word in words_up_to(2, 8):
            assert verify_sign_coherence(ExchangeMatrix(B2), word).passed

    @pytest.mark.parametrize("rows", [A2, A3, [[0, 2, -1], [-2, 0, 2], [1, -2, 0]]])
    def test_skew_symmetric_depth_6(self, rows):
        b = ExchangeMatrix(rows)
        for word in words_up_to(b.n, 6):
            assert verify_sign_coherence(b, word).passed

    def test_violation_reports_prefix(self, monkeypatch):
        monkeypatch.setattr(pattern, "initial_point", _mixed_initial)
        v = verify_sign_coherence(ExchangeMatrix(A2), (2, 1, 2))
        assert v.status == VIOLATED
        assert v.witness["sign_violation"]["word"] == []
        assert v.witness["sign_violation"]["matrix"]["entries"] == [[1, 0], [-1, 1]]


class TestConjecture41:
    def test_examples(self):
        b = ExchangeMatrix(A2)
        assert verify_conjecture41(b, 1, (2,)).passed
        for k in (1, 2):
            assert verify_conjecture41(b, k, ()).passed
        assert verify_conjecture41(b, 1, (1, 2)).passed

    def test_empty_word_degenerates_to_one_step(self, small_b):
        for k in range(1, small_b.n + 1):
            g1 = walk(mutate_matrix(small_b, k), (k,), track_f=False).g
            ident = IntMat.identity(small_b.n)
            predicted = IntMat.from_columns([g_transform(ident.column(j), small_b, k) for j in range(small_b.n)])
            assert predicted == g1

    @settings(max_examples=40, deadline=None)
    @given(matrix_and_word(max_rank=3, bound=1, max_len=4), st.data())
    def test_random(self, bw, data):
        b, word = bw
        k = data.draw(st.integers(1, b.n))
        assert verify_conjecture41(b, k, word).passed

    def test_detects_broken_g_recurrence(self, monkeypatch):
        monkeypatch.setattr(pattern, "step_right", _drop_g_correction)
        v = verify_conjecture41(ExchangeMatrix(B2), 2, (1,))
        assert v.status == FAIL
        assert v.witness["k"] == 2


class TestScalar:
    def test_example_values(self):
        pos = lambda x: max(x, 0)
        b, c, eps = 3, -2, 1
        assert pos(c) * pos(b) - pos(-c) * pos(-b) == 0
        assert c * pos(eps * b) + b * pos(-eps * c) == 0

    def test_sweep(self):
        assert scalar_identity_cases(10) == 882
        assert verify_scalar_identity(10).passed
        assert verify_scalar_identity(1).passed

    def test_bad_bound(self):
        with pytest.raises(ValueError):
            verify_scalar_identity(0)


class TestInverseColumnFact:
    def test_examples(self):
        assert verify_inverse_column_fact(jay(2, 2), 2, 2).passed
        assert verify_inverse_column_fact(IntMat([[-1, 1], [0, 1]]), 1, 1).passed

    @given(unimodular(max_n=4))
    def test_random_all_pairs(self, c):
        n = c.nrows
        for k in range(1, n + 1):
            for ell in range(1, n + 1):
                assert verify_inverse_column_fact(c, k, ell).passed

    def test_non_unimodular(self):
        with pytest.raises(NotUnimodular):
            verify_inverse_column_fact(IntMat([[2, 0], [0, 1]]), 1, 1)


class TestStepLeft:
    def test_examples(self):
        b = ExchangeMatrix(A2)
        assert verify_step_left(b, 1, ()).passed
        assert verify_step_left(b, 1, (2,)).passed

    def test_a2_sweep(self):
        b = ExchangeMatrix(A2)
        for word in words_up_to(2, 5):
            for k in (1, 2):
                assert verify_step_left(b, k, word).passed

    @settings(max_examples=60, deadline=None)
    @given(matrix_and_word(max_len=7), st.data())
    def test_random(self, bw, data):
        b, word = bw
        assert verify_step_left(b, data.draw(st.integers(1, b.n)), word).passed

    def test_detects_broken_step_left(self, monkeypatch):
        import tropdual.verify as verify

        monkeypatch.setattr(verify, "step_left", lambda b0, k, c: c)
        v = verify_step_left(ExchangeMatrix(A2), 1, (2,))
        assert v.status == FAIL
        assert v.witness["failures"][0]["identity"] == "step_left = walk from t1"


class TestOtherChecks:
    def test_tropical_and_separation(self, small_b):
        for word in words_up_to(small_b.n, 3):
            assert verify_tropical(small_b, word).passed
            assert verify_separation(small_b, word).passed
            assert verify_recurrences(small_b, word).passed

    def test_tropical_detects_broken_c(self, monkeypatch):
        def wrong_c(c, g, b_t, ell):
            c2, g2 = _real_step_right(c, g, b_t, ell)
            return c @ jay(b_t.n, ell), g2

        monkeypatch.setattr(pattern, "step_right", wrong_c)
        v = verify_tropical(ExchangeMatrix(A2), (1,))
        assert v.status == FAIL

    def test_separation_detects_broken_g(self, monkeypatch):
        monkeypatch.setattr(pattern, "step_right", _drop_g_correction)
        assert verify_separation(ExchangeMatrix(B2), (1,)).status == FAIL


class TestVerdictAndReports:
    def test_verdict_json(self):
        v = Verdict("theorem", PASS)
        assert v.to_json() == {"check": "theorem", "status": "pass", "witness": None}
        with pytest.raises(ValueError):
            Verdict("theorem", FAIL)
        with pytest.raises(ValueError):
            Verdict("theorem", "maybe", {"x": 1})

    def test_worst(self):
        p, f, v = Verdict("a", PASS), Verdict("a", FAIL, {"x": 1}), Verdict("a", VIOLATED, {"x": 1})
        assert worst([p, p]) == PASS
        assert worst([p, v]) == VIOLATED
        assert worst([v, f, p]) == FAIL

    def test_witness_replays(self, monkeypatch):
        monkeypatch.setattr(pattern, "step_right", _drop_g_correction)
        v = verify_theorem(ExchangeMatrix(B2), (1, 2))
        w = json.loads(json.dumps(v.to_json()))["witness"]
        again = verify_theorem(ExchangeMatrix.from_json(w["matrix"]), tuple(w["word"]))
        assert again == v

    def test_parse_checks(self):
        assert parse_checks("all") == ALL_CHECKS
        assert parse_checks("theorem,step-left") == ("theorem", "step-left")
        with pytest.raises(ValueError):
            parse_checks("theorem,bogus")

    def test_run_checks_tallies_and_merge_order(self):
        b = ExchangeMatrix(A2)
        words = list(words_up_to(2, 3))
        r1 = run_checks(b, words[:3], ("theorem", "step-left"))
        r2 = run_checks(b, words[3:], ("theorem", "step-left"))
        full = run_checks(b, words, ("theorem", "step-left"))
        r2.merge(r1)
        assert r2.to_json() == full.to_json()
        assert full.to_json()["tallies"]["step-left"]["pass"] == 2 * len(words)
        assert full.status == PASS
