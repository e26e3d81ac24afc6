"""Acceptance criteria, one test (or small group) per criterion.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per
criterion in the terminal summary.
"""
import itertools
import time

import pytest

from hessmult import cli
from hessmult.combinat import enumerate_partitions, inversions, simple_roots
from hessmult.hessenberg import (
    HessFunction, deg_of_sink_set, delete_sink_set, enumerate_hess, full_hess, ideal_of,
    minimal_hess, phi_h_minus, sink_sets,
)
from hessmult.sink import factorize, inductive_coeffs, inversion_split, psi_report, relabel_map
from hessmult.solver import (
    _a_matrix_memo, a_matrix, descent_histogram, solve, w_table,
)
from hessmult.verify import (
    check_betti_identity, check_mobius_d, check_mobius_w, check_nonnegativity,
    check_sink_decomposition, check_vanishing, subsets,
)

H_UP_TO_5 = [h for n in range(1, 6) for h in enumerate_hess(n)]
H_UP_TO_6 = [h for n in range(1, 7) for h in enumerate_hess(n)]


def _fresh():
    _a_matrix_memo.cache_clear()
    descent_histogram.cache_clear()


def _mahonian(n):
    counts = [0] * (n * (n - 1) // 2 + 1)
    for w in itertools.permutations(range(n)):
        counts[len(inversions(w))] += 1
    return counts


@pytest.mark.criterion(1, "A-matrix reproduction for n=2,3")
def test_criterion_1_a_matrix_small():
    _fresh()
    start = time.perf_counter()
    A2, A3 = a_matrix(2), a_matrix(3)
    elapsed = time.perf_counter() - start
    assert A2.order == ((2,), (1, 1))
    assert A2.rows() == [[1, 1], [0, 1]]
    assert A3.order == ((3,), (2, 1), (1, 1, 1))
    assert A3.rows() == [[1, 1, 1], [0, 1, 2], [0, 0, 1]]
    assert elapsed < 1.0


@pytest.mark.criterion(2, "unit upper-triangularity for n=2..7")
def test_criterion_2_triangularity():
    _fresh()
    timings = {}
    for n in range(2, 8):
        start = time.perf_counter()
        A = a_matrix(n)
        timings[n] = time.perf_counter() - start
        size = len(A.order)
        for r in range(size):
            assert A.entries[r][r] == 1
            assert all(A.entries[r][c] == 0 for c in range(r))
    assert timings[7] < 30.0


@pytest.mark.criterion(3, "worked examples")
def test_criterion_3_ideal_example():
    h = HessFunction((2, 4, 4, 5, 5))
    assert phi_h_minus(h) == {(2, 1), (3, 2), (4, 2), (4, 3), (5, 4)}
    series = ideal_of(h)
    assert series.ideal == {(3, 1), (4, 1), (5, 1), (5, 2), (5, 3)}
    assert series.series[1] == {(5, 1)}
    assert series.height == 2


@pytest.mark.criterion(3, "worked examples")
def test_criterion_3_sink_example():
    h = HessFunction((2, 3, 5, 6, 7, 8, 8, 8))
    T = (1, 3, 6)
    assert deg_of_sink_set(h, T) == 3
    h_T, f_T = delete_sink_set(h, T)
    assert h_T.values == (1, 3, 4, 5, 5)
    assert f_T == relabel_map(T, 8)
    w = (3, 6, 2, 8, 5, 1, 7, 4)
    fac = factorize(w, T)
    assert fac.w_T == (3, 4, 2, 5, 6, 1, 7, 8)
    assert fac.sigma == (1, 5, 3, 8, 4, 6, 7, 2)
    assert fac.x_sigma == (3, 5, 2, 4, 1)
    left, right = inversion_split(w, T)
    assert inversions(w) == left | right and not left & right
    assert (len(inversions(w)), len(left), len(right)) == (14, 7, 7)
    assert left == {(6, 1), (6, 2), (6, 3), (6, 4), (6, 5), (3, 1), (3, 2)}
    assert right == {(8, 2), (8, 4), (8, 5), (8, 7), (5, 2), (5, 4), (7, 4)}


@pytest.mark.criterion(4, "both Möbius inversions for n<=5")
def test_criterion_4_mobius():
    start = time.perf_counter()
    for h in H_UP_TO_5:
        for J in subsets(simple_roots(h.n)):
            for i in range(h.dimension + 1):
                res = check_mobius_w(h, J, i)
                assert res.passed, (h, sorted(J), i, res)
    for n in range(1, 6):
        for mu in enumerate_partitions(n):
            for J in subsets(simple_roots(n)):
                res = check_mobius_d(mu, J)
                assert res.passed, (mu, sorted(J), res)
    assert time.perf_counter() - start < 120.0


@pytest.mark.criterion(5, "solve agrees with the Betti-number identity for n<=6")
def test_criterion_5_betti_identity():
    start = time.perf_counter()
    assert len([h for h in H_UP_TO_6 if h.n == 6]) == 132
    for h in H_UP_TO_6:
        res = check_betti_identity(h)
        assert res.passed, (h, res.witness)
    assert time.perf_counter() - start < 600.0


@pytest.mark.criterion(6, "vanishing and non-negativity for n<=6")
def test_criterion_6_vanishing_nonnegative():
    for h in H_UP_TO_6:
        table = solve(h)
        assert check_vanishing(h, table).passed, h
        res = check_nonnegativity(h, table)
        assert res.passed, (h, res.witness)


@pytest.mark.criterion(6, "vanishing and non-negativity for n<=6")
def test_criterion_6_math_alert_exit_code(monkeypatch, capsys):
    h = HessFunction((2, 3, 3))
    real = solve(h)
    broken = type(real)(real.h, real.order, {**real.coeffs, ((3,), 0): -1}, real.betti,
                        real.height, real.w_vectors)
    monkeypatch.setattr(cli, "solve", lambda *a, **k: broken)
    assert cli.main(["solve", "--h", "2,3,3"]) == cli.EXIT_MATH_ALERT
    assert "MATH-ALERT" in capsys.readouterr().err
    monkeypatch.undo()
    assert cli.main(["verify", "--all-n", "4", "--jobs", "1"]) == cli.EXIT_OK


@pytest.mark.criterion(7, "sink-set decomposition and the Ψ_T bijection for n<=6")
def test_criterion_7_sink_decomposition_and_psi():
    for h in H_UP_TO_6:
        assert check_sink_decomposition(h).passed, h
        k = ideal_of(h).height + 1
        small_cache = {}
        for lam in enumerate_partitions(h.n):
            if len(lam) != k:
                continue
            for sk in sink_sets(h, k):
                rep = psi_report(lam, h, sk.vertices)
                assert rep.bijection_verified, (h, lam, sk)
                assert rep.left == rep.right
                h_T = rep.h_T
                small = small_cache.setdefault(h_T, w_table(h_T))
                lam1 = tuple(p - 1 for p in lam if p > 1)
                for i, count in enumerate(rep.left):
                    assert count == (small.get((lam1, i - sk.degree), 0) if i >= sk.degree else 0)


@pytest.mark.criterion(8, "inductive formula equals the direct solve for n<=6")
def test_criterion_8_inductive_formula():
    checked = 0
    for h in H_UP_TO_6:
        table = solve(h)
        k = table.height + 1
        for mu in table.order:
            if len(mu) != k:
                continue
            for i in range(h.dimension + 1):
                assert inductive_coeffs(h, mu, i) == table.c(mu, i), (h, mu, i)
                checked += 1
    assert checked > 0


@pytest.mark.criterion(9, "closed forms at the complete and empty graphs for n<=6")
def test_criterion_9_closed_forms():
    for n in range(1, 7):
        full = solve(full_hess(n))
        assert full.by_degree((n,)) == _mahonian(n)
        for mu in full.order[1:]:
            assert not any(full.by_degree(mu))

        empty = solve(minimal_hess(n))
        ones = (1,) * n
        assert empty.max_degree == 0
        for mu in empty.order:
            assert empty.c(mu, 0) == (1 if mu == ones else 0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
