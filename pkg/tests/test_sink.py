import itertools

import pytest

from hessmult.combinat import (
    compose, enumerate_partitions, enumerate_perms, inverse, inversions, jj_set,
    truncate_columns,
)
from hessmult.errors import InternalConsistencyError
from hessmult.hessenberg import (
    HessFunction, count_inv_h, delete_sink_set, enumerate_hess, height, sink_sets,
)
from hessmult.sink import (
    canonical_w_T, factorize, in_sink_subset_by_roots, inductive_coeffs, inductive_terms,
    inversion_split, psi, psi_bijection_check, psi_report, relabel_map,
    satisfies_sink_positions, sink_table, w_membership, w_sink_subset,
)
from hessmult.solver import phi_mask, solve, w_count

RUNNING = HessFunction((2, 3, 5, 6, 7, 8, 8, 8))


def small_h(top):
    return [h for n in range(1, top + 1) for h in enumerate_hess(n)]


def test_relabel_and_canonical_example():
    assert relabel_map((1, 3, 6), 8) == {2: 1, 4: 2, 5: 3, 7: 4, 8: 5}
    assert canonical_w_T((1, 3, 6), 8) == (3, 4, 2, 5, 6, 1, 7, 8)
    with pytest.raises(ValueError):
        canonical_w_T((3, 1), 4)
    with pytest.raises(ValueError):
        canonical_w_T((1, 9), 8)


def test_running_example_membership():
    w = (3, 6, 2, 8, 5, 1, 7, 4)
    lam = (3, 3, 2)
    assert w in w_sink_subset(lam, RUNNING, (1, 3, 6), count_inv_h(w, RUNNING))
    assert in_sink_subset_by_roots(w, lam, RUNNING, (1, 3, 6))
    # w_T itself violates the I_h condition for this λ
    w_T = canonical_w_T((1, 3, 6), 8)
    assert phi_mask(w_T, RUNNING) != sum(1 << j for j in jj_set(lam))
    assert psi(w, (1, 3, 6)) == (3, 5, 2, 4, 1)


def test_factorize_rejects_wrong_positions():
    with pytest.raises(ValueError):
        factorize((1, 2, 3), (1, 3))


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 7) for k in range(1, n + 1)])
def test_factorization_unique_and_inversions_split(n, k):
    for T in itertools.combinations(range(1, n + 1), k):
        w_T = canonical_w_T(T, n)
        seen = set()
        for w in enumerate_perms(n):
            if not satisfies_sink_positions(w, T):
                continue
            fac = factorize(w, T)
            assert compose(fac.w_T, fac.sigma) == w
            assert all(fac.sigma[ell - 1] == ell for ell in T)
            assert fac.x_sigma not in seen
            seen.add(fac.x_sigma)
            left, right = inversion_split(w, T)
            assert left == inversions(w_T)
            assert inversions(w) == left | right and not left & right
        # every x in S_{n-k} arises exactly once
        assert len(seen) == len(list(enumerate_perms(n - k))) if n > k else len(seen) == 1


@pytest.mark.parametrize("k", range(1, 5))
def test_w_T_maps_j_roots_onto_smaller_j(k):
    n = 7
    for lam in enumerate_partitions(n):
        if len(lam) != k:
            continue
        small = truncate_columns(lam, 1)
        J = jj_set(lam)
        for T in itertools.combinations(range(1, n + 1), k):
            w_T = canonical_w_T(T, n)
            pos = inverse(w_T)
            f = relabel_map(T, n)
            mapped_in, mapped_out = set(), set()
            for j in range(1, n):
                a, b = pos[j - 1], pos[j]
                if a in T or b in T:
                    continue
                fa, fb = f[a], f[b]
                assert fb == fa + 1
                (mapped_in if j in J else mapped_out).add(fa)
            assert mapped_in == set(jj_set(small))
            assert mapped_out == set(range(1, n - k)) - jj_set(small)


@pytest.mark.parametrize("h", small_h(6), ids=str)
def test_root_membership_matches_position_membership(h):
    perms = list(enumerate_perms(h.n))
    masks = {w: phi_mask(w, h) for w in perms}
    for lam in enumerate_partitions(h.n):
        k = len(lam)
        if k < 2:
            continue
        target = sum(1 << j for j in jj_set(lam))
        for s in sink_sets(h, k):
            by_pos = {w for w in perms
                      if masks[w] == target and satisfies_sink_positions(w, s.vertices)}
            by_roots = {w for w in perms if in_sink_subset_by_roots(w, lam, h, s.vertices)}
            assert by_pos == by_roots


def test_w_sink_subset_by_degree():
    lam, T = (3, 3, 2), (1, 3, 6)
    total = sum(len(w_sink_subset(lam, RUNNING, T, i)) for i in range(RUNNING.dimension + 1))
    assert total == sum(psi_report(lam, RUNNING, T).left)


@pytest.mark.parametrize("h", small_h(6), ids=str)
def test_sink_table_totals(h):
    table = sink_table(h)
    assert all(T is not None for (_, T, _) in table)
    for lam in enumerate_partitions(h.n):
        for i in range(h.dimension + 1):
            split = sum(c for (l2, T, i2), c in table.items() if l2 == lam and i2 == i)
            assert split == w_count(jj_set(lam), h, i)


@pytest.mark.parametrize("h", small_h(6), ids=str)
def test_psi_is_graded_bijection(h):
    k = height(h) + 1
    for lam in enumerate_partitions(h.n):
        if len(lam) != k:
            continue
        for s in sink_sets(h, k):
            rep = psi_report(lam, h, s.vertices)
            assert rep.bijection_verified
            assert rep.deg == s.degree
            assert sum(rep.left) == sum(rep.right)
            for i in range(h.dimension + 1):
                assert psi_bijection_check(lam, h, s.vertices, i) == (rep.left[i], rep.right[i])


def test_psi_report_json_shape():
    rep = psi_report((3, 3, 2), RUNNING, (1, 3, 6))
    doc = rep.to_json()
    assert set(doc) == {"T", "deg", "counts_by_degree_left", "counts_by_degree_right",
                        "bijection_verified"}
    assert doc["T"] == [1, 3, 6] and doc["deg"] == 3 and doc["bijection_verified"]
    assert rep.h_T.values == (1, 3, 4, 5, 5)


def test_psi_refuses_non_maximal_parts():
    with pytest.raises(ValueError):
        psi_report((2, 1), HessFunction((3, 3, 3)), (3,))
    with pytest.raises(ValueError):
        inductive_terms(HessFunction((2, 3, 3)), (3,))


def test_psi_bijection_check_raises_on_inconsistency(monkeypatch):
    import hessmult.sink as sink
    real = sink.psi_report

    def broken(*args):
        rep = real(*args)
        rep.bijection_verified = False
        return rep

    monkeypatch.setattr(sink, "psi_report", broken)
    with pytest.raises(InternalConsistencyError):
        sink.psi_bijection_check((3, 3, 2), RUNNING, (1, 3, 6), 4)


def test_w_membership():
    h_T, _ = delete_sink_set(RUNNING, (1, 3, 6))
    ok, i = w_membership((3, 5, 2, 4, 1), (2, 2, 1), h_T)
    assert ok
    assert i == count_inv_h((3, 6, 2, 8, 5, 1, 7, 4), RUNNING) - 3


def test_inductive_terms_running_example():
    terms = inductive_terms(RUNNING, (3, 3, 2))
    by_T = {t.T: t for t in terms}
    assert (1, 3, 6) in by_T
    t = by_T[(1, 3, 6)]
    assert t.deg == 3 and t.h_T.values == (1, 3, 4, 5, 5)
    assert t.to_json()["h_T"] == [1, 3, 4, 5, 5]
    assert {s.vertices for s in sink_sets(RUNNING, 3)} == set(by_T)
    direct = solve(RUNNING)
    for i in range(RUNNING.dimension + 1):
        assert inductive_coeffs(RUNNING, (3, 3, 2), i) == direct.c((3, 3, 2), i)
    assert inductive_coeffs(RUNNING, (3, 3, 2), -1) == 0
    assert inductive_coeffs(RUNNING, (3, 3, 2), 99) == 0


def test_induction_rejects_wrong_part_count():
    with pytest.raises(ValueError):
        inductive_coeffs(RUNNING, (4, 4), 0)
    with pytest.raises(ValueError):
        inductive_coeffs(RUNNING, (4, 4), 99)
