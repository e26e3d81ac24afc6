"""Sink-set decomposition of W_i(𝕁_λ, h) and the maximal-parts induction.

For a sink set T = {ℓ₁ < ⋯ < ℓ_k}, the permutations placing k, k-1, …, 1
at positions ℓ₁, …, ℓ_k factor uniquely as ``w = w_T ∘ σ`` with σ fixing
every ℓ_j.  Deleting the T positions from σ and relabelling through f_T
gives ``Ψ_T(w) = x_σ ∈ S_{n-k}``.  When λ has k = ht(I_h)+1 parts, Ψ_T is a
grading-shifting bijection onto W(𝕁_{λ[1]}, h[T]), which drives the
inductive formula for c_{μ,i} at partitions with the maximal number of parts.
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .combinat import (
    Partition, Perm, RootPair, compose, enumerate_partitions, enumerate_perms, inverse,
    inversions, jj_set, root_mask, truncate_columns,
)
from .errors import InternalConsistencyError
from .hessenberg import (
    HessFunction, count_inv_h, deg_of_sink_set, delete_sink_set, height, in_phi_h,
    is_independent, sink_set_to_roots, sink_sets,
)
from .solver import phi_mask, solve, w_table


def _sorted_sink(T: Iterable[int]) -> tuple[int, ...]:
    T = tuple(T)
    if list(T) != sorted(set(T)):
        raise ValueError(f"sink set {list(T)} must be strictly increasing")
    return T


def relabel_map(T: Iterable[int], n: int) -> dict[int, int]:
    """f_T: [n] - T -> [n - k], j ↦ j - #{t ∈ T : t <= j}."""
    T = set(T)
    return {j: j - sum(1 for t in T if t <= j) for j in range(1, n + 1) if j not in T}


def canonical_w_T(T: Iterable[int], n: int) -> Perm:
    """w_T(ℓ_j) = k - j + 1; off T, w_T(j) = f_T(j) + k."""
    T = _sorted_sink(T)
    if T and not 1 <= T[0] <= T[-1] <= n:
        raise ValueError(f"sink set {list(T)} is not inside [1, {n}]")
    k = len(T)
    w = [0] * n
    for j, ell in enumerate(T, 1):
        w[ell - 1] = k - j + 1
    for j, f in relabel_map(T, n).items():
        w[j - 1] = f + k
    return tuple(w)


def satisfies_sink_positions(w: Sequence[int], T: Sequence[int]) -> bool:
    k = len(T)
    return all(w[ell - 1] == k - j + 1 for j, ell in enumerate(T, 1))


@dataclass(frozen=True)
class SinkFactorization:
    w: Perm
    T: tuple[int, ...]
    w_T: Perm
    sigma: Perm
    x_sigma: Perm


def psi(w: Sequence[int], T: Sequence[int]) -> Perm:
    return factorize(w, T).x_sigma


def factorize(w: Sequence[int], T: Iterable[int]) -> SinkFactorization:
    T = _sorted_sink(T)
    w = tuple(w)
    n = len(w)
    if not satisfies_sink_positions(w, T):
        raise ValueError(f"{list(w)} does not put {len(T)},…,1 at positions {list(T)}")
    w_T = canonical_w_T(T, n)
    sigma = compose(inverse(w_T), w)
    f = relabel_map(T, n)
    Tset = set(T)
    x_sigma = tuple(f[sigma[p - 1]] for p in range(1, n + 1) if p not in Tset)
    return SinkFactorization(w, T, w_T, sigma, x_sigma)


def inversion_split(w: Sequence[int], T: Iterable[int]) -> tuple[set[RootPair], set[RootPair]]:
    """(inv(w_T), inv(σ) ∩ Φ[T]) for the factorization w = w_T σ."""
    fac = factorize(w, T)
    Tset = set(fac.T)
    rest = {(i, j) for (i, j) in inversions(fac.sigma) if i not in Tset and j not in Tset}
    return inversions(fac.w_T), rest


# -- W_i(𝕁_λ, h, T) ---------------------------------------------------------

def _check_sink_for(lam: Partition, h: HessFunction, T: tuple[int, ...]) -> None:
    if len(T) != len(lam):
        raise ValueError(f"|T|={len(T)} but λ={list(lam)} has {len(lam)} parts")
    if not is_independent(h, T):
        raise ValueError(f"{list(T)} is not a sink set of the graph of h=({h})")


def w_sink_subset(lam: Partition, h: HessFunction, T: Iterable[int], i: int) -> list[Perm]:
    T = _sorted_sink(T)
    _check_sink_for(lam, h, T)
    target = root_mask(jj_set(lam))
    return [w for w in enumerate_perms(h.n, cap=None)
            if satisfies_sink_positions(w, T)
            and phi_mask(w, h) == target and count_inv_h(w, h) == i]


def in_sink_subset_by_roots(w: Sequence[int], lam: Partition, h: HessFunction,
                            T: Sequence[int]) -> bool:
    """Membership through w^{-1}{α_1, …, α_{k-1}} = R_T (no position test)."""
    if phi_mask(w, h) != root_mask(jj_set(lam)):
        return False
    pos = inverse(w)
    k = len(T)
    pulled = {(pos[j - 1], pos[j]) for j in range(1, k)}
    # w^{-1}(α_j) = t_{w^{-1}(j)} - t_{w^{-1}(j+1)}
    return pulled == set(sink_set_to_roots(T))


@lru_cache(maxsize=4096)
def sink_table(h: HessFunction) -> Counter:
    """Counts keyed by (λ, T, i) from one sweep of S_n.

    Each w with Φ_h-mask equal to some 𝕁_λ (λ with k parts) is filed under
    the positions of k, k-1, …, 1 when they increase and form an independent
    set; anything else is filed under ``T=None`` so the decomposition can
    be checked against the plain W counts.
    """
    by_mask = {root_mask(jj_set(lam)): lam for lam in enumerate_partitions(h.n, cap=None)}
    table: Counter = Counter()
    for w in enumerate_perms(h.n, cap=None):
        lam = by_mask.get(phi_mask(w, h))
        if lam is None:
            continue
        k = len(lam)
        pos = inverse(w)
        T = tuple(pos[v - 1] for v in range(k, 0, -1))
        if list(T) != sorted(T) or not is_independent(h, T):
            T = None
        table[(lam, T, count_inv_h(w, h))] += 1
    return table


# -- Ψ_T bijection and the inductive formula --------------------------------

def _require_max_parts(lam: Partition, h: HessFunction) -> int:
    k = height(h) + 1
    if len(lam) != k:
        raise ValueError(f"λ={list(lam)} has {len(lam)} parts; the induction needs exactly "
                         f"ht(I_h)+1 = {k}")
    return k


def w_membership(x: Sequence[int], lam: Partition, h: HessFunction) -> tuple[bool, int]:
    """(x ∈ W(𝕁_λ, h), |inv_h(x)|) by a direct root-by-root test."""
    pos = inverse(x)
    J = jj_set(lam)
    for j in range(1, len(x)):
        root = (pos[j - 1], pos[j])
        if in_phi_h(h, root) != (j in J):
            return False, 0
    return True, count_inv_h(x, h)


@dataclass
class PsiReport:
    T: tuple[int, ...]
    deg: int
    h_T: HessFunction
    left: list[int]
    right: list[int]
    bijection_verified: bool

    def to_json(self) -> dict:
        return {"T": list(self.T), "deg": self.deg,
                "counts_by_degree_left": self.left,
                "counts_by_degree_right": self.right,
                "bijection_verified": self.bijection_verified}


def psi_report(lam: Partition, h: HessFunction, T: Iterable[int]) -> PsiReport:
    """Compare W(𝕁_λ, h, T) with W(𝕁_{λ[1]}, h[T]) degree by degree through Ψ_T."""
    T = _sorted_sink(T)
    _require_max_parts(lam, h)
    _check_sink_for(lam, h, T)
    deg = deg_of_sink_set(h, T)
    h_T, _ = delete_sink_set(h, T)
    lam1 = truncate_columns(lam, 1)
    top = h.dimension
    left = [0] * (top + 1)
    right = [0] * (top + 1)

    images = set()
    ok = True
    for w in w_sink_subset_all(lam, h, T):
        i = count_inv_h(w, h)
        left[i] += 1
        x = psi(w, T)
        member, j = w_membership(x, lam1, h_T)
        if not member or j != i - deg or x in images:
            ok = False
        images.add(x)

    small = w_table(h_T)
    for i in range(deg, top + 1):
        right[i] = small.get((lam1, i - deg), 0)
    ok = ok and left == right
    return PsiReport(T, deg, h_T, left, right, ok)


def w_sink_subset_all(lam: Partition, h: HessFunction, T: tuple[int, ...]) -> list[Perm]:
    target = root_mask(jj_set(lam))
    return [w for w in enumerate_perms(h.n, cap=None)
            if satisfies_sink_positions(w, T) and phi_mask(w, h) == target]


def psi_bijection_check(lam: Partition, h: HessFunction, T: Iterable[int],
                        i: int) -> tuple[int, int]:
    """(|W_i(𝕁_λ, h, T)|, |W_{i-deg}(𝕁_{λ[1]}, h[T])|), after checking Ψ_T."""
    rep = psi_report(lam, h, T)
    if not rep.bijection_verified:
        raise InternalConsistencyError(
            f"Ψ_T is not a graded bijection for λ={list(lam)}, h=({h}), T={list(rep.T)}")
    if not 0 <= i < len(rep.left):
        return 0, 0
    return rep.left[i], rep.right[i]


@dataclass
class InductiveTerm:
    T: tuple[int, ...]
    deg: int
    h_T: HessFunction
    by_degree: list[int]

    def to_json(self) -> dict:
        return {"T": list(self.T), "deg": self.deg, "h_T": list(self.h_T.values),
                "terms_by_degree": self.by_degree}


def inductive_terms(h: HessFunction, mu: Partition) -> list[InductiveTerm]:
    """One entry per maximal sink set T: the shifted coefficients c^T_{μ[1], i-deg}."""
    k = _require_max_parts(mu, h)
    mu1 = truncate_columns(mu, 1)
    top = h.dimension
    terms = []
    for sk in sink_sets(h, k):
        h_T, _ = delete_sink_set(h, sk.vertices)
        small = solve(h_T, cap=None)
        by_degree = [small.c(mu1, i - sk.degree) if i >= sk.degree else 0
                     for i in range(top + 1)]
        terms.append(InductiveTerm(sk.vertices, sk.degree, h_T, by_degree))
    return terms


def inductive_coeffs(h: HessFunction, mu: Partition, i: int) -> int:
    if i < 0 or i > h.dimension:
        _require_max_parts(mu, h)
        return 0
    return sum(t.by_degree[i] for t in inductive_terms(h, mu))
