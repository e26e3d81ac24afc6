"""Counting W_i(J, h) and D(J, K), assembling A·X_i = W_i, and solving it.

Two histograms do all the heavy lifting, each filled by one pass over S_n:

* the *descent histogram* of n, keyed by ``(Des_L mask, Des_R mask)``;
  every ``|D(J, K)|`` and every tabloid fixed-space dimension is a sum
  over it, so the whole A matrix costs a single sweep;
* the *Hessenberg histogram* of h, keyed by ``(Φ_h mask, |inv_h|)`` where
  the Φ_h mask records which ``w^{-1}(α_j)`` land in Φ_h.  Each α_j lands in
  exactly one of Φ_h and I_h, so ``w ∈ W(J, h)`` iff that mask equals J.

Sweeps split S_n into blocks by first entry; blocks are summed with
Counter addition, so results do not depend on ``jobs``.
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .combinat import (
    DEFAULT_CAP, Partition, Perm, check_cap, dual_partition, enumerate_partitions,
    enumerate_perms, inverse, j_set, jj_set, partition_key, perms_with_first,
    root_mask, simple_roots, truncate_columns,
)
from .errors import InternalConsistencyError
from .hessenberg import HessFunction, count_inv_h, height

# -- per-permutation statistics ---------------------------------------------


def descent_masks(w: Sequence[int]) -> tuple[int, int]:
    n = len(w)
    pos = inverse(w)
    left = right = 0
    for j in range(1, n):
        if pos[j - 1] > pos[j]:
            left |= 1 << j
        if w[j - 1] > w[j]:
            right |= 1 << j
    return left, right


def phi_mask(w: Sequence[int], h: HessFunction) -> int:
    """Bit j set iff ``w^{-1}(α_j) = t_a - t_b`` (a, b the positions of j, j+1) is in Φ_h."""
    pos = inverse(w)
    mask = 0
    for j in range(1, len(w)):
        a, b = pos[j - 1], pos[j]
        if a < b or a <= h(b):
            mask |= 1 << j
    return mask


def in_w_set(w: Sequence[int], J: Iterable[int], h: HessFunction) -> bool:
    return phi_mask(w, h) == root_mask(J)


# -- sweeps -----------------------------------------------------------------

def run_blocks(task: Callable[..., Counter], arg, n: int, jobs: int = 1) -> Counter:
    """Sum ``task(arg, first)`` over the first-entry blocks of S_n."""
    if n == 0:
        return task(arg, None)
    firsts = range(1, n + 1)
    total: Counter = Counter()
    if jobs > 1 and n >= 7:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(task, [arg] * n, firsts):
                total.update(part)
    else:
        for first in firsts:
            total.update(task(arg, first))
    return total


# block tasks are module-level so worker processes can unpickle them;
# ``first=None`` stands for S_0 = {()}
def _descent_block(n: int, first: int | None) -> Counter:
    if first is None:
        return Counter({(0, 0): 1})
    return Counter(descent_masks(w) for w in perms_with_first(n, first))


def _hess_block(values: tuple[int, ...], first: int | None) -> Counter:
    if first is None:
        return Counter({(0, 0): 1})
    h = HessFunction(values)
    return Counter((phi_mask(w, h), count_inv_h(w, h)) for w in perms_with_first(h.n, first))


@lru_cache(maxsize=None)
def descent_histogram(n: int, jobs: int = 1) -> Counter:
    return run_blocks(_descent_block, n, n, jobs)


@lru_cache(maxsize=4096)
def hess_histogram(h: HessFunction, jobs: int = 1) -> Counter:
    return run_blocks(_hess_block, h.values, h.n, jobs)


# -- W and D sets -----------------------------------------------------------

def _check_subset(J: Iterable[int], n: int) -> frozenset[int]:
    J = frozenset(J)
    if not J <= simple_roots(n):
        raise ValueError(f"{sorted(J)} is not a subset of the simple roots 1..{n - 1}")
    return J


def w_set(J: Iterable[int], h: HessFunction, i: int) -> list[Perm]:
    J = _check_subset(J, h.n)
    target = root_mask(J)
    return [w for w in enumerate_perms(h.n, cap=None)
            if phi_mask(w, h) == target and count_inv_h(w, h) == i]


def w_count(J: Iterable[int], h: HessFunction, i: int) -> int:
    J = _check_subset(J, h.n)
    return hess_histogram(h)[(root_mask(J), i)]


def d_set(J: Iterable[int], K: Iterable[int], n: int) -> list[Perm]:
    """Permutations with Des_L exactly Δ∖J and Des_R inside Δ∖K."""
    J, K = _check_subset(J, n), _check_subset(K, n)
    want_left = root_mask(simple_roots(n) - J)
    k_mask = root_mask(K)
    out = []
    for w in enumerate_perms(n, cap=None):
        left, right = descent_masks(w)
        if left == want_left and not right & k_mask:
            out.append(w)
    return out


def d_count(J: Iterable[int], K: Iterable[int], n: int) -> int:
    J, K = _check_subset(J, n), _check_subset(K, n)
    want_left = root_mask(simple_roots(n) - J)
    k_mask = root_mask(K)
    return sum(c for (left, right), c in descent_histogram(n).items()
               if left == want_left and not right & k_mask)


def betti_regular(J: Iterable[int], h: HessFunction) -> list[int]:
    """Entry i counts w with w^{-1}(J) ⊆ Φ_h and |inv_h(w)| = i."""
    J = _check_subset(J, h.n)
    need = root_mask(J)
    out = [0] * (h.dimension + 1)
    for (mask, i), c in hess_histogram(h).items():
        if mask & need == need:
            out[i] += c
    return out


# -- the A matrix -----------------------------------------------------------

@dataclass(frozen=True)
class AMatrix:
    n: int
    order: tuple[Partition, ...]
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, key: tuple[Partition, Partition]) -> int:
        lam, mu = key
        return self.entries[self.index(lam)][self.index(mu)]

    def index(self, lam: Partition) -> int:
        return self.order.index(tuple(lam))

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def triangularity_witness(A: AMatrix) -> tuple[Partition, Partition, int] | None:
    """First (λ, μ, entry) breaking unit upper-triangularity, else None."""
    for r, lam in enumerate(A.order):
        for c, mu in enumerate(A.order):
            v = A.entries[r][c]
            if (c < r and v != 0) or (c == r and v != 1) or v < 0:
                return lam, mu, v
    return None


def build_a_matrix(n: int, jobs: int = 1) -> AMatrix:
    order = tuple(enumerate_partitions(n, cap=None))
    hist = descent_histogram(n, jobs)
    full = root_mask(simple_roots(n))
    entries = []
    for lam in order:
        want_left = full & ~root_mask(jj_set(lam))
        row = []
        for mu in order:
            k_mask = root_mask(j_set(mu))
            row.append(sum(c for (left, right), c in hist.items()
                           if left == want_left and not right & k_mask))
        entries.append(tuple(row))
    A = AMatrix(n, order, tuple(entries))
    bad = triangularity_witness(A)
    if bad is not None:
        lam, mu, v = bad
        raise InternalConsistencyError(
            f"A({list(lam)}, {list(mu)}) = {v} breaks unit upper-triangularity at n={n}")
    return A


@lru_cache(maxsize=None)
def _a_matrix_memo(n: int) -> AMatrix:
    return build_a_matrix(n)


def a_matrix(n: int, cap: int | None = DEFAULT_CAP) -> AMatrix:
    check_cap(n, cap)
    return _a_matrix_memo(n)


def a_entry_fast(lam: Partition, mu: Partition) -> int:
    """A(λ, μ) via column truncation, enumerating only the reduced pair.

    Strip the longest common prefix of the duals (the entry is unchanged),
    then the reduced pair differs in its number of parts.  If μ' has fewer
    parts than λ' the entry vanishes; otherwise count D on the smaller n.
    """
    if sum(lam) != sum(mu):
        raise ValueError("partitions of different integers")
    a, b = dual_partition(lam), dual_partition(mu)
    ell = 0
    while ell < min(len(a), len(b)) and a[ell] == b[ell]:
        ell += 1
    lam_r, mu_r = truncate_columns(lam, ell), truncate_columns(mu, ell)
    if not lam_r:
        return 1
    if len(mu_r) < len(lam_r):
        return 0
    m = sum(lam_r)
    return d_count(jj_set(lam_r), j_set(mu_r), m)


# -- W vectors and the solve ------------------------------------------------

def w_table(h: HessFunction) -> dict[tuple[Partition, int], int]:
    """|W_i(𝕁_λ, h)| for every λ ⊢ n and every degree i, from one sweep."""
    by_mask = {root_mask(jj_set(lam)): lam for lam in enumerate_partitions(h.n, cap=None)}
    table: dict[tuple[Partition, int], int] = {}
    for (mask, i), c in hess_histogram(h).items():
        lam = by_mask.get(mask)
        if lam is not None:
            table[(lam, i)] = table.get((lam, i), 0) + c
    return table


def w_vector(h: HessFunction, i: int) -> list[int]:
    table = w_table(h)
    return [table.get((lam, i), 0) for lam in enumerate_partitions(h.n, cap=None)]


def back_substitute(A: AMatrix, rhs: Sequence[int]) -> list[int]:
    """Solve A x = rhs for unit upper-triangular A, last row first."""
    size = len(A.order)
    x = [0] * size
    for r in range(size - 1, -1, -1):
        row = A.entries[r]
        x[r] = rhs[r] - sum(row[c] * x[c] for c in range(r + 1, size))
    return x


@dataclass
class MultTable:
    h: HessFunction
    order: tuple[Partition, ...]
    coeffs: dict[tuple[Partition, int], int]
    betti: list[int]
    height: int
    w_vectors: list[list[int]] = field(repr=False, default_factory=list)

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def max_degree(self) -> int:
        return self.h.dimension

    def c(self, mu: Partition, i: int) -> int:
        return self.coeffs.get((tuple(mu), i), 0)

    def by_degree(self, mu: Partition) -> list[int]:
        return [self.c(mu, i) for i in range(self.max_degree + 1)]

    @property
    def nonnegative(self) -> bool:
        return all(v >= 0 for v in self.coeffs.values())

    def negative_entries(self) -> list[tuple[Partition, int, int]]:
        return [(mu, i, v) for (mu, i), v in sorted(self.coeffs.items(),
                key=lambda kv: (partition_key(kv[0][0]), kv[0][1])) if v < 0]

    def to_json(self, degree: int | None = None) -> dict:
        degrees = range(self.max_degree + 1) if degree is None else [degree]
        return {
            "n": self.n,
            "h": list(self.h.values),
            "ht": self.height,
            "betti": list(self.betti) if degree is None else [self.betti_at(degree)],
            "coefficients": [{"mu": list(mu), "by_degree": [self.c(mu, i) for i in degrees]}
                             for mu in self.order],
            "nonnegative": self.nonnegative,
        }

    def betti_at(self, i: int) -> int:
        return self.betti[i] if 0 <= i < len(self.betti) else 0


def betti_numbers(h: HessFunction) -> list[int]:
    out = [0] * (h.dimension + 1)
    for (_, i), c in hess_histogram(h).items():
        out[i] += c
    return out


@lru_cache(maxsize=4096)
def _solve_memo(h: HessFunction) -> MultTable:
    A = _a_matrix_memo(h.n)
    table = w_table(h)
    coeffs: dict[tuple[Partition, int], int] = {}
    w_vectors = []
    for i in range(h.dimension + 1):
        rhs = [table.get((lam, i), 0) for lam in A.order]
        w_vectors.append(rhs)
        for mu, v in zip(A.order, back_substitute(A, rhs)):
            coeffs[(mu, i)] = v
    return MultTable(h, A.order, coeffs, betti_numbers(h), height(h), w_vectors)


def solve(h: HessFunction, cap: int | None = DEFAULT_CAP) -> MultTable:
    check_cap(h.n, cap)
    return _solve_memo(h)

