"""Permutations, partitions, descents and the dual-lex order on Par(n).

Everything here is 1-based to match the usual one-line notation: a
permutation is a tuple ``w`` with ``w[i - 1] == w(i)``.  Partitions are
weakly decreasing tuples of positive ints; the empty tuple is the (legal)
partition of 0.  Simple-root sets are frozensets of ints in ``1..n-1``.

Inversions are reported as ``(i, j)`` with ``i > j`` (larger index first),
so each pair reads directly as the negative root ``t_i - t_j``.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from math import factorial, prod

from .errors import CapExceeded

Perm = tuple[int, ...]
Partition = tuple[int, ...]
RootPair = tuple[int, int]
SimpleRootSet = frozenset

DEFAULT_CAP = 9


def check_cap(n: int, cap: int | None = DEFAULT_CAP) -> None:
    if cap is not None and n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")


# -- permutations -----------------------------------------------------------

def as_perm(seq: Iterable[int]) -> Perm:
    w = tuple(int(x) for x in seq)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError(f"{list(w)} is not a permutation of 1..{len(w)}")
    return w


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def longest_element(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def inverse(w: Sequence[int]) -> Perm:
    inv = [0] * len(w)
    for pos, val in enumerate(w, 1):
        inv[val - 1] = pos
    return tuple(inv)


def compose(u: Sequence[int], v: Sequence[int]) -> Perm:
    """Return ``u∘v``, i.e. ``i -> u(v(i))`` (right factor acts on positions)."""
    return tuple(u[x - 1] for x in v)


def inversions(w: Sequence[int]) -> set[RootPair]:
    n = len(w)
    return {(i, j) for i in range(2, n + 1) for j in range(1, i)
            if w[i - 1] < w[j - 1]}


def descents_left(w: Sequence[int]) -> frozenset[int]:
    """Indices ``i`` such that ``i + 1`` appears before ``i`` in ``w``."""
    pos = inverse(w)
    return frozenset(i for i in range(1, len(w)) if pos[i - 1] > pos[i])


def descents_right(w: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i in range(1, len(w)) if w[i - 1] > w[i])


def maximal_staircases(w: Sequence[int]) -> list[tuple[int, ...]]:
    """Split positions ``1..n`` into maximal runs on which ``w`` increases."""
    runs: list[tuple[int, ...]] = []
    start = 1
    for i in range(1, len(w)):
        if w[i - 1] > w[i]:
            runs.append(tuple(range(start, i + 1)))
            start = i + 1
    if w:
        runs.append(tuple(range(start, len(w) + 1)))
    return runs


def delete_entries(w: Sequence[int], m: int) -> Perm:
    """Drop the values ``1..m`` from ``w`` and shift the rest down by ``m``."""
    n = len(w)
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got m={m}, n={n}")
    return tuple(x - m for x in w if x > m)


def enumerate_perms(n: int, cap: int | None = DEFAULT_CAP) -> Iterator[Perm]:
    """All of S_n in lexicographic one-line order."""
    check_cap(n, cap)
    return itertools.permutations(range(1, n + 1))


def perms_with_first(n: int, first: int) -> Iterator[Perm]:
    """The contiguous lexicographic block of S_n whose first entry is ``first``.

    The blocks for ``first = 1..n`` partition S_n; they are the unit of work
    for parallel sweeps.
    """
    rest = [x for x in range(1, n + 1) if x != first]
    return ((first, *tail) for tail in itertools.permutations(rest))


# -- simple roots -----------------------------------------------------------

def simple_roots(n: int) -> frozenset[int]:
    return frozenset(range(1, n))


def root_mask(roots: Iterable[int]) -> int:
    """Bitmask with bit ``j`` set for each simple root ``α_j``."""
    mask = 0
    for j in roots:
        mask |= 1 << j
    return mask


def mask_roots(mask: int) -> frozenset[int]:
    return frozenset(j for j in range(mask.bit_length()) if mask >> j & 1)


# -- partitions -------------------------------------------------------------

def as_partition(parts: Iterable[int]) -> Partition:
    lam = tuple(int(p) for p in parts)
    if any(p < 1 for p in lam) or any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"{list(lam)} is not a weakly decreasing sequence of positive integers")
    return lam


def dual_partition(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p >= s) for s in range(1, lam[0] + 1))


def _partial_sums(parts: Sequence[int]) -> list[int]:
    return list(itertools.accumulate(parts))


def j_set(lam: Partition) -> frozenset[int]:
    """Δ minus the row partial sums λ₁, λ₁+λ₂, …, λ₁+⋯+λ_{k-1}."""
    n = sum(lam)
    return simple_roots(n) - frozenset(_partial_sums(lam)[:-1])


def jj_set(lam: Partition) -> frozenset[int]:
    """The column partial sums of λ, i.e. Δ minus ``j_set(dual(λ))``."""
    return frozenset(_partial_sums(dual_partition(lam))[:-1])


def truncate_columns(lam: Partition, ell: int) -> Partition:
    """Remove the leftmost ``ell`` columns of the Young diagram."""
    width = lam[0] if lam else 0
    if not 0 <= ell <= width:
        raise ValueError(f"cannot remove {ell} columns from {list(lam)}")
    return tuple(p - ell for p in lam if p > ell)


@dataclass(frozen=True)
class StepDecomposition:
    steps: tuple[tuple[int, ...], ...]

    @property
    def step_count(self) -> int:
        return len(self.steps)


def step_decomposition(lam: Partition) -> StepDecomposition:
    """Maximal runs of equal column lengths, as column-index intervals."""
    dual = dual_partition(lam)
    steps = []
    col = 1
    for _, group in itertools.groupby(dual):
        width = len(list(group))
        steps.append(tuple(range(col, col + width)))
        col += width
    return StepDecomposition(tuple(steps))


def partition_cmp(lam: Partition, mu: Partition) -> int:
    """-1, 0 or 1 as λ ≺, =, ≻ μ in the lex-on-duals order."""
    if sum(lam) != sum(mu):
        raise ValueError(f"{list(lam)} and {list(mu)} are partitions of different integers")
    a, b = dual_partition(lam), dual_partition(mu)
    return (a > b) - (a < b)


def partition_key(lam: Partition) -> Partition:
    """Sort key realizing ≺ (valid among partitions of one n)."""
    return dual_partition(lam)


def _partitions_desc(n: int, largest: int) -> Iterator[Partition]:
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_desc(n - first, first):
            yield (first, *rest)


def enumerate_partitions(n: int, cap: int | None = DEFAULT_CAP) -> list[Partition]:
    """Par(n) sorted increasingly by ≺; ``(n)`` first, ``(1^n)`` last."""
    check_cap(n, cap)
    return sorted(_partitions_desc(n, n), key=partition_key)


def dominates(lam: Partition, mu: Partition) -> bool:
    """True when μ ⊴ λ in dominance order."""
    a, b = _partial_sums(lam), _partial_sums(mu)
    width = max(len(a), len(b))
    a += [a[-1] if a else 0] * (width - len(a))
    b += [b[-1] if b else 0] * (width - len(b))
    return all(x >= y for x, y in zip(a, b))


def tabloid_dimension(mu: Partition) -> int:
    """dim M^μ = n!/(μ₁!⋯μ_k!)."""
    return factorial(sum(mu)) // prod(factorial(p) for p in mu)


# -- text forms -------------------------------------------------------------

def format_seq(seq: Iterable[int]) -> str:
    return "[" + ",".join(str(x) for x in seq) + "]"


def format_roots(roots: Iterable[int]) -> str:
    return format_seq(sorted(roots))


def parse_seq(text: str) -> tuple[int, ...]:
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    if not body.strip():
        return ()
    try:
        return tuple(int(tok) for tok in body.split(","))
    except ValueError as exc:
        raise ValueError(f"cannot parse integer list from {text!r}") from exc


def parse_partition(text: str) -> Partition:
    return as_partition(parse_seq(text))


def parse_perm(text: str) -> Perm:
    return as_perm(parse_seq(text))
