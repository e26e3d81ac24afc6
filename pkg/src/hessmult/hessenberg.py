"""Hessenberg functions and the root/graph data they determine.

A Hessenberg function ``h`` on ``[n]`` fixes the negative roots
``Φ_h^- = {(i, j) : i > j, i <= h(j)}``, their complement ``I_h`` in ``Φ^-``
(an ideal), and the incomparability graph ``Γ_h`` whose edges ``{j, i}``
correspond one-to-one with ``Φ_h^-``.  Sink sets of acyclic orientations of
``Γ_h`` are exactly its independent sets.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property

from .combinat import DEFAULT_CAP, RootPair, check_cap, parse_seq


@dataclass(frozen=True)
class HessFunction:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        n = len(vals)
        for i, v in enumerate(vals, 1):
            if not i <= v <= n:
                raise ValueError(f"h({i})={v} must lie in [{i}, {n}]")
        for i in range(1, n):
            if vals[i] < vals[i - 1]:
                raise ValueError(f"h is not nondecreasing at position {i + 1}")

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        return self.values[i - 1]

    def __str__(self) -> str:
        return ",".join(map(str, self.values))

    def __repr__(self) -> str:
        return f"HessFunction(({str(self)}))"

    def __lt__(self, other: "HessFunction") -> bool:
        return (self.n, self.values) < (other.n, other.values)

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i in range(1, self.n + 1)
                         for j in range(i + 1, self(i) + 1))

    @cached_property
    def dimension(self) -> int:
        """|Φ_h^-| = Σ (h(i) - i), the top cohomological degree."""
        return sum(v - i for i, v in enumerate(self.values, 1))


def parse_hess(text: str) -> HessFunction:
    values = parse_seq(text)
    if not values:
        raise ValueError("empty Hessenberg function")
    return HessFunction(values)


def minimal_hess(n: int) -> HessFunction:
    return HessFunction(tuple(range(1, n + 1)))


def full_hess(n: int) -> HessFunction:
    return HessFunction((n,) * n)


def enumerate_hess(n: int, cap: int | None = DEFAULT_CAP) -> Iterator[HessFunction]:
    """All Hessenberg functions on [n] in lexicographic order (Catalan(n) many)."""
    check_cap(n, cap)

    def extend(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        i = len(prefix) + 1
        if i > n:
            yield tuple(prefix)
            return
        low = max(i, prefix[-1] if prefix else 1)
        for v in range(low, n + 1):
            prefix.append(v)
            yield from extend(prefix)
            prefix.pop()

    return (HessFunction(v) for v in extend([]))


# -- roots and the ideal ----------------------------------------------------

def negative_roots(n: int) -> set[RootPair]:
    return {(i, j) for i in range(2, n + 1) for j in range(1, i)}


def phi_h_minus(h: HessFunction) -> set[RootPair]:
    return {(i, j) for (j, i) in h.edges}


def in_phi_h(h: HessFunction, root: RootPair) -> bool:
    """Membership in Φ_h = Φ^+ ⊔ Φ_h^-."""
    i, j = root
    return i < j or i <= h(j)


def _root_sum(a: RootPair, b: RootPair) -> RootPair | None:
    if a[1] == b[0]:
        s = (a[0], b[1])
    elif b[1] == a[0]:
        s = (b[0], a[1])
    else:
        return None
    return s if s[0] != s[1] else None


def is_ideal(roots: set[RootPair], n: int) -> bool:
    for a in roots:
        for b in negative_roots(n):
            s = _root_sum(a, b)
            if s is not None and s[0] > s[1] and s not in roots:
                return False
    return True


@dataclass(frozen=True)
class IdealSeries:
    ideal: frozenset[RootPair]
    series: tuple[frozenset[RootPair], ...]

    @property
    def height(self) -> int:
        return len(self.series)


def lower_central_series(ideal: Iterable[RootPair]) -> IdealSeries:
    """I_1 = I and I_j = {γ + β : γ ∈ I, β ∈ I_{j-1}} ∩ Φ^-, nonempty terms only."""
    base = frozenset(ideal)
    series = []
    term = base
    while term:
        series.append(term)
        nxt = set()
        for a in base:
            for b in term:
                s = _root_sum(a, b)
                if s is not None and s[0] > s[1]:
                    nxt.add(s)
        term = frozenset(nxt)
    return IdealSeries(base, tuple(series))


def ideal_of(h: HessFunction) -> IdealSeries:
    return lower_central_series(negative_roots(h.n) - phi_h_minus(h))


def height(h: HessFunction) -> int:
    return ideal_of(h).height


def inv_h(w: Sequence[int], h: HessFunction) -> set[RootPair]:
    if len(w) != h.n:
        raise ValueError(f"permutation has {len(w)} letters but h is on [{h.n}]")
    return {(i, j) for (j, i) in h.edges if w[i - 1] < w[j - 1]}


def count_inv_h(w: Sequence[int], h: HessFunction) -> int:
    return sum(1 for (j, i) in h.edges if w[i - 1] < w[j - 1])


# -- incomparability graph and sink sets ------------------------------------

@dataclass(frozen=True)
class IncompGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}


def incomparability_graph(h: HessFunction) -> IncompGraph:
    return IncompGraph(h.n, h.edges)


@dataclass(frozen=True)
class SinkSet:
    vertices: tuple[int, ...]
    degree: int

    def to_json(self) -> dict:
        return {"T": list(self.vertices), "deg": self.degree}


def is_independent(h: HessFunction, vertices: Iterable[int]) -> bool:
    vs = sorted(vertices)
    # nondecreasing h: consecutive members suffice
    return all(h(a) < b for a, b in zip(vs, vs[1:]))


def deg_of_sink_set(h: HessFunction, T: Iterable[int]) -> int:
    """Number of edges ``{a, b}``, ``a < b``, whose larger endpoint lies in T."""
    T = set(T)
    if not is_independent(h, T):
        raise ValueError(f"{sorted(T)} is not independent in the incomparability graph of h=({h})")
    return sum(1 for (_, b) in h.edges if b in T)


def _independent_sets(h: HessFunction, k: int) -> Iterator[tuple[int, ...]]:
    n = h.n

    def grow(chosen: list[int], start: int) -> Iterator[tuple[int, ...]]:
        if len(chosen) == k:
            yield tuple(chosen)
            return
        # prune: each later vertex sits at least one past the previous h-value
        for v in range(start, n + 1):
            if n - v + 1 < k - len(chosen):
                break
            chosen.append(v)
            yield from grow(chosen, h(v) + 1)
            chosen.pop()

    yield from grow([], 1)


def sink_sets(h: HessFunction, k: int) -> list[SinkSet]:
    """SK_k(Γ_h): every independent set of size k, lexicographically sorted."""
    if k < 1:
        raise ValueError("sink-set size must be at least 1")
    return [SinkSet(T, deg_of_sink_set(h, T)) for T in _independent_sets(h, k)]


def max_sink_size(h: HessFunction) -> int:
    # greedy leftmost choice is optimal for interval-type graphs
    size, v = 0, 1
    while v <= h.n:
        size += 1
        v = h(v) + 1
    return size


def delete_sink_set(h: HessFunction, T: Iterable[int]) -> tuple[HessFunction, dict[int, int]]:
    """Return ``(h[T], f_T)`` where f_T relabels ``[n] - T`` onto ``[n - |T|]``."""
    T = sorted(set(T))
    if not is_independent(h, T):
        raise ValueError(f"{T} is not independent in the incomparability graph of h=({h})")
    Tset = set(T)
    kept = [v for v in range(1, h.n + 1) if v not in Tset]
    relabel = {v: idx for idx, v in enumerate(kept, 1)}
    top = {relabel[v]: relabel[v] for v in kept}
    for a, b in h.edges:
        if a in relabel and b in relabel:
            top[relabel[a]] = max(top[relabel[a]], relabel[b])
    return HessFunction(tuple(top[a] for a in range(1, len(kept) + 1))), relabel


def sink_set_to_roots(T: Sequence[int]) -> frozenset[RootPair]:
    """R_T = {t_{ℓ_{i+1}} - t_{ℓ_i}}: the chain of consecutive differences."""
    vs = list(T)
    if vs != sorted(vs):
        raise ValueError("sink set must be sorted")
    return frozenset((b, a) for a, b in zip(vs, vs[1:]))


def height_subsets(ideal: Iterable[RootPair], k: int, n: int) -> list[frozenset[RootPair]]:
    """All chains {t_{q2}-t_{q1}, …, t_{q_{k+1}}-t_{q_k}} ⊆ I with q1 < ⋯ < q_{k+1}."""
    ideal = set(ideal)
    out: set[frozenset[RootPair]] = set()
    for qs in itertools.combinations(range(1, n + 1), k + 1):
        chain = frozenset((b, a) for a, b in zip(qs, qs[1:]))
        if chain <= ideal:
            out.add(chain)
    return sorted(out, key=sorted)


def max_chain_length(ideal: Iterable[RootPair], n: int) -> int:
    """max |R| over R(I), by longest path in the DAG of ideal roots."""
    ideal = set(ideal)
    if not ideal:
        return 0
    best = {q: 0 for q in range(1, n + 1)}
    for q in range(1, n + 1):
        for p in range(1, q):
            if (q, p) in ideal:
                best[q] = max(best[q], best[p] + 1)
    return max(best.values())
