"""Exhaustive verification of the counting identities behind A·X_i = W_i.

Every check evaluates both sides of an identity from independently computed
counts and records a concrete witness on failure.  All identities except
non-negativity are theorems, so a failure there is an implementation bug
(``IMPL-BUG``); a negative coefficient is reported as ``MATH-ALERT``.
"""
from __future__ import annotations

import itertools
import time
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .combinat import (
    DEFAULT_CAP, Partition, check_cap, enumerate_partitions, j_set, root_mask, simple_roots,
)
from .hessenberg import HessFunction, enumerate_hess, height, sink_sets
from .sink import inductive_terms, psi_report, sink_table
from .solver import (
    MultTable, betti_regular, d_count, descent_histogram, hess_histogram, solve,
    triangularity_witness, a_matrix, w_count, w_table,
)

IMPL_BUG = "IMPL-BUG"
MATH_ALERT = "MATH-ALERT"


def dim_fixed(mu: Partition, I: Iterable[int]) -> int:
    """dim (M^μ)^{S_I}: permutations with Des_L ⊆ Δ∖I and Des_R ⊆ Δ∖J_μ."""
    n = sum(mu)
    I = frozenset(I)
    if not I <= simple_roots(n):
        raise ValueError(f"{sorted(I)} is not a subset of the simple roots 1..{n - 1}")
    i_mask, j_mask = root_mask(I), root_mask(j_set(mu))
    return sum(c for (left, right), c in descent_histogram(n).items()
               if not left & i_mask and not right & j_mask)


@dataclass
class FixedDimTable:
    n: int
    entries: dict[tuple[Partition, frozenset[int]], int]


def fixed_dim_table(n: int) -> FixedDimTable:
    entries = {(mu, I): dim_fixed(mu, I)
               for mu in enumerate_partitions(n, cap=None) for I in subsets(simple_roots(n))}
    return FixedDimTable(n, entries)


def subsets(ground: Iterable[int]) -> list[frozenset[int]]:
    items = sorted(ground)
    return [frozenset(c) for r in range(len(items) + 1)
            for c in itertools.combinations(items, r)]


def supersets(J: frozenset[int], n: int) -> list[frozenset[int]]:
    return [J | extra for extra in subsets(simple_roots(n) - J)]


# -- brute-force oracles ----------------------------------------------------

def count_tabloids(mu: Partition) -> int:
    """Row-tabloids of shape μ, enumerated as distinct row-label words."""
    labels = [row for row, size in enumerate(mu) for _ in range(size)]
    return len(set(itertools.permutations(labels)))


def orientation_sink_degrees(h: HessFunction, exact: bool = True) -> dict[tuple[int, ...], int]:
    """min |asc(ω)| over acyclic orientations ω, keyed by sink set.

    With ``exact`` the key is sk(ω) itself; otherwise every nonempty subset
    of sk(ω) is credited, i.e. the minimum runs over ω with T ⊆ sk(ω).
    Brute force over all 2^|E| orientations; only for small graphs.
    """
    edges = sorted(h.edges)
    n = h.n
    best: dict[tuple[int, ...], int] = {}
    for bits in itertools.product((0, 1), repeat=len(edges)):
        # bit 1: edge (a, b) with a < b points a -> b (an ascent)
        out = {v: [] for v in range(1, n + 1)}
        for (a, b), up in zip(edges, bits):
            src, tgt = (a, b) if up else (b, a)
            out[src].append(tgt)
        if not _is_acyclic(out):
            continue
        sinks = tuple(v for v in range(1, n + 1) if not out[v])
        asc = sum(bits)
        keys = [sinks] if exact else [
            T for r in range(1, len(sinks) + 1) for T in itertools.combinations(sinks, r)]
        for T in keys:
            if T not in best or asc < best[T]:
                best[T] = asc
    return best


def _is_acyclic(out: dict[int, list[int]]) -> bool:
    state: dict[int, int] = {}

    def visit(v: int) -> bool:
        state[v] = 1
        for u in out[v]:
            s = state.get(u, 0)
            if s == 1 or (s == 0 and not visit(u)):
                return False
        state[v] = 2
        return True

    return all(state.get(v) == 2 or visit(v) for v in out)


# -- checks -----------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    params: dict
    passed: bool
    witness: dict | None = None
    severity: str = "ok"

    def to_json(self) -> dict:
        return {"check": self.name, "params": self.params, "passed": self.passed,
                "witness": self.witness, "severity": self.severity}


@dataclass
class MobiusCheck:
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


def check_mobius_w(h: HessFunction, J: Iterable[int], i: int) -> MobiusCheck:
    """|W_i(J,h)| against the alternating sum of regular Betti numbers over I ⊇ J."""
    J = frozenset(J)
    rhs = 0
    for I in supersets(J, h.n):
        b = betti_regular(I, h)
        rhs += (-1) ** (len(I) - len(J)) * (b[i] if i < len(b) else 0)
    return MobiusCheck(w_count(J, h, i), rhs)


def check_mobius_d(mu: Partition, J: Iterable[int]) -> MobiusCheck:
    """|D(J, J_μ)| against the alternating sum of fixed-space dimensions over I ⊇ J."""
    J = frozenset(J)
    n = sum(mu)
    rhs = sum((-1) ** (len(I) - len(J)) * dim_fixed(mu, I) for I in supersets(J, n))
    return MobiusCheck(d_count(J, j_set(mu), n), rhs)


def _fail(name: str, params: dict, witness: dict, severity: str = IMPL_BUG) -> CheckResult:
    return CheckResult(name, params, False, witness, severity)


def _degrees(h: HessFunction) -> range:
    return range(h.dimension + 1)


def check_linear_relations(h: HessFunction, table: MultTable) -> CheckResult:
    n = h.n
    mus = table.order
    for J in subsets(simple_roots(n)):
        d = [d_count(J, j_set(mu), n) for mu in mus]
        for i in _degrees(h):
            lhs = w_count(J, h, i)
            rhs = sum(table.c(mu, i) * dj for mu, dj in zip(mus, d))
            if lhs != rhs:
                return _fail("linear-relations", {}, {"J": sorted(J), "i": i, "lhs": lhs, "rhs": rhs})
    return CheckResult("linear-relations", {}, True)


def check_ungraded(h: HessFunction, table: MultTable) -> CheckResult:
    n = h.n
    hist = hess_histogram(h)
    totals = {mu: sum(table.by_degree(mu)) for mu in table.order}
    for J in subsets(simple_roots(n)):
        mask = root_mask(J)
        lhs = sum(c for (m, _), c in hist.items() if m == mask)
        rhs = sum(totals[mu] * d_count(J, j_set(mu), n) for mu in table.order)
        if lhs != rhs:
            return _fail("ungraded", {}, {"J": sorted(J), "lhs": lhs, "rhs": rhs})
    return CheckResult("ungraded", {}, True)


def check_mobius(h: HessFunction, table: MultTable | None = None) -> CheckResult:
    for J in subsets(simple_roots(h.n)):
        for i in _degrees(h):
            res = check_mobius_w(h, J, i)
            if not res.passed:
                return _fail("mobius", {}, {"J": sorted(J), "i": i, "lhs": res.lhs, "rhs": res.rhs})
    return CheckResult("mobius", {}, True)


def check_betti_identity(h: HessFunction, table: MultTable | None = None) -> CheckResult:
    """Σ_μ c_{μ,i}·dim (M^μ)^{S_J} against the regular Betti numbers for every J, i."""
    table = table or solve(h, cap=None)
    for J in subsets(simple_roots(h.n)):
        b = betti_regular(J, h)
        fixed = {mu: dim_fixed(mu, J) for mu in table.order}
        for i in _degrees(h):
            lhs = sum(table.c(mu, i) * fixed[mu] for mu in table.order)
            if lhs != b[i]:
                return _fail("betti-identity", {}, {"J": sorted(J), "i": i, "lhs": lhs, "rhs": b[i]})
    return CheckResult("betti-identity", {}, True)


def check_vanishing(h: HessFunction, table: MultTable) -> CheckResult:
    k = table.height + 1
    for (mu, i), v in sorted(table.coeffs.items()):
        if len(mu) > k and v != 0:
            return _fail("vanishing", {"max_parts": k}, {"mu": list(mu), "i": i, "c": v})
    return CheckResult("vanishing", {"max_parts": k}, True)


def check_nonnegativity(h: HessFunction, table: MultTable) -> CheckResult:
    bad = table.negative_entries()
    if bad:
        mu, i, v = bad[0]
        return _fail("nonnegativity", {}, {"mu": list(mu), "i": i, "c": v,
                                           "all": [[list(m), d, c] for m, d, c in bad]},
                     MATH_ALERT)
    return CheckResult("nonnegativity", {}, True)


def check_sink_decomposition(h: HessFunction, table: MultTable | None = None) -> CheckResult:
    """Σ_T |W_i(𝕁_λ,h,T)| = |W_i(𝕁_λ,h)| for every λ (any number of parts)."""
    sk = sink_table(h)
    plain = w_table(h)
    valid = {k: {s.vertices for s in sink_sets(h, k)} for k in range(1, h.n + 1)}
    split: dict[tuple[Partition, int], int] = {}
    for (lam, T, i), c in sk.items():
        if T is None or T not in valid[len(lam)]:
            return _fail("sink-decomposition", {}, {"lambda": list(lam), "i": i,
                                                    "unassigned": c})
        split[(lam, i)] = split.get((lam, i), 0) + c
    if split != {key: c for key, c in plain.items() if c}:
        diff = sorted(set(split.items()) ^ set(plain.items()))[0]
        return _fail("sink-decomposition", {}, {"lambda": list(diff[0][0]), "i": diff[0][1]})
    return CheckResult("sink-decomposition", {}, True)


def check_psi_bijection(h: HessFunction, table: MultTable | None = None) -> CheckResult:
    k = height(h) + 1
    for lam in enumerate_partitions(h.n, cap=None):
        if len(lam) != k:
            continue
        for s in sink_sets(h, k):
            rep = psi_report(lam, h, s.vertices)
            if not rep.bijection_verified:
                return _fail("psi-bijection", {}, {"lambda": list(lam), **rep.to_json()})
    return CheckResult("psi-bijection", {}, True)


def check_inductive_formula(h: HessFunction, table: MultTable) -> CheckResult:
    k = table.height + 1
    for mu in table.order:
        if len(mu) != k:
            continue
        terms = inductive_terms(h, mu)
        for i in _degrees(h):
            induced = sum(t.by_degree[i] for t in terms)
            if induced != table.c(mu, i):
                return _fail("inductive-formula", {}, {"mu": list(mu), "i": i,
                                                       "inductive": induced, "solve": table.c(mu, i)})
    return CheckResult("inductive-formula", {}, True)


H_CHECKS: dict[str, Callable[[HessFunction, MultTable], CheckResult]] = {
    "linear-relations": check_linear_relations,
    "ungraded": check_ungraded,
    "mobius": check_mobius,
    "betti-identity": check_betti_identity,
    "vanishing": check_vanishing,
    "nonnegativity": check_nonnegativity,
    "sink-decomposition": check_sink_decomposition,
    "psi-bijection": check_psi_bijection,
    "inductive-formula": check_inductive_formula,
}
N_CHECKS = ("triangularity", "mobius-d")
ALL_CHECKS = N_CHECKS + tuple(H_CHECKS)


def default_checks(n: int) -> tuple[str, ...]:
    cheap = ("triangularity", "vanishing", "nonnegativity", "betti-identity")
    if n <= 5:
        return ALL_CHECKS
    if n <= 6:
        return cheap + ("linear-relations", "sink-decomposition", "psi-bijection",
                        "inductive-formula")
    return cheap


def check_triangularity(n: int) -> CheckResult:
    bad = triangularity_witness(a_matrix(n, cap=None))
    if bad:
        lam, mu, v = bad
        return _fail("triangularity", {"n": n}, {"lambda": list(lam), "mu": list(mu), "A": v})
    return CheckResult("triangularity", {"n": n}, True)


def check_mobius_d_all(n: int) -> CheckResult:
    for mu in enumerate_partitions(n, cap=None):
        for J in subsets(simple_roots(n)):
            res = check_mobius_d(mu, J)
            if not res.passed:
                return _fail("mobius-d", {"n": n}, {"mu": list(mu), "J": sorted(J),
                                                    "lhs": res.lhs, "rhs": res.rhs})
    return CheckResult("mobius-d", {"n": n}, True)


# -- reports and scans ------------------------------------------------------

@dataclass
class VerificationReport:
    n: int
    h: HessFunction | None
    checks: list[CheckResult] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def math_alerts(self) -> list[CheckResult]:
        return [c for c in self.checks if c.severity == MATH_ALERT]

    @property
    def impl_bugs(self) -> list[CheckResult]:
        return [c for c in self.checks if c.severity == IMPL_BUG]

    def to_json(self) -> dict:
        return {"n": self.n, "h": list(self.h.values) if self.h else None,
                "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def verify_h(h: HessFunction, checks: Iterable[str] | None = None) -> VerificationReport:
    start = time.perf_counter()
    names = [c for c in (checks or default_checks(h.n)) if c in H_CHECKS]
    table = solve(h, cap=None)
    results = [H_CHECKS[name](h, table) for name in names]
    return VerificationReport(h.n, h, results, time.perf_counter() - start)


def verify_n(n: int, checks: Iterable[str] | None = None) -> VerificationReport:
    start = time.perf_counter()
    names = list(checks or default_checks(n))
    results = []
    if "triangularity" in names:
        results.append(check_triangularity(n))
    if "mobius-d" in names:
        results.append(check_mobius_d_all(n))
    return VerificationReport(n, None, results, time.perf_counter() - start)


def _verify_values(values: tuple[int, ...], checks: tuple[str, ...]) -> VerificationReport:
    return verify_h(HessFunction(values), checks)


def scan(n: int, checks: Iterable[str] | None = None, jobs: int = 1,
         cap: int | None = DEFAULT_CAP) -> Iterator[VerificationReport]:
    """Yield the n-level report, then one report per h in lexicographic order."""
    check_cap(n, cap)
    names = tuple(checks or default_checks(n))
    unknown = set(names) - set(ALL_CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    yield verify_n(n, names)
    hs = [h.values for h in enumerate_hess(n, cap=None)]
    if jobs > 1 and len(hs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            yield from pool.map(_verify_values, hs, [names] * len(hs))
    else:
        for values in hs:
            yield _verify_values(values, names)


def summarize(n: int, reports: Iterable[VerificationReport]) -> dict:
    total = passed = 0
    n_level_passed = True
    failed_h: list[list[int]] = []
    alerts = []
    for rep in reports:
        if rep.h is None:
            n_level_passed = n_level_passed and rep.passed
            continue
        total += 1
        if rep.passed:
            passed += 1
        else:
            failed_h.append(list(rep.h.values))
        alerts.extend({"h": list(rep.h.values), **c.witness} for c in rep.math_alerts)
    return {"n": n, "total": total, "passed": passed, "failed": total - passed,
            "failed_h": failed_h, "n_level_passed": n_level_passed, "math_alerts": alerts}
