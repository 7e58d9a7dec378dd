"""Decoding, feasibility checks, exact oracles and solution-quality metrics."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from ._validation import ResourceError, ValidationError, bits_to_str, check_bits
from .formulation import edge_list
from .instance import VrpInstance
from .qubo import Qubo
from .simulator import SampleCounts, index_to_bits

EXACT_QUBO_CAP = 24
EXACT_VRP_MAX_NODES = 8


@dataclass(frozen=True)
class RouteSet:
    routes: tuple  # each route is a node tuple (0, ..., 0)
    cost: float

    def canonical(self) -> tuple:
        return tuple(sorted(self.routes))

    def __str__(self):
        parts = ["->".join(str(v) for v in r) for r in self.canonical()]
        return f"{', '.join(parts)} (cost {self.cost:.3f})"


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    violations: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class Decoded:
    edges: tuple
    verdict: FeasibilityVerdict
    routes: RouteSet | None

    @property
    def feasible(self) -> bool:
        return self.verdict.feasible

    # allow ``edges, verdict, routes = decode(...)``
    def __iter__(self):
        return iter((self.edges, self.verdict, self.routes))


def route_cost(route, weights) -> float:
    return float(sum(weights[a, b] for a, b in zip(route, route[1:])))


def _customer_cycles(n: int, succ: dict) -> list:
    """Strongly connected customer groups of size >= 2 (directed cycles avoiding the depot)."""
    reach = {}
    for s in range(1, n):
        seen, stack = set(), [s]
        while stack:
            u = stack.pop()
            for v in succ.get(u, ()):
                if v != 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        reach[s] = seen
    groups, assigned = [], set()
    for s in range(1, n):
        if s in assigned:
            continue
        comp = {s} | {t for t in reach[s] if s in reach[t]}
        assigned |= comp
        if len(comp) >= 2:
            groups.append(tuple(sorted(comp)))
    return groups


def decode(bits, instance: VrpInstance) -> Decoded:
    """Map edge bits (canonical order) to a feasibility verdict and, if feasible, routes."""
    n, k = instance.n, instance.k
    edges_all = edge_list(n)
    x = check_bits(bits, len(edges_all))
    edges = tuple(e for e, b in zip(edges_all, x) if b)
    succ, out_deg, in_deg = {}, np.zeros(n, int), np.zeros(n, int)
    for i, j in edges:
        succ.setdefault(i, []).append(j)
        out_deg[i] += 1
        in_deg[j] += 1

    violations = []
    for i in range(1, n):
        if out_deg[i] != 1:
            violations.append(f"OUT_DEGREE({i})")
        if in_deg[i] != 1:
            violations.append(f"IN_DEGREE({i})")
    if out_deg[0] != k:
        violations.append("DEPOT_OUT")
    if in_deg[0] != k:
        violations.append("DEPOT_IN")
    for group in _customer_cycles(n, succ):
        violations.append("SUBTOUR({" + ",".join(map(str, group)) + "})")

    verdict = FeasibilityVerdict(not violations, tuple(violations))
    routes = None
    if verdict.feasible:
        walked = []
        for start in sorted(succ.get(0, ())):
            route = [0, start]
            while route[-1] != 0:
                route.append(succ[route[-1]][0])
            walked.append(tuple(route))
        routes = RouteSet(tuple(walked), sum(route_cost(r, instance.weights) for r in walked))
    return Decoded(edges, verdict, routes)


def encode(routes: RouteSet, n: int) -> str:
    """Edge bitstring (canonical order) for a route set."""
    used = {(a, b) for r in routes.routes for a, b in zip(r, r[1:])}
    return bits_to_str((i, j) in used for i, j in edge_list(n))


def exact_qubo_min(qubo: Qubo) -> tuple:
    """Exhaustive minimum; ties go to the lexicographically smallest bitstring."""
    n = qubo.num_variables
    if n > EXACT_QUBO_CAP:
        raise ResourceError(f"{n} variables exceeds the exhaustive-search cap of {EXACT_QUBO_CAP}")
    energies = qubo.energies()
    best = energies.min()
    candidates = [index_to_bits(int(i), n) for i in np.flatnonzero(energies == best)]
    return min(candidates), float(best)


def _compositions(total: int, parts: int):
    """Cut positions splitting ``total`` items into ``parts`` nonempty consecutive runs."""
    for cuts in combinations(range(1, total), parts - 1):
        yield (0,) + cuts + (total,)


def exact_vrp(instance: VrpInstance) -> RouteSet:
    """Brute-force optimum over all ways to split customers into k ordered routes."""
    n, k, w = instance.n, instance.k, instance.weights
    if n > EXACT_VRP_MAX_NODES:
        raise ResourceError(f"exact enumeration supports at most {EXACT_VRP_MAX_NODES} nodes, got {n}")
    best = None
    for perm in permutations(range(1, n)):
        for bounds in _compositions(n - 1, k):
            routes = tuple((0,) + perm[a:b] + (0,) for a, b in zip(bounds, bounds[1:]))
            cost = sum(route_cost(r, w) for r in routes)
            if best is None or cost < best.cost:
                best = RouteSet(routes, cost)
    return best


def optimum_bitstring(instance: VrpInstance) -> str:
    return encode(exact_vrp(instance), instance.n)


def top_bitstrings(counts: SampleCounts, top_k: int) -> list:
    return [b for b, _ in counts.ordered()[:top_k]]


def feasibility_ratio(counts: SampleCounts, instance: VrpInstance, top_k: int = 1000, weighted: bool = False) -> float:
    """Feasible fraction of the ``top_k`` most frequent distinct bitstrings.

    Only the leading edge bits are decoded; slack bits are ignored. With
    ``weighted=True`` the fraction is taken over shot mass instead.
    """
    if top_k < 1:
        raise ValidationError("top_k must be >= 1")
    m = instance.n * (instance.n - 1)
    top = counts.ordered()[:top_k]
    if not top:
        return 0.0
    flags = [decode(b[:m], instance).feasible for b, _ in top]
    if weighted:
        mass = sum(c for _, c in top)
        return sum(c for (_, c), f in zip(top, flags) if f) / mass
    return sum(flags) / len(flags)


def optimum_rank(counts: SampleCounts, optimum_edges: str) -> int | None:
    """1-based rank of the first sampled bitstring whose edge bits equal ``optimum_edges``."""
    m = len(optimum_edges)
    for rank, (b, _) in enumerate(counts.ordered(), start=1):
        if b[:m] == optimum_edges:
            return rank
    return None


def approximation_ratio(expectation: float, optimum: float) -> float:
    if optimum == 0:
        raise ValidationError("approximation ratio is undefined for a zero optimum")
    return expectation / optimum


SWEEP_COLUMNS = ("multiplier", "normalized", "seed", "feasibility_ratio", "expectation", "optimum_rank", "wall_ms")


@dataclass(frozen=True)
class SweepRecord:
    multiplier: float
    normalized: bool
    seed: int
    feasibility_ratio: float
    expectation: float
    optimum_rank: int | None
    wall_ms: float


def penalty_sweep(
    instance: VrpInstance,
    multipliers,
    normalize_options=(False, True),
    p: int = 2,
    shots: int = 10_000,
    seeds=(0, 1, 2),
    budget: int = 300,
    restarts: int = 3,
    top_k: int = 1000,
    weighted: bool = False,
) -> list:
    """Solve once per (multiplier, normalize, seed) and record solution-quality metrics."""
    from sklearn.base import clone
    from sklearn.model_selection import ParameterGrid

    from .estimator import QAOARouter

    base = QAOARouter(p=p, shots=shots, budget=budget, restarts=restarts, top_k=top_k)
    grid = ParameterGrid(
        {"multiplier": list(multipliers), "normalize": list(normalize_options), "seed": list(seeds)}
    )
    records = []
    for params in grid:
        est = clone(base).set_params(**params).fit(instance)
        rep = est.report_
        ratio = feasibility_ratio(rep.counts, instance, top_k, weighted=weighted)
        records.append(
            SweepRecord(
                multiplier=float(params["multiplier"]),
                normalized=bool(params["normalize"]),
                seed=int(params["seed"]),
                feasibility_ratio=ratio,
                expectation=rep.expectation,
                optimum_rank=rep.optimum_rank,
                wall_ms=rep.wall_time * 1000.0,
            )
        )
    return records


def sweep_to_table(records) -> str:
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, bool):
            return str(v).lower()
        return repr(v) if isinstance(v, float) else str(v)

    lines = [",".join(SWEEP_COLUMNS)]
    lines += [",".join(cell(getattr(r, c)) for c in SWEEP_COLUMNS) for r in records]
    return "\n".join(lines) + "\n"
