"""Logical resource estimates for QAOA circuits on all-to-all hardware."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._validation import ValidationError, check_count
from .formulation import build_edge_model, build_time_expanded_model, enumerate_subtour_subsets
from .instance import generate_random
from .ising import IsingHamiltonian, to_ising
from .qubo import default_penalty, to_qubo

DEVICE_QUBITS = 127
FORMULATIONS = ("edge", "time_expanded", "route_count_only")


@dataclass(frozen=True)
class ResourceEstimate:
    qubits: int
    rz_count: int
    rx_count: int
    cnot_count: int
    h_count: int
    two_qubit_depth: int
    p: int


def logical_gate_counts(H: IsingHamiltonian, p: int) -> ResourceEstimate:
    """Gate totals: one Rz per Z term, CNOT-Rz-CNOT per ZZ term, n Rx per mixer, n H up front."""
    p = check_count(p, "p", 1)
    nz, nzz = len(H.z_terms), len(H.zz_terms)
    return ResourceEstimate(
        qubits=H.n,
        rz_count=p * (nz + nzz),
        rx_count=p * H.n,
        cnot_count=p * 2 * nzz,
        h_count=H.n,
        two_qubit_depth=two_qubit_depth(H, p),
        p=p,
    )


def greedy_edge_coloring(edges) -> dict:
    """Colour edges in descending endpoint-degree order with the smallest free colour."""
    edges = [tuple(sorted(e)) for e in edges]
    deg = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    order = sorted(edges, key=lambda e: (-(deg[e[0]] + deg[e[1]]), e))
    used = {}
    coloring = {}
    for u, v in order:
        taken = used.get(u, set()) | used.get(v, set())
        c = next(c for c in range(len(edges) + 1) if c not in taken)
        coloring[(u, v)] = c
        used.setdefault(u, set()).add(c)
        used.setdefault(v, set()).add(c)
    return coloring


def misra_gries_edge_coloring(edges) -> dict:
    """Proper edge colouring with at most max_degree + 1 colours."""
    edges = sorted(tuple(sorted(e)) for e in edges)
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    delta = max((len(s) for s in adj.values()), default=0)
    palette = range(delta + 1)
    color = {}
    at = {x: {} for x in adj}  # node -> {colour: neighbour}

    def key(a, b):
        return (a, b) if a < b else (b, a)

    def paint(a, b, c):
        color[key(a, b)] = c
        at[a][c] = b
        at[b][c] = a

    def scrape(a, b):
        c = color.pop(key(a, b))
        del at[a][c]
        del at[b][c]
        return c

    def free(x):
        return next(c for c in palette if c not in at[x])

    for u, v in edges:
        fan = [v]
        grown = True
        while grown:
            grown = False
            for w in sorted(adj[u]):
                c = color.get(key(u, w))
                if w not in fan and c is not None and c not in at[fan[-1]]:
                    fan.append(w)
                    grown = True
                    break
        c, d = free(u), free(fan[-1])
        if c != d:
            # invert the cd-path starting at u
            path, x, want = [u], u, d
            while want in at[x]:
                x = at[x][want]
                path.append(x)
                want = c if want == d else d
            steps = list(zip(path, path[1:]))
            old = [scrape(a, b) for a, b in steps]
            for (a, b), col in zip(steps, old):
                paint(a, b, c if col == d else d)
        for idx, w in enumerate(fan):
            prefix_ok = all(color.get(key(u, fan[j])) not in at[fan[j - 1]] for j in range(1, idx + 1))
            if prefix_ok and d not in at[w]:
                break
        for j in range(idx):
            paint(u, fan[j], scrape(u, fan[j + 1]))
        paint(u, fan[idx], d)
    return color


def edge_coloring(edges) -> dict:
    """Greedy colouring, replaced by Misra-Gries if greedy needs more than max_degree + 1."""
    edges = list(edges)
    coloring = greedy_edge_coloring(edges)
    deg = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    delta = max(deg.values(), default=0)
    if len(set(coloring.values())) > delta + 1:
        coloring = misra_gries_edge_coloring(edges)
    return coloring


def two_qubit_depth(H: IsingHamiltonian, p: int) -> int:
    """Two-qubit depth: each colour class of ZZ gadgets runs in parallel, two CNOTs deep."""
    p = check_count(p, "p", 1)
    colors = len(set(edge_coloring(H.zz_terms).values()))
    return p * 2 * colors


def qubit_requirements(formulation: str, n: int, k: int, T: int | None = None) -> int:
    """Qubits needed by a formulation (closed form, nothing is built).

    ``route_count_only`` returns the number of candidate routes, n!, one qubit each.
    """
    if formulation == "edge":
        extra = sum(math.ceil(math.log2(len(s))) for s in enumerate_subtour_subsets(n) if len(s) >= 3)
        return n * (n - 1) + extra
    if formulation == "time_expanded":
        if T is None:
            raise ValidationError("time_expanded requires T")
        return n * T * k
    if formulation == "route_count_only":
        return math.factorial(n)
    raise ValidationError(f"unknown formulation {formulation!r}")


def formulation_hamiltonian(formulation: str, n: int, k: int, T: int | None = None, seed: int = 0):
    instance = generate_random(n, k, seed)
    if formulation == "edge":
        program = build_edge_model(instance)
    elif formulation == "time_expanded":
        program = build_time_expanded_model(instance, T)
    else:
        raise ValidationError(f"formulation {formulation!r} cannot be built")
    return to_ising(to_qubo(program, default_penalty(instance)))


@dataclass(frozen=True)
class ScalingFit:
    verdict: str
    quadratic_mse: float
    exponential_mse: float
    quadratic_coef: tuple
    exponential_coef: tuple


def _fit_quadratic(x, y):
    return np.polyfit(x, y, 2)


def _fit_exponential(x, y):
    slope, intercept = np.polyfit(x, np.log(y), 1)
    return np.exp(intercept), slope


def scaling_fit(sizes, values) -> ScalingFit:
    """Compare c0 + c1 n + c2 n^2 against a exp(b n) by leave-one-out prediction error."""
    x = np.asarray(sizes, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.shape != y.shape or x.size < 4:
        raise ValidationError("need at least four (size, value) points")
    if np.any(y <= 0):
        raise ValidationError("values must be positive")
    if np.unique(x).size < 3:
        raise ValidationError("sizes are degenerate")
    errs_q, errs_e = [], []
    for i in range(x.size):
        keep = np.arange(x.size) != i
        if np.unique(x[keep]).size < 3:
            raise ValidationError("sizes are degenerate")
        errs_q.append((np.polyval(_fit_quadratic(x[keep], y[keep]), x[i]) - y[i]) ** 2)
        a, b = _fit_exponential(x[keep], y[keep])
        errs_e.append((a * np.exp(b * x[i]) - y[i]) ** 2)
    mq, me = float(np.mean(errs_q)), float(np.mean(errs_e))
    return ScalingFit(
        verdict="quadratic" if mq <= me else "exponential",
        quadratic_mse=mq,
        exponential_mse=me,
        quadratic_coef=tuple(float(c) for c in _fit_quadratic(x, y)[::-1]),
        exponential_coef=tuple(float(c) for c in _fit_exponential(x, y)),
    )


@dataclass(frozen=True)
class ComparisonRow:
    formulation: str
    n: int
    k: int
    T: int | None
    qubits: int | None
    two_qubit_depth: int | None
    valid: bool
    feasible: bool


COMPARISON_COLUMNS = ("formulation", "n", "k", "T", "qubits", "two_qubit_depth", "valid", "feasible")


def comparison_table(sizes, vehicles, p: int = 2, formulations=("edge", "time_expanded"), device_qubits=DEVICE_QUBITS):
    """Qubits and two-qubit depth per (formulation, n, k).

    Rows with k > n - 1 are flagged invalid; rows above ``device_qubits`` are
    flagged infeasible and carry no depth.
    """
    rows = []
    for form in formulations:
        if form not in ("edge", "time_expanded"):
            raise ValidationError(f"formulation {form!r} is not supported in the comparison")
        for n in sizes:
            for k in vehicles:
                T = n if form == "time_expanded" else None
                if not 1 <= k <= n - 1:
                    rows.append(ComparisonRow(form, n, k, T, None, None, False, False))
                    continue
                q = qubit_requirements(form, n, k, T)
                if q > device_qubits:
                    rows.append(ComparisonRow(form, n, k, T, q, None, True, False))
                    continue
                H = formulation_hamiltonian(form, n, k, T)
                rows.append(ComparisonRow(form, n, k, T, H.n, two_qubit_depth(H, p), True, True))
    return sorted(rows, key=lambda r: (r.formulation, r.n, r.k))


def comparison_to_table(rows) -> str:
    def cell(v):
        return "" if v is None else str(v).lower() if isinstance(v, bool) else str(v)

    lines = [",".join(COMPARISON_COLUMNS)]
    lines += [",".join(cell(getattr(r, c)) for c in COMPARISON_COLUMNS) for r in rows]
    return "\n".join(lines) + "\n"
