"""Variational parameter optimization and the end-to-end QAOA solve driver."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ._validation import ResourceError, ValidationError, check_count
from .analysis import (
    Decoded,
    approximation_ratio,
    decode,
    exact_vrp,
    encode,
    feasibility_ratio,
    optimum_rank,
)
from .formulation import build_edge_model
from .instance import VrpInstance
from .ising import IsingHamiltonian, normalize_coefficients, to_ising
from .qubo import PenaltyConfig, default_penalty, to_qubo
from .simulator import DEFAULT_QUBIT_CAP, SampleCounts, expectation, qaoa_state, sample

SIMPLEX_STEP = 0.25
INITIAL_GAMMA = math.pi
INITIAL_BETA = math.pi / 2
RESTART_JITTER = 0.5


@dataclass
class OptimizationTrace:
    """One record per objective evaluation: ``(iteration, point, value, best_so_far)``."""

    records: list = field(default_factory=list)

    def append(self, point, value):
        best = value if not self.records else min(self.records[-1][3], value)
        self.records.append((len(self.records), tuple(float(v) for v in point), float(value), best))

    @property
    def best_so_far(self) -> list:
        return [r[3] for r in self.records]

    def __len__(self):
        return len(self.records)

    def to_table(self, p: int | None = None) -> str:
        d = len(self.records[0][1]) if self.records else 0
        if p is not None and 2 * p == d:
            names = [f"gamma{j}" for j in range(p)] + [f"beta{j}" for j in range(p)]
        else:
            names = [f"x{j}" for j in range(d)]
        lines = [",".join(["iteration", *names, "expectation", "best"])]
        for it, point, val, best in self.records:
            lines.append(",".join([str(it), *(repr(v) for v in point), repr(val), repr(best)]))
        return "\n".join(lines) + "\n"


def nelder_mead(objective, start, budget: int = 200, tol: float = 1e-8, step: float = SIMPLEX_STEP):
    """Downhill simplex minimization.

    Returns ``(best_point, best_value, trace)``. Stops after ``budget``
    evaluations or once the spread of simplex values drops below ``tol``.
    Non-finite objective values count as ``+inf``.
    """
    x0 = np.asarray(start, dtype=float)
    d = x0.size
    if d < 1:
        raise ValidationError("need at least one parameter")
    if budget < d + 1:
        raise ValidationError(f"budget must be at least {d + 1}")
    trace = OptimizationTrace()

    def f(x):
        if len(trace) >= budget:
            return None
        val = float(objective(x))
        if not math.isfinite(val):
            val = math.inf
        trace.append(x, val)
        return val

    simplex = [x0] + [x0 + step * np.eye(d)[i] for i in range(d)]
    values = [f(x) for x in simplex]

    while len(trace) < budget:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if values[-1] - values[0] < tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]

        xr = centroid + (centroid - worst)
        fr = f(xr)
        if fr is None:
            break
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = f(xe)
            if fe is None:
                simplex[-1], values[-1] = xr, fr
                break
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < values[-1]:
            xc = centroid + 0.5 * (xr - centroid)
        else:
            xc = centroid + 0.5 * (worst - centroid)
        fc = f(xc)
        if fc is None:
            break
        if fc < min(fr, values[-1]):
            simplex[-1], values[-1] = xc, fc
            continue
        # shrink toward the best vertex
        for i in range(1, d + 1):
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            fi = f(simplex[i])
            if fi is None:
                simplex, values = simplex[: i], values[: i]
                break
            values[i] = fi

    i = int(np.argmin(values))
    return simplex[i], values[i], trace


def qaoa_objective(H: IsingHamiltonian, p: int, cap: int = DEFAULT_QUBIT_CAP):
    """Exact expectation as a function of ``[gammas..., betas...]``."""
    phase = H.energies(include_offset=False)
    full = phase + H.offset

    def objective(params):
        state = qaoa_state(H, params[:p], params[p:], cap=cap, energies=phase)
        return expectation(state, H, energies=full)

    return objective


def optimize_qaoa(
    H: IsingHamiltonian,
    p: int = 2,
    budget: int = 300,
    restarts: int = 1,
    seed: int | None = 0,
    cap: int = DEFAULT_QUBIT_CAP,
):
    """Minimize the exact QAOA expectation over ``2p`` angles.

    The first restart starts at gamma=pi, beta=pi/2; later restarts add
    seeded uniform jitter of +/-0.5 rad. Returns ``(gammas, betas, trace)``
    for the best restart.
    """
    p = check_count(p, "p", 1)
    restarts = check_count(restarts, "restarts", 1)
    if H.n > cap:
        raise ResourceError(f"{H.n} qubits exceeds the simulator cap of {cap}")
    objective = qaoa_objective(H, p, cap)
    start = np.array([INITIAL_GAMMA] * p + [INITIAL_BETA] * p)
    rng = np.random.default_rng(seed)
    best = None
    for r in range(restarts):
        x0 = start if r == 0 else start + rng.uniform(-RESTART_JITTER, RESTART_JITTER, size=2 * p)
        x, val, trace = nelder_mead(objective, x0, budget=budget)
        if best is None or val < best[1]:
            best = (x, val, trace)
    x, _, trace = best
    return x[:p].copy(), x[p:].copy(), trace


@dataclass
class SolveReport:
    n: int
    k: int
    qubits: int
    penalty: PenaltyConfig
    normalized: bool
    p: int
    gammas: list
    betas: list
    expectation: float  # original cost units
    counts: SampleCounts
    top_bitstring: str
    top_decoded: Decoded
    best_feasible_bitstring: str | None
    best_feasible_routes: object
    optimum: object
    approximation_ratio: float | None
    feasibility_ratio: float
    optimum_rank: int | None
    trace: OptimizationTrace
    wall_time: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        def routes(rs):
            return None if rs is None else {"routes": [list(r) for r in rs.canonical()], "cost": rs.cost}

        d = {
            "instance": {"n": self.n, "k": self.k},
            "qubits": self.qubits,
            "penalty": {"P": self.penalty.P, "rho": self.penalty.rho},
            "normalized": self.normalized,
            "p": self.p,
            "gammas": [float(g) for g in self.gammas],
            "betas": [float(b) for b in self.betas],
            "expectation": self.expectation,
            "shots": self.counts.shots,
            "top_bitstring": self.top_bitstring,
            "top_feasible": self.top_decoded.feasible,
            "top_violations": list(self.top_decoded.verdict.violations),
            "top_routes": routes(self.top_decoded.routes),
            "best_feasible_bitstring": self.best_feasible_bitstring,
            "best_feasible_routes": routes(self.best_feasible_routes),
            "optimum": routes(self.optimum),
            "approximation_ratio": self.approximation_ratio,
            "feasibility_ratio": self.feasibility_ratio,
            "optimum_rank": self.optimum_rank,
            "evaluations": len(self.trace),
        }
        if timing:
            d["wall_time_s"] = self.wall_time
        return d

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"


def build_hamiltonian(instance: VrpInstance, multiplier: float = 2.0, normalize: bool = False, penalty=None):
    """Edge model -> QUBO -> Ising, returning ``(qubo, raw_H, H_used, penalty)``."""
    penalty = penalty or default_penalty(instance, multiplier, normalize_later=normalize)
    qubo = to_qubo(build_edge_model(instance), penalty)
    raw = to_ising(qubo)
    return qubo, raw, (normalize_coefficients(raw) if normalize else raw), penalty


def solve(
    instance: VrpInstance,
    p: int = 2,
    multiplier: float = 2.0,
    normalize: bool = False,
    shots: int = 10_000,
    seed: int = 0,
    budget: int = 300,
    restarts: int = 3,
    penalty: PenaltyConfig | None = None,
    cap: int = DEFAULT_QUBIT_CAP,
    top_k: int = 1000,
) -> SolveReport:
    """Run the full pipeline on the edge model of ``instance``."""
    t0 = time.perf_counter()
    qubo, raw, H, penalty = build_hamiltonian(instance, multiplier, normalize, penalty)
    if H.n > cap:
        raise ResourceError(f"instance needs {H.n} qubits, above the simulator cap of {cap}")

    opt_seed, sample_seed = np.random.SeedSequence(seed).generate_state(2)
    gammas, betas, trace = optimize_qaoa(H, p, budget, restarts, seed=int(opt_seed), cap=cap)
    state = qaoa_state(H, gammas, betas, cap=cap)
    exp_value = expectation(state, raw)
    counts = sample(state, shots, seed=int(sample_seed))
    counts.seed = seed

    m = instance.n * (instance.n - 1)
    ordered = counts.ordered()
    top = ordered[0][0]
    top_decoded = decode(top[:m], instance)
    best_feasible = next((b for b, _ in ordered if decode(b[:m], instance).feasible), None)
    best_routes = decode(best_feasible[:m], instance).routes if best_feasible else None

    optimum = exact_vrp(instance) if instance.n <= 8 else None
    ratio = None
    if optimum is not None and optimum.cost != 0:
        ratio = approximation_ratio(exp_value, optimum.cost)
    rank = optimum_rank(counts, encode(optimum, instance.n)) if optimum is not None else None

    return SolveReport(
        n=instance.n,
        k=instance.k,
        qubits=H.n,
        penalty=penalty,
        normalized=normalize,
        p=p,
        gammas=list(gammas),
        betas=list(betas),
        expectation=exp_value,
        counts=counts,
        top_bitstring=top,
        top_decoded=top_decoded,
        best_feasible_bitstring=best_feasible,
        best_feasible_routes=best_routes,
        optimum=optimum,
        approximation_ratio=ratio,
        feasibility_ratio=feasibility_ratio(counts, instance, top_k),
        optimum_rank=rank,
        trace=trace,
        wall_time=time.perf_counter() - t0,
    )
