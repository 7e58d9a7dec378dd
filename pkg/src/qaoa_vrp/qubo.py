"""Penalty compilation of constrained binary programs into QUBO form."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._validation import ValidationError, check_bits
from .formulation import ConstrainedProgram, Constraint, Sense
from .instance import VrpInstance


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty weights in cost units.

    ``P`` multiplies every squared-residual penalty, ``rho`` the product
    penalty used for two-variable ``x + y <= 1`` constraints.
    """

    P: float
    rho: float
    normalize_later: bool = False

    def __post_init__(self):
        if not (self.P > 0 and self.rho > 0):
            raise ValidationError(f"penalties must be positive, got P={self.P}, rho={self.rho}")


def default_penalty(
    instance: VrpInstance, multiplier: float = 2.0, rule: str = "sum", normalize_later: bool = False
) -> PenaltyConfig:
    """``P = multiplier * sum|w|`` and ``rho = P / 2``.

    ``rule="offset"`` uses ``multiplier * (1 + sum|w|)`` instead; it reproduces
    published QUBO constants generated by some toolkits. P is floored at 1.
    """
    if not multiplier > 0:
        raise ValidationError(f"multiplier must be positive, got {multiplier}")
    total = instance.total_weight()
    if rule == "sum":
        P = multiplier * total
    elif rule == "offset":
        P = multiplier * (1.0 + total)
    else:
        raise ValidationError(f"unknown penalty rule {rule!r}")
    P = max(P, 1.0)
    return PenaltyConfig(P=P, rho=P / 2, normalize_later=normalize_later)


class Qubo:
    """``constant + sum linear[i] x_i + sum_{i<j} quadratic[(i, j)] x_i x_j``."""

    def __init__(self, variables, linear=None, quadratic=None, constant=0.0):
        self.variables = tuple(variables)
        self.linear = np.zeros(len(self.variables)) if linear is None else np.asarray(linear, dtype=float)
        self.quadratic = {}
        for (i, j), c in (quadratic or {}).items():
            self.add_quadratic(i, j, c)
        self.constant = float(constant)

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    def add_quadratic(self, i: int, j: int, c: float) -> None:
        if i == j:
            self.linear[i] += c
            return
        key = (i, j) if i < j else (j, i)
        self.quadratic[key] = self.quadratic.get(key, 0.0) + c

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def coefficient(self, a: str, b: str | None = None) -> float:
        """Linear coefficient of ``a``, or the pair coefficient of ``(a, b)``."""
        i = self.index(a)
        if b is None:
            return float(self.linear[i])
        j = self.index(b)
        return self.quadratic.get((min(i, j), max(i, j)), 0.0)

    def value(self, assignment) -> float:
        x = check_bits(assignment, self.num_variables).astype(float)
        val = self.constant + float(self.linear @ x)
        for (i, j), c in self.quadratic.items():
            val += c * x[i] * x[j]
        return val

    def energies(self) -> np.ndarray:
        """Values of all 2^n assignments; basis index bit i is variable i."""
        n = self.num_variables
        idx = np.arange(2**n, dtype=np.int64)
        bits = [((idx >> i) & 1).astype(np.float64) for i in range(n)]
        out = np.full(2**n, self.constant)
        for i in range(n):
            if self.linear[i]:
                out += self.linear[i] * bits[i]
        for (i, j), c in self.quadratic.items():
            out += c * (bits[i] * bits[j])
        return out

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "linear": {v: float(c) for v, c in zip(self.variables, self.linear)},
            "quadratic": [
                [self.variables[i], self.variables[j], c] for (i, j), c in sorted(self.quadratic.items())
            ],
            "constant": self.constant,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Qubo":
        variables = data["variables"]
        pos = {v: i for i, v in enumerate(variables)}
        linear = [data["linear"].get(v, 0.0) for v in variables]
        quad = {(pos[a], pos[b]): c for a, b, c in data["quadratic"]}
        return cls(variables, linear, quad, data["constant"])

    def __repr__(self):
        return f"Qubo(variables={self.num_variables}, quadratic_terms={len(self.quadratic)})"


def qubo_value(qubo: Qubo, assignment) -> float:
    return qubo.value(assignment)


def qubit_count(qubo: Qubo) -> int:
    return qubo.num_variables


def slack_weights(bound: int) -> list:
    """Binary slack weights whose subset sums cover exactly ``0..bound``.

    Powers of two with the top weight clipped, e.g. 2 -> [1, 1], 4 -> [1, 2, 1].
    """
    if bound <= 0:
        return []
    m = math.ceil(math.log2(bound + 1))
    weights = [2**i for i in range(m - 1)]
    weights.append(bound - (2 ** (m - 1) - 1))
    return weights


def _add_squared_residual(qubo: Qubo, weight: float, terms: list, rhs: float) -> None:
    # weight * (rhs - sum a_i x_i)^2 with x_i^2 = x_i
    qubo.constant += weight * rhs * rhs
    for a, (i, ci) in enumerate(terms):
        qubo.linear[i] += weight * (ci * ci - 2 * rhs * ci)
        for j, cj in terms[a + 1 :]:
            qubo.add_quadratic(i, j, 2 * weight * ci * cj)


def _integral(value, label: str) -> int:
    if value != int(value):
        raise ValidationError(f"constraint {label}: slack range {value} is not an integer")
    return int(value)


def to_qubo(program: ConstrainedProgram, penalty: PenaltyConfig) -> Qubo:
    """Fold every constraint of ``program`` into its objective as a penalty."""
    names = list(program.variables)
    slack_plan = []
    for con in program.constraints:
        if con.sense is Sense.EQ or con.pairwise:
            continue
        lo = sum(min(c, 0) for c in con.terms.values())
        hi = sum(max(c, 0) for c in con.terms.values())
        span = con.rhs - lo if con.sense is Sense.LE else hi - con.rhs
        if span < 0:
            raise ValidationError(f"constraint {con.label} cannot be satisfied by binary variables")
        weights = slack_weights(_integral(span, con.label))
        slack_names = [f"s_{con.label}_{m}" for m in range(len(weights))]
        names.extend(slack_names)
        slack_plan.append((con, slack_names, weights))

    pos = {v: i for i, v in enumerate(names)}
    qubo = Qubo(names, constant=program.constant)
    for v, c in program.linear.items():
        qubo.linear[pos[v]] += c
    for (a, b), c in program.quadratic.items():
        qubo.add_quadratic(pos[a], pos[b], c)

    slacks = {id(con): (sn, sw) for con, sn, sw in slack_plan}
    for con in program.constraints:
        terms = [(pos[v], float(c)) for v, c in con.terms.items()]
        if con.sense is Sense.EQ:
            _add_squared_residual(qubo, penalty.P, terms, float(con.rhs))
        elif con.pairwise:
            _add_pairwise(qubo, penalty.rho, con, terms)
        else:
            sn, sw = slacks[id(con)]
            sign = 1.0 if con.sense is Sense.LE else -1.0
            terms = terms + [(pos[s], sign * w) for s, w in zip(sn, sw)]
            _add_squared_residual(qubo, penalty.P, terms, float(con.rhs))
    return qubo


def _add_pairwise(qubo: Qubo, rho: float, con: Constraint, terms: list) -> None:
    if len(terms) != 2 or con.sense is not Sense.LE or con.rhs != 1 or any(c != 1 for _, c in terms):
        raise ValidationError(f"constraint {con.label} is flagged pairwise but is not x + y <= 1")
    (i, _), (j, _) = terms
    qubo.add_quadratic(i, j, rho)
