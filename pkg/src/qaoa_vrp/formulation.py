"""Constrained binary programs for the VRP.

Two encodings are provided: the edge (link) model with explicit subtour
elimination, and the time-expanded (sequence) model.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations

from ._validation import ValidationError, check_count
from .instance import VrpInstance


class Sense(str, enum.Enum):
    EQ = "=="
    LE = "<="
    GE = ">="


@dataclass(frozen=True)
class Constraint:
    terms: dict  # variable name -> coefficient
    sense: Sense
    rhs: float
    label: str
    pairwise: bool = False

    def evaluate(self, values: dict) -> bool:
        lhs = sum(c * values[v] for v, c in self.terms.items())
        if self.sense is Sense.EQ:
            return lhs == self.rhs
        if self.sense is Sense.LE:
            return lhs <= self.rhs
        return lhs >= self.rhs


@dataclass
class ConstrainedProgram:
    variables: list = field(default_factory=list)
    constant: float = 0.0
    linear: dict = field(default_factory=dict)
    quadratic: dict = field(default_factory=dict)  # (name, name) -> coefficient
    constraints: list = field(default_factory=list)

    def add_variable(self, name: str) -> str:
        if name in self._index:
            raise ValidationError(f"duplicate variable {name!r}")
        self._index[name] = len(self.variables)
        self.variables.append(name)
        return name

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.variables)}

    def index(self, name: str) -> int:
        return self._index[name]

    def add_constraint(self, terms: dict, sense: Sense, rhs, label: str, pairwise=False):
        for v in terms:
            if v not in self._index:
                raise ValidationError(f"constraint {label} references unknown variable {v!r}")
        self.constraints.append(Constraint(dict(terms), Sense(sense), rhs, label, pairwise))

    def objective_value(self, values: dict) -> float:
        val = self.constant + sum(c * values[v] for v, c in self.linear.items())
        val += sum(c * values[a] * values[b] for (a, b), c in self.quadratic.items())
        return val

    def violated(self, values: dict) -> list:
        """Labels of constraints not satisfied by ``values`` (name -> 0/1)."""
        return [c.label for c in self.constraints if not c.evaluate(values)]

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "objective": {
                "constant": self.constant,
                "linear": dict(self.linear),
                "quadratic": [[a, b, c] for (a, b), c in self.quadratic.items()],
            },
            "constraints": [
                {
                    "label": c.label,
                    "terms": dict(c.terms),
                    "sense": c.sense.value,
                    "rhs": c.rhs,
                    "pairwise": c.pairwise,
                }
                for c in self.constraints
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def edge_var(i: int, j: int) -> str:
    return f"x_{i}_{j}"


def edge_list(n: int) -> list:
    """Directed edges (i, j), i != j, in the canonical lexicographic order."""
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def subset_label(subset) -> str:
    return "SUB{" + ",".join(str(i) for i in subset) + "}"


def enumerate_subtour_subsets(n: int) -> list:
    """Customer subsets S with 2 <= |S| <= n-1, by size then lexicographically."""
    customers = range(1, n)
    return [set(s) for size in range(2, n) for s in combinations(customers, size)]


def build_edge_model(instance: VrpInstance) -> ConstrainedProgram:
    n, k = instance.n, instance.k
    w = instance.weights
    prog = ConstrainedProgram()
    for i, j in edge_list(n):
        prog.add_variable(edge_var(i, j))
        prog.linear[edge_var(i, j)] = float(w[i, j])

    degree = []
    for i in range(1, n):
        degree.append({edge_var(i, j): 1 for j in range(n) if j != i})
    for i in range(1, n):
        degree.append({edge_var(j, i): 1 for j in range(n) if j != i})
    for c, terms in enumerate(degree):
        prog.add_constraint(terms, Sense.EQ, 1, f"C{c}")
    c = len(degree)
    prog.add_constraint({edge_var(j, 0): 1 for j in range(1, n)}, Sense.EQ, k, f"C{c}")
    prog.add_constraint({edge_var(0, j): 1 for j in range(1, n)}, Sense.EQ, k, f"C{c + 1}")

    for subset in enumerate_subtour_subsets(n):
        members = sorted(subset)
        terms = {edge_var(i, j): 1 for i in members for j in members if i != j}
        prog.add_constraint(
            terms, Sense.LE, len(members) - 1, subset_label(members), pairwise=len(members) == 2
        )
    return prog


def time_var(k: int, v: int, t: int) -> str:
    return f"x_k{k}_v{v}_t{t}"


def build_time_expanded_model(instance: VrpInstance, T: int | None = None) -> ConstrainedProgram:
    """Sequence-based model with variables x[k][v][t] (vehicle k at node v at step t).

    ``T`` defaults to ``n``. Capacity constraints are not generated.
    """
    n, K = instance.n, instance.k
    T = n if T is None else check_count(T, "T", 2)
    w = instance.weights
    prog = ConstrainedProgram()
    for v in range(n):
        for t in range(1, T + 1):
            for k in range(1, K + 1):
                prog.add_variable(time_var(k, v, t))

    for k in range(1, K + 1):
        for t in range(1, T):
            for v in range(n):
                for u in range(n):
                    if u != v:
                        key = (time_var(k, v, t), time_var(k, u, t + 1))
                        prog.quadratic[key] = float(w[v, u])

    for v in range(1, n):
        terms = {time_var(k, v, t): 1 for k in range(1, K + 1) for t in range(1, T + 1)}
        prog.add_constraint(terms, Sense.EQ, 1, f"VISIT({v})")
    for k in range(1, K + 1):
        for t in range(1, T + 1):
            prog.add_constraint({time_var(k, v, t): 1 for v in range(n)}, Sense.EQ, 1, f"SLOT({k},{t})")
    return prog
