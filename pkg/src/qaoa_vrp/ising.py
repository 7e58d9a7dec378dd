"""Ising Hamiltonians (Z and ZZ terms) derived from QUBOs.

Spin convention: ``x = (1 - z) / 2``, so qubit state |0> (z = +1) is x = 0
and |1> (z = -1) is x = 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_bits
from .qubo import Qubo


@dataclass(frozen=True, eq=False)
class IsingHamiltonian:
    n: int
    h: np.ndarray
    J: dict = field(default_factory=dict)  # (i, j) with i < j -> coefficient
    offset: float = 0.0
    scale: float = 1.0  # divisor applied by normalize_coefficients
    labels: tuple = ()

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (self.n,):
            raise ValueError(f"h must have length {self.n}")
        J = {}
        for (i, j), c in self.J.items():
            if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"invalid ZZ pair {(i, j)}")
            key = (min(i, j), max(i, j))
            J[key] = J.get(key, 0.0) + float(c)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def z_terms(self) -> list:
        return [i for i in range(self.n) if self.h[i] != 0]

    @property
    def zz_terms(self) -> list:
        return [pair for pair, c in self.J.items() if c != 0]

    def max_coefficient(self) -> float:
        vals = [abs(c) for c in self.J.values()] + [abs(float(c)) for c in self.h]
        return max(vals, default=0.0)

    def energy(self, assignment) -> float:
        x = check_bits(assignment, self.n)
        z = 1.0 - 2.0 * x
        e = self.offset + float(self.h @ z)
        for (i, j), c in self.J.items():
            e += c * z[i] * z[j]
        return e

    def energies(self, include_offset: bool = True) -> np.ndarray:
        """Diagonal of the Hamiltonian over all 2^n basis states (bit i = qubit i)."""
        idx = np.arange(2**self.n, dtype=np.int64)
        spins = [1.0 - 2.0 * ((idx >> i) & 1) for i in range(self.n)]
        out = np.full(2**self.n, self.offset if include_offset else 0.0)
        for i in range(self.n):
            if self.h[i]:
                out += self.h[i] * spins[i]
        for (i, j), c in self.J.items():
            out += c * (spins[i] * spins[j])
        return out

    def pauli_terms(self) -> list:
        """``(label, coefficient)`` pairs; character i of the label acts on qubit i."""
        terms = []
        for i in self.z_terms:
            s = ["I"] * self.n
            s[i] = "Z"
            terms.append(("".join(s), float(self.h[i])))
        for i, j in self.zz_terms:
            s = ["I"] * self.n
            s[i] = s[j] = "Z"
            terms.append(("".join(s), self.J[(i, j)]))
        return terms

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "labels": list(self.labels),
            "h": [[i, float(self.h[i])] for i in range(self.n)],
            "J": [[i, j, c] for (i, j), c in sorted(self.J.items())],
            "offset": self.offset,
            "scale": self.scale,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __str__(self):
        body = "\n".join(f"{c:+.4f} {label}" for label, c in self.pauli_terms())
        return f"{body}\n{self.offset:+.4f} (offset)"


def to_ising(qubo: Qubo) -> IsingHamiltonian:
    n = qubo.num_variables
    h = np.zeros(n)
    J = {}
    offset = qubo.constant
    for i in range(n):
        q = qubo.linear[i]
        h[i] -= q / 2
        offset += q / 2
    for (i, j), q in qubo.quadratic.items():
        J[(i, j)] = q / 4
        h[i] -= q / 4
        h[j] -= q / 4
        offset += q / 4
    return IsingHamiltonian(n=n, h=h, J=J, offset=offset, labels=qubo.variables)


def ising_energy(H: IsingHamiltonian, assignment) -> float:
    return H.energy(assignment)


def normalize_coefficients(H: IsingHamiltonian) -> IsingHamiltonian:
    """Divide all coefficients (offset included) by the largest |h| or |J|."""
    m = H.max_coefficient()
    if m == 0:
        return H
    return IsingHamiltonian(
        n=H.n,
        h=H.h / m,
        J={k: c / m for k, c in H.J.items()},
        offset=H.offset / m,
        scale=H.scale * m,
        labels=H.labels,
    )
