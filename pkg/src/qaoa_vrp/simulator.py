"""Exact statevector simulation of QAOA circuits.

Basis index bit i holds qubit (variable) i, and bitstrings are rendered with
qubit 0 as the leftmost character.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import ResourceError, ValidationError, check_count
from .ising import IsingHamiltonian

DEFAULT_QUBIT_CAP = 24


@dataclass(frozen=True, eq=False)
class Statevector:
    n: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.probabilities())))


@dataclass
class SampleCounts:
    counts: dict  # bitstring -> frequency
    shots: int
    seed: int | None = None

    def ordered(self) -> list:
        """``(bitstring, count)`` by descending count, then bitstring."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def most_frequent(self) -> str:
        return self.ordered()[0][0]

    def to_table(self) -> str:
        return "bitstring,count\n" + "".join(f"{b},{c}\n" for b, c in self.ordered())


def index_to_bits(index: int, n: int) -> str:
    return "".join("1" if (index >> i) & 1 else "0" for i in range(n))


def bits_to_index(bits: str) -> int:
    return sum(1 << i for i, c in enumerate(bits) if c == "1")


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise ResourceError(f"{n} qubits exceeds the simulator cap of {cap}")


def uniform_state(n: int, cap: int = DEFAULT_QUBIT_CAP) -> Statevector:
    n = check_count(n, "n", 1)
    _check_cap(n, cap)
    amp = np.full(2**n, 2.0 ** (-n / 2), dtype=np.complex128)
    return Statevector(n, amp)


def basis_state(bits: str) -> Statevector:
    n = len(bits)
    amp = np.zeros(2**n, dtype=np.complex128)
    amp[bits_to_index(bits)] = 1.0
    return Statevector(n, amp)


def _check_dims(state: Statevector, H: IsingHamiltonian) -> None:
    if state.n != H.n:
        raise ValidationError(f"state has {state.n} qubits but Hamiltonian has {H.n}")


def apply_phase_separator(state: Statevector, H, gamma: float, energies=None) -> Statevector:
    """Multiply each amplitude by ``exp(-i gamma E(x))``; the offset is dropped.

    ``energies`` may carry a precomputed offset-free diagonal of ``H``.
    """
    _check_dims(state, H)
    if energies is None:
        energies = H.energies(include_offset=False)
    return Statevector(state.n, state.amplitudes * np.exp(-1j * gamma * energies))


def apply_mixer(state: Statevector, beta: float) -> Statevector:
    """Apply ``exp(-i beta X)`` on every qubit."""
    c, s = np.cos(beta), -1j * np.sin(beta)
    psi = state.amplitudes.reshape((2,) * state.n)
    for axis in range(state.n):
        a0 = np.take(psi, 0, axis=axis)
        a1 = np.take(psi, 1, axis=axis)
        psi = np.stack((c * a0 + s * a1, s * a0 + c * a1), axis=axis)
    return Statevector(state.n, psi.reshape(-1))


def qaoa_state(H: IsingHamiltonian, gammas, betas, cap: int = DEFAULT_QUBIT_CAP, energies=None) -> Statevector:
    gammas, betas = list(gammas), list(betas)
    if len(gammas) != len(betas):
        raise ValidationError(f"got {len(gammas)} gammas but {len(betas)} betas")
    state = uniform_state(H.n, cap)
    if energies is None:
        energies = H.energies(include_offset=False)
    for gamma, beta in zip(gammas, betas):
        state = apply_phase_separator(state, H, gamma, energies)
        state = apply_mixer(state, beta)
    return state


def expectation(state: Statevector, H: IsingHamiltonian, energies=None) -> float:
    """``<psi|H|psi>`` including the offset. ``energies`` is the full diagonal if given."""
    _check_dims(state, H)
    if energies is None:
        energies = H.energies()
    return float(np.dot(state.probabilities(), energies))


def sample(state: Statevector, shots: int, seed: int | None = None) -> SampleCounts:
    shots = check_count(shots, "shots", 1)
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    drawn = rng.multinomial(shots, probs)
    counts = {index_to_bits(int(i), state.n): int(drawn[i]) for i in np.flatnonzero(drawn)}
    return SampleCounts(counts=counts, shots=shots, seed=seed)
