import numpy as np
import pytest

from oracles import dense_cost, dense_mixer, dense_qaoa
from qaoa_vrp._validation import ResourceError, ValidationError
from qaoa_vrp.ising import IsingHamiltonian
from qaoa_vrp.simulator import (
    apply_mixer,
    apply_phase_separator,
    basis_state,
    expectation,
    qaoa_state,
    sample,
    uniform_state,
)
from scipy.linalg import expm


def random_hamiltonian(rng, n):
    h = rng.normal(size=n)
    J = {(i, j): rng.normal() for i in range(n) for j in range(i + 1, n) if rng.random() < 0.7}
    return IsingHamiltonian(n, h, J, offset=rng.normal())


def test_uniform_state():
    np.testing.assert_array_equal(uniform_state(2).amplitudes, np.full(4, 0.5))
    s = uniform_state(6)
    np.testing.assert_array_equal(s.amplitudes, np.full(64, 1 / 8))
    assert abs(s.norm() - 1) < 1e-15


def test_uniform_state_cap():
    with pytest.raises(ResourceError):
        uniform_state(25)
    with pytest.raises(ResourceError):
        uniform_state(5, cap=4)


def test_phase_separator_identity_and_diagonal():
    rng = np.random.default_rng(0)
    H = random_hamiltonian(rng, 3)
    psi = apply_mixer(uniform_state(3), 0.4)
    np.testing.assert_allclose(apply_phase_separator(psi, H, 0.0).amplitudes, psi.amplitudes)
    out = apply_phase_separator(psi, H, 1.3)
    np.testing.assert_allclose(out.probabilities(), psi.probabilities(), atol=1e-14)


def test_phase_separator_matches_matrix_exponential():
    H = IsingHamiltonian(2, [1.0, -1.0], {(0, 1): 0.5})
    psi = apply_mixer(uniform_state(2), 0.3)
    ref = expm(-1j * 0.7 * dense_cost(2, [1.0, -1.0], {(0, 1): 0.5})) @ psi.amplitudes
    np.testing.assert_allclose(apply_phase_separator(psi, H, 0.7).amplitudes, ref, atol=1e-9)


def test_phase_separator_dimension_mismatch():
    with pytest.raises(ValidationError):
        apply_phase_separator(uniform_state(2), IsingHamiltonian(3, np.zeros(3)), 0.1)


def test_mixer_closed_forms():
    s = basis_state("0")
    out = apply_mixer(s, 0.3)
    np.testing.assert_allclose(out.amplitudes, [np.cos(0.3), -1j * np.sin(0.3)], atol=1e-15)
    np.testing.assert_allclose(apply_mixer(s, 0.0).amplitudes, s.amplitudes)
    flipped = apply_mixer(basis_state("1101"), np.pi / 2)
    expected = basis_state("0010").amplitudes * (-1j) ** 4
    np.testing.assert_allclose(flipped.amplitudes, expected, atol=1e-12)


def test_mixer_matches_dense():
    psi = apply_phase_separator(uniform_state(3), IsingHamiltonian(3, [0.3, -0.2, 0.9]), 1.1)
    ref = expm(-1j * 0.45 * dense_mixer(3)) @ psi.amplitudes
    np.testing.assert_allclose(apply_mixer(psi, 0.45).amplitudes, ref, atol=1e-12)


def test_qaoa_depth_zero_is_uniform():
    H = IsingHamiltonian(3, [1, 2, 3])
    np.testing.assert_array_equal(qaoa_state(H, [], []).amplitudes, uniform_state(3).amplitudes)
    with pytest.raises(ValidationError):
        qaoa_state(H, [0.1], [])


@pytest.mark.parametrize("case", range(20))
def test_qaoa_matches_dense_oracle(case):
    rng = np.random.default_rng(case)
    n = int(rng.integers(1, 4))
    p = int(rng.integers(1, 4))
    H = random_hamiltonian(rng, n)
    g, b = rng.uniform(-np.pi, np.pi, p), rng.uniform(-np.pi, np.pi, p)
    ours = qaoa_state(H, g, b)
    ref = dense_qaoa(n, H.h, H.J, g, b)
    # global phase of the dropped offset is not part of either construction
    np.testing.assert_allclose(ours.amplitudes, ref, atol=1e-9)
    assert abs(ours.norm() - 1) < 1e-10


def test_expectation_uniform_is_mean(ham3):
    assert expectation(uniform_state(6), ham3) == pytest.approx(2352.6929375, abs=1e-8)
    assert expectation(basis_state("111010"), ham3) == pytest.approx(132.110, abs=1e-9)


def test_expectation_matches_dense():
    rng = np.random.default_rng(5)
    H = random_hamiltonian(rng, 3)
    psi = qaoa_state(H, [0.4], [0.9])
    ref = np.real(np.vdot(psi.amplitudes, dense_cost(3, H.h, H.J) @ psi.amplitudes)) + H.offset
    assert expectation(psi, H) == pytest.approx(ref, abs=1e-10)


def test_sample_point_mass():
    counts = sample(basis_state("0110"), 100, seed=1)
    assert counts.counts == {"0110": 100}


def test_sample_uniform_within_five_sigma():
    counts = sample(uniform_state(6), 10_000, seed=3)
    assert len(counts.counts) == 64
    assert all(100 <= c <= 215 for c in counts.counts.values())
    assert sum(counts.counts.values()) == 10_000


def test_sample_deterministic():
    psi = qaoa_state(IsingHamiltonian(3, [1, 0.5, -1]), [0.3], [0.2])
    assert sample(psi, 500, seed=9).counts == sample(psi, 500, seed=9).counts


def test_bit_order_contract():
    psi = basis_state("100000")
    assert np.flatnonzero(psi.amplitudes).tolist() == [1]
    assert sample(psi, 1, seed=0).most_frequent() == "100000"


def test_samples_table_order():
    from qaoa_vrp.simulator import SampleCounts

    c = SampleCounts({"01": 5, "00": 5, "11": 9}, 19)
    assert c.to_table() == "bitstring,count\n11,9\n00,5\n01,5\n"
