"""Matrix primitives: tensor, partial trace, dephasing, Haar, rank, entropies."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from thermocode.qmatrix import (check_density_matrix, check_unitary,
                                dephase_register, haar_unitary,
                                numerical_rank, partial_trace, purity,
                                relative_entropy, tensor, von_neumann_entropy)

# binary entropy of 1/(1+1/e), evaluated independently:
#   p = 0.7310585786300049, -p*log2(p) - (1-p)*log2(1-p)
GIBBS_P0 = 1.0 / (1.0 + np.exp(-1.0))
H2_GIBBS = 0.8399415379831693


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def test_tensor_identity():
    assert_allclose(tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_diagonal_product():
    p = 0.3
    out = tensor(np.diag([1.0, 0.0]), np.diag([p, 1 - p]))
    assert_allclose(out, np.diag([p, 1 - p, 0.0, 0.0]))


def test_tensor_trace_multiplies():
    rng = np.random.default_rng(0)
    a = random_density(rng, 3)
    b = random_density(rng, 4)
    a *= 0.7  # trace need not be 1 for this identity
    assert_allclose(np.trace(tensor(a, b)), np.trace(a) * np.trace(b), atol=1e-12)


def test_partial_trace_product_recovers_factors():
    rng = np.random.default_rng(1)
    a = random_density(rng, 2)
    b = random_density(rng, 3)
    joint = tensor(a, b)
    assert_allclose(partial_trace(joint, (2, 3), keep=0), a, atol=1e-12)
    assert_allclose(partial_trace(joint, (2, 3), keep=1), b, atol=1e-12)


def test_partial_trace_correlated_diagonal():
    n = 3
    joint = np.zeros((n * n, n * n), dtype=complex)
    for x in range(n):
        joint[x * n + x, x * n + x] = 1.0 / n
    assert_allclose(partial_trace(joint, (n, n), keep=0), np.eye(n) / n, atol=1e-14)


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(2)
    joint = random_density(rng, 6)
    for keep in (0, 1):
        reduced = partial_trace(joint, (2, 3), keep=keep)
        assert_allclose(np.trace(reduced).real, 1.0, atol=1e-12)
        check_density_matrix(reduced)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(ValueError):
        partial_trace(np.eye(6) / 6, (2, 2), keep=0)
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, (2, 2), keep=2)


def test_dephase_fixes_classical_quantum_states():
    rng = np.random.default_rng(3)
    blocks = [random_density(rng, 2), random_density(rng, 2)]
    joint = np.zeros((4, 4), dtype=complex)
    joint[:2, :2] = 0.5 * blocks[0]
    joint[2:, 2:] = 0.5 * blocks[1]
    assert_allclose(dephase_register(joint, (2, 2)), joint, atol=1e-14)


def test_dephase_idempotent_and_trace_preserving():
    rng = np.random.default_rng(4)
    joint = random_density(rng, 8)
    once = dephase_register(joint, (4, 2))
    assert_allclose(np.trace(once).real, 1.0, atol=1e-12)
    assert_allclose(dephase_register(once, (4, 2)), once, atol=1e-14)
    check_density_matrix(once)


def test_dephase_never_lowers_rank():
    # includes rank-deficient joints, where the increase can be strict
    rng = np.random.default_rng(5)
    for rank in (1, 2, 4, 8):
        joint = random_density(rng, 8, rank=rank)
        before = numerical_rank(joint).value
        after = numerical_rank(dephase_register(joint, (2, 4))).value
        assert after >= before


def test_dephase_in_rotated_basis():
    rng = np.random.default_rng(6)
    joint = random_density(rng, 6)
    b = haar_unitary(2, rng)
    rot = tensor(b, np.eye(3))
    expected = rot @ dephase_register(rot.conj().T @ joint @ rot, (2, 3)) @ rot.conj().T
    assert_allclose(dephase_register(joint, (2, 3), basis=b), expected, atol=1e-12)


def test_haar_scalar_case():
    u = haar_unitary(1, seed=42)
    assert u.shape == (1, 1)
    assert abs(abs(u[0, 0]) - 1.0) < 1e-12


def test_haar_deterministic_and_unitary():
    a = haar_unitary(5, seed=7)
    b = haar_unitary(5, seed=7)
    assert_allclose(a, b)
    check_unitary(a)
    assert np.max(np.abs(haar_unitary(5, seed=8) - a)) > 1e-3


def test_haar_column_norms():
    u = haar_unitary(6, seed=9)
    assert_allclose(np.linalg.norm(u, axis=0), np.ones(6), atol=1e-10)


def test_numerical_rank_basics():
    d = 5
    assert numerical_rank(np.eye(d) / d).value == d
    pure = np.zeros((3, 3))
    pure[0, 0] = 1.0
    assert numerical_rank(pure).value == 1


def test_numerical_rank_report_counts_above_cutoff():
    rng = np.random.default_rng(10)
    m = random_density(rng, 6, rank=3)
    report = numerical_rank(m)
    sv = np.asarray(report.singular_values)
    assert report.value == int(np.sum(sv > report.tolerance))
    assert report.value == 3


def test_numerical_rank_monotone_in_tol():
    rng = np.random.default_rng(11)
    m = random_density(rng, 6)
    tols = [1e-14, 1e-10, 1e-6, 1e-2, 1.0]
    values = [numerical_rank(m, rtol=t).value for t in tols]
    assert values == sorted(values, reverse=True)


def test_entropy_pure_and_mixed():
    pure = np.zeros((4, 4))
    pure[1, 1] = 1.0
    assert von_neumann_entropy(pure) == 0.0
    assert_allclose(von_neumann_entropy(np.eye(4) / 4), 2.0, atol=1e-12)


def test_entropy_gibbs_qubit_frozen_value():
    rho = np.diag([GIBBS_P0, 1.0 - GIBBS_P0])
    assert_allclose(von_neumann_entropy(rho), H2_GIBBS, atol=1e-12)


def test_entropy_unitary_invariance():
    rng = np.random.default_rng(12)
    for trial in range(100):
        d = int(rng.integers(2, 7))
        rho = random_density(rng, d)
        u = haar_unitary(d, rng)
        rotated = u @ rho @ u.conj().T
        rotated = (rotated + rotated.conj().T) / 2
        assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) <= 1e-9
        assert numerical_rank(rotated).value == numerical_rank(rho).value


def test_relative_entropy_identical_is_zero():
    rng = np.random.default_rng(13)
    rho = random_density(rng, 4)
    assert_allclose(relative_entropy(rho, rho), 0.0, atol=1e-10)


def test_relative_entropy_pure_vs_mixed():
    pure = np.zeros((2, 2))
    pure[0, 0] = 1.0
    assert_allclose(relative_entropy(pure, np.eye(2) / 2), 1.0, atol=1e-12)


def test_relative_entropy_support_violation_is_infinite():
    pure0 = np.diag([1.0, 0.0])
    pure1 = np.diag([0.0, 1.0])
    assert relative_entropy(pure1, pure0) == np.inf


def test_relative_entropy_gibbs_two_routes():
    """D(rho || gamma) against -S(rho) + beta*Tr(rho H)/ln2 + log2 Z."""
    rng = np.random.default_rng(14)
    beta = 1.3
    energies = np.array([0.0, 0.4, 1.1, 2.0])
    w = np.exp(-beta * energies)
    z = w.sum()
    gamma = np.diag(w / z).astype(complex)
    u = haar_unitary(4, rng)
    rho = u @ random_density(rng, 4) @ u.conj().T
    rho = (rho + rho.conj().T) / 2
    closed = (-von_neumann_entropy(rho)
              + beta * np.trace(rho @ np.diag(energies)).real / np.log(2)
              + np.log2(z))
    assert_allclose(relative_entropy(rho, gamma), closed, atol=1e-9)


def test_relative_entropy_rejects_mismatch():
    with pytest.raises(ValueError):
        relative_entropy(np.eye(2) / 2, np.eye(3) / 3)


def test_purity_extremes():
    pure = np.zeros((3, 3))
    pure[0, 0] = 1.0
    assert_allclose(purity(pure), 1.0, atol=1e-12)
    assert_allclose(purity(np.eye(3) / 3), 1.0 / 3.0, atol=1e-12)


def test_density_validator_tolerances():
    check_density_matrix(np.diag([0.5 + 4e-11, 0.5]))  # trace off by < 1e-10
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([0.5 + 4e-9, 0.5]))
    skew = np.array([[0.5, 1e-11], [0.0, 0.5]])  # Hermiticity beyond 1e-12
    with pytest.raises(ValueError):
        check_density_matrix(skew)
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([1.1, -0.1]))
    with pytest.raises(ValueError):
        check_density_matrix(np.ones((2, 3)))


def test_unitary_validator():
    check_unitary(np.eye(3))
    with pytest.raises(ValueError):
        check_unitary(np.eye(3) * 1.001)
