"""Register preparation, shift unitaries, the encoding map, overlap tables."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from thermocode.protocol import (Ensemble, ProtocolInstance, Register,
                                 circulant_overlap_table, controlled_unitary,
                                 encode, overlap_table, prepare_register,
                                 shift_unitaries, shift_unitary)
from thermocode.qmatrix import (check_unitary, dephase_register, haar_unitary,
                                numerical_rank, partial_trace, tensor)
from thermocode.thermal import (Hamiltonian, SubspacePartition, coarse_grain,
                                gibbs_populations, gibbs_state)


def test_prepare_register_identity_keeps_gibbs():
    gamma = gibbs_state(Hamiltonian.ladder(3), 1.2)
    reg = prepare_register(gamma, np.eye(3))
    assert_allclose(reg.probabilities, gibbs_populations(Hamiltonian.ladder(3), 1.2))


def test_prepare_register_balanced_unitary():
    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2)
    gamma = gibbs_state(Hamiltonian.ladder(2), 2.7)
    reg = prepare_register(gamma, hadamard)
    assert_allclose(reg.probabilities, [0.5, 0.5], atol=1e-12)


def test_prepare_register_probabilities_normalize():
    rng = np.random.default_rng(30)
    gamma = gibbs_state(Hamiltonian.ladder(4), 0.8)
    for seed in range(5):
        reg = prepare_register(gamma, haar_unitary(4, seed))
        assert_allclose(reg.probabilities.sum(), 1.0, atol=1e-12)
        assert_allclose(reg.probabilities, np.diag(reg.state).real, atol=1e-14)
    with pytest.raises(ValueError):
        prepare_register(gamma, np.eye(3))


def test_register_from_probabilities_padding():
    reg = Register.from_probabilities([0.25, 0.75], dim=4)
    assert reg.dim == 4
    assert_allclose(reg.probabilities, [0.25, 0.75, 0.0, 0.0])
    with pytest.raises(ValueError):
        Register.from_probabilities([0.25, 0.75], dim=1)


def test_register_diag_must_match_state():
    with pytest.raises(ValueError):
        Register(state=np.diag([0.5, 0.5]).astype(complex),
                 probabilities=np.array([0.6, 0.4]))


def test_shift_unitary_identity_and_swap():
    part = SubspacePartition.uniform(2, 2)
    assert_allclose(shift_unitary(0, part), np.eye(2))
    assert_allclose(shift_unitary(1, part), np.array([[0, 1], [1, 0]]))
    with pytest.raises(ValueError):
        shift_unitary(2, part)


def test_shift_unitary_moves_blocks_level_preserving():
    part = SubspacePartition.uniform(6, 3)
    u = shift_unitary(2, part)
    check_unitary(u)
    for y in range(3):
        for l in range(2):
            src = np.zeros(6)
            src[part.index_of(y, l)] = 1.0
            dst = u @ src
            assert dst[part.index_of((y + 2) % 3, l)] == 1.0


def test_shift_unitaries_compose_cyclically():
    part = SubspacePartition.uniform(8, 4)
    us = shift_unitaries(part)
    for x in range(4):
        for y in range(4):
            assert_allclose(us[x] @ us[y], us[(x + y) % 4], atol=1e-14)


def test_controlled_unitary_identity_case():
    part = SubspacePartition.uniform(4, 2)
    us = [np.eye(4, dtype=complex)] * 2
    assert_allclose(controlled_unitary(us, 2), np.eye(8))


def test_controlled_unitary_swap_pattern():
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    u = controlled_unitary([np.eye(2, dtype=complex), swap], 2)
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[1, 1] = 1.0  # |0> block: identity
    expected[2, 3] = expected[3, 2] = 1.0  # |1> block: swap
    assert_allclose(u, expected)


def test_controlled_unitary_random_is_unitary():
    us = [haar_unitary(3, s) for s in range(4)]
    check_unitary(controlled_unitary(us, 6))  # d_R > n pads with identity
    with pytest.raises(ValueError):
        controlled_unitary(us, 3)
    with pytest.raises(ValueError):
        controlled_unitary([np.eye(2), np.eye(3)], 2)


def qubit_instance(beta=1.0, probabilities=None):
    return ProtocolInstance(hamiltonian=Hamiltonian.ladder(2), beta=beta, n=2,
                            probabilities=probabilities)


def test_encode_trivial_unitaries_give_product():
    inst = qubit_instance()
    reg = inst.register()
    system = inst.system_state()
    joint, ensemble = encode(reg, system, [np.eye(2, dtype=complex)] * 2)
    assert_allclose(joint, tensor(reg.state, system), atol=1e-14)
    assert_allclose(ensemble.average, system, atol=1e-14)


def test_encode_marginals_and_register_diag():
    inst = qubit_instance(probabilities=np.array([0.6, 0.4]))
    reg = inst.register()
    joint, ensemble = inst.encode()
    sys_marginal = partial_trace(joint, (2, 2), keep=1)
    assert_allclose(sys_marginal, ensemble.average, atol=1e-12)
    reg_marginal = partial_trace(joint, (2, 2), keep=0)
    assert_allclose(np.diag(reg_marginal).real, reg.probabilities, atol=1e-12)


def test_encode_explicit_mixture_spectrum():
    # rho_tilde = 0.6*gamma + 0.4*X gamma X for the worked qubit
    inst = qubit_instance(probabilities=np.array([0.6, 0.4]))
    _, ensemble = inst.encode()
    g = gibbs_populations(Hamiltonian.ladder(2), 1.0)
    expected = np.sort([0.6 * g[0] + 0.4 * g[1], 0.6 * g[1] + 0.4 * g[0]])
    got = np.sort(np.linalg.eigvalsh(ensemble.average))
    assert_allclose(got, expected, atol=1e-12)


def test_encode_preserves_global_spectrum():
    rng = np.random.default_rng(31)
    for seed in range(6):
        inst = ProtocolInstance(hamiltonian=Hamiltonian.ladder(4), beta=0.9,
                                n=4, register_mode="haar", seed=seed)
        reg = inst.register()
        system = inst.system_state()
        joint, _ = inst.encode()
        before = np.sort(np.linalg.eigvalsh(tensor(reg.state, system)))
        after = np.sort(np.linalg.eigvalsh(joint))
        assert np.max(np.abs(before - after)) <= 1e-9


def test_encode_joint_rank_product_and_dephasing():
    inst = ProtocolInstance(hamiltonian=Hamiltonian.ladder(4), beta=1.5, n=2,
                            register_mode="haar", seed=5)
    reg = inst.register()
    system = inst.system_state()
    joint, _ = inst.encode()
    r_joint = numerical_rank(joint).value
    assert r_joint == (numerical_rank(reg.state).value
                       * numerical_rank(system).value)
    dephased = dephase_register(joint, (2, 4))
    assert numerical_rank(dephased).value >= r_joint


def test_encode_dephased_output_is_classical_quantum():
    inst = ProtocolInstance(hamiltonian=Hamiltonian.ladder(2), beta=1.0, n=2,
                            register_mode="haar", seed=12)
    reg = inst.register()
    joint, ensemble = inst.encode()
    dephased = dephase_register(joint, (2, 2))
    expected = np.zeros((4, 4), dtype=complex)
    for x in range(2):
        expected[x * 2:(x + 1) * 2, x * 2:(x + 1) * 2] = \
            ensemble.probabilities[x] * ensemble.states[x]
    assert_allclose(dephased, expected, atol=1e-12)


def test_encode_repeat_rounds_keep_register_diag():
    inst = qubit_instance(probabilities=np.array([0.3, 0.7]))
    reg = inst.register()
    state = reg.state
    for _ in range(3):
        joint, _ = encode(Register(state=state.copy(),
                                   probabilities=np.diag(state).real.copy()),
                          inst.system_state(), inst.unitaries())
        marg = partial_trace(joint, (2, 2), keep=0)
        assert_allclose(np.diag(marg).real, [0.3, 0.7], atol=1e-12)
        state = marg  # feed the post-round register back in


def test_encode_oversized_register():
    system = gibbs_state(Hamiltonian.ladder(2), 1.0)
    part = SubspacePartition.uniform(2, 2)
    us = [shift_unitary(x, part) for x in range(2)]
    ok = Register.from_probabilities([0.5, 0.5], dim=3)
    joint, ensemble = encode(ok, system, us)
    assert joint.shape == (6, 6)
    assert ensemble.n == 2
    bad = Register.from_probabilities([0.45, 0.45, 0.1])
    with pytest.raises(ValueError):
        encode(bad, system, us)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        Ensemble(probabilities=np.array([0.6, 0.6]),
                 states=(np.eye(2) / 2, np.eye(2) / 2))
    with pytest.raises(ValueError):
        Ensemble(probabilities=np.array([0.5, 0.5]),
                 states=(np.eye(2) / 2, np.eye(3) / 3))


def test_overlap_table_worked_qubit():
    inst = qubit_instance()
    _, ensemble = inst.encode()
    table = overlap_table(ensemble, inst.partition())
    p0 = 1.0 / (1.0 + np.exp(-1.0))
    assert_allclose(table, [[p0, 1 - p0], [1 - p0, p0]], atol=1e-12)


def test_overlap_table_beta_zero_uniform():
    inst = ProtocolInstance(hamiltonian=Hamiltonian.ladder(4), beta=0.0, n=4)
    _, ensemble = inst.encode()
    table = overlap_table(ensemble, inst.partition())
    assert_allclose(table, np.full((4, 4), 0.25), atol=1e-14)


def test_overlap_table_two_routes_agree():
    rng = np.random.default_rng(33)
    for _ in range(10):
        d = int(rng.choice([4, 6, 8]))
        n = int(rng.choice([k for k in range(2, d + 1) if d % k == 0]))
        beta = float(rng.uniform(0, 4))
        h = Hamiltonian(np.sort(rng.uniform(0, 2, size=d)))
        inst = ProtocolInstance(hamiltonian=h, beta=beta, n=n)
        _, ensemble = inst.encode()
        measured = overlap_table(ensemble, inst.partition())
        predicted = circulant_overlap_table(coarse_grain(h, beta, n))
        assert_allclose(measured, predicted, atol=1e-12)
        assert_allclose(measured.sum(axis=0), np.ones(n), atol=1e-12)
        # diagonal entries all carry the block-0 weight
        assert_allclose(np.diag(measured), np.full(n, predicted[0, 0]), atol=1e-12)


def test_protocol_instance_json_roundtrip():
    inst = ProtocolInstance(hamiltonian=Hamiltonian.ladder(4), beta=2.0, n=2,
                            copies=1, probabilities=np.array([0.2, 0.8]))
    again = ProtocolInstance.from_json(inst.to_json())
    assert again.beta == 2.0 and again.n == 2
    assert_allclose(again.probabilities, [0.2, 0.8])
    haar = ProtocolInstance(hamiltonian=Hamiltonian.ladder(2), beta=1.0, n=2,
                            register_mode="haar", seed=99)
    again = ProtocolInstance.from_json(haar.to_json())
    assert again.seed == 99 and again.register_mode == "haar"


def test_protocol_instance_validation():
    h = Hamiltonian.ladder(4)
    with pytest.raises(ValueError):
        ProtocolInstance(hamiltonian=h, beta=1.0, n=3)  # 3 does not divide 4
    with pytest.raises(ValueError):
        ProtocolInstance(hamiltonian=h, beta=1.0, n=2, copies=0)
    with pytest.raises(ValueError):
        ProtocolInstance(hamiltonian=h, beta=1.0, n=2, register_mode="haar")
    with pytest.raises(ValueError):
        ProtocolInstance(hamiltonian=h, beta=1.0, n=2, register_mode="magic")
    with pytest.raises(ValueError):
        ProtocolInstance(hamiltonian=h, beta=1.0, n=2,
                         probabilities=np.array([1.0]))
    # multicopy divisibility: 3 divides 4^2 is false, 8 divides 16 is fine
    with pytest.raises(ValueError):
        ProtocolInstance(hamiltonian=h, beta=1.0, n=3, copies=2)
    ProtocolInstance(hamiltonian=h, beta=1.0, n=8, copies=2)
