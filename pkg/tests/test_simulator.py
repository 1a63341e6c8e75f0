import json
import math

import numpy as np
import pytest

from datacomplexity.config import SeededRng
from datacomplexity.errors import (
    ArityError,
    CapacityError,
    InvalidState,
    InvalidSubset,
    ParseError,
    ZeroVector,
)
from datacomplexity.simulator import (
    FIXED_GATES,
    PAULI_MATRICES,
    FeatureMap,
    Gate,
    ParameterizedCircuit,
    StateVector,
    encode,
    encoding_circuit,
    expectation,
    fit_feature_map,
    partial_trace,
    partial_trace_density,
    random_layered_circuit,
    required_qubits,
    rotation_matrix,
    run_circuit,
    zero_state,
)

# ---------------------------------------------------------------------------
# oracle: build the full 2^n x 2^n operator with np.kron; qubit 0 is the least
# significant bit, so kron order runs from the highest qubit down


def full_single_qubit_op(u, q, n):
    op = np.eye(1)
    for k in range(n - 1, -1, -1):
        op = np.kron(op, u if k == q else np.eye(2))
    return op


def full_cnot(control, target, n):
    dim = 2**n
    op = np.zeros((dim, dim), dtype=complex)
    for i in range(dim):
        j = i ^ (1 << target) if (i >> control) & 1 else i
        op[j, i] = 1.0
    return op


def full_cz(a, b, n):
    dim = 2**n
    diag = np.ones(dim, dtype=complex)
    for i in range(dim):
        if (i >> a) & 1 and (i >> b) & 1:
            diag[i] = -1.0
    return np.diag(diag)


def full_pauli(pauli):
    op = np.eye(1)
    for ch in reversed(pauli):
        op = np.kron(op, PAULI_MATRICES[ch])
    return op


def circuit_unitary(circuit, theta):
    from datacomplexity.simulator import resolve_angles

    n = circuit.n_qubits
    u = np.eye(2**n, dtype=complex)
    for g, angle in zip(circuit.gates, resolve_angles(circuit, np.asarray(theta, float))):
        if g.name in FIXED_GATES:
            step = full_single_qubit_op(FIXED_GATES[g.name], g.qubits[0], n)
        elif g.name == "CNOT":
            step = full_cnot(g.qubits[0], g.qubits[1], n)
        elif g.name == "CZ":
            step = full_cz(g.qubits[0], g.qubits[1], n)
        else:
            step = full_single_qubit_op(rotation_matrix(g.name, angle), g.qubits[0], n)
        u = step @ u
    return u


# ---------------------------------------------------------------------------
# gates


def test_hadamard_on_zero():
    state = run_circuit(ParameterizedCircuit(1, (Gate("H", (0,)),), 0), [])
    assert state.amplitudes == pytest.approx(np.array([1, 1]) / math.sqrt(2))


def test_bell_construction(bell_state):
    expected = np.zeros(4, dtype=complex)
    expected[0] = expected[3] = 1 / math.sqrt(2)
    assert bell_state.amplitudes == pytest.approx(expected)


def test_ry_rotation():
    theta = 1.234
    c = ParameterizedCircuit(1, (Gate("RY", (0,), param_slot=0),), 1)
    state = run_circuit(c, [theta])
    assert state.amplitudes == pytest.approx([math.cos(theta / 2), math.sin(theta / 2)])


def test_parameter_count_mismatch():
    c = ParameterizedCircuit(1, (Gate("RY", (0,), param_slot=0),), 1)
    with pytest.raises(ArityError):
        run_circuit(c, [0.1, 0.2])


@pytest.mark.parametrize("seed", range(5))
def test_random_circuits_match_dense_oracle(seed):
    rng = SeededRng(seed).generator()
    n = int(rng.integers(2, 5))
    circuit = random_layered_circuit(n, 3, rng)
    theta = rng.uniform(0, 2 * math.pi, circuit.n_params)
    fast = run_circuit(circuit, theta).amplitudes
    dense = circuit_unitary(circuit, theta) @ zero_state(n).amplitudes
    assert fast == pytest.approx(dense, abs=1e-10)


@pytest.mark.parametrize("seed", range(5))
def test_expectations_match_dense_oracle(seed):
    rng = SeededRng(100 + seed).generator()
    n = int(rng.integers(2, 5))
    circuit = random_layered_circuit(n, 2, rng)
    theta = rng.uniform(0, 2 * math.pi, circuit.n_params)
    state = run_circuit(circuit, theta)
    paulis = ["".join(rng.choice(list("IXYZ"), n)) for _ in range(4)]
    for pauli in paulis:
        dense = np.vdot(state.amplitudes, full_pauli(pauli) @ state.amplitudes).real
        assert expectation(state, pauli) == pytest.approx(dense, abs=1e-10)


def test_norm_preserved_through_deep_circuit():
    rng = SeededRng(9).generator()
    circuit = random_layered_circuit(5, 8, rng)
    state = run_circuit(circuit, rng.uniform(0, 2 * math.pi, circuit.n_params))
    assert np.vdot(state.amplitudes, state.amplitudes).real == pytest.approx(1.0, abs=1e-10)


def test_gate_then_inverse_returns_state():
    theta = 0.83
    c_fwd = ParameterizedCircuit(
        2,
        (Gate("RX", (0,), angle=theta), Gate("CNOT", (0, 1)), Gate("CNOT", (0, 1)), Gate("RX", (0,), angle=-theta)),
        0,
    )
    state = run_circuit(c_fwd, [])
    assert state.amplitudes == pytest.approx(zero_state(2).amplitudes, abs=1e-10)


# ---------------------------------------------------------------------------
# expectation values


def test_expectation_examples(bell_state):
    z_plus = zero_state(1)
    assert expectation(z_plus, "Z") == pytest.approx(1.0)
    plus = run_circuit(ParameterizedCircuit(1, (Gate("H", (0,)),), 0), [])
    assert expectation(plus, "X") == pytest.approx(1.0)
    assert expectation(bell_state, "ZZ") == pytest.approx(1.0)
    assert expectation(bell_state, "ZI") == pytest.approx(0.0, abs=1e-10)


def test_expectation_malformed_pauli(bell_state):
    with pytest.raises(ParseError):
        expectation(bell_state, "ZQ")
    with pytest.raises(ParseError):
        expectation(bell_state, "Z")


# ---------------------------------------------------------------------------
# partial trace


def test_partial_trace_bell(bell_state):
    rho = partial_trace(bell_state, [0])
    assert rho.values == pytest.approx(np.eye(2) / 2, abs=1e-10)


def test_partial_trace_product(product_plus_state):
    rho = partial_trace(product_plus_state, [1])
    plus = np.array([1, 1]) / math.sqrt(2)
    assert rho.values == pytest.approx(np.outer(plus, plus), abs=1e-10)


def test_partial_trace_keep_all(bell_state):
    rho = partial_trace(bell_state, [0, 1])
    psi = bell_state.amplitudes
    assert rho.values == pytest.approx(np.outer(psi, psi.conj()), abs=1e-10)


def test_partial_trace_empty_keep(bell_state):
    with pytest.raises(InvalidSubset):
        partial_trace(bell_state, [])


def test_partial_trace_density_consistent(ghz3_state):
    rho_full = partial_trace(ghz3_state, [0, 1, 2])
    via_density = partial_trace_density(rho_full, [0, 2])
    via_state = partial_trace(ghz3_state, [0, 2])
    assert via_density.values == pytest.approx(via_state.values, abs=1e-10)


def test_schmidt_symmetry_random_states():
    # complementary reductions of a pure state share their nonzero spectrum
    rng = SeededRng(11).generator()
    circuit = random_layered_circuit(4, 3, rng)
    state = run_circuit(circuit, rng.uniform(0, 2 * math.pi, circuit.n_params))
    ev_a = np.sort(partial_trace(state, [0, 1]).eigenvalues())[::-1]
    ev_b = np.sort(partial_trace(state, [2, 3]).eigenvalues())[::-1]
    assert ev_a == pytest.approx(ev_b, abs=1e-9)


# ---------------------------------------------------------------------------
# encodings


def test_amplitude_encoding_basis_vector():
    fm = FeatureMap(kind="amplitude", n_qubits=2)
    state = encode(fm, [1, 0, 0, 0])
    assert state.amplitudes == pytest.approx([1, 0, 0, 0])


def test_amplitude_encoding_uniform():
    fm = FeatureMap(kind="amplitude", n_qubits=2)
    state = encode(fm, [1, 1, 1, 1])
    assert state.amplitudes == pytest.approx([0.5] * 4)


def test_amplitude_encoding_zero_vector():
    fm = FeatureMap(kind="amplitude", n_qubits=2)
    with pytest.raises(ZeroVector):
        encode(fm, [0, 0, 0, 0])


def test_amplitude_capacity():
    fm = FeatureMap(kind="amplitude", n_qubits=2)
    with pytest.raises(CapacityError, match="3 qubits"):
        encode(fm, np.ones(8))
    assert required_qubits("amplitude", 8) == 3


def test_angle_encoding_endpoints():
    fm = FeatureMap(kind="angle", n_qubits=1)
    assert encode(fm, [0.0]).amplitudes == pytest.approx([1, 0])
    # RY(pi)|0> = |1> up to global phase
    amps = encode(fm, [1.0]).amplitudes
    assert abs(amps[1]) == pytest.approx(1.0, abs=1e-10)
    assert abs(amps[0]) == pytest.approx(0.0, abs=1e-10)


def test_angle_encoding_minmax_fit():
    fm = fit_feature_map(FeatureMap(kind="angle", n_qubits=1), np.array([[10.0], [20.0]]))
    assert encode(fm, [10.0]).amplitudes == pytest.approx([1, 0])
    assert abs(encode(fm, [20.0]).amplitudes[1]) == pytest.approx(1.0, abs=1e-10)


def test_basis_encoding_one_hot():
    fm = FeatureMap(kind="basis", n_qubits=3)
    state = encode(fm, [0.0, 1.0, 0.0])
    expected = np.zeros(8)
    expected[2] = 1.0
    assert state.amplitudes == pytest.approx(expected)


def test_encoding_circuit_matches_encode():
    fm = fit_feature_map(FeatureMap(kind="angle", n_qubits=2), np.array([[0.0, 0.0], [1.0, 1.0]]))
    circuit = encoding_circuit(fm, 2)
    x = np.array([0.3, 0.8])
    direct = encode(fm, x).amplitudes
    via_circuit = run_circuit(circuit, math.pi * x).amplitudes
    assert direct == pytest.approx(via_circuit, abs=1e-10)


# ---------------------------------------------------------------------------
# random layered circuits


def test_layered_circuit_shapes():
    c1 = random_layered_circuit(1, 1, SeededRng(0).generator())
    assert c1.n_params == 1
    assert sum(g.name == "CNOT" for g in c1.gates) == 0
    c2 = random_layered_circuit(3, 2, SeededRng(0).generator())
    assert c2.n_params == 6
    assert sum(g.name == "CNOT" for g in c2.gates) == 4


def test_layered_circuit_deterministic():
    a = random_layered_circuit(4, 3, SeededRng(21).generator())
    b = random_layered_circuit(4, 3, SeededRng(21).generator())
    assert a == b


def test_circuit_json_round_trip():
    c = random_layered_circuit(3, 2, SeededRng(5).generator())
    back = ParameterizedCircuit.from_json_obj(json.loads(c.to_json()))
    assert back == c


def test_state_norm_validation():
    with pytest.raises(InvalidState):
        StateVector(n_qubits=1, amplitudes=np.array([1.0, 1.0]))
