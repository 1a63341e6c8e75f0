import pytest

from datacomplexity.simulator import Gate, ParameterizedCircuit, run_circuit


def build_state(n_qubits, gates):
    circuit = ParameterizedCircuit(n_qubits=n_qubits, gates=tuple(gates), n_params=0)
    return run_circuit(circuit, [])


@pytest.fixture
def bell_state():
    return build_state(2, [Gate("H", (0,)), Gate("CNOT", (0, 1))])


@pytest.fixture
def ghz3_state():
    return build_state(3, [Gate("H", (0,)), Gate("CNOT", (0, 1)), Gate("CNOT", (1, 2))])


@pytest.fixture
def product_plus_state():
    # |0> tensor |+>
    return build_state(2, [Gate("H", (1,))])
