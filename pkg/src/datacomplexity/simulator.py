"""Dense statevector simulator with feature-map encodings.

Qubit ordering convention (pinned): qubit q is the q-th least-significant bit
of the amplitude index, so |b_{n-1} ... b_1 b_0> sits at index
sum_q b_q 2^q. All partial traces, Pauli strings, and encodings follow this
ordering. Pauli strings are written with character j acting on qubit j
("ZI" is Z on qubit 0).

Capped at 14 qubits: exact desk-scale simulation, no shot noise, no noise
channels (the gate-error model is a closed-form expression elsewhere).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ArityError,
    CapacityError,
    InvalidConfig,
    InvalidState,
    InvalidSubset,
    ParseError,
    ZeroVector,
)

MAX_QUBITS = 14
NORM_TOL = 1e-10

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

FIXED_GATES = {
    "H": np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

ROTATION_GATES = ("RX", "RY", "RZ")
TWO_QUBIT_GATES = ("CNOT", "CZ")

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": FIXED_GATES["X"],
    "Y": FIXED_GATES["Y"],
    "Z": FIXED_GATES["Z"],
}


def rotation_matrix(axis: str, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    if axis == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if axis == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "RZ":
        return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)
    raise ParseError(f"unknown rotation axis {axis!r}")


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise InvalidConfig(f"n_qubits must be in 1..{MAX_QUBITS}")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_qubits,):
            raise ArityError(f"expected {2**self.n_qubits} amplitudes, got {amps.shape}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm {norm} deviates from 1 beyond tolerance")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(self.inner(other)) ** 2)


def zero_state(n_qubits: int) -> StateVector:
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits=n_qubits, amplitudes=amps)


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        dim = 2**self.n_qubits
        if v.shape != (dim, dim):
            raise ArityError(f"expected {dim}x{dim} density matrix, got {v.shape}")
        if np.max(np.abs(v - v.conj().T)) > 1e-10:
            raise InvalidState("density matrix is not Hermitian within tolerance")
        if abs(np.trace(v).real - 1.0) > 1e-10:
            raise InvalidState(f"trace {np.trace(v).real} deviates from 1")
        v = 0.5 * (v + v.conj().T)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def eigenvalues(self) -> np.ndarray:
        ev = np.linalg.eigvalsh(self.values)
        if np.any(ev < -1e-9):
            raise InvalidState(f"negative eigenvalue {ev.min()} beyond tolerance")
        return np.clip(ev, 0.0, None)


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    param_slot: int | None = None
    angle: float | None = None


@dataclass(frozen=True)
class ParameterizedCircuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int

    def __post_init__(self):
        slots = set()
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise ArityError(f"gate {g.name} addresses qubit out of range: {g.qubits}")
            if g.name in TWO_QUBIT_GATES:
                if len(g.qubits) != 2 or g.qubits[0] == g.qubits[1]:
                    raise ArityError(f"{g.name} needs two distinct qubits")
            elif len(g.qubits) != 1:
                raise ArityError(f"{g.name} is a single-qubit gate")
            if g.name in ROTATION_GATES:
                if (g.param_slot is None) == (g.angle is None):
                    raise ArityError("rotation gates need exactly one of param_slot/angle")
                if g.param_slot is not None:
                    slots.add(g.param_slot)
            elif g.param_slot is not None or g.angle is not None:
                raise ArityError(f"{g.name} takes no parameter")
        if slots and slots != set(range(self.n_params)):
            raise ArityError("parameter slots must be contiguous 0..n_params-1")
        if not slots and self.n_params != 0:
            raise ArityError("n_params > 0 but no parameterized gate present")

    def to_json_obj(self) -> dict:
        recs = []
        for g in self.gates:
            rec: dict = {"gate": g.name, "qubits": list(g.qubits)}
            if g.param_slot is not None:
                rec["param"] = g.param_slot
            if g.angle is not None:
                rec["angle"] = g.angle
            recs.append(rec)
        return {"n_qubits": self.n_qubits, "n_params": self.n_params, "gates": recs}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ParameterizedCircuit":
        gates = tuple(
            Gate(
                name=rec["gate"],
                qubits=tuple(rec["qubits"]),
                param_slot=rec.get("param"),
                angle=rec.get("angle"),
            )
            for rec in obj["gates"]
        )
        return cls(n_qubits=obj["n_qubits"], gates=gates, n_params=obj["n_params"])


def _apply_single(amps: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    view = amps.reshape(2 ** (n - 1 - q), 2, 2**q)
    return np.einsum("ab,xby->xay", u, view).reshape(-1)


def _apply_cnot(amps: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    idx = np.arange(2**n)
    mask = (idx >> control) & 1 == 1
    out = amps.copy()
    out[idx[mask]] = amps[idx[mask] ^ (1 << target)]
    return out


def _apply_cz(amps: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    idx = np.arange(2**n)
    mask = ((idx >> a) & 1 == 1) & ((idx >> b) & 1 == 1)
    out = amps.copy()
    out[mask] *= -1.0
    return out


def resolve_angles(c: ParameterizedCircuit, theta: np.ndarray) -> list[float | None]:
    """Concrete angle per gate record (None for non-rotations)."""
    angles: list[float | None] = []
    for g in c.gates:
        if g.name in ROTATION_GATES:
            angles.append(float(theta[g.param_slot]) if g.param_slot is not None else g.angle)
        else:
            angles.append(None)
    return angles


def run_with_angles(c: ParameterizedCircuit, angles: list[float | None], state: StateVector) -> StateVector:
    """Apply the gate list with pre-resolved angles (internal fast path)."""
    amps = state.amplitudes.astype(complex, copy=True)
    n = c.n_qubits
    for g, angle in zip(c.gates, angles):
        if g.name in FIXED_GATES:
            amps = _apply_single(amps, FIXED_GATES[g.name], g.qubits[0], n)
        elif g.name in ROTATION_GATES:
            amps = _apply_single(amps, rotation_matrix(g.name, angle), g.qubits[0], n)
        elif g.name == "CNOT":
            amps = _apply_cnot(amps, g.qubits[0], g.qubits[1], n)
        elif g.name == "CZ":
            amps = _apply_cz(amps, g.qubits[0], g.qubits[1], n)
        else:
            raise ParseError(f"unknown gate {g.name!r}")
    return StateVector(n_qubits=n, amplitudes=amps)


def run_circuit(c: ParameterizedCircuit, theta, state: StateVector | None = None) -> StateVector:
    """Apply every gate in order to `state` (default |0...0>)."""
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != c.n_params:
        raise ArityError(f"circuit takes {c.n_params} parameters, got {theta.size}")
    if state is None:
        state = zero_state(c.n_qubits)
    if state.n_qubits != c.n_qubits:
        raise ArityError("state and circuit qubit counts differ")
    return run_with_angles(c, resolve_angles(c, theta), state)


@dataclass(frozen=True)
class FeatureMap:
    """Classical-to-quantum encoding: basis, angle, or amplitude.

    Angle encoding applies RY(pi * x~_j) on qubit j after min-max scaling x to
    [0, 1] using `feature_min`/`feature_max` (set via `fit`, or supply data
    already in [0, 1]). Basis encoding thresholds each feature at > 0. The
    amplitude map L2-normalizes and zero-pads the row into the amplitudes.
    """

    kind: str
    n_qubits: int
    angle_axis: str = "RY"
    feature_min: tuple[float, ...] | None = None
    feature_max: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("basis", "angle", "amplitude"):
            raise InvalidConfig(f"unknown feature map kind {self.kind!r}")
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise InvalidConfig(f"n_qubits must be in 1..{MAX_QUBITS}")


def required_qubits(kind: str, n_features: int) -> int:
    """Minimum qubit count for one encoded row."""
    if kind == "amplitude":
        return max(1, math.ceil(math.log2(max(2, n_features))))
    return n_features


def fit_feature_map(fm: FeatureMap, matrix: np.ndarray) -> FeatureMap:
    """Record per-column min/max so angle encoding scales consistently."""
    lo = matrix.min(axis=0)
    hi = matrix.max(axis=0)
    return FeatureMap(
        kind=fm.kind,
        n_qubits=fm.n_qubits,
        angle_axis=fm.angle_axis,
        feature_min=tuple(float(v) for v in lo),
        feature_max=tuple(float(v) for v in hi),
    )


def _minmax_scale(fm: FeatureMap, x: np.ndarray) -> np.ndarray:
    if fm.feature_min is None or fm.feature_max is None:
        return np.clip(x, 0.0, 1.0)
    lo = np.asarray(fm.feature_min)
    hi = np.asarray(fm.feature_max)
    span = np.where(hi > lo, hi - lo, 1.0)
    return np.clip((x - lo) / span, 0.0, 1.0)


def encoding_circuit(fm: FeatureMap, n_features: int) -> ParameterizedCircuit:
    """The parameterized gate circuit of an angle map (one RY slot per feature)."""
    if fm.kind != "angle":
        raise InvalidConfig("only angle maps have a fixed encoding circuit")
    gates = tuple(Gate(name=fm.angle_axis, qubits=(j,), param_slot=j) for j in range(n_features))
    return ParameterizedCircuit(n_qubits=fm.n_qubits, gates=gates, n_params=n_features)


def encode(fm: FeatureMap, x) -> StateVector:
    """Map one feature vector to a state under the configured encoding."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    d = x.size
    if fm.kind == "amplitude":
        if d > 2**fm.n_qubits:
            raise CapacityError(
                f"amplitude encoding of {d} features requires "
                f"{required_qubits('amplitude', d)} qubits"
            )
        norm = float(np.linalg.norm(x))
        if norm == 0.0:
            raise ZeroVector("cannot amplitude-encode an all-zero vector")
        amps = np.zeros(2**fm.n_qubits, dtype=complex)
        amps[:d] = x / norm
        return StateVector(n_qubits=fm.n_qubits, amplitudes=amps)

    if d > fm.n_qubits:
        raise CapacityError(f"{fm.kind} encoding of {d} features requires {d} qubits")

    if fm.kind == "basis":
        index = 0
        for j in range(d):
            if x[j] > 0.0:
                index |= 1 << j
        amps = np.zeros(2**fm.n_qubits, dtype=complex)
        amps[index] = 1.0
        return StateVector(n_qubits=fm.n_qubits, amplitudes=amps)

    scaled = _minmax_scale(fm, x)
    state = zero_state(fm.n_qubits)
    amps = state.amplitudes.copy()
    for j in range(d):
        amps = _apply_single(amps, rotation_matrix(fm.angle_axis, math.pi * scaled[j]), j, fm.n_qubits)
    return StateVector(n_qubits=fm.n_qubits, amplitudes=amps)


def partial_trace(state: StateVector, keep) -> DensityMatrix:
    """Reduced density matrix over `keep`, ascending qubit order.

    The smallest kept qubit becomes bit 0 of the reduced index.
    """
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise InvalidSubset("keep must be non-empty")
    if any(q < 0 or q >= state.n_qubits for q in keep):
        raise InvalidSubset(f"qubit out of range in {keep}")
    n = state.n_qubits
    tensor = state.amplitudes.reshape((2,) * n)
    # axis of qubit q in the reshaped tensor is n-1-q (MSB first)
    kept_axes = [n - 1 - q for q in reversed(keep)]
    other_axes = [ax for ax in range(n) if ax not in kept_axes]
    mat = tensor.transpose(kept_axes + other_axes).reshape(2 ** len(keep), -1)
    rho = mat @ mat.conj().T
    return DensityMatrix(n_qubits=len(keep), values=rho)


def partial_trace_density(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix of a (possibly mixed) state."""
    keep = sorted(set(int(q) for q in keep))
    if not keep:
        raise InvalidSubset("keep must be non-empty")
    n = rho.n_qubits
    if any(q < 0 or q >= n for q in keep):
        raise InvalidSubset(f"qubit out of range in {keep}")
    tensor = rho.values.reshape((2,) * (2 * n))
    kept_axes = [n - 1 - q for q in reversed(keep)]
    other_axes = [ax for ax in range(n) if ax not in kept_axes]
    perm = kept_axes + other_axes + [n + ax for ax in kept_axes] + [n + ax for ax in other_axes]
    k = len(keep)
    block = tensor.transpose(perm).reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
    reduced = np.einsum("aibi->ab", block)
    return DensityMatrix(n_qubits=k, values=reduced)


def parse_pauli(pauli: str, n_qubits: int) -> str:
    if not isinstance(pauli, str) or len(pauli) != n_qubits:
        raise ParseError(f"Pauli string must have length {n_qubits}: {pauli!r}")
    up = pauli.upper()
    if any(ch not in "IXYZ" for ch in up):
        raise ParseError(f"Pauli string may only contain I, X, Y, Z: {pauli!r}")
    return up


def apply_pauli(state: StateVector, pauli: str) -> StateVector:
    pauli = parse_pauli(pauli, state.n_qubits)
    amps = state.amplitudes.astype(complex, copy=True)
    for q, ch in enumerate(pauli):
        if ch != "I":
            amps = _apply_single(amps, PAULI_MATRICES[ch], q, state.n_qubits)
    return StateVector(n_qubits=state.n_qubits, amplitudes=amps)


def expectation(state: StateVector, pauli: str, coeff: float = 1.0) -> float:
    """<psi| coeff * P |psi>; character j of `pauli` acts on qubit j."""
    transformed = apply_pauli(state, pauli)
    value = coeff * np.vdot(state.amplitudes, transformed.amplitudes)
    if abs(value.imag) > 1e-10:
        raise InvalidState(f"expectation came out non-real: {value}")
    return float(value.real)


def random_layered_circuit(n_qubits: int, depth: int, rng) -> ParameterizedCircuit:
    """Hardware-efficient ansatz: per layer one random-axis rotation per qubit
    (axis uniform over RX/RY/RZ), then a CNOT ladder (q, q+1).

    `rng` is a numpy Generator or anything exposing `.generator()` (SeededRng).
    """
    if n_qubits < 1 or depth < 1:
        raise InvalidConfig("need n_qubits >= 1 and depth >= 1")
    if hasattr(rng, "generator"):
        rng = rng.generator()
    gates: list[Gate] = []
    slot = 0
    for _ in range(depth):
        axes = rng.integers(0, 3, size=n_qubits)
        for q in range(n_qubits):
            gates.append(Gate(name=ROTATION_GATES[axes[q]], qubits=(q,), param_slot=slot))
            slot += 1
        for q in range(n_qubits - 1):
            gates.append(Gate(name="CNOT", qubits=(q, q + 1)))
    return ParameterizedCircuit(n_qubits=n_qubits, gates=tuple(gates), n_params=slot)
