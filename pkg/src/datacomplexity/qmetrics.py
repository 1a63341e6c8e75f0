"""Quantum-native metrics computed on simulator outputs.

Entropies are in bits (base-2 logs). KL divergences use natural logs,
matching the usual expressibility convention. The topological entanglement
entropy uses the tripartite combination
S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC, which is one of several
conventions in use; reports flag it as convention-dependent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .config import SeededRng
from .errors import (
    ArityError,
    EnsembleError,
    InvalidConfig,
    InvalidState,
    InvalidSubset,
    OrderTooHigh,
)
from .simulator import (
    DensityMatrix,
    ParameterizedCircuit,
    StateVector,
    expectation,
    partial_trace,
    partial_trace_density,
    random_layered_circuit,
    resolve_angles,
    run_circuit,
    run_with_angles,
    zero_state,
)

CORRELATOR_ORDER_CAP = 4
SCHMIDT_TOL = 1e-10
KL_SMOOTHING = 1e-9


@dataclass(frozen=True)
class QuantumEnsemble:
    states: tuple[StateVector, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if not self.states:
            raise EnsembleError("ensemble must contain at least one state")
        n = self.states[0].n_qubits
        if any(s.n_qubits != n for s in self.states):
            raise EnsembleError("ensemble states must share one qubit count")
        if len(self.probabilities) != len(self.states):
            raise EnsembleError("need one probability per state")
        p = np.asarray(self.probabilities, dtype=np.float64)
        if np.any(p < 0):
            raise EnsembleError("probabilities must be >= 0")
        if abs(p.sum() - 1.0) > 1e-10:
            raise EnsembleError(f"probabilities sum to {p.sum()}, not 1")

    @property
    def n_qubits(self) -> int:
        return self.states[0].n_qubits

    @property
    def size(self) -> int:
        return len(self.states)


def uniform_ensemble(states) -> QuantumEnsemble:
    states = tuple(states)
    p = 1.0 / len(states)
    return QuantumEnsemble(states=states, probabilities=(p,) * len(states))


@dataclass(frozen=True)
class GradientStudy:
    n_range: tuple[int, ...]
    depth: int
    n_samples: int
    cost_kind: str
    variances: tuple[float, ...]
    fitted_slope: float
    seed: int

    def __post_init__(self):
        if len(self.variances) != len(self.n_range):
            raise InvalidConfig("one variance per qubit count required")
        if any(v < 0 for v in self.variances):
            raise InvalidConfig("variances must be >= 0")

    def to_json_obj(self) -> dict:
        return {
            "n_range": list(self.n_range),
            "depth": self.depth,
            "n_samples": self.n_samples,
            "cost_kind": self.cost_kind,
            "variances": list(self.variances),
            "fitted_slope": self.fitted_slope,
            "seed": self.seed,
        }

    def to_csv(self) -> str:
        lines = ["n,variance"]
        for n, v in zip(self.n_range, self.variances):
            lines.append(f"{n},{v!r}")
        return "\n".join(lines) + "\n"


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr(rho log2 rho) over eigenvalues above 1e-12, in bits."""
    ev = rho.eigenvalues()
    ev = ev[ev > 1e-12]
    if ev.size == 0:
        raise InvalidState("density matrix has no positive eigenvalue")
    return max(float(-(ev * np.log2(ev)).sum()), 0.0)


def schmidt_rank(state: StateVector, partition) -> int:
    """Singular values above 1e-10 of the amplitude matrix split by `partition`."""
    side_a = sorted(set(int(q) for q in partition))
    n = state.n_qubits
    side_b = [q for q in range(n) if q not in side_a]
    if not side_a or not side_b:
        raise InvalidSubset("bipartition needs two non-empty sides")
    if any(q < 0 or q >= n for q in side_a):
        raise InvalidSubset(f"qubit out of range in {side_a}")
    tensor = state.amplitudes.reshape((2,) * n)
    axes_a = [n - 1 - q for q in reversed(side_a)]
    axes_b = [n - 1 - q for q in reversed(side_b)]
    mat = tensor.transpose(axes_a + axes_b).reshape(2 ** len(side_a), 2 ** len(side_b))
    sv = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(sv > SCHMIDT_TOL))


def quantum_mutual_information(state, subset_a, subset_b) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) in bits, clamped at zero.

    Accepts a pure StateVector or a DensityMatrix over the full register.
    """
    a = sorted(set(int(q) for q in subset_a))
    b = sorted(set(int(q) for q in subset_b))
    if not a or not b:
        raise InvalidSubset("subsets must be non-empty")
    if set(a) & set(b):
        raise InvalidSubset(f"subsets overlap: {a} vs {b}")
    if isinstance(state, StateVector):
        reduce = lambda keep: partial_trace(state, keep)
        n = state.n_qubits
    elif isinstance(state, DensityMatrix):
        reduce = lambda keep: partial_trace_density(state, keep)
        n = state.n_qubits
    else:
        raise InvalidSubset("expected a StateVector or DensityMatrix")
    if any(q >= n for q in a + b):
        raise InvalidSubset("qubit out of range")
    info = (
        von_neumann_entropy(reduce(a))
        + von_neumann_entropy(reduce(b))
        - von_neumann_entropy(reduce(a + b))
    )
    if info < -1e-9:
        raise InvalidState(f"mutual information {info} below zero beyond tolerance")
    return max(info, 0.0)


def _set_partitions(items: tuple[int, ...]):
    if len(items) == 1:
        yield [items]
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1 :]
        yield [(first,)] + part


def connected_correlator(state: StateVector, observables, _cache: dict | None = None) -> float:
    """Joint cumulant of single-qubit observables via the partition formula.

    `observables` is a list of (qubit, pauli) pairs on distinct qubits; every
    lower-order factorization is subtracted, so product states give zero.
    """
    obs = [(int(q), p.upper()) for q, p in observables]
    qubits = [q for q, _ in obs]
    if len(set(qubits)) != len(qubits):
        raise InvalidSubset(f"repeated qubit in {qubits}")
    k = len(obs)
    if k < 1:
        raise InvalidSubset("need at least one observable")
    if k > CORRELATOR_ORDER_CAP:
        raise OrderTooHigh(f"order {k} above the cap {CORRELATOR_ORDER_CAP}")
    cache = _cache if _cache is not None else {}

    def moment(block: tuple[int, ...]) -> float:
        chars = ["I"] * state.n_qubits
        for pos in block:
            q, p = obs[pos]
            chars[q] = p
        pauli = "".join(chars)
        if pauli not in cache:
            cache[pauli] = expectation(state, pauli)
        return cache[pauli]

    value = 0.0
    for part in _set_partitions(tuple(range(k))):
        term = 1.0
        for block in part:
            term *= moment(block)
        r = len(part)
        value += (-1.0) ** (r - 1) * float(math.factorial(r - 1)) * term
    return value


def quantum_interaction_order(state: StateVector, epsilon: float, axes=("X", "Z")) -> int:
    """Largest order k in 2..4 with a connected correlator above epsilon.

    Scans all distinct-qubit index sets and all Pauli assignments from `axes`
    in a fixed lexicographic order; returns 1 when nothing is significant.
    """
    if epsilon <= 0:
        raise InvalidConfig("epsilon must be > 0")
    axes = tuple(a.upper() for a in axes)
    if any(a not in "XYZ" for a in axes):
        raise InvalidConfig(f"axes must be Pauli letters, got {axes}")
    n = state.n_qubits
    cache: dict = {}
    result = 1
    for k in range(2, min(CORRELATOR_ORDER_CAP, n) + 1):
        found = False
        for qubits in combinations(range(n), k):
            for assignment in product(axes, repeat=k):
                c = connected_correlator(state, list(zip(qubits, assignment)), _cache=cache)
                if abs(c) > epsilon:
                    found = True
                    break
            if found:
                break
        if found:
            result = k
    return result


def haar_fidelity_pdf(n_qubits: int, fidelity: float) -> float:
    """Density of |<psi|phi>|^2 for Haar-random pairs: (N-1)(1-F)^(N-2)."""
    if n_qubits < 1:
        raise InvalidConfig("n_qubits must be >= 1")
    if not 0.0 <= fidelity <= 1.0:
        raise InvalidConfig("fidelity must lie in [0, 1]")
    dim = 2**n_qubits
    if dim == 2:
        return 1.0
    return float((dim - 1) * (1.0 - fidelity) ** (dim - 2))


def haar_bin_masses(n_qubits: int, bins: int) -> np.ndarray:
    """Exact Haar probability mass of each equal-width fidelity bin."""
    dim = 2**n_qubits
    edges = np.linspace(0.0, 1.0, bins + 1)
    cdf = 1.0 - (1.0 - edges) ** (dim - 1)
    return np.diff(cdf)


def sample_fidelities(c: ParameterizedCircuit, n_samples: int, rng: SeededRng) -> np.ndarray:
    """Fidelities of state pairs from uniform parameters in [0, 2*pi)^p.

    Sample i uses the child stream (i,) of `rng`, so results do not depend on
    evaluation order.
    """
    out = np.empty(n_samples, dtype=np.float64)
    for i in range(n_samples):
        gen = rng.child(i)
        if c.n_params:
            theta, phi = gen.uniform(0.0, 2.0 * math.pi, size=(2, c.n_params))
        else:
            theta = phi = np.zeros(0)
        s1 = run_circuit(c, theta)
        s2 = run_circuit(c, phi)
        out[i] = s1.fidelity(s2)
    return out


def expressibility_kl(c: ParameterizedCircuit, n_samples: int, bins: int, rng: SeededRng) -> float:
    """KL divergence (nats) of the sampled fidelity histogram from Haar.

    Zero expressibility gap means the circuit covers state space like the
    Haar measure; parameter-free circuits give all-1 fidelities and a large
    but finite KL thanks to the additive smoothing.
    """
    if n_samples < 100:
        raise InvalidConfig("n_samples must be >= 100")
    if bins < 1:
        raise InvalidConfig("bins must be >= 1")
    fidelities = sample_fidelities(c, n_samples, rng)
    counts, _ = np.histogram(fidelities, bins=bins, range=(0.0, 1.0))
    p = (counts + KL_SMOOTHING) / (n_samples + bins * KL_SMOOTHING)
    masses = haar_bin_masses(c.n_qubits, bins)
    q = (masses + KL_SMOOTHING) / (masses.sum() + bins * KL_SMOOTHING)
    return float(np.sum(p * np.log(p / q)))


def _rotation_occurrences(c: ParameterizedCircuit, k: int) -> list[int]:
    if k < 0 or k >= c.n_params:
        raise ArityError(f"parameter index {k} out of range (n_params={c.n_params})")
    occ = [i for i, g in enumerate(c.gates) if g.param_slot == k]
    if not occ:
        raise ArityError(f"parameter {k} does not index a rotation gate")
    return occ


def gradient(c: ParameterizedCircuit, theta, cost_pauli: str, k: int, coeff: float = 1.0) -> float:
    """Parameter-shift derivative of <cost> with respect to parameter k.

    Each occurrence of the slot contributes (C(+pi/2) - C(-pi/2)) / 2 with
    only that gate shifted; the single-occurrence case is the textbook rule.
    """
    occurrences = _rotation_occurrences(c, k)
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != c.n_params:
        raise ArityError(f"circuit takes {c.n_params} parameters, got {theta.size}")
    base = resolve_angles(c, theta)
    start = zero_state(c.n_qubits)
    total = 0.0
    for g in occurrences:
        for sign in (1.0, -1.0):
            shifted = list(base)
            shifted[g] = shifted[g] + sign * math.pi / 2.0
            value = expectation(run_with_angles(c, shifted, start), cost_pauli, coeff)
            total += 0.5 * sign * value
    return total


def pure_state_qfi(c: ParameterizedCircuit, theta, k: int) -> float:
    """Quantum Fisher information 4(<dpsi|dpsi> - |<psi|dpsi>|^2).

    The derivative state is exact for Pauli rotations: shifting one
    occurrence of the slot by pi gives twice its contribution to |dpsi>.
    """
    occurrences = _rotation_occurrences(c, k)
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    base = resolve_angles(c, theta)
    start = zero_state(c.n_qubits)
    psi = run_with_angles(c, base, start).amplitudes
    deriv = np.zeros_like(psi)
    for g in occurrences:
        shifted = list(base)
        shifted[g] = shifted[g] + math.pi
        deriv += 0.5 * run_with_angles(c, shifted, start).amplitudes
    overlap = np.vdot(psi, deriv)
    qfi = 4.0 * (float(np.vdot(deriv, deriv).real) - abs(overlap) ** 2)
    return max(qfi, 0.0)


def collective_z_qfi(state: StateVector) -> float:
    """QFI of a state under the collective phase generator J_z = sum_q Z_q / 2.

    Equals 4 Var(J_z): 0 for computational basis states, n^2 for GHZ states.
    Used as the pinned per-state QFI proxy in the composite scores.
    """
    n = state.n_qubits
    # eigenvalue of J_z on basis state = (n - 2 * popcount) / 2
    pop = np.array([bin(i).count("1") for i in range(2**n)], dtype=np.float64)
    jz = 0.5 * (n - 2.0 * pop)
    probs = np.abs(state.amplitudes) ** 2
    mean = float(np.sum(probs * jz))
    second = float(np.sum(probs * jz**2))
    return 4.0 * max(second - mean**2, 0.0)


def global_cost_pauli(n: int) -> str:
    return "Z" * n


def local_cost_pauli(n: int) -> str:
    return "Z" + "I" * (n - 1)


def gradient_variance_study(
    n_range,
    depth: int,
    n_samples: int,
    cost_kind: str,
    rng: SeededRng,
) -> GradientStudy:
    """Sampled variance of the first parameter's gradient versus qubit count.

    Per sample, a fresh random layered circuit and a uniform parameter vector
    are drawn from a child stream keyed by (n, sample); the fitted slope is
    the least-squares slope of ln Var against n.
    """
    n_range = tuple(int(n) for n in n_range)
    if any(n < 1 or n > 12 for n in n_range):
        raise InvalidConfig("qubit counts must lie in 1..12")
    if n_samples < 200:
        raise InvalidConfig("n_samples must be >= 200")
    if cost_kind not in ("global", "local"):
        raise InvalidConfig(f"unknown cost kind {cost_kind!r}")

    variances = []
    for n in n_range:
        cost = global_cost_pauli(n) if cost_kind == "global" else local_cost_pauli(n)
        grads = np.empty(n_samples, dtype=np.float64)
        for i in range(n_samples):
            gen = rng.child(n, i)
            circuit = random_layered_circuit(n, depth, gen)
            theta = gen.uniform(0.0, 2.0 * math.pi, size=circuit.n_params)
            grads[i] = gradient(circuit, theta, cost, 0)
        variances.append(float(np.var(grads)))

    ns = np.asarray(n_range, dtype=np.float64)
    log_var = np.log(np.maximum(variances, 1e-300))
    slope = float(np.polyfit(ns, log_var, 1)[0]) if len(n_range) >= 2 else 0.0
    return GradientStudy(
        n_range=n_range,
        depth=depth,
        n_samples=n_samples,
        cost_kind=cost_kind,
        variances=tuple(variances),
        fitted_slope=slope,
        seed=rng.seed,
    )


def topological_entanglement_entropy(state: StateVector, a, b, c) -> float:
    """Tripartite entropy combination isolating long-range entanglement.

    Returns S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC in bits; roughly
    -gamma for topologically ordered states and 0 for trivial ones.
    """
    sets = []
    for part in (a, b, c):
        s = sorted(set(int(q) for q in part))
        if not s:
            raise InvalidSubset("tripartition blocks must be non-empty")
        sets.append(s)
    sa, sb, sc = sets
    if set(sa) & set(sb) or set(sb) & set(sc) or set(sa) & set(sc):
        raise InvalidSubset("tripartition blocks must be disjoint")

    def entropy_of(keep):
        if len(keep) == state.n_qubits:
            return 0.0  # full register of a pure state
        return von_neumann_entropy(partial_trace(state, keep))

    return (
        entropy_of(sa)
        + entropy_of(sb)
        + entropy_of(sc)
        - entropy_of(sa + sb)
        - entropy_of(sb + sc)
        - entropy_of(sa + sc)
        + entropy_of(sa + sb + sc)
    )


def circuit_error_rate(epsilon_gate: float, depth: int, gates_per_layer: float) -> float:
    """Closed-form accumulated error 1 - (1 - eps)^(depth * W)."""
    if not 0.0 <= epsilon_gate <= 1.0:
        raise InvalidConfig("gate error rate must lie in [0, 1]")
    exponent = depth * gates_per_layer
    if exponent < 0:
        raise InvalidConfig("depth * gates_per_layer must be >= 0")
    return 1.0 - (1.0 - epsilon_gate) ** exponent


def magic_monotone(rho: DensityMatrix) -> None:
    """Nonclassicality/magic monotone: unsupported, returns None.

    No computable formula is pinned for this quantity; composite scores treat
    it as zero unless the caller supplies a value, and reports flag the gap.
    """
    return None


def ensemble_gram(e: QuantumEnsemble) -> np.ndarray:
    """Pairwise fidelity Gram matrix K[i][j] = |<psi_i|psi_j>|^2."""
    n = e.size
    gram = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        gram[i, i] = 1.0
        for j in range(i + 1, n):
            f = e.states[i].fidelity(e.states[j])
            gram[i, j] = f
            gram[j, i] = f
    return gram


def fidelity_distances(e: QuantumEnsemble) -> np.ndarray:
    """Dissimilarity sqrt(1 - fidelity); zero diagonal, symmetric."""
    d = np.sqrt(np.clip(1.0 - ensemble_gram(e), 0.0, None))
    np.fill_diagonal(d, 0.0)
    return d
