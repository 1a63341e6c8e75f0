"""Composite complexity scores and the trainability model built on them.

Combines normalized metric components into the classical, quantum-native,
and induced composites, and exposes the gradient-scaling model
Var = exp(-alpha * n * d * (C + delta * C_topo)) plus its inverse fit.

Normalization is min-max against pinned theoretical bounds (entropy vs
log2 N, interaction order vs its 1..4 range, ratios vs 1, entanglement
entropies vs qubit counts) or against a benchmark collection; the mode and
bounds are recorded next to every normalized value so reports stay auditable.
Values outside their bounds clip into [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import effective_rank, gram_spectrum
from .config import ConfigProfile
from .dataset import Dataset
from .errors import (
    DegenerateCollection,
    FitError,
    InvalidConfig,
    MissingMetric,
)
from .qmetrics import (
    GradientStudy,
    QuantumEnsemble,
    collective_z_qfi,
    ensemble_gram,
    expressibility_kl,
    fidelity_distances,
    topological_entanglement_entropy,
    uniform_ensemble,
    von_neumann_entropy,
)
from .simulator import FeatureMap, encode, encoding_circuit, fit_feature_map, partial_trace
from .topology import (
    DistanceMatrix,
    PersistenceDiagram,
    euler_characteristic,
    persistence_diagram,
    rips_filtration,
    topological_complexity,
    total_persistence,
)
from .config import SeededRng

CLASSICAL_COMPONENTS = (
    "distributional_entropy",
    "interaction_order",
    "compression_ratio",
    "topological_complexity",
)


def clip01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


@dataclass(frozen=True)
class MetricEntry:
    raw: float
    normalized: float
    bounds: tuple[float, float]


class MetricVector:
    """Named raw metric values plus their normalized [0, 1] counterparts."""

    def __init__(self):
        self.entries: dict[str, MetricEntry] = {}

    def add(self, name: str, raw: float, bounds: tuple[float, float]) -> float:
        lo, hi = bounds
        if hi <= lo:
            normalized = 0.0
        else:
            normalized = clip01((raw - lo) / (hi - lo))
        self.entries[name] = MetricEntry(raw=float(raw), normalized=normalized, bounds=(float(lo), float(hi)))
        return normalized

    def normalized(self, name: str) -> float:
        if name not in self.entries:
            raise MissingMetric(f"metric {name!r} not present")
        return self.entries[name].normalized

    def to_json_obj(self) -> dict:
        return {
            name: {"raw": e.raw, "normalized": e.normalized, "bounds": list(e.bounds)}
            for name, e in sorted(self.entries.items())
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MetricVector":
        mv = cls()
        for name, entry in obj.items():
            mv.entries[name] = MetricEntry(
                raw=entry["raw"],
                normalized=entry["normalized"],
                bounds=tuple(entry["bounds"]),
            )
        return mv


@dataclass(frozen=True)
class CompositeScore:
    kind: str
    value: float
    weights: tuple[float, ...]
    components: dict
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.value < 0:
            raise InvalidConfig(f"composite value must be >= 0, got {self.value}")

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "weights": list(self.weights),
            "components": self.components,
            "flags": list(self.flags),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "CompositeScore":
        return cls(
            kind=obj["kind"],
            value=obj["value"],
            weights=tuple(obj["weights"]),
            components=obj["components"],
            flags=tuple(obj["flags"]),
        )


def classical_complexity(mv: MetricVector, lambda_weights) -> CompositeScore:
    """Weighted sum of the four normalized classical components."""
    weights = tuple(float(w) for w in lambda_weights)
    if len(weights) != 4:
        raise InvalidConfig("classical composite takes 4 weights")
    if any(w < 0 for w in weights):
        raise InvalidConfig("weights must be >= 0")
    components = {}
    value = 0.0
    for name, w in zip(CLASSICAL_COMPONENTS, weights):
        norm = mv.normalized(name)
        e = mv.entries[name]
        components[name] = {"raw": e.raw, "normalized": norm, "bounds": list(e.bounds), "weight": w}
        value += w * norm
    return CompositeScore(kind="classical", value=value, weights=weights, components=components)


def normalize_complexity(scores) -> list[float]:
    """Divide a benchmark collection by its maximum; the max maps to 1.0."""
    values = [float(s) for s in scores]
    if not values:
        raise DegenerateCollection("empty benchmark collection")
    top = max(values)
    if top <= 0:
        raise DegenerateCollection("collection maximum must be > 0")
    return [v / top for v in values]


def _half_split(n: int) -> list[int]:
    return list(range(n // 2))


def mean_bipartite_entropy(e: QuantumEnsemble) -> float:
    """Probability-weighted half/half entanglement entropy (bits)."""
    n = e.n_qubits
    if n < 2:
        return 0.0
    keep = _half_split(n)
    total = 0.0
    for p, s in zip(e.probabilities, e.states):
        total += p * von_neumann_entropy(partial_trace(s, keep))
    return total


def mean_multipartite_correlation(e: QuantumEnsemble) -> float:
    """Weighted mean of sum_j S(rho_j) - S(rho_full); the full-state entropy
    vanishes for the pure states produced by the simulator."""
    total = 0.0
    for p, s in zip(e.probabilities, e.states):
        total += p * sum(
            von_neumann_entropy(partial_trace(s, [q])) for q in range(s.n_qubits)
        )
    return total


def mean_collective_qfi(e: QuantumEnsemble) -> float:
    return sum(p * collective_z_qfi(s) for p, s in zip(e.probabilities, e.states))


def default_tripartition(n: int) -> tuple[list[int], list[int], list[int]]:
    """Contiguous thirds of the qubit register (as even as possible)."""
    a = list(range(0, math.ceil(n / 3)))
    b = list(range(len(a), len(a) + math.ceil((n - len(a)) / 2)))
    c = list(range(len(a) + len(b), n))
    return a, b, c


@dataclass(frozen=True)
class QuantumTopologyDetail:
    s_topo: float
    euler: int
    euler_scale: float
    persistence_sum: float
    diagram: PersistenceDiagram


def quantum_topology_detail(e: QuantumEnsemble, cfg: ConfigProfile) -> QuantumTopologyDetail:
    """TEE, Euler characteristic, and persistence of the fidelity point cloud.

    Distances are sqrt(1 - fidelity); the Euler characteristic is evaluated
    at euler_scale_fraction of the filtration scale (pinned convention).
    """
    n = e.n_qubits
    if n >= 3:
        a, b, c = default_tripartition(n)
        s_topo = sum(
            p * topological_entanglement_entropy(s, a, b, c)
            for p, s in zip(e.probabilities, e.states)
        )
    else:
        s_topo = 0.0

    dm = DistanceMatrix(values=fidelity_distances(e))
    max_scale = cfg.rips_max_scale if cfg.rips_max_scale is not None else dm.diameter()
    filtration = rips_filtration(dm, max_scale=max_scale, max_dim=cfg.max_homology_dim, point_cap=cfg.rips_point_cap)
    diagram = persistence_diagram(filtration)
    euler_scale = cfg.euler_scale_fraction * max_scale
    euler = euler_characteristic(diagram, euler_scale)
    pers = sum(total_persistence(diagram, k) for k in range(cfg.max_homology_dim + 1))
    return QuantumTopologyDetail(
        s_topo=s_topo,
        euler=euler,
        euler_scale=euler_scale,
        persistence_sum=pers,
        diagram=diagram,
    )


def quantum_topological_complexity(e: QuantumEnsemble, gamma_weights, cfg: ConfigProfile) -> float:
    """gamma1 * TEE + gamma2 * Euler + gamma3 * total persistence of the
    ensemble's fidelity point cloud."""
    g1, g2, g3 = (float(g) for g in gamma_weights)
    if min(g1, g2, g3) < 0:
        raise InvalidConfig("gamma weights must be >= 0")
    detail = quantum_topology_detail(e, cfg)
    return g1 * detail.s_topo + g2 * detail.euler + g3 * detail.persistence_sum


def _ctopq_bound(e: QuantumEnsemble, gamma_weights, diameter: float) -> float:
    g1, g2, g3 = (float(g) for g in gamma_weights)
    return g1 * e.n_qubits + g2 * e.size + g3 * e.size * max(diameter, 1e-12)


def quantum_complexity(
    e: QuantumEnsemble,
    alpha_weights,
    cfg: ConfigProfile,
    magic_value: float | None = None,
) -> CompositeScore:
    """Six-term quantum-native composite over an ensemble of pure states.

    Terms: mean bipartite entanglement entropy, multipartite total
    correlation, effective rank of the fidelity Gram matrix, the magic
    monotone (0 unless supplied by the caller), mean collective-phase QFI,
    and the quantum topological complexity. Each term is normalized against
    its pinned bound before weighting.
    """
    weights = tuple(float(w) for w in alpha_weights)
    if len(weights) != 6:
        raise InvalidConfig("quantum composite takes 6 weights")
    if any(w < 0 for w in weights):
        raise InvalidConfig("weights must be >= 0")

    n = e.n_qubits
    mv = MetricVector()
    mv.add("mean_entanglement_entropy", mean_bipartite_entropy(e), (0.0, max(1, n // 2)))
    mv.add("multipartite_correlation", mean_multipartite_correlation(e), (0.0, float(n)))
    rank = effective_rank(gram_spectrum(ensemble_gram(e)))
    mv.add("ensemble_rank_eff", rank, (0.0, float(e.size)))
    mv.add("magic_monotone", magic_value if magic_value is not None else 0.0, (0.0, 1.0))
    mv.add("mean_qfi", mean_collective_qfi(e), (0.0, float(n**2)))
    detail = quantum_topology_detail(e, cfg)
    ctopq = (
        cfg.gamma_weights[0] * detail.s_topo
        + cfg.gamma_weights[1] * detail.euler
        + cfg.gamma_weights[2] * detail.persistence_sum
    )
    dm_diam = float(np.max(fidelity_distances(e))) if e.size > 1 else 0.0
    mv.add("quantum_topological_complexity", ctopq, (0.0, _ctopq_bound(e, cfg.gamma_weights, dm_diam)))

    order = (
        "mean_entanglement_entropy",
        "multipartite_correlation",
        "ensemble_rank_eff",
        "magic_monotone",
        "mean_qfi",
        "quantum_topological_complexity",
    )
    components = {}
    value = 0.0
    for name, w in zip(order, weights):
        entry = mv.entries[name]
        components[name] = {
            "raw": entry.raw,
            "normalized": entry.normalized,
            "bounds": list(entry.bounds),
            "weight": w,
        }
        value += w * entry.normalized
    flags = ("qfi_generator=collective_z", "tee_convention=tripartite")
    if magic_value is None:
        flags = flags + ("magic_monotone=unsupported",)
    return CompositeScore(kind="quantum", value=value, weights=weights, components=components, flags=flags)


def embed_dataset(ds: Dataset, fm: FeatureMap) -> QuantumEnsemble:
    """Encode every row and return the uniform ensemble of embedded states."""
    fitted = fit_feature_map(fm, ds.matrix) if fm.kind == "angle" else fm
    states = [encode(fitted, row) for row in ds.matrix]
    return uniform_ensemble(states)


def induced_complexity(
    ds: Dataset,
    fm: FeatureMap,
    beta_weights,
    cfg: ConfigProfile,
) -> CompositeScore:
    """Feature-map-induced composite M1..M6 on the embedded dataset.

    M5 (expressibility vs locality) is a decided proxy: exp(-KL) of the
    encoding circuit divided by its mean gate support, defined only for
    angle maps; basis and amplitude maps report it as 0 and are flagged.
    """
    weights = tuple(float(w) for w in beta_weights)
    if len(weights) != 6:
        raise InvalidConfig("induced composite takes 6 weights")
    if any(w < 0 for w in weights):
        raise InvalidConfig("weights must be >= 0")

    ensemble = embed_dataset(ds, fm)
    n = ensemble.n_qubits
    n_states = ensemble.size
    gram = ensemble_gram(ensemble)
    rank = effective_rank(gram_spectrum(gram))
    qfis = [collective_z_qfi(s) for s in ensemble.states]
    detail = quantum_topology_detail(ensemble, cfg)
    distances = fidelity_distances(ensemble)
    diameter = float(distances.max()) if n_states > 1 else 0.0

    flags = ["qfi_generator=collective_z"]
    if fm.kind == "angle":
        circuit = encoding_circuit(fm, ds.n_features)
        kl = expressibility_kl(
            circuit, cfg.expressibility_samples, cfg.bins_fidelity, SeededRng(cfg.seed)
        )
        support = float(np.mean([len(g.qubits) for g in circuit.gates]))
        m5 = math.exp(-kl) / support
        flags.append("m5=decided_proxy")
    else:
        m5 = 0.0
        flags.append("m5=not_applicable")

    mv = MetricVector()
    mv.add("m1_support_dimension", rank, (0.0, float(n_states)))
    mv.add("m2_qfi_spread", float(np.var(qfis)), (0.0, float(n**4) / 4.0))
    mv.add("m3_entanglement_entropy", mean_bipartite_entropy(ensemble), (0.0, max(1, n // 2)))
    mv.add("m4_kernel_flatness", rank / n_states, (0.0, 1.0))
    mv.add("m5_expressibility_locality", m5, (0.0, 1.0))
    w_sum = sum(cfg.w_topology)
    m6 = topological_complexity(detail.diagram, cfg.w_topology)
    mv.add("m6_embedding_topology", m6, (0.0, max(w_sum * n_states * max(diameter, 1e-12), 1e-12)))

    order = (
        "m1_support_dimension",
        "m2_qfi_spread",
        "m3_entanglement_entropy",
        "m4_kernel_flatness",
        "m5_expressibility_locality",
        "m6_embedding_topology",
    )
    components = {}
    value = 0.0
    for name, w in zip(order, weights):
        entry = mv.entries[name]
        components[name] = {
            "raw": entry.raw,
            "normalized": entry.normalized,
            "bounds": list(entry.bounds),
            "weight": w,
        }
        value += w * entry.normalized
    return CompositeScore(kind="induced", value=value, weights=weights, components=components, flags=tuple(flags))


def trainability_prediction(
    n_qubits: int,
    depth: int,
    c_norm: float,
    alpha: float,
    c_topo_q: float = 0.0,
    delta: float = 0.0,
) -> float:
    """Predicted gradient variance exp(-alpha n d (C + delta C_topo))."""
    if min(n_qubits, depth) < 0 or min(c_norm, alpha, c_topo_q, delta) < 0:
        raise InvalidConfig("all model inputs must be >= 0")
    return math.exp(-alpha * n_qubits * depth * (c_norm + delta * c_topo_q))


def fit_alpha(study: GradientStudy, depth: int, c_norm: float) -> float:
    """Recover alpha from a study: least-squares slope of ln Var over n,
    divided by -depth * c_norm."""
    if len(study.n_range) < 3:
        raise FitError("need at least 3 study points")
    if any(v <= 0 for v in study.variances):
        raise FitError("variances must be > 0 to fit the log-linear model")
    if depth <= 0 or c_norm <= 0:
        raise FitError("depth and c_norm must be > 0")
    ns = np.asarray(study.n_range, dtype=np.float64)
    slope = float(np.polyfit(ns, np.log(study.variances), 1)[0])
    return -slope / (depth * c_norm)


def trainability_condition(predicted_var: float, epsilon_grad: float) -> bool:
    """Trainable iff the predicted variance stays at or above the noise floor."""
    if predicted_var < 0 or epsilon_grad < 0:
        raise InvalidConfig("inputs must be >= 0")
    return predicted_var >= epsilon_grad


def expressibility_norm_from_kl(kl: float) -> float:
    """Map a KL expressibility gap onto [0, 1] as exp(-KL).

    1 means Haar-like coverage, 0 means no coverage; this is the pinned scale
    that makes the mismatch penalty comparable to normalized complexity.
    """
    if kl < 0:
        raise InvalidConfig("KL divergence must be >= 0")
    return math.exp(-kl)


def generalization_gap(
    eps_emp: float,
    expressibility_norm: float,
    c_data_norm: float,
    lambda_penalty: float,
) -> float:
    """Empirical error plus the mismatch penalty lambda |E - C|."""
    if min(eps_emp, expressibility_norm, c_data_norm, lambda_penalty) < 0:
        raise InvalidConfig("inputs must be >= 0")
    return eps_emp + lambda_penalty * abs(expressibility_norm - c_data_norm)


def circuit_resource_estimate(c_norm: float, cfg: ConfigProfile) -> tuple[int, int]:
    """Heuristic (qubits, depth) requirement, monotone in the complexity score."""
    if not 0.0 <= c_norm <= 1.0:
        raise InvalidConfig("c_norm must lie in [0, 1]")
    qubits = math.ceil(cfg.resource_q0 + cfg.resource_q1 * c_norm)
    depth = math.ceil(cfg.resource_d0 * math.exp(cfg.resource_d1 * c_norm))
    return qubits, depth
