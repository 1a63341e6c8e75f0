"""Report assembly, JSON schema, and the profiling pipelines behind the CLI.

Reports are deterministic under (inputs, config, seed): keys are sorted,
floats serialize via repr, and wall-clock timings are kept out of the JSON
unless explicitly requested (they are the one non-reproducible field).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .classical import (
    covariance_spectrum,
    compression_ratio,
    distributional_entropy,
    gram_spectrum,
    intrinsic_dimension,
    interaction_order,
    kernel_effective_dimension,
    kernel_gram,
    effective_rank,
)
from .config import ConfigProfile, SeededRng
from .dataset import Dataset, standardize
from .errors import CapacityError, DataComplexityError, MissingMetric
from .qmetrics import GradientStudy, schmidt_rank, gradient_variance_study
from .scoring import (
    CompositeScore,
    MetricVector,
    classical_complexity,
    circuit_resource_estimate,
    clip01,
    embed_dataset,
    induced_complexity,
    quantum_complexity,
)
from .simulator import FeatureMap, required_qubits
from .topology import (
    distance_matrix_from_points,
    persistence_diagram,
    rips_filtration,
    topological_complexity,
    total_persistence,
)

SCHEMA_VERSION = "v1"

REPORT_SCHEMA_V1 = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "datacomplexity report",
    "type": "object",
    "required": [
        "schema_version",
        "tool_version",
        "config_hash",
        "seed",
        "dataset",
        "metrics",
        "composites",
        "flags",
        "normalization_mode",
    ],
    "properties": {
        "schema_version": {"const": "v1"},
        "tool_version": {"type": "string"},
        "config_hash": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
        "seed": {"type": "integer"},
        "dataset": {"type": "object"},
        "metrics": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["raw", "normalized", "bounds"],
                "properties": {
                    "raw": {"type": "number"},
                    "normalized": {"type": "number", "minimum": 0, "maximum": 1},
                    "bounds": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                },
            },
        },
        "composites": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "value", "weights", "components", "flags"],
                "properties": {
                    "kind": {"enum": ["classical", "quantum", "induced"]},
                    "value": {"type": "number"},
                    "weights": {"type": "array", "items": {"type": "number"}},
                    "components": {"type": "object"},
                    "flags": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "topology": {"type": ["object", "null"]},
        "gradient_study": {"type": ["object", "null"]},
        "resource_estimate": {"type": ["object", "null"]},
        "flags": {"type": "array", "items": {"type": "string"}},
        "normalization_mode": {"type": "string"},
        "timings_ms": {"type": ["object", "null"]},
    },
    "additionalProperties": False,
}


@dataclass
class ComplexityReport:
    config_hash: str
    seed: int
    dataset: dict
    metrics: MetricVector
    composites: list[CompositeScore]
    topology: dict | None = None
    gradient_study: GradientStudy | None = None
    resource_estimate: dict | None = None
    flags: list[str] = field(default_factory=list)
    normalization_mode: str = "pinned_bounds"
    timings_ms: dict = field(default_factory=dict)
    tool_version: str = __version__

    def to_json_obj(self, include_timings: bool = False) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "dataset": self.dataset,
            "metrics": self.metrics.to_json_obj(),
            "composites": [c.to_json_obj() for c in self.composites],
            "topology": self.topology,
            "gradient_study": self.gradient_study.to_json_obj() if self.gradient_study else None,
            "resource_estimate": self.resource_estimate,
            "flags": sorted(self.flags),
            "normalization_mode": self.normalization_mode,
            "timings_ms": dict(sorted(self.timings_ms.items())) if include_timings else None,
        }

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_json_obj(include_timings), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ComplexityReport":
        study = obj.get("gradient_study")
        return cls(
            config_hash=obj["config_hash"],
            seed=obj["seed"],
            dataset=obj["dataset"],
            metrics=MetricVector.from_json_obj(obj["metrics"]),
            composites=[CompositeScore.from_json_obj(c) for c in obj["composites"]],
            topology=obj.get("topology"),
            gradient_study=GradientStudy(
                n_range=tuple(study["n_range"]),
                depth=study["depth"],
                n_samples=study["n_samples"],
                cost_kind=study["cost_kind"],
                variances=tuple(study["variances"]),
                fitted_slope=study["fitted_slope"],
                seed=study["seed"],
            )
            if study
            else None,
            resource_estimate=obj.get("resource_estimate"),
            flags=list(obj["flags"]),
            normalization_mode=obj["normalization_mode"],
            timings_ms=dict(obj["timings_ms"]) if obj.get("timings_ms") else {},
            tool_version=obj["tool_version"],
        )

    @classmethod
    def from_json(cls, text: str) -> "ComplexityReport":
        return cls.from_json_obj(json.loads(text))


def config_hash_hex(cfg: ConfigProfile) -> str:
    return format(cfg.config_hash(), "016x")


class _Timer:
    def __init__(self):
        self.timings: dict[str, float] = {}

    def run(self, name: str, fn):
        t0 = time.perf_counter()
        out = fn()
        self.timings[name] = (time.perf_counter() - t0) * 1000.0
        return out


def _diagram_summary(diagram, w_topology) -> dict:
    h0 = diagram.bars(0)
    h1 = diagram.bars(1)
    max_h0_finite = max((b.lifetime for b in h0 if not b.infinite), default=0.0)
    max_h1 = max((b.lifetime for b in h1), default=0.0)
    return {
        "max_scale": diagram.max_scale,
        "max_dim": diagram.max_dim,
        "n_bars": {str(k): len(diagram.bars(k)) for k in range(diagram.max_dim + 1)},
        "total_persistence": {
            str(k): total_persistence(diagram, k) for k in range(diagram.max_dim + 1)
        },
        "betti_1_dominant": bool(max_h1 > max_h0_finite),
        "intervals": diagram.to_json_obj(),
    }


def profile_classical(ds: Dataset, cfg: ConfigProfile, use_standardized: bool = True) -> ComplexityReport:
    """Run the full classical metric suite plus topology and the composite.

    A failing metric is recorded as an "error:<name>=..." flag and skipped;
    the report stays partial rather than aborting the run.
    """
    timer = _Timer()
    flags = []
    if use_standardized and not ds.is_standardized and ds.n_samples >= 2:
        work = timer.run("standardize", lambda: standardize(ds))
        flags.append("metrics_input=standardized")
    else:
        work = ds
        flags.append(
            "metrics_input=standardized" if ds.is_standardized else "metrics_input=raw"
        )

    n, d = work.n_samples, work.n_features
    mv = MetricVector()

    def attempt(name: str, fn):
        try:
            return timer.run(name, fn)
        except DataComplexityError as exc:
            flags.append(f"error:{name}={exc}")
            return None

    entropy = attempt("distributional_entropy", lambda: distributional_entropy(work, cfg.bins_entropy))
    if entropy is not None:
        mv.add("distributional_entropy", entropy, (0.0, max(math.log2(n), 1e-12) if n > 1 else 1.0))

    if work.is_standardized:
        order = attempt("interaction_order", lambda: interaction_order(work, cfg.epsilon_cumulant))
    else:
        order = 1
        flags.append("interaction_order=raw_input_floor")
    if order is not None:
        mv.add("interaction_order", float(order), (1.0, 4.0))

    ratio = attempt("compression_ratio", lambda: compression_ratio(work))
    if ratio is not None:
        mv.add("compression_ratio", ratio, (0.0, 1.0))

    if work.n_samples >= 2:
        spectrum = attempt("covariance_spectrum", lambda: covariance_spectrum(work))
        if spectrum is not None:
            mv.add("intrinsic_dimension", intrinsic_dimension(spectrum), (0.0, float(d)))
    else:
        flags.append("covariance=skipped_single_row")

    def _kernel():
        gram = kernel_gram(work, cfg.kernel_kind, cfg.kernel_bandwidth)
        return gram_spectrum(gram)

    kspec = attempt("kernel_spectrum", _kernel)
    if kspec is not None:
        mv.add("kernel_effective_dimension", kernel_effective_dimension(kspec, cfg.kernel_ridge), (0.0, float(n)))
        mv.add("kernel_effective_rank", effective_rank(kspec), (0.0, float(n)))

    def _topo():
        dm = distance_matrix_from_points(work.matrix)
        max_scale = cfg.rips_max_scale if cfg.rips_max_scale is not None else dm.diameter()
        filtration = rips_filtration(dm, max_scale=max_scale, max_dim=cfg.max_homology_dim, point_cap=cfg.rips_point_cap)
        return persistence_diagram(filtration), dm.diameter()

    topo = attempt("persistence", _topo)
    topology_summary = None
    if topo is not None:
        diagram, diameter = topo
        c_top = topological_complexity(diagram, cfg.w_topology)
        top_bound = max(sum(cfg.w_topology) * n * max(diameter, 1e-12), 1e-12)
        mv.add("topological_complexity", c_top, (0.0, top_bound))
        topology_summary = _diagram_summary(diagram, cfg.w_topology)

    composites = []
    resource = None
    try:
        composite = classical_complexity(mv, cfg.lambda_weights)
        composites.append(composite)
        qubits, depth = circuit_resource_estimate(clip01(composite.value), cfg)
        resource = {"qubits": qubits, "depth": depth}
    except MissingMetric as exc:
        flags.append(f"error:classical_complexity={exc}")
    flags.append("infinite_bars=capped_at_max_scale")

    return ComplexityReport(
        config_hash=config_hash_hex(cfg),
        seed=cfg.seed,
        dataset=ds.describe(),
        metrics=mv,
        composites=composites,
        topology=topology_summary,
        resource_estimate=resource,
        flags=flags,
        timings_ms=timer.timings,
    )


def profile_quantum(
    ds: Dataset,
    fm_kind: str,
    cfg: ConfigProfile,
    n_qubits: int | None = None,
) -> ComplexityReport:
    """Embed every row and run the quantum metric suite plus both composites.

    Rows are embedded raw (angle maps min-max scale internally); the report
    records that choice.
    """
    timer = _Timer()
    required = required_qubits(fm_kind, ds.n_features)
    n = n_qubits if n_qubits is not None else required
    if n < required:
        raise CapacityError(
            f"{fm_kind} encoding of {ds.n_features} features requires {required} qubits"
        )

    fm = FeatureMap(kind=fm_kind, n_qubits=n)
    ensemble = timer.run("embed", lambda: embed_dataset(ds, fm))

    mv = MetricVector()
    half = list(range(max(1, n // 2))) if n >= 2 else None
    if half:
        ranks = [schmidt_rank(s, half) for s in ensemble.states]
        mv.add("mean_schmidt_rank", float(np.mean(ranks)), (0.0, float(2 ** (n // 2))))

    induced = timer.run(
        "induced_complexity", lambda: induced_complexity(ds, fm, cfg.beta_weights, cfg)
    )
    quantum = timer.run(
        "quantum_complexity", lambda: quantum_complexity(ensemble, cfg.alpha_weights, cfg)
    )
    for name, comp in induced.components.items():
        mv.add(name, comp["raw"], tuple(comp["bounds"]))
    for name, comp in quantum.components.items():
        if name not in mv.entries:
            mv.add(name, comp["raw"], tuple(comp["bounds"]))

    flags = [
        "embedding_input=raw",
        f"feature_map={fm_kind}",
        "infinite_bars=capped_at_max_scale",
    ]
    qubits, depth = circuit_resource_estimate(clip01(induced.value), cfg)
    return ComplexityReport(
        config_hash=config_hash_hex(cfg),
        seed=cfg.seed,
        dataset=ds.describe(),
        metrics=mv,
        composites=[induced, quantum],
        resource_estimate={"qubits": qubits, "depth": depth},
        flags=flags,
        timings_ms=timer.timings,
    )


def barren_study_report(
    n_min: int,
    n_max: int,
    depth: int,
    n_samples: int,
    cost_kind: str,
    cfg: ConfigProfile,
) -> tuple[GradientStudy, ComplexityReport]:
    study = gradient_variance_study(
        range(n_min, n_max + 1), depth, n_samples, cost_kind, SeededRng(cfg.seed)
    )
    mv = MetricVector()
    mv.add("fitted_slope", study.fitted_slope, (-2.0, 0.0))
    report = ComplexityReport(
        config_hash=config_hash_hex(cfg),
        seed=cfg.seed,
        dataset={"source": f"barren_study:n={n_min}..{n_max},depth={depth}"},
        metrics=mv,
        composites=[],
        gradient_study=study,
        flags=[f"cost_kind={cost_kind}"],
    )
    return study, report


def render_report(obj: dict) -> str:
    """Human-readable table for a validated report JSON object."""
    lines = []
    lines.append(f"datacomplexity report (schema {obj['schema_version']}, tool {obj['tool_version']})")
    lines.append(f"config hash: {obj['config_hash']}  seed: {obj['seed']}")
    src = obj["dataset"].get("source", "?")
    lines.append(f"dataset: {src}")
    if obj["dataset"].get("n_samples") is not None:
        lines.append(
            f"  shape: {obj['dataset']['n_samples']} x {obj['dataset']['n_features']}"
        )
    lines.append("")
    lines.append(f"{'metric':<34}{'raw':>14}{'normalized':>12}")
    lines.append("-" * 60)
    for name, entry in obj["metrics"].items():
        lines.append(f"{name:<34}{entry['raw']:>14.6g}{entry['normalized']:>12.4f}")
    if obj["composites"]:
        lines.append("")
        lines.append("composites:")
        for comp in obj["composites"]:
            lines.append(f"  {comp['kind']:<10} {comp['value']:.6f}")
            for flag in comp["flags"]:
                lines.append(f"    flag: {flag}")
    if obj.get("gradient_study"):
        gs = obj["gradient_study"]
        lines.append("")
        lines.append(
            f"gradient study: depth={gs['depth']} samples={gs['n_samples']} "
            f"cost={gs['cost_kind']} slope={gs['fitted_slope']:.4f}"
        )
        for n, v in zip(gs["n_range"], gs["variances"]):
            lines.append(f"  n={n:<3d} var={v:.6e}")
    if obj.get("resource_estimate"):
        re_ = obj["resource_estimate"]
        lines.append("")
        lines.append(f"resource estimate: {re_['qubits']} qubits, depth {re_['depth']}")
    lines.append("")
    lines.append("flags:")
    for flag in obj["flags"]:
        lines.append(f"  {flag}")
    return "\n".join(lines) + "\n"
