"""Configuration profile, canonical hashing, and seeded randomness.

Every tunable of the composite formulas lives in :class:`ConfigProfile` so a
single config file pins a full run. The config hash is 64-bit FNV-1a over the
canonical JSON serialization (sorted keys, compact separators, UTF-8), which
is what reports record for reproducibility.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfig

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


@dataclass(frozen=True)
class SeededRng:
    """Reproducible random source.

    Identical ``(seed, algorithm_id)`` pairs reproduce identical streams
    bit-for-bit. Child streams are derived from ``(seed, *keys)`` so that
    per-sample work is independent of evaluation order.
    """

    seed: int
    algorithm_id: str = "pcg64"

    def __post_init__(self):
        if self.algorithm_id != "pcg64":
            raise InvalidConfig(f"unknown rng algorithm {self.algorithm_id!r}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed)))

    def child(self, *keys: int) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=tuple(int(k) for k in keys))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class ConfigProfile:
    """All weights, thresholds, and numerical conventions of the metric suite.

    Defaults: uniform weights within each group, cumulant threshold 0.1 on
    standardized data, Rips scale capped at the dataset diameter (``None``),
    16 entropy bins per column, 75 fidelity bins.
    """

    # composite weights
    lambda_weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    alpha_weights: tuple[float, ...] = (0.2, 0.2, 0.2, 0.0, 0.2, 0.2)
    beta_weights: tuple[float, ...] = (1 / 6,) * 6
    gamma_weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    w_topology: tuple[float, ...] = (0.5, 0.5)

    # thresholds
    epsilon_cumulant: float = 0.1
    epsilon_grad: float = 1e-4
    lambda_penalty: float = 1.0
    delta_topo: float = 1.0

    # kernel settings
    kernel_kind: str = "rbf"
    kernel_bandwidth: float = 1.0
    kernel_ridge: float = 1e-3

    # topology settings
    rips_max_scale: float | None = None  # None -> dataset diameter
    max_homology_dim: int = 1
    rips_point_cap: int = 512
    euler_scale_fraction: float = 0.5

    # discretization
    bins_entropy: int = 16
    bins_fidelity: int = 75

    # expressibility sampling inside profiling runs
    expressibility_samples: int = 1000

    # circuit resource heuristic coefficients
    resource_q0: float = 2.0
    resource_q1: float = 8.0
    resource_d0: float = 1.0
    resource_d1: float = 2.0

    seed: int = 0

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ConfigProfile":
        known = {f.name: f for f in dataclasses.fields(cls)}
        unknown = set(d) - set(known)
        if unknown:
            raise InvalidConfig(f"unknown config fields: {sorted(unknown)}")
        kwargs = {}
        for k, v in d.items():
            if isinstance(v, list):
                v = tuple(v)
            kwargs[k] = v
        return cls(**kwargs)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> int:
        return fnv1a64(self.canonical_json().encode("utf-8"))


WEIGHT_GROUPS = ("lambda_weights", "alpha_weights", "beta_weights", "gamma_weights", "w_topology")

GROUP_SIZES = {
    "lambda_weights": 4,
    "alpha_weights": 6,
    "beta_weights": 6,
    "gamma_weights": 3,
}


def validate_config(cfg: ConfigProfile, normalize_weights: bool = False) -> ConfigProfile:
    """Validate a config; optionally rescale each weight group to sum to 1.

    Raises :class:`InvalidConfig` on negative weights, an all-zero weight
    group, non-positive thresholds, or an unsupported homology dimension.
    """
    updates: dict[str, tuple[float, ...]] = {}
    for group in WEIGHT_GROUPS:
        weights = getattr(cfg, group)
        expected = GROUP_SIZES.get(group)
        if expected is not None and len(weights) != expected:
            raise InvalidConfig(f"{group} must have {expected} entries, got {len(weights)}")
        if any(w < 0 for w in weights):
            raise InvalidConfig(f"negative weight in {group}: {weights}")
        total = sum(weights)
        if total == 0:
            raise InvalidConfig(f"all-zero weight group {group}")
        if normalize_weights:
            updates[group] = tuple(w / total for w in weights)

    for name in ("epsilon_cumulant", "epsilon_grad", "kernel_bandwidth"):
        if getattr(cfg, name) <= 0:
            raise InvalidConfig(f"{name} must be > 0")
    for name in ("lambda_penalty", "delta_topo", "kernel_ridge"):
        if getattr(cfg, name) < 0:
            raise InvalidConfig(f"{name} must be >= 0")
    if cfg.kernel_kind not in ("linear", "rbf"):
        raise InvalidConfig(f"unknown kernel kind {cfg.kernel_kind!r}")
    if cfg.max_homology_dim not in (0, 1, 2):
        raise InvalidConfig("max_homology_dim must be 0, 1 or 2")
    if cfg.rips_max_scale is not None and cfg.rips_max_scale < 0:
        raise InvalidConfig("rips_max_scale must be >= 0")
    if cfg.bins_entropy < 1 or cfg.bins_fidelity < 1:
        raise InvalidConfig("bin counts must be >= 1")
    if not 0.0 <= cfg.euler_scale_fraction <= 1.0:
        raise InvalidConfig("euler_scale_fraction must lie in [0, 1]")
    if cfg.rips_point_cap < 1:
        raise InvalidConfig("rips_point_cap must be >= 1")
    if cfg.expressibility_samples < 100:
        raise InvalidConfig("expressibility_samples must be >= 100")

    if updates:
        return dataclasses.replace(cfg, **updates)
    return cfg


def load_config(path: str) -> ConfigProfile:
    """Read a JSON config file; missing fields take their defaults."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidConfig("config file must contain a JSON object")
    return validate_config(ConfigProfile.from_dict(data))


def save_config(cfg: ConfigProfile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
