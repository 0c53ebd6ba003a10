"""Distortion experiment: ratios of Hilbert distances to d_1 on random diagrams."""

from __future__ import annotations

import csv
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from .diagram import PersistenceDiagram, sample_uniform_diagram
from .features.estimators import (
    Landscape,
    PersistenceImage,
    PersistenceScaleSpace,
    PersistenceWeightedGaussian,
    TopologicalVector,
)
from .features.gaussian import WEIGHT_FUNCTIONS
from .matching import diagram_distance
from .sliced import sliced_wasserstein_distance

logger = logging.getLogger(__name__)

__all__ = [
    "METHOD_IDS",
    "ConfigError",
    "ExperimentConfig",
    "RatioRow",
    "RatioTable",
    "Summary",
    "bucket_seed",
    "sample_bucket",
    "run_bucket",
    "run_experiment",
    "summarize",
    "emit",
    "read_ratio_table",
    "RATIO_HEADER",
    "BOXPLOT_HEADER",
]

METHOD_IDS = ("PWG", "PSS", "LS", "IM", "TV", "SW_SQRT")
RATIO_HEADER = ("method", "cardinality", "i", "j", "d1", "dh", "ratio")
BOXPLOT_HEADER = ("method", "cardinality", "min", "q1", "median", "q3", "max")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    cardinalities: Tuple[int, ...] = (10, 30, 100)
    diagrams_per_cardinality: int = 30
    rng_seed: int = 0
    methods: Tuple[str, ...] = METHOD_IDS
    pwg_sigma: float = 1.0
    pwg_weight: str = "persistence_squared"
    pss_sigma: float = 1.0
    image_resolution: int = 10
    image_sigma: float = 1.0
    image_weight: str = "persistence"
    tv_length: int = 10
    landscape_k_max: int = 5
    sw_directions: int = 50

    def __post_init__(self):
        object.__setattr__(self, "cardinalities", tuple(self.cardinalities))
        object.__setattr__(self, "methods", tuple(self.methods))
        self.validate()

    def validate(self):
        def pos_int(name):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")

        def pos_real(name):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not (v > 0 and math.isfinite(v)):
                raise ConfigError(f"{name} must be a positive number, got {v!r}")

        if not self.cardinalities:
            raise ConfigError("cardinalities must be nonempty")
        for c in self.cardinalities:
            if isinstance(c, bool) or not isinstance(c, int) or c < 1:
                raise ConfigError(f"cardinalities must be positive integers, got {c!r}")
        if len(set(self.cardinalities)) != len(self.cardinalities):
            raise ConfigError("cardinalities must be distinct")
        if not self.methods:
            raise ConfigError("methods must be nonempty")
        for m in self.methods:
            if m not in METHOD_IDS:
                raise ConfigError(f"unknown method {m!r}; choose from {list(METHOD_IDS)}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods must be distinct")
        if isinstance(self.rng_seed, bool) or not isinstance(self.rng_seed, int) or self.rng_seed < 0:
            raise ConfigError(f"rng_seed must be a nonnegative integer, got {self.rng_seed!r}")
        for name in ("diagrams_per_cardinality", "image_resolution", "tv_length", "landscape_k_max", "sw_directions"):
            pos_int(name)
        for name in ("pwg_sigma", "pss_sigma", "image_sigma"):
            pos_real(name)
        for name in ("pwg_weight", "image_weight"):
            if getattr(self, name) not in WEIGHT_FUNCTIONS:
                raise ConfigError(f"{name} must be one of {sorted(WEIGHT_FUNCTIONS)}")

    @classmethod
    def from_dict(cls, data: Dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        for key in ("cardinalities", "methods"):
            if key in data and not isinstance(data[key], list):
                raise ConfigError(f"{key} must be a list")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def to_dict(self) -> Dict:
        d = asdict(self)
        d["cardinalities"] = list(self.cardinalities)
        d["methods"] = list(self.methods)
        return d

    def full_scale(self) -> "ExperimentConfig":
        """Same parameters on the large grid: 100 diagrams per cardinality from 10 to 1000."""
        d = self.to_dict()
        d.update(cardinalities=[10, 50, 100, 200, 500, 1000], diagrams_per_cardinality=100)
        return ExperimentConfig.from_dict(d)


def _sqrt_sw(n_directions):
    def dist(a, b):
        return math.sqrt(sliced_wasserstein_distance(a, b, n_directions))

    return dist


def build_methods(config: ExperimentConfig) -> Dict[str, Tuple[Callable, Callable]]:
    """Map method id to ``(embed, distance)``; SW_SQRT embeds as the identity."""
    estimators = {
        "PWG": PersistenceWeightedGaussian(sigma=config.pwg_sigma, weight=config.pwg_weight),
        "PSS": PersistenceScaleSpace(sigma=config.pss_sigma),
        "LS": Landscape(k_max=config.landscape_k_max),
        "IM": PersistenceImage(
            resolution=config.image_resolution, sigma=config.image_sigma, weight=config.image_weight
        ),
        "TV": TopologicalVector(length=config.tv_length),
    }
    out = {}
    for m in config.methods:
        if m == "SW_SQRT":
            out[m] = (lambda d: d, _sqrt_sw(config.sw_directions))
        else:
            est = estimators[m]
            out[m] = (est.embed, est.distance)
    return out


def bucket_seed(rng_seed: int, cardinality: int, index: int) -> np.random.SeedSequence:
    """Seed depends only on (seed, cardinality, index), never on bucket order."""
    return np.random.SeedSequence([rng_seed, cardinality, index])


def sample_bucket(config: ExperimentConfig, cardinality: int) -> List[PersistenceDiagram]:
    return [
        sample_uniform_diagram(cardinality, bucket_seed(config.rng_seed, cardinality, i))
        for i in range(config.diagrams_per_cardinality)
    ]


@dataclass(frozen=True)
class RatioRow:
    method: str
    cardinality: int
    i: int
    j: int
    d1: float
    dh: float
    ratio: float


@dataclass
class RatioTable:
    rows: List[RatioRow] = field(default_factory=list)
    skipped: Dict[int, int] = field(default_factory=dict)
    failures: Dict[int, str] = field(default_factory=dict)

    def __len__(self):
        return len(self.rows)

    def ratios(self, method: str, cardinality: int) -> np.ndarray:
        return np.array([r.ratio for r in self.rows if r.method == method and r.cardinality == cardinality])


def _pair_distances(a, b, embedded_a, embedded_b, distances):
    d1 = diagram_distance(a, b, 1)
    return d1, [dist(ea, eb) for dist, ea, eb in zip(distances, embedded_a, embedded_b)]


def run_bucket(
    diagrams: Sequence[PersistenceDiagram],
    cardinality: int,
    config: ExperimentConfig,
    n_jobs: int = 1,
) -> Tuple[List[RatioRow], int]:
    """Ratio rows for every pair i < j of one bucket, plus the count of d_1 = 0 pairs."""
    methods = build_methods(config)
    names = list(methods)
    embeds = [[methods[m][0](d) for m in names] for d in diagrams]
    distances = [methods[m][1] for m in names]
    pairs = [(i, j) for i in range(len(diagrams)) for j in range(i + 1, len(diagrams))]
    if n_jobs == 1:
        results = [_pair_distances(diagrams[i], diagrams[j], embeds[i], embeds[j], distances) for i, j in pairs]
    else:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_pair_distances)(diagrams[i], diagrams[j], embeds[i], embeds[j], distances) for i, j in pairs
        )
    by_method = {m: [] for m in names}
    skipped = 0
    for (i, j), (d1, dhs) in zip(pairs, results):
        if d1 == 0:
            skipped += 1
            continue
        for m, dh in zip(names, dhs):
            by_method[m].append(RatioRow(m, cardinality, i, j, d1, dh, dh / d1))
    rows = [row for m in names for row in by_method[m]]
    return rows, skipped


def run_experiment(config: ExperimentConfig, n_jobs: int = 1) -> RatioTable:
    """Sample each bucket from its own seeds and collect ratio rows.

    A failing bucket is recorded in ``failures`` and the others still run.
    """
    table = RatioTable()
    for c in config.cardinalities:
        start = time.perf_counter()
        try:
            rows, skipped = run_bucket(sample_bucket(config, c), c, config, n_jobs=n_jobs)
        except Exception as exc:  # noqa: BLE001 - one bad bucket must not sink the run
            logger.error("bucket %d aborted: %s", c, exc)
            table.failures[c] = f"{type(exc).__name__}: {exc}"
            continue
        table.rows.extend(rows)
        table.skipped[c] = skipped
        logger.info("bucket %d: %d rows in %.1fs", c, len(rows), time.perf_counter() - start)
    return table


def upper_decile_mean(values: np.ndarray) -> float:
    """Mean of the values at or above the 90th percentile."""
    cut = np.quantile(values, 0.9)
    return float(values[values >= cut].mean())


def _describe(v: np.ndarray) -> Dict:
    q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75])
    return {
        "min": float(v.min()),
        "q1": float(q1),
        "median": float(med),
        "q3": float(q3),
        "max": float(v.max()),
        "mean": float(v.mean()),
        "upper_decile_mean": upper_decile_mean(v),
    }


@dataclass
class Summary:
    """Per (method, cardinality) statistics and per-method trends.

    ``stats`` describes the table's ratio ``dh / d1``; ``distortion`` the
    reciprocal ``d1 / dh``, whose upper tail is the metric distortion that
    grows with cardinality when the lower Lipschitz constant collapses.
    """

    stats: List[Dict] = field(default_factory=list)
    distortion: List[Dict] = field(default_factory=list)
    trend: Dict[str, Dict] = field(default_factory=dict)

    def as_dict(self) -> Dict:
        return {"stats": self.stats, "distortion": self.distortion, "trend": self.trend}


def _trend(cards, described):
    deciles = [d["upper_decile_mean"] for d in described]
    return {
        "max": [d["max"] for d in described],
        "upper_decile_mean": deciles,
        "upper_decile_strictly_increasing": all(a < b for a, b in zip(deciles, deciles[1:])),
    }


def summarize(table: RatioTable) -> Summary:
    groups: Dict[Tuple[str, int], List[float]] = {}
    for r in table.rows:
        groups.setdefault((r.method, r.cardinality), []).append(r.ratio)
    summary = Summary()
    method_order = [m for m in METHOD_IDS if any(k[0] == m for k in groups)]
    for m in method_order:
        cards = sorted(c for (mm, c) in groups if mm == m)
        ratio_desc, dist_desc = [], []
        for c in cards:
            v = np.asarray(groups[(m, c)])
            with np.errstate(divide="ignore"):
                inv = np.where(v > 0, 1.0 / np.where(v > 0, v, 1.0), np.inf)
            rd, dd = _describe(v), _describe(inv)
            head = {"method": m, "cardinality": c, "count": int(v.size)}
            summary.stats.append({**head, **rd})
            summary.distortion.append({**head, **dd})
            ratio_desc.append(rd)
            dist_desc.append(dd)
        summary.trend[m] = {
            "cardinalities": cards,
            "ratio": _trend(cards, ratio_desc),
            "distortion": _trend(cards, dist_desc),
        }
    return summary


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def emit(obj, path, format: str = "csv", orientation: str = "ratio") -> None:
    """Write a RatioTable or Summary as CSV or JSON with a fixed layout.

    Summaries in CSV form are the boxplot table, of ``dh / d1`` by default or
    of ``d1 / dh`` with ``orientation="distortion"``.
    """
    path = Path(path)
    if format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    try:
        if isinstance(obj, RatioTable):
            if format == "csv":
                _write_csv(path, RATIO_HEADER, ([getattr(r, f) for f in RATIO_HEADER] for r in obj.rows))
            else:
                _write_json(
                    path,
                    {
                        "rows": [{f: getattr(r, f) for f in RATIO_HEADER} for r in obj.rows],
                        "skipped": {str(k): v for k, v in obj.skipped.items()},
                        "failures": {str(k): v for k, v in obj.failures.items()},
                    },
                )
        elif isinstance(obj, Summary):
            if format == "csv":
                if orientation not in ("ratio", "distortion"):
                    raise ValueError(f"orientation must be 'ratio' or 'distortion', got {orientation!r}")
                stats = obj.stats if orientation == "ratio" else obj.distortion
                _write_csv(path, BOXPLOT_HEADER, ([s[f] for f in BOXPLOT_HEADER] for s in stats))
            else:
                _write_json(path, obj.as_dict())
        else:
            raise TypeError(f"cannot emit {type(obj).__name__}")
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror or exc}") from exc


def read_ratio_table(path, format: Optional[str] = None) -> RatioTable:
    path = Path(path)
    format = format or path.suffix.lstrip(".")
    table = RatioTable()
    if format == "csv":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != RATIO_HEADER:
                raise ValueError(f"{path}: unexpected header {header}")
            for m, c, i, j, d1, dh, ratio in reader:
                table.rows.append(RatioRow(m, int(c), int(i), int(j), float(d1), float(dh), float(ratio)))
    elif format == "json":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        table.rows = [RatioRow(**r) for r in data["rows"]]
        table.skipped = {int(k): v for k, v in data.get("skipped", {}).items()}
        table.failures = {int(k): v for k, v in data.get("failures", {}).items()}
    else:
        raise ValueError(f"unknown format {format!r}")
    return table
