"""Monte-Carlo driver tabulating rejection rates of the eigensystem tests.

Each (sample size, break magnitude) cell runs independent replicates of the
complete pipeline: generate a sample, estimate the change point, build the
sequential eigen-difference path, self-normalize, decide.  Replicate r of a
cell draws from a substream seeded by (master seed, N, magnitude bits, r),
so results are reproducible and identical for any worker count.
"""

from __future__ import annotations

import functools
import hashlib
import json
import os
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .changepoint import estimate_changepoint
from .covkern import SplitSample
from .datagen import BREAK_KINDS, DEPENDENCES, DGPSpec, generate
from .selfnorm import (
    DEFAULT_K,
    DEFAULT_PIVOT_REPLICATES,
    DEFAULT_PIVOT_SEED,
    NuMeasure,
    decide,
    diff_path,
    self_normalizer,
    simulate_pivot,
)

__all__ = [
    "ExperimentConfig",
    "RejectionRow",
    "RejectionTable",
    "HistogramData",
    "EpsilonSweep",
    "run_experiment",
    "cell_outcomes",
    "epsilon_sweep",
    "default_magnitude_grid",
    "angle_for_distance_sq",
]

TEST_KINDS = ("eigenvalue", "eigenfunction")

_CHUNK = 250


def default_magnitude_grid(boundary: float, points: int = 9) -> tuple[float, ...]:
    """Equispaced magnitudes spanning [0, 4 * boundary]."""
    return tuple(np.linspace(0.0, 4.0 * boundary, points))


def angle_for_distance_sq(dist_sq: float) -> float:
    """Rotation angle whose eigenfunction distance squared equals the given value."""
    if not 0.0 <= dist_sq <= 4.0:
        raise ValueError(f"squared eigenfunction distance must lie in [0,4], got {dist_sq}")
    return float(np.arccos(1.0 - dist_sq / 2.0))


@dataclass(frozen=True)
class ExperimentConfig:
    """Full recipe of one rejection-probability experiment."""

    test_kind: str
    j: int
    delta: float
    break_kind: str
    magnitudes: tuple[float, ...]
    n_list: tuple[int, ...]
    replicates: int = 4000
    alpha: float = 0.05
    epsilon: float = 0.05
    K: int = DEFAULT_K
    seed: int = 0
    T: int = 21
    theta0: float = 0.5
    dependence: str = "iid"
    tau: tuple[float, ...] | None = None
    center: bool = False
    pivot_replicates: int = DEFAULT_PIVOT_REPLICATES
    pivot_seed: int = DEFAULT_PIVOT_SEED

    def __post_init__(self):
        if self.test_kind not in TEST_KINDS:
            raise ValueError(f"unknown test kind {self.test_kind!r}; expected one of {TEST_KINDS}")
        if self.break_kind not in BREAK_KINDS:
            raise ValueError(f"unknown break kind {self.break_kind!r}; expected one of {BREAK_KINDS}")
        if self.dependence not in DEPENDENCES:
            raise ValueError(f"unknown dependence {self.dependence!r}; expected one of {DEPENDENCES}")
        if self.j < 1:
            raise ValueError(f"eigen index must be >= 1, got {self.j}")
        if self.delta < 0.0:
            raise ValueError(f"relevance threshold must be nonnegative, got {self.delta}")
        if len(self.magnitudes) == 0:
            raise ValueError("magnitude grid must not be empty")
        if len(self.n_list) == 0:
            raise ValueError("sample size list must not be empty")
        if self.replicates < 1:
            raise ValueError(f"need at least one replicate, got {self.replicates}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"test level must lie in (0,1), got {self.alpha}")
        object.__setattr__(self, "magnitudes", tuple(float(m) for m in self.magnitudes))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if self.tau is not None:
            object.__setattr__(self, "tau", tuple(float(t) for t in self.tau))

    def config_hash(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RejectionRow:
    """One tabulated cell with its reproduction recipe."""

    n_obs: int
    magnitude: float
    rate: float
    se: float
    mean_theta_hat: float
    replicates: int
    master_seed: int
    config_hash: str


@dataclass(frozen=True)
class RejectionTable:
    """Rejection rates over the (N, magnitude) grid of an experiment."""

    rows: tuple[RejectionRow, ...]
    config: ExperimentConfig

    def rate_at(self, n_obs: int, magnitude: float) -> float:
        for row in self.rows:
            if row.n_obs == n_obs and np.isclose(row.magnitude, magnitude):
                return row.rate
        raise KeyError(f"no cell (N={n_obs}, magnitude={magnitude}) in the table")

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("N,magnitude,rate,se,mean_theta_hat,replicates\n")
            for row in self.rows:
                fh.write(
                    f"{row.n_obs},{row.magnitude!r},{row.rate!r},{row.se!r},"
                    f"{row.mean_theta_hat!r},{row.replicates}\n"
                )

    def to_json(self, path) -> None:
        payload = {
            "config": asdict(self.config),
            "config_hash": self.config.config_hash(),
            "rows": [asdict(row) for row in self.rows],
        }
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")


@dataclass(frozen=True)
class HistogramData:
    """Change-point estimate histogram of one experiment cell."""

    epsilon: float
    n_obs: int
    magnitude: float
    counts: np.ndarray
    edges: np.ndarray


@dataclass(frozen=True)
class EpsilonSweep:
    """Per-epsilon rejection tables plus change-point histograms."""

    tables: tuple[tuple[float, RejectionTable], ...]
    histograms: tuple[HistogramData, ...]

    def histograms_to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("epsilon,N,magnitude,bin_left,bin_right,count\n")
            for hist in self.histograms:
                for left, right, count in zip(hist.edges[:-1], hist.edges[1:], hist.counts):
                    fh.write(
                        f"{hist.epsilon!r},{hist.n_obs},{hist.magnitude!r},"
                        f"{float(left)!r},{float(right)!r},{int(count)}\n"
                    )


@functools.lru_cache(maxsize=8)
def _pivot_for(K: int, R: int, seed: int):
    return simulate_pivot(K, R, seed)


def _magnitude_bits(magnitude: float) -> int:
    return int.from_bytes(struct.pack("<d", float(magnitude)), "little")


def run_replicate(config: ExperimentConfig, n_obs: int, magnitude: float,
                  rep: int) -> tuple[bool, float]:
    """One complete pipeline pass; returns (rejected, theta_hat)."""
    entropy = (config.seed, n_obs, _magnitude_bits(magnitude), rep)
    try:
        rng = np.random.default_rng(np.random.SeedSequence(entropy))
        spec = DGPSpec(
            N=n_obs,
            T=config.T,
            theta0=config.theta0,
            tau=None if config.tau is None else np.asarray(config.tau),
            dependence=config.dependence,
            break_kind=config.break_kind,
            magnitude=magnitude,
        )
        series = generate(spec, rng)
        estimate = estimate_changepoint(series.coeffs, config.epsilon)
        split = SplitSample.at_index(series.coeffs, estimate.k_hat)
        nu = NuMeasure(config.K)
        path = diff_path(split, config.j, nu, config.test_kind, center=config.center)
        normalizer = self_normalizer(path, nu)
        pivot = _pivot_for(config.K, config.pivot_replicates, config.pivot_seed)
        result = decide(path, normalizer, config.delta, pivot, config.alpha, "relevant")
        return result.decision == "reject", estimate.theta_hat
    except Exception as exc:
        raise RuntimeError(
            f"replicate {rep} failed (N={n_obs}, magnitude={magnitude}, "
            f"seed entropy {entropy}): {exc}"
        ) from exc


def _run_chunk(args) -> list[tuple[bool, float]]:
    config, n_obs, magnitude, start, stop = args
    return [run_replicate(config, n_obs, magnitude, rep) for rep in range(start, stop)]


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        return max(1, os.cpu_count() or 1)
    if workers < 0:
        raise ValueError(f"worker count must be nonnegative, got {workers}")
    return max(1, workers)


def cell_outcomes(config: ExperimentConfig, n_obs: int, magnitude: float,
                  workers: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Rejections and change-point estimates of every replicate of one cell.

    The replicate order of the output is fixed by replicate index, so the
    result does not depend on the worker count.
    """
    reps = config.replicates
    chunks = [
        (config, n_obs, magnitude, start, min(start + _CHUNK, reps))
        for start in range(0, reps, _CHUNK)
    ]
    n_workers = _resolve_workers(workers)
    if n_workers == 1 or len(chunks) == 1:
        results = [_run_chunk(chunk) for chunk in chunks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_run_chunk, chunks))
    flat = [item for chunk in results for item in chunk]
    rejects = np.array([r for r, _ in flat], dtype=bool)
    thetas = np.array([t for _, t in flat])
    return rejects, thetas


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> RejectionTable:
    """Tabulate rejection rates over the full (N, magnitude) grid.

    Parameters
    ----------
    config : ExperimentConfig
        Experiment recipe; its seed fixes every replicate.
    workers : int, optional
        Process count; None uses the machine's CPU count, 0 or 1 runs
        serially.  The table is identical for every choice.

    Returns
    -------
    RejectionTable
    """
    rows = []
    chash = config.config_hash()
    for n_obs in config.n_list:
        for magnitude in config.magnitudes:
            rejects, thetas = cell_outcomes(config, n_obs, magnitude, workers)
            rate = float(rejects.mean())
            rows.append(
                RejectionRow(
                    n_obs=n_obs,
                    magnitude=float(magnitude),
                    rate=rate,
                    se=float(np.sqrt(rate * (1.0 - rate) / config.replicates)),
                    mean_theta_hat=float(thetas.mean()),
                    replicates=config.replicates,
                    master_seed=config.seed,
                    config_hash=chash,
                )
            )
    return RejectionTable(rows=tuple(rows), config=config)


def epsilon_sweep(config: ExperimentConfig, epsilons, workers: int | None = None,
                  hist_bins: int = 20) -> EpsilonSweep:
    """Repeat an experiment for several boundary trims and bin the estimates.

    Parameters
    ----------
    config : ExperimentConfig
        Template; its epsilon field is replaced by each sweep value.
    epsilons : iterable of float
        Boundary trims to compare.
    hist_bins : int
        Number of equal-width histogram bins on [0,1] for theta_hat.

    Returns
    -------
    EpsilonSweep
    """
    tables = []
    histograms = []
    for eps in epsilons:
        cfg = ExperimentConfig(**{**asdict(config), "epsilon": float(eps)})
        rows = []
        chash = cfg.config_hash()
        for n_obs in cfg.n_list:
            for magnitude in cfg.magnitudes:
                rejects, thetas = cell_outcomes(cfg, n_obs, magnitude, workers)
                rate = float(rejects.mean())
                rows.append(
                    RejectionRow(
                        n_obs=n_obs,
                        magnitude=float(magnitude),
                        rate=rate,
                        se=float(np.sqrt(rate * (1.0 - rate) / cfg.replicates)),
                        mean_theta_hat=float(thetas.mean()),
                        replicates=cfg.replicates,
                        master_seed=cfg.seed,
                        config_hash=chash,
                    )
                )
                counts, edges = np.histogram(thetas, bins=hist_bins, range=(0.0, 1.0))
                histograms.append(
                    HistogramData(
                        epsilon=float(eps),
                        n_obs=n_obs,
                        magnitude=float(magnitude),
                        counts=counts,
                        edges=edges,
                    )
                )
        tables.append((float(eps), RejectionTable(rows=tuple(rows), config=cfg)))
    return EpsilonSweep(tables=tuple(tables), histograms=tuple(histograms))
