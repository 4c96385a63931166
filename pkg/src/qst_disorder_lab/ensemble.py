"""Deterministic Monte Carlo over disorder realizations and its statistics.

Realization i draws its noise from an independent child stream derived
from (master_seed, i) via numpy's SeedSequence spawn-key mechanism, so the
ensemble is a pure function of its config: the same config produces
bit-identical records on every run and for every worker count.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chain import (
    ChainSpec,
    DisorderSpec,
    NumericFailureError,
    ideal_phase,
    realize_disorder,
    transfer_outcome,
    transfer_time,
)
from .fidelity import (
    F_CLASSICAL,
    fidelity_avg,
    fidelity_coefficients,
    fidelity_input,
    fidelity_min,
)

WORKERS_ENV_VAR = "QST_DISORDER_LAB_WORKERS"

DEFAULT_BETA2_GRID = tuple(np.round(np.linspace(0.0, 1.0, 11), 10))
#: Input-state weights highlighted by the histogram panels.
FEATURED_BETA2 = (1.0, 0.8, 0.6, 0.5, 0.4)


@dataclass(frozen=True)
class EnsembleConfig:
    chain: ChainSpec
    noise: DisorderSpec
    realizations: int = 1000
    beta2_grid: tuple[float, ...] = DEFAULT_BETA2_GRID
    master_seed: int = 0
    histogram_bin_width: float = 0.01
    epsilon: float = 1e-2

    def __post_init__(self):
        if self.realizations < 1:
            raise ValueError(f"realizations must be >= 1, got {self.realizations}")
        grid = tuple(float(b) for b in self.beta2_grid)
        if not grid:
            raise ValueError("beta2_grid must be non-empty")
        if any(b < 0.0 or b > 1.0 for b in grid):
            raise ValueError(f"beta2_grid values must lie in [0, 1], got {grid}")
        object.__setattr__(self, "beta2_grid", grid)
        if self.histogram_bin_width <= 0:
            raise ValueError("histogram_bin_width must be > 0")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")


@dataclass(frozen=True)
class RealizationRecord:
    index: int
    p: float
    delta_phi: float
    f_avg: float
    f_psi: np.ndarray  # parallel to config.beta2_grid
    f_min: float


@dataclass(frozen=True)
class Histogram:
    """Counts over [0, 1]; the final bin is closed on the right."""

    bin_edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class EnsembleStats:
    mean_f_avg: float
    std_f_avg: float
    mean_f_psi: np.ndarray
    std_f_psi: np.ndarray
    mean_p: float
    fail_prob_f_avg: float
    fail_prob_f_psi: np.ndarray
    hist_f_avg: Histogram
    hist_f_psi: tuple[Histogram, ...]
    delta_0: float
    delta_1: float
    prob_window: float


def child_stream(master_seed: int, index: int) -> np.random.Generator:
    """Independent per-realization stream from (master_seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


def _realize_record(
    config: EnsembleConfig, index: int, tau: float, phi0: float, beta2: np.ndarray
) -> RealizationRecord:
    stream = child_stream(config.master_seed, index)
    try:
        h = realize_disorder(config.chain, config.noise, stream)
        outcome = transfer_outcome(h, tau, phi0)
    except NumericFailureError as exc:
        raise NumericFailureError(
            f"realization {index} (master_seed={config.master_seed}) failed: {exc}",
            n_sites=config.chain.n_sites,
        ) from exc
    p, dphi = outcome.p, outcome.delta_phi
    return RealizationRecord(
        index=index,
        p=p,
        delta_phi=dphi,
        f_avg=fidelity_avg(p, dphi),
        f_psi=np.asarray(fidelity_input(beta2, p, dphi), dtype=float),
        f_min=fidelity_min(p, dphi).f_min,
    )


def _record_range(args) -> list[RealizationRecord]:
    config, lo, hi, tau, phi0 = args
    beta2 = np.asarray(config.beta2_grid, dtype=float)
    return [_realize_record(config, i, tau, phi0, beta2) for i in range(lo, hi)]


def resolve_workers(n_workers: int | None = None) -> int:
    """Worker count: explicit argument, else env override, else serial."""
    if n_workers is None:
        n_workers = int(os.environ.get(WORKERS_ENV_VAR, "1"))
    if n_workers < 1:
        raise ValueError(f"worker count must be >= 1, got {n_workers}")
    return n_workers


def run_ensemble(
    config: EnsembleConfig, n_workers: int | None = None
) -> list[RealizationRecord]:
    """All realization records of the config, ordered by index.

    The per-record streams make the output independent of the worker
    count; workers only split the index range into contiguous chunks.
    """
    n_workers = resolve_workers(n_workers)
    tau = transfer_time(config.chain.n_sites)
    phi0 = ideal_phase(config.chain)
    m = config.realizations
    if n_workers == 1 or m < 2 * n_workers:
        return _record_range((config, 0, m, tau, phi0))
    bounds = np.linspace(0, m, n_workers + 1, dtype=int)
    jobs = [(config, int(lo), int(hi), tau, phi0) for lo, hi in zip(bounds, bounds[1:])]
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        parts = list(pool.map(_record_range, jobs))
    return [record for part in parts for record in part]


def histogram(values, bin_width: float) -> Histogram:
    """Histogram of fidelity-like values over [0, 1].

    Values may poke out of [0, 1] by at most 1e-12 (round-off) and are
    clipped; anything further out is a domain error.  The last bin is
    truncated at 1 when the width does not divide the interval.
    """
    if bin_width <= 0:
        raise ValueError(f"bin_width must be > 0, got {bin_width}")
    values = np.asarray(values, dtype=float)
    if values.size and (np.any(values < -1e-12) or np.any(values > 1.0 + 1e-12)):
        raise ValueError("histogram values must lie in [0, 1] up to 1e-12")
    values = np.clip(values, 0.0, 1.0)
    n_bins = int(np.ceil(1.0 / bin_width - 1e-9))
    edges = np.minimum(bin_width * np.arange(n_bins + 1), 1.0)
    edges[-1] = 1.0
    counts, _ = np.histogram(values, bins=edges)
    return Histogram(bin_edges=edges, counts=counts)


def _sample_std(values: np.ndarray) -> float:
    # ddof=1; pinned so regression fixtures are bit-stable
    return float(np.std(values, ddof=1)) if values.size > 1 else 0.0


def _unit_root(c2: float, c1: float, c0: float) -> tuple[float | None, bool]:
    """Smallest root of c2 x^2 + c1 x + c0 in [0, 1], plus a multi-root flag."""
    if abs(c2) <= 1e-12:
        if abs(c1) <= 1e-12:
            return None, False
        x = -c0 / c1
        return (x, False) if 0.0 <= x <= 1.0 else (None, False)
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        return None, False
    sqrt_disc = float(np.sqrt(disc))
    # Citardauq pairing avoids cancellation when c1 dominates.
    q = -0.5 * (c1 + np.copysign(sqrt_disc, c1))
    roots = [q / c2]
    if q != 0.0:
        roots.append(c0 / q)
    inside = sorted(x for x in roots if 0.0 <= x <= 1.0)
    if len(inside) == 2 and abs(inside[1] - inside[0]) < 1e-9:
        inside = inside[:1]  # tangency, a single crossing
    if not inside:
        return None, False
    return inside[0], len(inside) > 1


def delta_intervals(
    records: list[RealizationRecord], config: EnsembleConfig
) -> tuple[float, float]:
    """Widths of the beta2 ranges where the mean fidelity underperforms.

    The ensemble-mean fidelity curve is 1 + <c1> x + <c2> x^2 (the mean of
    a quadratic is the quadratic of the mean coefficients).  delta_0 uses
    the crossing with the mean input-averaged fidelity, delta_1 the
    crossing with the classical threshold; each is 1 - root when the
    crossing exists in [0, 1] and 0 otherwise.  Observing two roots in
    [0, 1] is unexpected (simulations show at most one); the smaller root
    is used and a warning emitted.
    """
    if not records:
        raise ValueError("records must be non-empty")
    p = np.array([r.p for r in records])
    dphi = np.array([r.delta_phi for r in records])
    c1, c2 = fidelity_coefficients(p, dphi)
    mean_c1, mean_c2 = float(c1.mean()), float(c2.mean())
    mean_f_avg = float(np.mean([r.f_avg for r in records]))
    deltas = []
    for label, target in (("delta_0", mean_f_avg), ("delta_1", F_CLASSICAL)):
        root, multiple = _unit_root(mean_c2, mean_c1, 1.0 - target)
        if multiple:
            warnings.warn(
                f"{label}: mean fidelity curve crosses its target twice in "
                f"[0, 1]; using the smaller crossing",
                stacklevel=2,
            )
        deltas.append(1.0 - root if root is not None else 0.0)
    return deltas[0], deltas[1]


def prob_window(
    records: list[RealizationRecord], epsilon: float, measure: str = "p"
) -> float:
    """Fraction of realizations where ``measure`` tracks f_min to epsilon.

    Estimates Prob[p > 1/2 and |measure - f_min| < epsilon].  measure "p"
    asks when excitation transfer is a faithful proxy for state transfer;
    "f_avg" asks the same of the input-averaged fidelity.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if measure not in ("p", "f_avg"):
        raise ValueError(f"measure must be 'p' or 'f_avg', got {measure!r}")
    if not records:
        raise ValueError("records must be non-empty")
    p = np.array([r.p for r in records])
    proxy = p if measure == "p" else np.array([r.f_avg for r in records])
    f_min = np.array([r.f_min for r in records])
    return float(np.mean((p > 0.5) & (np.abs(proxy - f_min) < epsilon)))


def aggregate(records: list[RealizationRecord], config: EnsembleConfig) -> EnsembleStats:
    """Ensemble statistics of a record list (means, spreads, histograms).

    Sample standard deviations use the M-1 denominator.  Failure
    probabilities are the fraction of realizations whose fidelity falls
    below the classical threshold.
    """
    if not records:
        raise ValueError("records must be non-empty")
    f_avg = np.array([r.f_avg for r in records])
    f_psi = np.vstack([r.f_psi for r in records])  # (M, len(beta2_grid))
    p = np.array([r.p for r in records])
    width = config.histogram_bin_width
    delta_0, delta_1 = delta_intervals(records, config)
    return EnsembleStats(
        mean_f_avg=float(f_avg.mean()),
        std_f_avg=_sample_std(f_avg),
        mean_f_psi=f_psi.mean(axis=0),
        std_f_psi=np.array([_sample_std(col) for col in f_psi.T]),
        mean_p=float(p.mean()),
        fail_prob_f_avg=float(np.mean(f_avg < F_CLASSICAL)),
        fail_prob_f_psi=np.mean(f_psi < F_CLASSICAL, axis=0),
        hist_f_avg=histogram(f_avg, width),
        hist_f_psi=tuple(histogram(col, width) for col in f_psi.T),
        delta_0=delta_0,
        delta_1=delta_1,
        prob_window=prob_window(records, config.epsilon),
    )
