"""Sweep orchestration and deterministic CSV/JSON emission.

One mode per figure family.  Every mode is a pure function of its config,
so rerunning with the same config and seed reproduces the output file
byte for byte, at any worker count (set via the environment variable
named in ``ensemble.WORKERS_ENV_VAR``).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass, fields

import numpy as np

from .chain import ChainSpec, DisorderSpec
from .ensemble import (
    DEFAULT_BETA2_GRID,
    FEATURED_BETA2,
    EnsembleConfig,
    aggregate,
    prob_window,
    run_ensemble,
)
from .fidelity import F_CLASSICAL, fidelity_avg, fidelity_min

SCHEMA_LINE = "# qst-disorder-lab schema v1"

MODES = ("histogram", "sweep-beta", "sweep-n", "sweep-disorder", "fmin-map", "prob-window")

_DEFAULT_DPHI_GRID = tuple(np.round(np.linspace(0.0, np.pi, 65), 12))


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    n_list: tuple[int, ...] = (12,)
    sigma_eta_grid: tuple[float, ...] = (0.1,)
    sigma_xi_grid: tuple[float, ...] = (0.1,)
    realizations: int = 1000
    beta2_grid: tuple[float, ...] = DEFAULT_BETA2_GRID
    epsilon: float = 1e-2
    master_seed: int = 0
    output_path: str = "out.csv"
    out_format: str = "csv"
    base_energy: float = 0.0
    histogram_bin_width: float = 0.01
    p_grid: tuple[float, ...] = tuple(np.round(np.linspace(0.0, 1.0, 51), 12))
    dphi_grid: tuple[float, ...] = _DEFAULT_DPHI_GRID

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.n_list or not self.sigma_eta_grid or not self.sigma_xi_grid:
            raise ValueError("n_list and sigma grids must be non-empty")
        if any(s < 0 for s in self.sigma_eta_grid + self.sigma_xi_grid):
            raise ValueError("disorder strengths must be >= 0")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if self.out_format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.out_format!r}")


# Paper-mirroring defaults per mode: N=12 histograms, N=15 disorder maps,
# sigma=0.1, M=1000, epsilon=1e-2.
MODE_DEFAULTS: dict[str, dict] = {
    "histogram": {"n_list": (12,), "beta2_grid": FEATURED_BETA2},
    "sweep-beta": {"n_list": (12, 18, 25, 31)},
    "sweep-n": {"n_list": tuple(range(4, 81)), "beta2_grid": tuple(sorted(FEATURED_BETA2))},
    "sweep-disorder": {
        "n_list": (15,),
        "sigma_eta_grid": tuple(np.round(np.arange(0.0, 0.2501, 0.025), 12)),
        "sigma_xi_grid": tuple(np.round(np.arange(0.0, 0.2501, 0.025), 12)),
        "beta2_grid": (0.4, 0.6, 0.8),
    },
    "fmin-map": {},
    "prob-window": {
        "n_list": (12, 21),
        "sigma_eta_grid": tuple(np.round(np.arange(0.0, 0.2501, 0.025), 12)),
        "sigma_xi_grid": tuple(np.round(np.arange(0.0, 0.2501, 0.025), 12)),
        "beta2_grid": (1.0,),
    },
}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _progress(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


def _ensemble_stats(config: SweepConfig, n, sigma_eta, sigma_xi, n_workers):
    cfg = EnsembleConfig(
        chain=ChainSpec(n_sites=int(n), base_energy=config.base_energy),
        noise=DisorderSpec(sigma_eta=float(sigma_eta), sigma_xi=float(sigma_xi)),
        realizations=config.realizations,
        beta2_grid=config.beta2_grid,
        master_seed=config.master_seed,
        histogram_bin_width=config.histogram_bin_width,
        epsilon=config.epsilon,
    )
    records = run_ensemble(cfg, n_workers)
    return records, aggregate(records, cfg)


def _require_single_point(config: SweepConfig, what: str):
    if len(config.n_list) != 1 and what == "n":
        raise ValueError(f"{config.mode} expects a single chain length, got {config.n_list}")
    if what == "sigma" and (len(config.sigma_eta_grid) != 1 or len(config.sigma_xi_grid) != 1):
        raise ValueError(
            f"{config.mode} expects a single disorder point, got grids "
            f"{config.sigma_eta_grid} x {config.sigma_xi_grid}"
        )


def cmd_histogram(config: SweepConfig, n_workers: int | None = None):
    """Fidelity histograms at one (N, sigma) point, one block per quantity."""
    _require_single_point(config, "n")
    _require_single_point(config, "sigma")
    n = config.n_list[0]
    _, stats = _ensemble_stats(
        config, n, config.sigma_eta_grid[0], config.sigma_xi_grid[0], n_workers
    )
    columns = ("quantity", "beta2", "bin_low", "bin_high", "count")
    rows = []
    for beta2, hist in zip(config.beta2_grid, stats.hist_f_psi):
        for lo, hi, count in zip(hist.bin_edges, hist.bin_edges[1:], hist.counts):
            rows.append(("f_psi", beta2, lo, hi, int(count)))
    hist = stats.hist_f_avg
    for lo, hi, count in zip(hist.bin_edges, hist.bin_edges[1:], hist.counts):
        rows.append(("f_avg", None, lo, hi, int(count)))
    _progress(f"[histogram] N={n} done ({config.realizations} realizations)")
    return columns, rows


def cmd_sweep_beta(config: SweepConfig, n_workers: int | None = None):
    """Mean/spread of the fidelities vs beta2, one curve per chain length."""
    _require_single_point(config, "sigma")
    columns = ("n", "beta2", "mean_f_psi", "std_f_psi", "mean_f_avg", "std_f_avg", "f_cl")
    rows = []
    for n in config.n_list:
        _, stats = _ensemble_stats(
            config, n, config.sigma_eta_grid[0], config.sigma_xi_grid[0], n_workers
        )
        for j, beta2 in enumerate(config.beta2_grid):
            rows.append(
                (
                    int(n),
                    beta2,
                    stats.mean_f_psi[j],
                    stats.std_f_psi[j],
                    stats.mean_f_avg,
                    stats.std_f_avg,
                    F_CLASSICAL,
                )
            )
        _progress(f"[sweep-beta] N={n} done")
    return columns, rows


def cmd_sweep_n(config: SweepConfig, n_workers: int | None = None):
    """Fidelity statistics along a ladder of chain lengths."""
    _require_single_point(config, "sigma")
    columns = (
        "n",
        "beta2",
        "mean_f_psi",
        "std_f_psi",
        "mean_f_avg",
        "std_f_avg",
        "delta_0",
        "delta_1",
        "fail_prob_f_psi",
        "fail_prob_f_avg",
    )
    rows = []
    for n in config.n_list:
        _, stats = _ensemble_stats(
            config, n, config.sigma_eta_grid[0], config.sigma_xi_grid[0], n_workers
        )
        for j, beta2 in enumerate(config.beta2_grid):
            rows.append(
                (
                    int(n),
                    beta2,
                    stats.mean_f_psi[j],
                    stats.std_f_psi[j],
                    stats.mean_f_avg,
                    stats.std_f_avg,
                    stats.delta_0,
                    stats.delta_1,
                    stats.fail_prob_f_psi[j],
                    stats.fail_prob_f_avg,
                )
            )
        _progress(f"[sweep-n] N={n} done")
    return columns, rows


def cmd_sweep_disorder(config: SweepConfig, n_workers: int | None = None):
    """Fidelity statistics over a (sigma_eta, sigma_xi) grid at fixed N."""
    _require_single_point(config, "n")
    n = config.n_list[0]
    columns = (
        "sigma_eta",
        "sigma_xi",
        "beta2",
        "mean_f_psi",
        "fail_prob_f_psi",
        "mean_f_avg",
        "fail_prob_f_avg",
        "delta_0",
        "delta_1",
        "prob_window",
    )
    rows = []
    for sigma_eta, sigma_xi in itertools.product(config.sigma_eta_grid, config.sigma_xi_grid):
        _, stats = _ensemble_stats(config, n, sigma_eta, sigma_xi, n_workers)
        for j, beta2 in enumerate(config.beta2_grid):
            rows.append(
                (
                    sigma_eta,
                    sigma_xi,
                    beta2,
                    stats.mean_f_psi[j],
                    stats.fail_prob_f_psi[j],
                    stats.mean_f_avg,
                    stats.fail_prob_f_avg,
                    stats.delta_0,
                    stats.delta_1,
                    stats.prob_window,
                )
            )
        _progress(f"[sweep-disorder] sigma=({sigma_eta:g}, {sigma_xi:g}) done")
    return columns, rows


def cmd_prob_window(config: SweepConfig, n_workers: int | None = None):
    """Eq.-19-style windows over a disorder grid, for each chain length.

    prob_window gates on p > 1/2 and asks |p - f_min| < epsilon;
    prob_window_favg asks |f_avg - f_min| < epsilon instead.
    """
    columns = ("n", "sigma_eta", "sigma_xi", "prob_window", "prob_window_favg")
    rows = []
    for n in config.n_list:
        for sigma_eta, sigma_xi in itertools.product(
            config.sigma_eta_grid, config.sigma_xi_grid
        ):
            records, _ = _ensemble_stats(config, n, sigma_eta, sigma_xi, n_workers)
            rows.append(
                (
                    int(n),
                    sigma_eta,
                    sigma_xi,
                    prob_window(records, config.epsilon, measure="p"),
                    prob_window(records, config.epsilon, measure="f_avg"),
                )
            )
        _progress(f"[prob-window] N={n} done")
    return columns, rows


def cmd_fmin_map(config: SweepConfig, n_workers: int | None = None):
    """Pointwise minimum-fidelity maps on a (p, delta_phi) grid; no Monte Carlo."""
    columns = ("p", "delta_phi", "argmin_beta2", "fmin_minus_p", "fmin_minus_favg")
    rows = []
    for p in config.p_grid:
        for dphi in config.dphi_grid:
            res = fidelity_min(p, dphi)
            rows.append(
                (
                    p,
                    dphi,
                    res.argmin_beta2,
                    res.f_min - p,
                    res.f_min - fidelity_avg(p, dphi),
                )
            )
    return columns, rows


_COMMANDS = {
    "histogram": cmd_histogram,
    "sweep-beta": cmd_sweep_beta,
    "sweep-n": cmd_sweep_n,
    "sweep-disorder": cmd_sweep_disorder,
    "prob-window": cmd_prob_window,
    "fmin-map": cmd_fmin_map,
}


def render_csv(columns, rows) -> str:
    lines = [SCHEMA_LINE, ",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(mode: str, columns, rows) -> str:
    payload = {
        "schema": SCHEMA_LINE.lstrip("# "),
        "mode": mode,
        "columns": list(columns),
        "rows": [[None if v is None else v for v in row] for row in rows],
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def run_mode(config: SweepConfig, n_workers: int | None = None) -> str:
    """Execute the configured mode and write its output file; returns the path."""
    columns, rows = _COMMANDS[config.mode](config, n_workers)
    if config.out_format == "json":
        text = render_json(config.mode, columns, rows)
    else:
        text = render_csv(columns, rows)
    with open(config.output_path, "w", newline="\n") as fh:
        fh.write(text)
    return config.output_path


# ---------------------------------------------------------------------------
# config-file and command-line front end


def _parse_float_grid(text: str) -> tuple[float, ...]:
    text = text.strip()
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) == 2:
            start, stop, step = parts[0], parts[1], 1.0
        elif len(parts) == 3:
            start, stop, step = parts
        else:
            raise ValueError(f"bad grid spec {text!r}; use start:stop[:step]")
        if step <= 0:
            raise ValueError(f"grid step must be > 0 in {text!r}")
        values = np.arange(start, stop + step / 2.0, step)
        return tuple(float(v) for v in np.round(values, 12))
    return tuple(float(x) for x in text.split(","))


def _parse_int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        if len(parts) == 2:
            lo, hi, step = parts[0], parts[1], 1
        elif len(parts) == 3:
            lo, hi, step = parts
        else:
            raise ValueError(f"bad range spec {text!r}; use lo:hi[:step]")
        return tuple(range(lo, hi + 1, step))
    return tuple(int(x) for x in text.split(","))


_FIELD_PARSERS = {
    "mode": str,
    "n_list": _parse_int_list,
    "sigma_eta_grid": _parse_float_grid,
    "sigma_xi_grid": _parse_float_grid,
    "realizations": int,
    "beta2_grid": _parse_float_grid,
    "epsilon": float,
    "master_seed": int,
    "output_path": str,
    "out_format": str,
    "base_energy": float,
    "histogram_bin_width": float,
    "p_grid": _parse_float_grid,
    "dphi_grid": _parse_float_grid,
}


def parse_config_file(path: str) -> dict:
    """Flat key = value file; keys match SweepConfig fields, # comments."""
    entries: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _FIELD_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            entries[key] = _FIELD_PARSERS[key](value)
    return entries


def build_config(args: argparse.Namespace) -> SweepConfig:
    """Layer mode defaults, then the config file, then command-line flags."""
    file_entries = parse_config_file(args.config) if args.config else {}
    mode = args.mode or file_entries.get("mode")
    if mode is None:
        raise ValueError("no mode given (use --mode or a config file with a mode key)")
    entries = dict(MODE_DEFAULTS[mode]) if mode in MODE_DEFAULTS else {}
    entries.update(file_entries)
    cli_entries = {
        "n_list": args.n_range or args.n,
        "sigma_eta_grid": args.sigma_grid or args.sigma_eta,
        "sigma_xi_grid": args.sigma_grid or args.sigma_xi,
        "realizations": args.realizations,
        "beta2_grid": args.beta2_grid,
        "epsilon": args.epsilon,
        "master_seed": args.seed,
        "output_path": args.out,
        "out_format": args.format,
    }
    entries.update({k: v for k, v in cli_entries.items() if v is not None})
    entries["mode"] = mode
    valid = {f.name for f in fields(SweepConfig)}
    return SweepConfig(**{k: v for k, v in entries.items() if k in valid})


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qst-disorder-lab",
        description="State-transfer fidelity statistics on disordered chains.",
    )
    parser.add_argument("--mode", choices=MODES, help="experiment family to run")
    parser.add_argument("--n", type=_parse_int_list, help="chain length(s), e.g. 12 or 12,18,25")
    parser.add_argument("--n-range", type=_parse_int_list, help="chain-length range lo:hi[:step]")
    parser.add_argument("--sigma-eta", type=_parse_float_grid, help="diagonal disorder value(s)")
    parser.add_argument("--sigma-xi", type=_parse_float_grid, help="coupling disorder value(s)")
    parser.add_argument(
        "--sigma-grid", type=_parse_float_grid, help="grid for both disorder axes, start:stop:step"
    )
    parser.add_argument("--realizations", type=int, help="disorder samples per ensemble")
    parser.add_argument("--beta2-grid", type=_parse_float_grid, help="input weights |beta|^2")
    parser.add_argument("--epsilon", type=float, help="window half-width for prob-window")
    parser.add_argument("--seed", type=int, help="master seed of the realization streams")
    parser.add_argument("--out", help="output file path")
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        path = run_mode(config)
    except (ValueError, OSError) as exc:
        parser.exit(2, f"qst-disorder-lab: error: {exc}\n")
    _progress(f"[{config.mode}] wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
