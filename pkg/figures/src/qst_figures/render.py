"""Render publication-style panels from qst-disorder-lab CSV tables.

The renderer is a pure view: numbers go from CSV columns to plotting
coordinates (grouping, pivoting into grids) without any statistical
recomputation.  Output is raster with a fixed DPI and colormap so image
regression tests can hash the files.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SUPPORTED_SCHEMA = "# qst-disorder-lab schema v1"

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7")


class SchemaError(ValueError):
    """Input CSV does not carry a supported schema or required columns."""


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    inputs: tuple[str, ...]
    output: str
    contour_step: float = 0.1
    dpi: int = 120
    cmap: str = "viridis"

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"figure_id must be one of {FIGURE_IDS}, got {self.figure_id!r}")
        if not self.inputs:
            raise ValueError("recipe needs at least one input CSV")


@dataclass
class Table:
    path: str
    columns: list[str]
    rows: list[dict]

    def column(self, name):
        if name not in self.columns:
            raise SchemaError(f"{self.path}: missing required column {name!r}")
        return [row[name] for row in self.rows]

    def require(self, *names):
        for name in names:
            if name not in self.columns:
                raise SchemaError(f"{self.path}: missing required column {name!r}")


def _parse_cell(text: str):
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path: str) -> Table:
    """Load a schema-checked CSV into a list of row dicts."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != SUPPORTED_SCHEMA:
        found = lines[0] if lines else "<empty file>"
        raise SchemaError(f"{path}: unsupported schema line {found!r}")
    if len(lines) < 2:
        raise SchemaError(f"{path}: missing header row")
    columns = lines[1].split(",")
    rows = [
        dict(zip(columns, (_parse_cell(cell) for cell in line.split(","))))
        for line in lines[2:]
    ]
    return Table(path=path, columns=columns, rows=rows)


def _grouped(rows, key):
    """Group rows by a key function, preserving first-seen order."""
    groups: dict = {}
    for row in rows:
        groups.setdefault(key(row), []).append(row)
    return groups


def _pivot(rows, x_name, y_name, z_name):
    """Pivot long-format rows into (x, y, grid) for map plotting."""
    xs = sorted({row[x_name] for row in rows})
    ys = sorted({row[y_name] for row in rows})
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for row in rows:
        grid[yi[row[y_name]], xi[row[x_name]]] = row[z_name]
    return np.array(xs), np.array(ys), grid


def _fidelity_levels(step):
    return np.arange(0.0, 1.0 + step / 2, step)


def _panel_grid(n_panels, ncols=3, panel_size=(3.2, 2.6)):
    ncols = min(ncols, max(n_panels, 1))
    nrows = max(1, -(-n_panels // ncols))
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(panel_size[0] * ncols, panel_size[1] * nrows), squeeze=False
    )
    flat = axes.ravel()
    for ax in flat[n_panels:]:
        ax.set_axis_off()
    return fig, flat


def _build_fig1(tables, recipe):
    """Histogram panels: one per tracked quantity."""
    table = tables[0]
    table.require("quantity", "beta2", "bin_low", "bin_high", "count")
    blocks = _grouped(table.rows, lambda row: (row["quantity"], row["beta2"]))
    fig, axes = _panel_grid(len(blocks) or 1)
    for ax, ((quantity, beta2), rows) in zip(axes, blocks.items()):
        lows = np.array([row["bin_low"] for row in rows])
        highs = np.array([row["bin_high"] for row in rows])
        counts = np.array([row["count"] for row in rows])
        ax.bar(lows, counts, width=highs - lows, align="edge", color="#4878cf")
        label = "F_avg" if beta2 is None else f"F_psi, beta2={beta2:g}"
        ax.set_title(label, fontsize=9)
        ax.set_xlim(0.0, 1.0)
        ax.set_xlabel("fidelity")
        ax.set_ylabel("count")
    fig.tight_layout()
    return fig


def _draw_beta_panel(ax, rows):
    beta2 = [row["beta2"] for row in rows]
    ax.errorbar(
        beta2,
        [row["mean_f_psi"] for row in rows],
        yerr=[row["std_f_psi"] for row in rows],
        fmt="o-",
        ms=3,
        lw=1,
        capsize=2,
        color="#33569c",
        label="mean F_psi",
    )
    if rows:
        mean_f_avg = rows[0]["mean_f_avg"]
        std_f_avg = rows[0]["std_f_avg"]
        ax.axhline(mean_f_avg, color="#b1352c", lw=1, label="mean F_avg")
        ax.fill_between(
            [0.0, 1.0],
            mean_f_avg - std_f_avg,
            mean_f_avg + std_f_avg,
            color="#b1352c",
            alpha=0.15,
            lw=0,
        )
        ax.axhline(rows[0]["f_cl"], color="black", lw=1, ls="--", label="classical")
    ax.set_xlim(0.0, 1.0)
    ax.set_xlabel("beta2")
    ax.set_ylabel("fidelity")


def _build_fig2(tables, recipe):
    """Mean fidelities vs beta2, one panel per chain length."""
    table = tables[0]
    table.require("n", "beta2", "mean_f_psi", "std_f_psi", "mean_f_avg", "std_f_avg", "f_cl")
    groups = _grouped(table.rows, lambda row: row["n"])
    fig, axes = _panel_grid(len(groups) or 1, ncols=2)
    for ax, (n, rows) in zip(axes, groups.items()):
        _draw_beta_panel(ax, rows)
        ax.set_title(f"N = {n:g}", fontsize=9)
    if groups:
        axes[0].legend(fontsize=7)
    fig.tight_layout()
    return fig


def _build_fig3(tables, recipe):
    """Fidelity statistics along the chain-length ladder, four panels."""
    table = tables[0]
    table.require(
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
    by_beta = _grouped(table.rows, lambda row: row["beta2"])
    per_n = list(_grouped(table.rows, lambda row: row["n"]).items())
    ns = [n for n, _ in per_n]
    firsts = [rows[0] for _, rows in per_n]
    fig, axes = _panel_grid(4, ncols=2)
    for beta2, rows in by_beta.items():
        x = [row["n"] for row in rows]
        axes[0].plot(x, [row["mean_f_psi"] for row in rows], "o-", ms=2, lw=1,
                     label=f"beta2={beta2:g}")
        axes[1].plot(x, [row["std_f_psi"] for row in rows], "o-", ms=2, lw=1)
        axes[3].plot(x, [row["fail_prob_f_psi"] for row in rows], "o-", ms=2, lw=1)
    axes[0].plot(ns, [row["mean_f_avg"] for row in firsts], "k--", lw=1, label="F_avg")
    axes[1].plot(ns, [row["std_f_avg"] for row in firsts], "k--", lw=1)
    axes[3].plot(ns, [row["fail_prob_f_avg"] for row in firsts], "k--", lw=1)
    axes[2].plot(ns, [row["delta_0"] for row in firsts], "^-", ms=3, lw=1, label="delta_0")
    axes[2].plot(ns, [row["delta_1"] for row in firsts], "s-", ms=3, lw=1, label="delta_1")
    titles = ("mean fidelity", "standard deviation", "crossing widths", "failure probability")
    for ax, title in zip(axes, titles):
        ax.set_xlabel("N")
        ax.set_title(title, fontsize=9)
    if by_beta:
        axes[0].legend(fontsize=6)
        axes[2].legend(fontsize=7)
    fig.tight_layout()
    return fig


def _build_disorder_maps(tables, recipe, value_for_f_psi, value_for_f_avg, label):
    table = tables[0]
    table.require("sigma_eta", "sigma_xi", "beta2", value_for_f_psi, value_for_f_avg)
    weights = sorted({row["beta2"] for row in table.rows}, reverse=True)
    panels = [(f"{label}(F_avg)", None)] + [
        (f"{label}(F_psi), beta2={b:g}", b) for b in weights
    ]
    fig, axes = _panel_grid(len(panels), ncols=2)
    levels = _fidelity_levels(recipe.contour_step)
    for ax, (title, beta2) in zip(axes, panels):
        if beta2 is None:
            rows = [rows[0] for rows in
                    _grouped(table.rows, lambda r: (r["sigma_eta"], r["sigma_xi"])).values()]
            value = value_for_f_avg
        else:
            rows = [row for row in table.rows if row["beta2"] == beta2]
            value = value_for_f_psi
        if rows:
            x, y, grid = _pivot(rows, "sigma_eta", "sigma_xi", value)
            if x.size > 1 and y.size > 1:
                art = ax.contourf(x, y, grid.T, levels=levels, cmap=recipe.cmap)
                ax.contour(x, y, grid.T, levels=levels, colors="black", linewidths=0.4)
                fig.colorbar(art, ax=ax, shrink=0.85)
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("sigma_eta")
        ax.set_ylabel("sigma_xi")
    fig.tight_layout()
    return fig


def _build_fig4(tables, recipe):
    """Mean-fidelity contour maps over the disorder plane."""
    return _build_disorder_maps(tables, recipe, "mean_f_psi", "mean_f_avg", "mean")


def _build_fig5(tables, recipe):
    """Failure-probability contour maps over the disorder plane."""
    return _build_disorder_maps(
        tables, recipe, "fail_prob_f_psi", "fail_prob_f_avg", "P_fail"
    )


def _build_fig6(tables, recipe):
    """Minimum-fidelity maps over (p, delta_phi)."""
    table = tables[0]
    table.require("p", "delta_phi", "argmin_beta2", "fmin_minus_p", "fmin_minus_favg")
    panels = (
        ("minimizing beta2", "argmin_beta2"),
        ("f_min - p", "fmin_minus_p"),
        ("f_min - F_avg", "fmin_minus_favg"),
    )
    fig, axes = _panel_grid(3, ncols=3, panel_size=(3.6, 3.0))
    for ax, (title, name) in zip(axes, panels):
        if table.rows:
            x, y, grid = _pivot(table.rows, "delta_phi", "p", name)
            art = ax.pcolormesh(x, y, grid, cmap=recipe.cmap, shading="nearest")
            fig.colorbar(art, ax=ax, shrink=0.85)
        ax.set_title(title, fontsize=9)
        ax.set_xlabel("delta_phi")
        ax.set_ylabel("p")
    fig.tight_layout()
    return fig


def _build_fig7(tables, recipe):
    """Probability-window density maps, one panel per chain length."""
    table = tables[0]
    table.require("n", "sigma_eta", "sigma_xi", "prob_window")
    groups = _grouped(table.rows, lambda row: row["n"])
    fig, axes = _panel_grid(len(groups) or 1, ncols=2, panel_size=(3.6, 3.0))
    for ax, (n, rows) in zip(axes, groups.items()):
        x, y, grid = _pivot(rows, "sigma_eta", "sigma_xi", "prob_window")
        art = ax.pcolormesh(x, y, grid, cmap=recipe.cmap, shading="nearest",
                            vmin=0.0, vmax=1.0)
        fig.colorbar(art, ax=ax, shrink=0.85)
        ax.set_title(f"N = {n:g}", fontsize=9)
        ax.set_xlabel("sigma_eta")
        ax.set_ylabel("sigma_xi")
    fig.tight_layout()
    return fig


_BUILDERS = {
    "fig1": _build_fig1,
    "fig2": _build_fig2,
    "fig3": _build_fig3,
    "fig4": _build_fig4,
    "fig5": _build_fig5,
    "fig6": _build_fig6,
    "fig7": _build_fig7,
}


def build_figure(recipe: FigureRecipe):
    """Build the matplotlib Figure for a recipe (no file output)."""
    tables = [read_table(path) for path in recipe.inputs]
    return _BUILDERS[recipe.figure_id](tables, recipe)


def render(recipe: FigureRecipe) -> str:
    """Render a recipe to its output image; returns the output path."""
    fig = build_figure(recipe)
    try:
        fig.savefig(recipe.output, dpi=recipe.dpi)
    finally:
        plt.close(fig)
    return recipe.output


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render qst-disorder-lab CSV tables to figures."
    )
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS)
    parser.add_argument(
        "--in", dest="inputs", action="append", required=True, metavar="CSV",
        help="input CSV (repeatable)",
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=120)
    parser.add_argument("--cmap", default="viridis")
    parser.add_argument("--contour-step", type=float, default=0.1)
    args = parser.parse_args(argv)
    recipe = FigureRecipe(
        figure_id=args.figure,
        inputs=tuple(args.inputs),
        output=args.out,
        contour_step=args.contour_step,
        dpi=args.dpi,
        cmap=args.cmap,
    )
    try:
        path = render(recipe)
    except (SchemaError, OSError) as exc:
        parser.exit(2, f"render: error: {exc}\n")
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
