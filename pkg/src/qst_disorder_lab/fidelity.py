"""Closed-form fidelity algebra for a transfer with outcome (p, delta_phi).

Every quantity here is a pure function of the input-state excitation
weight ``beta2 = |beta|^2``, the transfer probability ``p`` and the
compensated arrival phase ``delta_phi``.  The single-realization fidelity
is the quadratic

    F(x) = 1 + c1 x + c2 x^2,   x = beta2,

with c1 = -1 - p + 2 sqrt(p) cos(delta_phi) and c2 = (p - 1) - c1.
All functions accept delta_phi anywhere on the real line (only its cosine
enters) and broadcast over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Quadratic coefficient magnitudes below this are treated as exactly
# degenerate (F linear or constant in beta2); keeps the stationary-point
# formula away from its 0/0 limit at the ideal corner p=1, delta_phi=0.
DEGENERATE_C2 = 1e-12

_CLAMP = 1e-12


def classical_threshold() -> float:
    """Best fidelity achievable classically (measure and resend), 2/3."""
    return 2.0 / 3.0


F_CLASSICAL = classical_threshold()


def _check_unit_interval(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return arr


def fidelity_coefficients(p, delta_phi):
    """Coefficients (c1, c2) of the fidelity quadratic in beta2.

    c2 is formed as (p - 1) - c1, which is algebraically 2p - 2 sqrt(p)
    cos(delta_phi) and keeps 1 + c1 + c2 = p exact in floating point.
    """
    p_arr = _check_unit_interval(p, "p")
    c1 = -1.0 - p_arr + 2.0 * np.sqrt(p_arr) * np.cos(delta_phi)
    c2 = (p_arr - 1.0) - c1
    return c1, c2


def _maybe_scalar(value, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(value)
    return value


def fidelity_input(beta2, p, delta_phi):
    """Fidelity of transferring a pure state with excitation weight beta2.

    Exact at the boundaries: 1 at beta2 = 0 (the vacuum component is
    untouched) and p at beta2 = 1 (excitation-only input).  Tiny negative
    round-off (magnitude < 1e-12) is clamped to 0.
    """
    x = _check_unit_interval(beta2, "beta2")
    c1, c2 = fidelity_coefficients(p, delta_phi)
    value = 1.0 + x * c1 + x * x * c2
    value = np.where((value < 0.0) & (value > -_CLAMP), 0.0, value)
    value = np.where((value > 1.0) & (value < 1.0 + _CLAMP), 1.0, value)
    value = np.where(x == 0.0, 1.0, value)
    value = np.where(x == 1.0, np.broadcast_to(np.asarray(p, float), value.shape), value)
    return _maybe_scalar(value, beta2, p, delta_phi)


def fidelity_avg(p, delta_phi):
    """Fidelity averaged uniformly over all pure input states.

    Equals 1/2 + p/6 + sqrt(p) cos(delta_phi)/3; input independent but
    still random over disorder realizations.
    """
    p_arr = _check_unit_interval(p, "p")
    value = 0.5 + p_arr / 6.0 + np.sqrt(p_arr) * np.cos(delta_phi) / 3.0
    return _maybe_scalar(value, p, delta_phi)


def stationary_weight(p, delta_phi) -> float | None:
    """Excitation weight where dF/d(beta2) vanishes, or None if degenerate.

    Returns (1 + p - 2 sqrt(p) cos) / (4 [p - sqrt(p) cos]); None when the
    quadratic coefficient is below DEGENERATE_C2 (fidelity linear or
    constant in beta2, no stationary point to speak of).
    """
    c1, c2 = fidelity_coefficients(float(p), float(delta_phi))
    if abs(c2) <= DEGENERATE_C2:
        return None
    return float(-c1 / (2.0 * c2))


@dataclass(frozen=True)
class MinFidelityResult:
    """Worst-case fidelity over all pure inputs, with its minimizer."""

    f_min: float
    argmin_beta2: float
    interior: bool


def fidelity_min(p, delta_phi) -> MinFidelityResult:
    """Minimum of the fidelity over all pure input states.

    The quadratic's stationary point is an interior minimum only when it
    lands in [0, 1] (which requires c2 > 0); then

        f_min = 1/2 + sqrt(p) cos/2 - (1 - p)^2 / (8 [p - sqrt(p) cos]).

    Otherwise the minimum sits at beta2 = 1 with value exactly p.  In the
    degenerate quadratic case F is (at most) linear with non-positive
    slope, so the minimum is again at beta2 = 1; by convention the ideal,
    exactly-constant corner also reports argmin 1.
    """
    p = float(_check_unit_interval(p, "p"))
    delta_phi = float(delta_phi)
    weight = stationary_weight(p, delta_phi)
    if weight is not None and 0.0 <= weight <= 1.0:
        sqrt_p_cos = np.sqrt(p) * np.cos(delta_phi)
        value = 0.5 + 0.5 * sqrt_p_cos - (1.0 - p) ** 2 / (8.0 * (p - sqrt_p_cos))
        value = min(max(float(value), 0.0), 1.0)
        return MinFidelityResult(f_min=value, argmin_beta2=weight, interior=True)
    return MinFidelityResult(f_min=p, argmin_beta2=1.0, interior=False)


def min_fidelity_maps(p_grid, delta_phi_grid):
    """Elementwise minimum-fidelity maps over a (p, delta_phi) grid.

    Returns three arrays of shape (len(p_grid), len(delta_phi_grid)):
    the minimizing beta2, f_min - p, and f_min - f_avg.  Values for
    delta_phi < 0 follow from the mirror rule maps(-dphi) = maps(dphi),
    since only cos(delta_phi) enters.
    """
    p_grid = np.atleast_1d(_check_unit_interval(p_grid, "p_grid"))
    dphi_grid = np.atleast_1d(np.asarray(delta_phi_grid, dtype=float))
    if p_grid.size == 0 or dphi_grid.size == 0:
        raise ValueError("grids must be non-empty")
    if np.any(dphi_grid < 0.0) or np.any(dphi_grid > np.pi):
        raise ValueError(
            "delta_phi_grid must lie in [0, pi]; negative phases follow "
            "from the mirror rule"
        )
    shape = (p_grid.size, dphi_grid.size)
    argmin = np.empty(shape)
    fmin_minus_p = np.empty(shape)
    fmin_minus_favg = np.empty(shape)
    for i, p in enumerate(p_grid):
        for j, dphi in enumerate(dphi_grid):
            res = fidelity_min(p, dphi)
            argmin[i, j] = res.argmin_beta2
            fmin_minus_p[i, j] = res.f_min - p
            fmin_minus_favg[i, j] = res.f_min - fidelity_avg(p, dphi)
    return argmin, fmin_minus_p, fmin_minus_favg
