"""Which fidelity measure can you trust in a single run?

Two facts, demonstrated numerically.  First, for phases near zero the
worst-case fidelity equals the bare transfer probability p, so measuring
the excitation arrival already certifies the state transfer; the
minimum-fidelity map shows where that identity holds and where it breaks.
Second, at weak disorder p tracks f_min for nearly every realization
(the probability window stays above 90%), while the input-averaged
fidelity does not track f_min once disorder is appreciable.

Run:  python demos/reliable_measures.py
"""

import numpy as np

from qst_disorder_lab import (
    ChainSpec,
    DisorderSpec,
    EnsembleConfig,
    min_fidelity_maps,
    prob_window,
    run_ensemble,
)

p_grid = np.round(np.linspace(0.5, 1.0, 6), 10)
dphi_grid = np.round(np.linspace(0.0, np.pi / 2, 7), 10)
argmin, minus_p, _ = min_fidelity_maps(p_grid, dphi_grid)

print("f_min - p over (p, delta_phi): zero along delta_phi = 0")
print("p \\ dphi " + "  ".join(f"{d:6.3f}" for d in dphi_grid))
for p, row in zip(p_grid, minus_p):
    print(f"  {p:.1f}   " + "  ".join(f"{v:6.3f}" for v in row))
print()
print("minimizing beta2 (1 means the bare excitation is the worst case):")
for p, row in zip(p_grid, argmin):
    print(f"  {p:.1f}   " + "  ".join(f"{v:6.3f}" for v in row))
print()


def windows(n, sigma, m=300, seed=11):
    config = EnsembleConfig(
        chain=ChainSpec(n),
        noise=DisorderSpec(sigma_eta=sigma, sigma_xi=sigma),
        realizations=m,
        beta2_grid=(1.0,),
        master_seed=seed,
    )
    records = run_ensemble(config)
    return (
        prob_window(records, 1e-2, measure="p"),
        prob_window(records, 1e-2, measure="f_avg"),
    )


print("Prob[p > 1/2 and |measure - f_min| < 1e-2], N = 12:")
print("sigma   measure=p   measure=F_avg")
for sigma in (0.01, 0.03, 0.05, 0.1, 0.2):
    w_p, w_avg = windows(12, sigma)
    print(f" {sigma:.2f}     {w_p:.3f}       {w_avg:.3f}")
print()
print("p stays a faithful proxy for f_min deep into the disorder range;")
print("the averaged fidelity stops tracking f_min almost immediately.")
