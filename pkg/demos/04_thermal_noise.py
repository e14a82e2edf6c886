#!/usr/bin/env python
# coding: utf-8

# # Reading internal power off thermal noise
#
# Every resistor produces Johnson-Nyquist current noise proportional to its
# temperature and conductance. Heating one resistor at a time and
# differencing the boundary-current covariances against an unheated run
# isolates that resistor's contribution, which, paired with a boundary
# voltage f, is the power it would dissipate.

import numpy as np

from netohm import generators as gen
from netohm.thermal import ThermalConfig, run_thermal_experiment

net = gen.fig_det_grid(4)
sigma = np.ones(net.n_edges)
f = gen.fig_det_bc(net)

# ## Exact covariances
#
# With analytic covariances the recovery is exact up to rounding.

rep = run_thermal_experiment(net, sigma, f, ThermalConfig())
print("analytic:", rep.errors)

# ## Sampled covariances
#
# With M sampled realizations per experiment the error decays like M^-1/2.
# The random streams are keyed by (seed, experiment, chunk), so reruns with
# the same seed are bit-identical however many threads are used.

for M in (100, 1000, 10_000, 100_000):
    errs = [run_thermal_experiment(net, sigma, f, ThermalConfig(realizations=M, seed=s), "mc")
            .errors["interior_edges"] for s in range(5)]
    print(f"M={M:>6}: median error over 5 seeds {100 * np.median(errs):6.2f}%")

# Edges joining two boundary nodes never see the heated noise, and edges
# with one boundary endpoint report sigma * u(interior)^2 rather than the
# true power; only interior-interior edges give the dissipated power.

rep = run_thermal_experiment(net, sigma, f, ThermalConfig(realizations=10_000, seed=0), "mc")
for k in np.flatnonzero(rep.interior_edges):
    print(f"edge {net.edge_ids[k]:2}: estimate {rep.estimate[k]:.4f}  true {rep.true_power[k]:.4f}")
