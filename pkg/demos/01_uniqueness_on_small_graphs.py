#!/usr/bin/env python
# coding: utf-8

# # Local uniqueness on small graphs
#
# Interior voltages of a resistor network follow from Kirchhoff's law at
# the interior nodes once the boundary voltages are fixed. We look at
# three tiny networks where everything can be checked by hand, and ask
# whether per-edge dissipated power determines the conductivity locally.

import numpy as np

from netohm import generators as gen
from netohm.forward import ProblemSpec, forward_dataset
from netohm.linearize import assemble_jacobian, certify
from netohm.network import dirichlet_solve

# ## A star with one interior node
#
# Three boundary nodes feed a single interior node through unit resistors.
# With 1 V on node 1 and the others grounded, the centre sits at 1/3 V.

net, sigma = gen.g1()
spec = ProblemSpec("real_conductivity", net, sigma, gen.g1_bc())
data, states = forward_dataset(spec)
print("u =", states.u[0])
print("power per edge =", data.H[0])

cert = certify(spec, states)
_, rep = assemble_jacobian(spec, states)
print("certificate:", "pass" if cert.passed else "fail", "| Jacobian", rep.shape, "rank", rep.rank)

# ## The 3x3 grid and its degenerate point
#
# Horizontal edges carry conductivity mu, vertical ones 1. Two boundary
# conditions drive current straight down and straight across. The
# sign-weighted interior operator is 2(mu - 1), so mu = 1 is exactly where
# the certificate breaks.

for mu in (0.5, 1.0, 2.0):
    net, sigma = gen.g2(mu)
    spec = ProblemSpec("real_conductivity", net, sigma, gen.g2_bc())
    data, states = forward_dataset(spec)
    cert = certify(spec, states)
    _, rep = assemble_jacobian(spec, states)
    print(f"mu={mu}: certificate {'pass' if cert.passed else 'fail'}"
          f" (margin {cert['iii'].detail['margin']:.3g}),"
          f" rank deficiency {rep.shape[1] - rep.rank}")

# At mu = 1 the missing directions perturb the four edges around the centre
# node in a balanced way, and no power measurement sees them.

net, _ = gen.g2(1.0)
v1, v2 = gen.g2_degenerate_directions(net)
print("v1 on edges", net.edge_ids[v1 != 0], "v2 on edges", net.edge_ids[v2 != 0])

# ## A nearly-singular gradient
#
# On the G3eps network the voltage drop across the middle edge is O(eps).

for eps in (1e-1, 1e-3):
    net, sigma = gen.g3_eps(eps)
    u = dirichlet_solve(net, sigma, gen.g3_eps_bc()[0])
    print(f"eps={eps:g}: u(5)={u[net.index_of(5)]:.12f} closed form {(4 + 3 * eps) / (8 + 3 * eps):.12f},"
          f" drop across 5-6 = {u[net.index_of(5)] - u[net.index_of(6)]:.3e}")
