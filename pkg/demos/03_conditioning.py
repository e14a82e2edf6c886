#!/usr/bin/env python
# coding: utf-8

# # How a small voltage drop hurts conditioning
#
# Reconstructing sigma on an edge divides by that edge's voltage drop.
# On G3eps the drop across the middle edge is O(eps), so the condition
# number of the linearized system should grow like 1/eps.

import numpy as np

from netohm import generators as gen
from netohm.forward import ProblemSpec, solve_states
from netohm.linearize import assemble_jacobian

eps_values = np.logspace(-1, -5, 9)
conds = []
for eps in eps_values:
    net, sigma = gen.g3_eps(eps)
    spec = ProblemSpec("real_conductivity", net, sigma, gen.g3_eps_bc())
    conds.append(assemble_jacobian(spec, solve_states(spec))[1].cond)
    print(f"eps={eps:.1e}  cond={conds[-1]:.4e}  eps*cond={eps * conds[-1]:.4f}")

slope = np.polyfit(np.log10(eps_values), np.log10(conds), 1)[0]
print(f"log-log slope {slope:.3f} (1/eps scaling gives -1)")
