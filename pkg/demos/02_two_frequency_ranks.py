#!/usr/bin/env python
# coding: utf-8

# # Complex admittance from two frequencies
#
# With a complex admittance sigma' + j omega sigma'', power data at a
# single frequency cannot see sigma''. Adding a second frequency does,
# provided enough boundary conditions are used. We sweep the number of
# experiments N on the six-node network G3 and watch the linearized
# system become injective.

import numpy as np

from netohm import generators as gen
from netohm.forward import ProblemSpec, solve_states
from netohm.linearize import assemble_jacobian, build_A_matrices, certify, matrix_rank

net, sp, spp = gen.g3()
print(" N | dims      | rank | cond        | rank A | rank Re A | certificate")
for N in range(1, 5):
    spec = ProblemSpec("two_freq_conductivity", net, sp, gen.g3_bc(N), sigma_imag=spp, omega1=1.0)
    states = solve_states(spec)
    _, rep = assemble_jacobian(spec, states, "complex")
    As = np.vstack(build_A_matrices(spec, states))
    verdict = "pass" if certify(spec, states).passed else "fail"
    print(f" {N} | {str(rep.shape):9} | {rep.rank:4} | {rep.cond:11.6g} | {matrix_rank(As):6} |"
          f" {matrix_rank(As.real):9} | {verdict}")

# The stacked A matrices always annihilate the true admittance, so rank A
# stays below |E| = 5; only their real parts can reach full rank.

spec = ProblemSpec("two_freq_conductivity", net, sp, gen.g3_bc(4), sigma_imag=spp, omega1=1.0)
for A in build_A_matrices(spec, solve_states(spec)):
    print("||A z|| / ||A|| =", np.linalg.norm(A @ spec.admittance1) / np.linalg.norm(A))

# The real parameterization used by the solver gives the same ranks.

for N in range(1, 5):
    spec = ProblemSpec("two_freq_conductivity", net, sp, gen.g3_bc(N), sigma_imag=spp, omega1=1.0)
    _, rep = assemble_jacobian(spec, solve_states(spec), "real")
    print(f"N={N}: real form rank {rep.rank}, cond {rep.cond:.4g}")
