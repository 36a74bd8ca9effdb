"""
How many Metropolis steps?
==========================

The indicator "chain sits on the heaviest particle" is a two-state Markov
chain.  Its l-step transition matrix has a closed form, and the smallest B
for which both rows are within epsilon of stationarity follows from it.
"""

import numpy as np

from pfresample import chain_params, l_step_matrix, required_B, verify_convergence
from pfresample.simdata import DirichletSpec, sample_dirichlet

p = chain_params(1024, 0.1, 0.01)
print(f"alpha={p.alpha:.6g} beta={p.beta:.6g} lambda={p.lam:.6g}")

T = p.transition_matrix()
for l in (1, 10, 100, 459):
    closed = l_step_matrix(p, l)
    power = np.linalg.matrix_power(T, l)
    print(f"l={l:<4} P(Z_l=1|Z_0=1)={closed[0, 0]:.5f}  |closed - power| = {np.abs(closed - power).max():.1e}")

sched = required_B(p)
print("required B:", sched.B)

# B grows with w_max and with the required accuracy
for w_max in (0.001, 0.01, 0.1, 0.5):
    print(f"w_max={w_max:<6} B(eps=0.01)={required_B(chain_params(1024, w_max, 0.01)).B:<6}"
          f" B(eps=0.001)={required_B(chain_params(1024, w_max, 0.001)).B}")

# an empirical check on a heavy-tailed weight set
ws = sample_dirichlet(DirichletSpec(1024, 0.01, seed=11))
w_max = ws.w.max() / ws.total
sched = required_B(chain_params(1024, w_max, 0.01))
rep = verify_convergence(ws, sched, trials=50_000, seed=1)
print(f"w_max={w_max:.4f} B={sched.B}: from heaviest {rep.freq_from_max:.4f}, "
      f"from elsewhere {rep.freq_from_other:.4f}, passed={rep.passed}")
