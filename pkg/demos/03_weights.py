"""
Simulated weight sets
=====================

Symmetric Dirichlet draws stand in for filter weights.  Smaller alpha means
more skewed weights and a smaller effective sample size.
"""

import tempfile
from pathlib import Path

import numpy as np

from pfresample.core import ess, max_weight
from pfresample.simdata import DirichletSpec, read_weights, sample_dirichlet, write_weights

P = 4096
for alpha in (10.0, 1.0, 0.1, 0.01):
    draws = [sample_dirichlet(DirichletSpec(P, alpha, seed=3, replicate=r)) for r in range(50)]
    e = np.mean([ess(w) / P for w in draws])
    m = np.mean([max_weight(w) for w in draws])
    print(f"alpha={alpha:<5} mean ESS/P={e:.4f}  mean w_max={m:.2e}")

# tiny shapes underflow in linear space; the sampler works with log gamma variates
ws = sample_dirichlet(DirichletSpec(16, 0.001, seed=1))
print("alpha=0.001, P=16:", np.array2string(ws.w / ws.total, precision=2))

# weight files: a header line, then one weight per line
path = Path(tempfile.mkdtemp()) / "weights.txt"
write_weights(path, ws, alpha=0.001, seed=1)
back, meta = read_weights(path)
print("round trip exact:", np.array_equal(back.w, ws.w), meta)
