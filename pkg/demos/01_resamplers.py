"""
Four resamplers on one weight vector
====================================

Each scheme turns a weight vector into offspring counts that sum to P.
"""

import numpy as np

from pfresample import ResampleConfig, resample, resample_offspring
from pfresample.core import normalize, resampling_error

w = np.array([0.1, 2.0, 0.4, 0.0, 1.5, 0.9, 0.05, 3.0])
P = w.size
print("P * v      ", np.round(P * normalize(w), 3))

# stratified and systematic return offspring, multinomial and Metropolis ancestors
for scheme in ("multinomial", "stratified", "systematic", "metropolis"):
    cfg = ResampleConfig(scheme, B=40, seed=7)
    native = resample(w, cfg)
    o = resample_offspring(w, cfg)
    print(f"{scheme:<11}", o, f"error={resampling_error(o, w):.4f}", "native:", native)

# averaged over many seeds every scheme is unbiased, and the spread differs
for scheme in ("multinomial", "stratified", "systematic"):
    o = np.array([resample_offspring(w, ResampleConfig(scheme, seed=s)) for s in range(5000)])
    print(f"{scheme:<11} mean {np.round(o.mean(0), 2)}  sd {np.round(o.std(0), 2)}")

# presorting changes which uniforms land where, not the distribution
a = resample(w, ResampleConfig("multinomial", presort=True, seed=7))
print("presorted multinomial ancestors", a)
