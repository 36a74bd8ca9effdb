"""
A bootstrap filter against its exact answer
===========================================

On a linear-Gaussian model the Kalman filter gives the exact filtered mean,
so the particle filter's error can be compared with its own standard error.
"""

import numpy as np

from pfresample.filtering import FilterDemoSpec, demo_filter

for scheme in ("multinomial", "stratified", "systematic"):
    res = demo_filter(FilterDemoSpec(T=50, P=4096, scheme=scheme, seed=0))
    z = np.abs(res.mean - res.kf_mean)[1:] / res.standard_errors()[1:]
    print(f"{str(scheme):<11} max |z|={z.max():6.2f}  min ESS={res.ess[1:].min():8.1f}")

# without resampling the weights pile up on a handful of particles
res = demo_filter(FilterDemoSpec(T=50, P=4096, scheme=None, seed=0))
print("ESS without resampling:", np.round(res.ess[[1, 5, 10, 25, 50]], 1))
