# Factorized covariance kernels of the three base processes and the
# closed-form checks they admit.

import numpy as np

from fracgm import (OUParams, SOUParams, bm_spec, iou_var, isou_var,
                    kernel, ou_spec, sou_spec)

bm = bm_spec()
ou = ou_spec(OUParams(mu=1.0, sigma=1.0))
sou = sou_spec(SOUParams(mu=1.0, sigma=1.0))

pts = [(0.5, 0.5), (0.5, 1.5), (1.0, 2.0), (2.0, 2.0)]

print(f"{'s':>5} {'t':>5} {'bm':>10} {'ou':>10} {'sou':>10}")
for s, t in pts:
    vals = [kernel(spec, s, t) for spec in (bm, ou, sou)]
    print(f"{s:>5.2f} {t:>5.2f} " + " ".join(f"{v:>10.6f}" for v in vals))

# bm kernel is min(s, t)
assert kernel(bm, 0.5, 1.5) == 0.5

# sou is stationary: the kernel depends on t - s only
a = kernel(sou, 0.3, 1.1)
b = kernel(sou, 1.3, 2.1)
print(f"\nsou kernel at lag 0.8: {a:.12f} == {b:.12f}")

# r = h1/h2 is increasing, r(0) > 0 iff the start is stationary
print(f"r(0): bm {bm.r(0.0):g}, ou {ou.r(0.0):g}, sou {sou.r(0.0):g}")

# order-1 integrals of ou and sou have elementary variances
print("\nvar of the time integral at t = 1:")
print(f"  ou  (pinned at 0)  {iou_var(OUParams(mu=1.0, sigma=1.0), 1.0):.12f}")
print(f"  sou (stationary)   {isou_var(SOUParams(mu=1.0, sigma=1.0), 1.0):.12f}")
print(f"  exp(-1)            {np.exp(-1.0):.12f}")
