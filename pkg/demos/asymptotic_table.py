#!/usr/bin/env python3
"""Watch the moment converge to its leading large-t asymptotic.

The ratio moment / leading_asymptotic tends to 1, and the deviation decays
like e^{-gap t} times a polynomial factor, where the gap is the spectral
distance between the full cluster and the best competing partition (1/4 for
n=2, 2/3 for n=3).  The three-point fit below removes the polynomial factor:
on a doubling t-grid the second difference of log-deviations isolates the pure
exponential rate.

Usage: python3 demos/asymptotic_table.py [n]   (default n=2)
"""

import math
import sys

from bosegas import MomentRequest, asymptotic_ratio, spectral_gap

n = int(sys.argv[1]) if len(sys.argv) > 1 else 2
ts = (2.0, 3.0, 5.0, 7.0, 10.0, 14.0, 20.0)

print(f"n = {n}, x = 0, gap = {spectral_gap(n)}")
print(f"{'t':>5} {'ratio':>18} {'|ratio-1|':>12}")
devs = {}
for t in ts:
    r = asymptotic_ratio(MomentRequest(t, (0.0,) * n))
    devs[t] = abs(r.ratio - 1.0)
    print(f"{t:>5} {r.ratio:>18.12f} {devs[t]:>12.3e}")

y = [math.log(devs[t]) for t in (5.0, 10.0, 20.0)]
rate = (2.0 * y[1] - y[0] - y[2]) / 5.0
gap = float(spectral_gap(n))
print(f"\nfitted exponential rate over t in (5, 10, 20): {rate:.4f}")
print(f"predicted spectral gap:                        {gap:.4f}  "
      f"({abs(rate - gap) / gap:.1%} off)")
