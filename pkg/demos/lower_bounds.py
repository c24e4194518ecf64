"""How the two lower bounds for the varjinaccuracy behave.

The series bound adds one non-negative term per order and, for exponential
laws, closes the gap geometrically. The Chebyshev bound is cruder: it trades
a deviation threshold against the probability of exceeding it, and it vanishes
at both ends of the threshold range.

Run with ``python demos/lower_bounds.py``.
"""

import numpy as np

import varextropy as vx

lam, eta = 5.0, 4.0
x, y = vx.exponential(lam), vx.exponential(eta)
exact = vx.varj_inaccuracy(x, y).value
print(f"VarJ(X,Y) for Exp({lam}) vs Exp({eta}): {exact:.10f}\n")

print("order  series bound   gap")
for n in (1, 2, 3, 5, 10, 20):
    b = vx.series_bound_exponential(lam, eta, n).value
    print(f"{n:>5}  {b:.10f}  {exact - b:.3e}")

# The numeric route differentiates g by finite differences; it should track
# the closed form for the first few orders.
num = vx.series_bound_numeric(x, y, lambda t: t / lam, 0.0, 3)
print(f"\nnumeric series, n=3: {num.value:.10f} (closed form "
      f"{vx.series_bound_exponential(lam, eta, 3).value:.10f})")

print("\neps       Chebyshev bound")
for eps in np.geomspace(1e-3, 2.0, 9):
    res = vx.chebyshev_bound(x, y, eps)
    print(f"{eps:<8.4f}  {res.value:.3e}")

print("\npower laws: series bound at n = 1 is exact when g is linear")
print("  bound  ", vx.series_bound_power(1.0, 2.0, 1).value)
print("  VarJ   ", vx.varj_inaccuracy(vx.uniform(), vx.power(2.0)).value)
