"""A first look at extropy and its variance for exponential laws.

For ``X ~ Exp(lam)`` the density evaluated at the variable itself,
``f(X) = lam exp(-lam X)``, is ``lam`` times a uniform variable. That makes
every moment of ``-f(X)/2`` available in closed form, so the numbers printed
below can be checked by hand.

Run with ``python demos/exponential_tour.py``.
"""

import varextropy as vx

print("rate    extropy      -lam/4       varextropy   lam^2/48")
for lam in (0.5, 1.0, 2.0, 5.0):
    d = vx.exponential(lam)
    j = vx.extropy(d).value
    v = vx.varextropy(d).value
    print(f"{lam:<6}  {j:<11.8f}  {-lam / 4:<11.8f}  {v:<11.8f}  {lam**2 / 48:.8f}")

# The generating function E[exp(-t f(X)/2)] carries the same information:
# the slope of its logarithm at zero is the extropy, the curvature the variance.
d = vx.exponential(1.0)
print("\nG(2) for Exp(1):", round(vx.extropy_genfun(d, 2.0), 10), "(closed form 1 - 1/e)")
print("d/dt ln G(0):   ", round(vx.genfun_derivative_check(d, 1), 8))
print("d2/dt2 ln G(0): ", round(vx.genfun_derivative_check(d, 2), 8))
m = vx.extropy_moments(d)
print(f"skewness {m.skewj:.2e}, fourth central moment {m.kurtj:.8f} (1/1280 = {1 / 1280:.8f})")

# Two exponential laws: the dispersion of -g(X)/2 under f, and a few neighbours.
x, y = vx.exponential(5.0), vx.exponential(4.0)
print("\nExp(5) against Exp(4)")
for name, rep in vx.pair_catalogue(x, y).items():
    print(f"  {name:<26} {rep.value: .10f}")
