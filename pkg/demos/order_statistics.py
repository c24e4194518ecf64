"""Varjinaccuracy and dispersion of order statistics through Beta expectations.

For the i-th smallest of n draws both quantities reduce to expectations of
``f(F^-1(U))`` and its square under Beta-distributed ``U``. The table compares
those formulas with direct integration against the order-statistic density.

Run with ``python demos/order_statistics.py``.
"""

import varextropy as vx
from varextropy.order_stats import order_stat_density

parent = vx.weibull(2.0, 0.5)
print(f"parent {parent}")
print(" i  n   VarJ formula    VarJ direct     divergence formula  divergence direct")
for n in (2, 3, 5):
    for i in range(1, n + 1):
        spec = vx.OrderStatSpec(parent, i, n)
        dens = order_stat_density(spec)
        a = vx.varj_inaccuracy_order(spec).value
        b = vx.varj_divergence_order(spec).value
        direct_b = vx.varj_divergence(dens, parent).value
        # Var_f[-f_{i:n}(X)/2]: the parent weights the order-statistic density
        direct_a = vx.density_cov(parent, dens.pdf, dens.pdf) / 4
        print(f"{i:>2} {n:>2}   {a:.10f}   {direct_a:.10f}   {b:.10f}        {direct_b:.10f}")
