"""Correlation integrals and determinism at the four closed-form thresholds.

For alpha <= 1/3 the values are 1/2, 3/4, 7/8, 15/16 (C_1) and
1, 2/3, 4/7, 8/15 (DET).  Run:  python3 demos/integrals.py
"""

from fractions import Fraction

from odometer_rqa.rqa import corr_integral_f, det_inf_f

print(f"{'alpha':>6} {'eps':>10} {'C_1':>9} {'C_inf':>9} {'DET':>9} {'k':>3}")
for alpha in (Fraction(1, 5), Fraction(1, 3), Fraction(2, 5)):
    for eps in ("a", "1-a", "1-a+a^2", "1-a^2"):
        c1 = corr_integral_f(alpha, 1, eps, 0.005)
        ci = corr_integral_f(alpha, "inf", eps, 0.005)
        d = det_inf_f(alpha, eps, 0.01)
        print(f"{str(alpha):>6} {eps:>10} {c1.value:9.5f} {ci.value:9.5f} {d.value:9.5f} {d.k_used:3d}")
