"""Riemann-Cesari sums of parametric integrands.

Run with ``python demos/line_integrals.py``.
"""
import math

from rectify.curves import circle
from rectify.errors import HomogeneityError
from rectify.integrand import AREA2D, integrand_by_name, l2_tangent_convergence, line_integral, polygon_family

# x1 t2 - x2 t1 around the unit circle is twice the enclosed area.
rep = line_integral(circle(), AREA2D, tol=1e-8)
print(f"area2d on circle: {rep.limit_estimate:.10f}, left tags {rep.extras['cross_limit']:.10f}")

# Inscribed polygons converge in length, so their integrals converge too.
for C in polygon_family(circle(), [3, 6, 9, 12]):
    print(f"{C.name:>18}: {line_integral(C, AREA2D, cross_rule=None).limit_estimate:.10f}")
print(f"{'2 pi':>18}: {2 * math.pi:.10f}")

# Discrete tangents approach the unit tangent in mean square.
for mesh, v in l2_tangent_convergence(circle()).samples:
    print(f"mesh {mesh:.2e}: tangent deviation {v:.3e}")

# Integrands of degree 2 are refused.
try:
    line_integral(circle(), integrand_by_name("normsq"))
except HomogeneityError as exc:
    print("refused:", exc)
