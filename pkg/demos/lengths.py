"""Lengths as limits of inscribed polygons.

Run with ``python demos/lengths.py``.
"""
import math

from rectify.arclen import check_unit_speed, reparametrize
from rectify.curves import cantor_graph, circle, length, sin2k, speed_integral

# Smooth curves: the polygon limit agrees with the speed integral.
for C in (circle(), sin2k(4)):
    rep = length(C, tol=1e-9)
    print(f"{C.name:>8}: length {rep.limit_estimate:.10f}  speed integral {speed_integral(C):.10f}")

# The Cantor graph is continuous but not absolutely continuous.  Its
# derivative exists almost everywhere and integrates to 1, the length is 2.
C = cantor_graph(16)
print(f"cantor_16: length {length(C).limit_estimate:.6f}  speed integral {speed_integral(C):.6f}")

# Unit-speed representation of a circle traversed at double speed.
usc = reparametrize(circle(speed=2.0))
speed = check_unit_speed(usc)
print(f"unit speed: total length {usc.total_length:.8f} (2 pi = {2 * math.pi:.8f}), "
      f"speeds in [{speed.min_speed:.6f}, {speed.max_speed:.6f}]")
