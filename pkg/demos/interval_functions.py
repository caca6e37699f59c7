"""Integrals of interval functions over randomized systems.

Run with ``python demos/interval_functions.py``.
"""
from rectify import bc
from rectify.curves import circle
from rectify.integrand import AREA2D

for ident in (1, 5, 6, 7, 8, 9, 10):
    ex = bc.example_catalog(ident)
    rep = ex.integral()
    print(f"#{ident:<2} {ex.title:<45} {rep.limit_estimate: .9f}  expected {ex.expected: .9f}")

# Refinement can increase the rational-penalty mesh.
a = bc.example_catalog(4).related["anomaly"]
print("penalty mesh of [0,1]:", bc.penalty_mesh(a["coarse"]), " of its halves:", bc.penalty_mesh(a["halves"]))

# |I| is quasi additive, |I|^2 is not once the coarse systems cover [0, 1].
ex = bc.example_catalog(1)
coarse = lambda eps: [0.5, 0.25]  # noqa: E731
for name, phi in (("|I|", ex.phi), ("|I|^2", ex.related["squared"])):
    cert = bc.qa_certify(ex.space, phi, [0.01], etas=coarse, full_d0=True, strict=False)
    print(f"{name:>6} certified at eps = 0.01: {cert.certified}")

# The Weierstrass integral agrees with the line integral and the unit-speed form.
w = bc.weierstrass_integral(circle(), AREA2D)
print(f"Weierstrass {w.limit_estimate:.9f}, line integral {w.extras['line_integral']:.9f}, "
      f"unit speed {w.extras['lebesgue']:.9f}")
