"""The cusp x2^2 = x1^3 over F_7 is singular at the origin.

Run with ``python3 demos/04_singular_cusp.py``.
"""

from charp_diffops import Chart, fixture, hs_lift

V = fixture("CUSP")
jd = V.jd
reg = jd.regular_check()
print("regular:", reg.regular)
print("Jacobian ideal + I has Groebner basis", [str(g) for g in reg.groebner_basis])
print("default chart:", jd.default_base(), "with Delta =", jd.minor(*jd.default_base()))

# Away from the origin the usual machinery still works after inverting Delta
i, j = jd.default_base()
nu = Chart(jd, i, j, 4).comp[0]
H = hs_lift(jd, i, j, nu, N=4)
for k in range(1, 4):
    print("  delta^[%d](x%d) = %s" % (k, j[0], H.value(j[0], k)))
