"""The circle x1^2 + x2^2 = 1 over F_5, end to end.

Run with ``python3 demos/01_circle_walkthrough.py``.
"""

from charp_diffops import Chart, compute_schedule, fixture, hs_lift
from charp_diffops.der import derivation_generators, format_derivation, cofactors
from charp_diffops.dop import build_dk

V = fixture("CIRCLE")
jd = V.jd

print("Groebner basis:", [str(g) for g in V.ideal.gb])
print("Jacobian:", jd.J.to_strings())
reg = jd.regular_check()
print("rank r =", jd.r, "| regular:", reg.regular)
print("unit certificate:", " + ".join("(%s)*(%s)" % (c, g) for c, g in zip(reg.certificate, reg.generators)))

print("\nDerivations of A from 2x2 minors of the bordered Jacobian:")
for (i, jj), D in derivation_generators(jd).items():
    print("  rows %s cols %s:  %s" % (i, jj, format_derivation(cofactors(jd, i, jj), "∂")))

# Hasse-Schmidt family along x2, with x1 solved for on the chart Delta = 2*x1 != 0
H = hs_lift(jd, (1,), (1,), 2, N=6)
print("\nHigher derivations along x2 (Delta = %s):" % jd.minor((1,), (1,)))
for k in range(1, 6):
    print("  delta^[%d](x1) = %s" % (k, H.value(1, k)))
print("  delta^[5](x2^5) =", H.apply(V.poly("x2^5"), 5), "(Frobenius survives at order p)")

chart = Chart(jd, (1,), (1,), 8)
sched = compute_schedule(chart, 4)
print("\nclearing exponents m(k):", sched.m, "-> linear schedule n(k) =", sched.n)
for k in range(1, 4):
    d = build_dk(chart, sched, 2, k)
    print("  d^[%d] = %s" % (k, d))
