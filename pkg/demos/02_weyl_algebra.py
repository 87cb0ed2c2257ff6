"""Divided-power Weyl algebra over F_3 in two variables.

Run with ``python3 demos/02_weyl_algebra.py``.
"""

from charp_diffops import Ambient, WeylOp, parse_weyl, weyl_dual

A = Ambient.standard(3, 2)
x1, d1 = WeylOp.x(A, 1), WeylOp.d(A, 1)

print("[d1, x1] =", d1 * x1 - x1 * d1)
print("d1^3 =", d1 ** 3, "(nilpotent in characteristic 3)")
print("d1^[3] is not zero:", WeylOp.d(A, 1, 3))
print("d1 * d1^[2] =", d1 * WeylOp.d(A, 1, 2), "(= 3 * d1^[3])")

# the Euler operator x1*D1 satisfies (x1*D1)^p = x1*D1
for text in ["(x2 + D2)^2", "D1^[3]*x1^3", "(x1*D1)^3 - x1*D1"]:
    u = parse_weyl(text, A)
    print("%-22s = %s" % (text, u))

u = parse_weyl("x1^2*D1^[2] + x2*D2", A)
print("\nu      =", u)
print("dual(u) =", weyl_dual(u))
f = A.parse("x1^4 + x1*x2^2")
print("u(%s) = %s" % (f, u(f)))
