"""Approximate solutions of X^2 - Z Y^2 with Z pinned to z.

The family x = t (t^2 - z)^m, y = (t^2 - z)^m gives f = (t^2 - z)^(2m+1):
the order of f grows like twice the order of the candidate, which is what
rules out an affine Artin function for this polynomial.
"""
from artinapprox.harness import SearchSpace, empirical_lower_bound, x2_zy2_family
from artinapprox.series import MultiPoly, Series2, substitute

X, Y, Z = (MultiPoly.var(v, "XYZ") for v in "XYZ")
f = X**2 - Z * Y**2

for m in range(1, 6):
    prec = 2 * m + 4
    x, y = x2_zy2_family(m, prec)
    val = substitute(f, [x, y, Series2.z(prec)])
    print(f"m={m}: ord x={x.ord()}, ord y={y.ord()}, ord f={val.ord()}")

# %% The same through the search harness, certificates included
space = SearchSpace("monomial-family", support=4, precision=12)
for i in (3, 5, 8):
    rep = empirical_lower_bound(f, i, space, pinned={"Z": "z"})
    print(i, rep.orders, rep.verdicts, rep.details.get("certified_closeness"))

# %% A small exhaustive lattice for X^2 - Y^3
Xc, Yc = (MultiPoly.var(v, "XY") for v in "XY")
lattice = SearchSpace("coefficient-lattice", support=3, precision=7)
rep = empirical_lower_bound(Xc**2 - Yc**3, 4, lattice)
print(rep.details["enumeration_size"], "candidates; best", rep.orders, rep.verdicts)
