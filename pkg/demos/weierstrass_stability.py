"""Weierstrass preparation at finite precision, and how it reacts to perturbations."""
import random

from artinapprox.series import Series2
from artinapprox.weierstrass import divide, prepare, stability_check

N = 8
t, z = Series2.t(N), Series2.z(N)
one = Series2.one(N)

# %% Division of z by (1+t)(z+t^2)
Q = (one + t) * (z + t * t)
res = divide(z, Q)
print("quotient: ", res.quotient.to_text())
print("remainder:", res.remainder.to_text(), "after", res.steps, "reduction steps")

# %% Preparation of a degree-2 series
s = (one + z) * (z * z + t * z + t**3)
form = prepare(s)
print("unit:", form.unit.to_text())
for j, a in enumerate(form.coeffs):
    print(f"a_{j}:", a.to_text())
print("reassembles up to degree", form.certified_prec, ":",
      form.reassemble().agrees_with(s.truncate(form.certified_prec), form.certified_prec))

# %% Perturb by terms of degree >= i and compare the two preparations
rng = random.Random(1)
for i in range(3, N):
    noise = Series2({(a, i - a): rng.randint(-3, 3) for a in range(i + 1)}, N)
    rep = stability_check(s, s + noise, i)
    print(f"i={i}: ord(u-v)={rep.unit_order} (need {rep.unit_threshold}),",
          f"coefficients {rep.coeff_orders} (need {rep.coeff_thresholds})", "ok" if rep.passed else "FAILED")
