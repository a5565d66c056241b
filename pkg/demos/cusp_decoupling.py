"""Decoupling an approximate solution of X^2 = Y^3 into a unit system and a jet system."""
from artinapprox.harness import verify_decoupling_pipeline
from artinapprox.jets import Binomial, BinomialSystem, decouple, generate_jet_system, unshear
from artinapprox.series import Series2

cusp = BinomialSystem(2, [Binomial(1, (2, 0), -1, (0, 3))])

# %% Jet polynomials for orders (3, 2): coefficients of z^0..z^5
jets = generate_jet_system(cusp, (3, 2))
print(jets.to_text())
print(jets.to_m2())

# %% The exact solution (t^3, t^2) and a perturbation of it
N = 20
t = Series2.t(N)
for x in ([t**3, t**2], [t**3 + t**9, t**2]):
    f = cusp.evaluate(x)[0]
    inst = decouple(cusp, x, 9)
    print("f(x) =", f.to_text())
    print("  shear t -> t + %s z, weights D =" % inst.shear, inst.weights)
    print("  unit residual orders:", inst.unit_orders)
    print("  jet residual orders: ", inst.jet_orders[0])
    print("  unit residual, unsheared:", unshear(inst.unit_residuals[0], inst.shear).to_text())

# Neither (t^3 + t^9) nor t^2 is z-regular, so the shear is forced. Afterwards
# both polynomial parts are powers of (z + t) and every jet residual vanishes;
# the whole defect f(x) = 2t^12 + t^18 is carried by the units.

# %% Full pipeline report
report = verify_decoupling_pipeline(cusp, [t**3 + t**9, t**2], 9)
print(report.verdicts)
