"""How large the effective bounds get."""
from artinapprox.bounds import (
    BoundContext,
    DegreeBoundFns,
    beta_bound,
    binomial_global_bound,
    hermann_exponent,
)
from artinapprox.jets import Binomial, BinomialSystem

print("Hermann exponents e(n, p=1, d) and the crude bound:")
for n in range(1, 5):
    print(" ", n, [f"{hermann_exponent(n, 1, d)[0]}/{hermann_exponent(n, 1, d)[1]}" for d in range(1, 5)])

# %% The height recursion with lambda(n, d) = d, then with the doubly exponential default
for fns in (DegreeBoundFns.identity(), DegreeBoundFns.default()):
    ctx = BoundContext(fns)
    print(fns.name)
    for n in range(1, 4):
        print(f"  n={n}:", [beta_bound(0, n, d, 1, ctx=ctx).display() for d in range(1, 4)])

# %% Global bound for X^2 - Y^3: no compatible order vector below i = 4
cusp = BinomialSystem(2, [Binomial(1, (2, 0), -1, (0, 3))])
for i in range(2, 7):
    g = binomial_global_bound(cusp, i)
    print(f"i={i}: {g.value.display()} at orders {g.orders}, log10 log10 = {g.loglog10}")
