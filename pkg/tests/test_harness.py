from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artinapprox.errors import BudgetExceeded, NotCoprime
from artinapprox.harness import (
    NoRoot,
    SearchSpace,
    coprime_pair,
    empirical_lower_bound,
    power_distance,
    qth_root,
    verify_decoupling_pipeline,
    x2_zy2_family,
)
from artinapprox.jets import Binomial, BinomialSystem
from artinapprox.series import AtLeast, MultiPoly, Series2, substitute

from . import gen

N = 10
t, z = Series2.t(N), Series2.z(N)
CUSP = BinomialSystem(2, [Binomial(1, (2, 0), -1, (0, 3))])


class TestRoots:
    def test_constructed_square(self):
        assert qth_root((t + z * z) ** 2, 2) == (t + z * z).truncate(N - 1)
        assert qth_root((-(t + z * z)) ** 2, 2) == (t + z * z).truncate(N - 1)

    def test_odd_order(self):
        r = qth_root(t**3, 2)
        assert isinstance(r, NoRoot) and r.reason == "order" and r.over_extension

    def test_binomial_series(self):
        r = qth_root(t * t + t**3, 2)
        assert [r.coeff(k, 0) for k in range(1, 5)] == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]
        assert (r * r).agrees_with(t * t + t**3, r.prec)

    def test_rational_obstruction(self):
        r = qth_root(2 * t * t, 2)
        assert r.reason == "leading_coefficient" and not r.over_extension
        assert qth_root(-(t**2), 2).reason == "leading_coefficient"

    def test_leading_form_obstruction(self):
        r = qth_root(t * z + z**3, 2)
        assert isinstance(r, NoRoot) and r.reason == "leading_form"

    def test_lifting_obstruction(self):
        r = qth_root(z * z + t**3, 2)
        assert isinstance(r, NoRoot) and r.reason == "lifting"

    def test_cube_root_of_negative(self):
        assert qth_root(-(t**3), 3) == -t.truncate(N - 2)

    def test_precision(self):
        v = t + z + t * t
        r = qth_root(v**3, 3)
        assert r.prec == N - 2 and r == v.truncate(N - 2)

    def test_no_cube_root_modulo_leading_form(self):
        # any cube root w of (t+z)^3 + t^7 would give w^3 = t^7 modulo t+z
        assert qth_root((t + z) ** 3 + t**7, 3).reason == "lifting"


class TestCoprime:
    def test_monomial_curve(self):
        x, y = coprime_pair(t, 2, 3)
        assert (x, y) == (t**3, t**2)
        assert power_distance(x, y, 2, 3) == AtLeast(N)

    def test_linear_form(self):
        x, y = coprime_pair(t + z, 3, 2)
        assert x == (t + z) ** 2 and y == (t + z) ** 3
        assert x**3 == y**2

    def test_not_coprime(self):
        with pytest.raises(NotCoprime):
            coprime_pair(t, 2, 4)

    def test_distances(self):
        assert power_distance(t * t, t, 1, 2) == AtLeast(N)
        assert power_distance(t * t + t**7, t, 1, 2) == 7
        assert power_distance(t**3, t * t + t**5, 2, 3) == 9

    @given(st.integers(0, 10**6), st.sampled_from([(2, 3), (3, 2), (2, 5), (3, 4)]))
    def test_round_trip(self, seed, pq):
        p, q = pq
        r = gen.rng(seed)
        v = gen.series(r, 8, start_degree=2) + Series2.t(8) + Series2.z(8) * r.randint(-3, 3)
        x, y = coprime_pair(v, p, q)
        assert power_distance(x, y, p, q) == AtLeast(8)
        root = qth_root(x, q)
        M = root.prec
        assert root.agrees_with(v.truncate(M), M) or root.agrees_with((-v).truncate(M), M)


class TestFamilies:
    @pytest.mark.parametrize("m", range(1, 6))
    def test_x2_zy2_law(self, m):
        prec = 2 * m + 3
        x, y = x2_zy2_family(m, prec)
        f = substitute(MultiPoly.var("X", "XYZ") ** 2 - MultiPoly.var("Z", "XYZ") * MultiPoly.var("Y", "XYZ") ** 2,
                       [x, y, Series2.z(prec)])
        assert (f.ord(), x.ord(), y.ord()) == (2 * m + 1, m + 1, m)

    def test_search_family(self):
        X, Y, Z = (MultiPoly.var(v, "XYZ") for v in "XYZ")
        space = SearchSpace("monomial-family", support=2, precision=10)
        rep = empirical_lower_bound(X**2 - Z * Y**2, 4, space, pinned={"Z": "z"})
        assert rep.orders == {"f": 5, "X": 3, "Y": 2}
        assert rep.details["witness"]["label"] == {"m": 2}
        assert rep.details["enumeration_size"] == 2

    def test_linear_instance_flagged(self):
        X, Y = (MultiPoly.var(v, "XY") for v in "XY")
        space = SearchSpace("coefficient-lattice", support=2, precision=4)
        rep = empirical_lower_bound(X - Y, 3, space)
        assert "TrivialInstance" in rep.verdicts
        assert rep.details["exact_hits"] > 0

    def test_budget(self):
        X, Y = (MultiPoly.var(v, "XY") for v in "XY")
        with pytest.raises(BudgetExceeded):
            empirical_lower_bound(X - Y, 3, SearchSpace("coefficient-lattice", support=5, max_candidates=100))

    def test_search_deterministic_and_recomputable(self):
        X, Y = (MultiPoly.var(v, "XY") for v in "XY")
        f = X**2 - Y**3
        space = SearchSpace("coefficient-lattice", support=2, precision=6)
        a = empirical_lower_bound(f, 3, space).to_json(timings=False)
        b = empirical_lower_bound(f, 3, space).to_json(timings=False)
        assert a == b
        rep = empirical_lower_bound(f, 3, space)
        w = rep.details["witness"]
        assert substitute(f, [w["X"], w["Y"]]).ord() == rep.orders["f"]
        assert w["X"].ord() == rep.orders["X"] and w["X"].ord() < 3

    def test_supplied_solution_certificate(self):
        X, Y = (MultiPoly.var(v, "XY") for v in "XY")
        space = SearchSpace("coefficient-lattice", support=1, precision=5)
        exact = [Series2.t(5) + Series2.z(5), Series2.t(5) + Series2.z(5)]
        rep = empirical_lower_bound(X - Y, 2, space, exact_solutions=[exact])
        assert rep.details["certified_closeness"]["order"] >= 1

    def test_space_json(self):
        space = SearchSpace("coefficient-lattice", support=3, coefficients=("-1", "1/2"), precision=7)
        assert SearchSpace.from_json(space.to_json()) == space
        assert space.size(2) == 2 ** 6
        assert space.monomials() == [(0, 1), (1, 0), (0, 2)]


class TestPipeline:
    def test_exact_solution(self):
        T = Series2.t(20)
        rep = verify_decoupling_pipeline(CUSP, [T**3, T**2], 10)
        assert rep.verdicts[-1] == "pass"
        assert all(isinstance(o, AtLeast) for o in rep.orders["unit_residuals"])

    def test_perturbed(self):
        T = Series2.t(20)
        rep = verify_decoupling_pipeline(CUSP, [T**3 + T**9, T**2], 9)
        assert rep.passed and rep.thresholds["i-D"] == 3
        assert rep.orders["f"] == [12]
        assert all(o.bound >= 3 for row in rep.orders["jet_residuals"] for o in row)

    def test_incompatible(self):
        T, Z = Series2.t(10), Series2.z(10)
        diag = BinomialSystem(2, [Binomial(1, (1, 0), -1, (0, 1))])
        rep = verify_decoupling_pipeline(diag, [T, T * T + Z * Z], 5)
        assert rep.verdicts == ["Incompatible"]

    def test_orders_recompute(self):
        T = Series2.t(16)
        x = [T**3 + T**7, T**2]
        rep = verify_decoupling_pipeline(CUSP, x, 8)
        assert rep.orders["x"] == [s.ord() for s in x]
        assert rep.orders["f"] == [v.ord() for v in CUSP.evaluate(x)]
        assert "schema_version" in rep.to_json()
