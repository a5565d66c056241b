from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from artinapprox.series import Series1, Series2

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

small_fracs = st.builds(
    Fraction, st.integers(-4, 4), st.integers(1, 3)
)


@st.composite
def series2(draw, prec=None, min_prec=1, max_prec=6, density=0.4, unit=False, max_terms=8):
    N = prec if prec is not None else draw(st.integers(min_prec, max_prec))
    keys = [(a, b) for a in range(N) for b in range(N - a)]
    chosen = draw(st.lists(st.sampled_from(keys), max_size=max_terms, unique=True))
    terms = {k: draw(small_fracs) for k in chosen}
    if unit:
        terms[(0, 0)] = draw(small_fracs.filter(bool))
    return Series2(terms, N)


@st.composite
def series1(draw, prec=None, max_prec=8, zero_constant=False):
    N = prec if prec is not None else draw(st.integers(1, max_prec))
    start = 1 if zero_constant else 0
    terms = {e: draw(small_fracs) for e in range(start, N) if draw(st.booleans())}
    return Series1(terms, N)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, _, _, _ in module.CRITERIA:
        if key in module.RESULTS:
            terminalreporter.write_line(module.RESULTS[key])
