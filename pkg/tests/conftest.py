from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gsplines.poly import Polynomial

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def polynomials(ring, max_deg=3, max_terms=6):
    """Random sparse polynomials in ``ring`` with small rational coefficients."""
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(ring.nvars)])
    return st.dictionaries(exps, rationals, max_size=max_terms).map(lambda t: Polynomial(ring, t))


def F(x):
    return Fraction(x)
