import pytest
from hypothesis import HealthCheck, settings, strategies as st

from singlab.poly_core import Polynomial

settings.register_profile(
    "singlab",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("singlab")

XY = ("x", "y")
XYZ = ("x", "y", "z")


def polynomials(variables=XY, max_degree=3, max_terms=5, max_coeff=9):
    """Random sparse polynomials with small integer or fractional coefficients."""
    n = len(variables)
    exponent = st.tuples(*[st.integers(0, max_degree) for _ in range(n)])
    coefficient = st.fractions(min_value=-max_coeff, max_value=max_coeff, max_denominator=5)
    terms = st.dictionaries(exponent, coefficient, max_size=max_terms)
    return terms.map(lambda t: Polynomial(t, variables))


@pytest.fixture
def xyz():
    return XYZ
