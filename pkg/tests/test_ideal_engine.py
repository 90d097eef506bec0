"""Groebner and local standard bases, colength and the ideal operations."""

import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from singlab import ideal_engine as ie
from singlab.errors import NonIsolatedIntersection, NotACurve
from singlab.ideal_engine import INFINITE, Ideal
from singlab.invariants import jacobian_ideal
from singlab.poly_core import Polynomial, parse_poly

from conftest import XY, XYZ, polynomials


def P(text, variables=XY):
    return parse_poly(text, variables)


def ideal(texts, variables=XY):
    return Ideal([P(t, variables) for t in texts], variables)


def leading_set(sb):
    return sorted(sb.leading_exponents())


def unit(variables=XY):
    return Ideal([Polynomial.constant(1, variables)], variables)


# global bases

def test_groebner_examples():
    assert set(ie.groebner_basis(ideal(["y^2 - x^3", "x"])).basis) == {P("x"), P("y^2")}
    assert ie.groebner_basis(ideal(["x"])).basis == (P("x"),)
    assert set(ie.groebner_basis(ideal(["x + y", "x - y"])).basis) == {P("x"), P("y")}


@given(polynomials(XY, 2, 3), polynomials(XY, 2, 3), st.integers(0, 1000))
def test_reduced_basis_is_canonical(a, b, seed):
    # generator order and redundant combinations must not change the reduced basis
    I = Ideal([a, b], XY)
    rng = random.Random(seed)
    c = Polynomial.constant(rng.randint(1, 5), XY)
    J = Ideal([b, a + c * b, a * b], XY)
    assert ie.groebner_basis(I).basis == ie.groebner_basis(J).basis


@given(polynomials(XY, 2, 3), polynomials(XY, 2, 3), polynomials(XY, 2, 3))
def test_membership_of_combinations(a, b, c):
    I = Ideal([a, b], XY)
    assert ie.contains(I, a * c + b)


# local bases

def test_local_basis_cancels_units():
    assert leading_set(ie.local_standard_basis(ideal(["2*x", "2*y"]))) == [(0, 1), (1, 0)]
    sb = ie.local_standard_basis(ideal(["x - y^2", "y^2*(y + 3)"]))
    assert leading_set(sb) == [(0, 2), (1, 0)]
    sb = ie.local_standard_basis(ideal(["x^3 + x^2", "y"]))
    assert leading_set(sb) == [(0, 1), (2, 0)]


# colength

def test_colength_examples():
    assert ie.colength(ideal(["x", "y"])) == 1
    assert ie.colength(ideal(["x^2", "x*y", "y^3"])) == 4
    assert ie.colength(ideal(["x"])) is INFINITE
    assert ie.colength(ideal(["x + 1", "y"])) == 0


def brute_force_staircase(exponents, n, box):
    """Count monomials in a box not divisible by any generator."""
    count = 0
    for m in itertools.product(range(box), repeat=n):
        if not any(all(a <= b for a, b in zip(e, m)) for e in exponents):
            count += 1
    return count


@st.composite
def artinian_monomial_ideals(draw, n):
    pure = [tuple(draw(st.integers(1, 4)) if j == i else 0 for j in range(n)) for i in range(n)]
    extra = draw(st.lists(st.tuples(*[st.integers(0, 3) for _ in range(n)]), max_size=3))
    return pure + [e for e in extra if any(e)]


@pytest.mark.parametrize("n", [2, 3])
@given(data=st.data())
def test_colength_of_monomial_ideals_matches_lattice_count(n, data):
    exponents = data.draw(artinian_monomial_ideals(n))
    variables = XYZ[:n]
    I = Ideal([Polynomial({e: 1}, variables) for e in exponents], variables)
    assert ie.colength(I) == brute_force_staircase(exponents, n, 5)


@given(
    st.lists(st.fractions(-3, 3, max_denominator=3), min_size=1, max_size=4),
    st.integers(1, 3),
    st.lists(st.fractions(-3, 3, max_denominator=3), min_size=2, max_size=5),
)
def test_plane_colength_matches_order_of_restriction(series, shift, gcoeffs):
    # i_0(y - p(x), g) = ord_x g(x, p(x)) for p(0) = 0: an independent route
    p = Polynomial({(shift + i, 0): c for i, c in enumerate(series)}, XY)
    x, y = Polynomial.var("x", XY), Polynomial.var("y", XY)
    g = Polynomial({(i, 2 - i % 3): c for i, c in enumerate(gcoeffs)}, XY) + x ** 7
    restricted = g.substitute({"y": p})
    order = min(e[0] for e in restricted.terms) if not restricted.is_zero() else None
    value = ie.colength(Ideal([y - p, g], XY))
    if order is None:
        assert value is INFINITE
    else:
        assert value == order


def random_invertible(n, rng):
    while True:
        M = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(M).det() != 0:
            return M


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("texts,variables", [
    (["x^3 + y^2"], XY),
    (["x^2*y + y^4"], XY),
    (["x^3 + y^3 + z^3"], XYZ),
    (["x^2 + y^3 + z^4 + x*y*z"], XYZ),
])
def test_colength_is_invariant_under_linear_changes(seed, texts, variables):
    f = P(texts[0], variables)
    n = len(variables)
    M = random_invertible(n, random.Random(seed))
    xs = [Polynomial.var(v, variables) for v in variables]
    change = {v: sum((Polynomial.constant(M[i][j], variables) * xs[j] for j in range(n)),
                     Polynomial.zero(variables)) for i, v in enumerate(variables)}
    g = f.substitute(change)
    assert ie.colength(jacobian_ideal(f)) == ie.colength(jacobian_ideal(g))


# saturation, quotient, elimination

def test_saturation_examples():
    assert ie.same_ideal(ie.saturate(ideal(["x*y"]), ideal(["x"])), ideal(["y"]))
    assert ie.same_ideal(ie.saturate(ideal(["x"]), ideal(["y"])), ideal(["x"]))
    # every generator of (x^2, xy) is divisible by x, so saturating by x gives the unit ideal
    assert ie.same_ideal(ie.saturate(ideal(["x^2", "x*y"]), ideal(["x"])), unit())


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2))
def test_saturation_is_idempotent(a, b, c):
    I = Ideal([P(f"x^{a}*y^{b}"), P(f"x^{a + 1}*(y - 1)^{c}")], XY)
    J = ideal(["x"])
    S = ie.saturate(I, J)
    assert ie.same_ideal(ie.saturate(S, J), S)
    for g in I.generators:
        assert ie.contains(S, g)


def test_quotient():
    assert ie.same_ideal(ie.quotient(ideal(["x^2", "x*y"]), ideal(["x"])), ideal(["x", "y"]))


def test_elimination_examples():
    txy = ("t", "x", "y")
    cusp = ie.eliminate(Ideal([P("x - t^2", txy), P("y - t^3", txy)], txy), ["t"])
    assert ie.same_ideal(cusp, ideal(["y^2 - x^3"]))
    assert ie.same_ideal(ie.eliminate(ideal(["x"]), ["y"]), Ideal([P("x", ("x",))], ("x",)))
    line = ie.eliminate(Ideal([P("x - t", txy), P("y - t", txy)], txy), ["t"])
    assert ie.same_ideal(line, ideal(["x - y"]))


def test_intersection():
    I = ie.intersect(ideal(["x"]), ideal(["y"]))
    assert ie.same_ideal(I, ideal(["x*y"]))


# dimension and intersection multiplicity

def test_dimension_at_origin():
    assert ie.krull_dimension_at_origin(jacobian_ideal(P("x^2 - y^2*z", XYZ))) == 1
    assert ie.krull_dimension_at_origin(ideal(["x", "y", "z"], XYZ)) == 0
    assert ie.krull_dimension_at_origin(ideal(["x"], XYZ)) == 2


def test_dimension_is_local():
    # the plane {x = 1} misses the origin, the line {x = y = 0} does not
    I = Ideal([P("x*(x - 1)", XYZ), P("y*(x - 1)", XYZ)], XYZ)
    assert ie.global_dimension(I) == 2
    assert ie.krull_dimension_at_origin(I) == 1


def test_intersection_multiplicity_examples():
    assert ie.intersection_multiplicity_at_origin(ideal(["x", "y"], XYZ), P("z", XYZ)) == 1
    assert ie.intersection_multiplicity_at_origin(ideal(["y^2 - x^3", "z"], XYZ), P("x", XYZ)) == 2
    assert ie.intersection_multiplicity_at_origin(ideal(["x", "y"], XYZ), P("z^2", XYZ)) == 2


def test_intersection_multiplicity_errors():
    with pytest.raises(NotACurve):
        ie.intersection_multiplicity_at_origin(ideal(["x"], XYZ), P("z", XYZ))
    with pytest.raises(NonIsolatedIntersection):
        ie.intersection_multiplicity_at_origin(ideal(["x", "y"], XYZ), P("x", XYZ))
