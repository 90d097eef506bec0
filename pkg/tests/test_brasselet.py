"""Stratification descriptors, Brasselet numbers and the two-route identity checks."""

import pytest

from singlab import brasselet as br
from singlab import cli
from singlab import curve_lab as cl
from singlab import invariants as inv
from singlab.errors import MissingStratumChi, NonIsolated, UnsupportedError, UnsupportedWeight
from singlab.poly_core import parse_poly

XYZ = ("x", "y", "z")
AFFINE = br.AmbientSpace.affine(XYZ)
L = br.generic_linear(XYZ, 42)
QUADRIC = "x^2 + y^2 + z^2"
WHITNEY = "x^2 - y^2*z"
TWO_BRANCH = "x^2 + y^2*z^2"


def P(text):
    return parse_poly(text, XYZ)


def branches_of(text):
    return cl.decompose_critical_locus(inv.jacobian_ideal(P(text)))


def scenario(g, f=None, ambient=AFFINE, seed=42):
    f = P(f) if isinstance(f, str) else (f if f is not None else br.generic_linear(XYZ, seed))
    return br.Scenario("test", ambient, f, P(g), seed)


@pytest.fixture(scope="module")
def bundled_runs():
    runs = {}
    for name in cli.bundled_names():
        s = cli.load_scenario(cli.bundled_text(name))
        runs[name] = br.verify_all(s)
    return runs


# descriptors

def test_affine_base_descriptor():
    V = AFFINE.base_descriptor()
    assert V.names() == ["{0}", "X\\0"]
    assert V.dimension == 3
    assert all(s.eu == 1 for s in V.strata)


def test_descriptor_needs_one_origin():
    top = br.Stratum("top", 3, 1)
    with pytest.raises(ValueError):
        br.StratificationDescriptor((top,))


def test_refine_first_whitney():
    V = br.refine_first(AFFINE.base_descriptor(), P(WHITNEY), branches_of(WHITNEY), f=L)
    assert V.names() == ["{0}", "X\\0&f=0", "X\\0\\f=0", "b1\\0"]
    assert V.stratum("b1\\0").dim == 1


def test_refine_first_two_branches():
    V = br.refine_first(AFFINE.base_descriptor(), P(TWO_BRANCH), branches_of(TWO_BRANCH), f=L)
    assert [s.name for s in V.strata if s.kind == "branch"] == ["b1\\0", "b2\\0"]


def test_refine_first_without_critical_locus():
    V = AFFINE.base_descriptor()
    assert br.refine_first(V, P("x"), cl.empty_branch_set()) == V


def test_refine_second_six_strata():
    V = br.relative_to(AFFINE.base_descriptor(), P(QUADRIC))
    W = br.refine_second(V, P(QUADRIC), P(WHITNEY), branches_of(WHITNEY))
    assert len(W.strata) == 6
    assert sum(s.kind == "branch" for s in W.strata) == 1


def test_refine_second_regular_g():
    W = br.refine_second(AFFINE.base_descriptor(), P(QUADRIC), P("x + y"), cl.empty_branch_set())
    assert W.names() == ["{0}", "X\\0\\g=0", "X\\0&g=0"]


def test_refine_second_keeps_declared_eu_values():
    V = br.StratificationDescriptor((
        br.Stratum("{0}", 0, 3, "origin", contains_origin=True),
        br.Stratum("smooth part", 2, 1),
        br.Stratum("double line", 1, 2),
    ))
    W = br.refine_second(V, P("z"), P("x"), cl.empty_branch_set())
    origin_eu = W.origin.eu
    assert origin_eu == 3
    assert {s.eu for s in W.strata if s.name.startswith("double line")} == {2}
    assert {s.in_xg for s in W.strata if s.name.endswith("&g=0")} == {True}


# weights

def test_normal_morse_index():
    V = AFFINE.base_descriptor()
    top, origin = V.stratum("X\\0"), V.origin
    assert br.normal_morse_index_eu(top, top, br.ConstructibleWeight.euler_obstruction(V), V) == 1
    assert br.normal_morse_index_eu(origin, top, br.ConstructibleWeight.euler_obstruction(V), V) == 0
    with pytest.raises(UnsupportedWeight):
        br.normal_morse_index_eu(top, top, br.ConstructibleWeight.unit(V))


# Brasselet numbers

def test_chi_milnor_fiber_examples():
    assert br.chi_milnor_fiber(P(QUADRIC), AFFINE) == 2
    assert br.chi_milnor_fiber(L, AFFINE) == 1
    cone = br.AmbientSpace.hypersurface(P(QUADRIC))
    assert br.chi_milnor_fiber(L, cone) == inv.euler_obstruction_hypersurface_isolated(P(QUADRIC)) == 0


def test_hypersurface_ambient_must_be_isolated():
    with pytest.raises(NonIsolated):
        br.AmbientSpace.hypersurface(P(WHITNEY))


@pytest.mark.parametrize("g", [WHITNEY, TWO_BRANCH])
def test_chi_of_the_slice_by_both_routes(g):
    b = branches_of(g)
    assert br.chi_hypersurface_slice(P(g), L, b, route="icis") == 0
    assert br.chi_hypersurface_slice(P(g), L, b, route="morse") == 0


def test_chi_of_the_slice_for_isolated_g():
    g = P("x^2 + y^2 + z^3")
    restricted = inv.restrict_to_hyperplane(g, L)
    assert br.chi_hypersurface_slice(g, L) == 1 + (-1) ** 1 * inv.milnor_number(restricted)


@pytest.mark.parametrize("g,value", [(WHITNEY, 1), (TWO_BRANCH, 2)])
def test_brasselet_number_on_xg_equals_eu(g, value):
    b = branches_of(g)
    V = br.refine_second(br.relative_to(AFFINE.base_descriptor(), L), L, P(g), b)
    for route in ("icis", "morse"):
        assert br.brasselet_number(L, AFFINE, V, g=P(g), branches=b, route=route) == value
    assert inv.euler_obstruction_1dim(P(g), b) == value


def test_brasselet_number_of_affine_space():
    V = br.relative_to(AFFINE.base_descriptor(), P(QUADRIC))
    assert br.brasselet_number(P(QUADRIC), AFFINE, V) == br.chi_milnor_fiber(P(QUADRIC), AFFINE)


def test_brasselet_number_on_declared_ambient():
    V = br.StratificationDescriptor((
        br.Stratum("{0}", 0, 3, "origin", contains_origin=True),
        br.Stratum("smooth part", 2, 1, chi=-4),
        br.Stratum("double line", 1, 2, chi=2),
    ))
    X = br.AmbientSpace.declared(XYZ, V)
    assert br.chi_milnor_fiber(L, X) == -4 * 1 + 2 * 2
    missing = br.AmbientSpace.declared(XYZ, br.StratificationDescriptor((V.strata[0], br.Stratum("top", 2, 1))))
    with pytest.raises(MissingStratumChi):
        br.chi_milnor_fiber(L, missing)


# identity checks

@pytest.mark.parametrize("g", [WHITNEY, TWO_BRANCH])
@pytest.mark.parametrize("f,m", [(None, 1), (QUADRIC, 6)])
def test_morse_count_by_two_routes(g, f, m):
    r = br.verify_thm_generalization_6_4(scenario(g, f))
    assert r.status == br.VERIFIED
    assert r.lhs == r.rhs == m
    assert r.counts == {"m": m}


def test_every_bundled_check_is_verified(bundled_runs):
    for name, (reports, _) in bundled_runs.items():
        for r in reports:
            assert r.status == br.VERIFIED, (name, r.identity, r.reason)


def test_routes_are_disjoint(bundled_runs):
    for reports, _ in bundled_runs.values():
        for r in reports:
            for c in r.checks:
                assert c.lhs_route and c.rhs_route
                assert c.routes_disjoint(), (r.identity, c.name, set(c.lhs_route) & set(c.rhs_route))


def test_counts_are_nonnegative_integers(bundled_runs):
    for reports, _ in bundled_runs.values():
        for r in reports:
            assert r.counts_valid()


def test_parity_condition(bundled_runs):
    for reports, ctx in bundled_runs.values():
        r = next(r for r in reports if r.identity == "gen_6_6")
        lhs, eu = r.lhs, r.values["Eu_X^g"]
        assert (lhs >= eu) if ctx.d % 2 == 0 else (lhs <= eu)


@pytest.mark.parametrize("seed", br.BUNDLED_SEEDS)
def test_statuses_are_seed_stable(seed):
    for name in cli.bundled_names():
        s = cli.load_scenario(cli.bundled_text(name), seed_override=seed)
        reports, _ = br.verify_all(s)
        assert [r.status for r in reports] == [br.VERIFIED] * len(reports), name


def test_degeneration_to_isolated_baselines():
    # with an isolated g the branch corrections vanish and the checks reduce to the isolated identities
    s = scenario("x^3 + y^3 + z^3")
    ctx = br.ScenarioContext(s)
    thm = br.verify_thm_generalization_6_4(s, ctx)
    n_q = inv.mu_f_of_polar(inv.symmetric_polar_curve(s.f, s.g), s.f)
    assert thm.lhs == br.chi_milnor_fiber(s.f, AFFINE) - inv.complete_intersection_fiber_chi([s.g, s.f]) == n_q
    b1 = br.verify_cor_brasselet_number_1(s, ctx)
    assert b1.lhs == b1.rhs == inv.complete_intersection_fiber_chi([s.f, s.g])
    g66 = br.verify_cor_generalization_6_6(s, ctx)
    assert g66.rhs == inv.euler_obstruction_hypersurface_isolated(s.g)


def test_difference_of_euler_obstructions_on_whitney():
    r = br.verify_cor_difference_euler_obstructions(scenario(WHITNEY))
    assert r.status == br.VERIFIED
    assert r.lhs == 1 - 1 - 1 * (1 - 2) == 1


def test_isolated_sign_rule():
    r = br.verify_prop_generalization_6_6_2(scenario("x^3 + y^3 + z^3"))
    assert r.status == br.VERIFIED
    assert (-1) ** 3 * r.values["Eu_g,X"] >= 0


def test_baseline_for_quadric():
    r = br.verify_dg_baseline(scenario("x + y^2 + z^2", QUADRIC))
    assert r.status == br.VERIFIED
    c = r.check("f: B on X minus B on X^H")
    assert c.lhs == c.rhs == 2


def test_baseline_for_linear_f():
    r = br.verify_dg_baseline(scenario("x^3 + y^3 + z^3", "x + y + z"))
    assert r.status == br.VERIFIED
    assert all(c.lhs == c.rhs == 0 for c in r.checks if c.name.startswith("f:"))


def test_baseline_for_brieskorn():
    r = br.verify_dg_baseline(scenario("x + y^2 + z^2", "x^3 + y^3 + z^3"))
    assert r.status == br.VERIFIED
    assert r.counts["i0(f)"] == 8 + 4


# hypotheses and unsupported inputs

def test_smooth_g_fails_the_one_dimensional_hypothesis():
    for verify in (br.verify_thm_generalization_6_4, br.verify_cor_difference_euler_obstructions):
        r = verify(scenario("x + y^2"))
        assert r.status == br.HYPOTHESIS_FAILED
        assert r.lhs == r.rhs == 0


def test_critical_locus_inside_the_zero_set_of_f():
    r = br.verify_thm_generalization_6_4(scenario(WHITNEY, "x"))
    assert r.status == br.HYPOTHESIS_FAILED
    assert "critical locus" in r.reason


def test_one_dimensional_g_on_a_singular_ambient_is_unsupported():
    cone = br.AmbientSpace.hypersurface(P(QUADRIC))
    with pytest.raises(UnsupportedError):
        br.verify_thm_generalization_6_4(scenario("x^2 + y^2", ambient=cone))


def test_declared_ambient_needs_fibre_data():
    V = br.StratificationDescriptor((br.Stratum("{0}", 0, 1, "origin", contains_origin=True), br.Stratum("top", 3, 1)))
    X = br.AmbientSpace.declared(XYZ, V)
    with pytest.raises(MissingStratumChi):
        br.verify_thm_generalization_6_4(scenario(WHITNEY, ambient=X))


def test_unknown_check_name():
    with pytest.raises(ValueError):
        br.verify(scenario(WHITNEY), "no-such-check")
