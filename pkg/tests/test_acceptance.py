"""Acceptance criteria 1-10, one test per criterion.

Each test prints a single PASS or FAIL line (with wall time) to the terminal,
also under captured output, and fails normally when the criterion is not met.
"""

import itertools
import random
import time
from contextlib import contextmanager
from math import prod

import pytest

from singlab import brasselet as br
from singlab import cli
from singlab import curve_lab as cl
from singlab import ideal_engine as ie
from singlab import invariants as inv
from singlab.ideal_engine import is_finite
from singlab.poly_core import Polynomial, default_variables, parse_poly, random_linear_form

ISOLATED_SCENARIOS = ("a1-cone", "brieskorn-333", "cusp-curve", "icis-sphere-linear")
ONE_DIM_SCENARIOS = ("whitney-umbrella", "two-branch")


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, budget):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\nFAIL criterion {number}: {title} ({elapsed:.2f}s): {type(exc).__name__}: {exc}")
            raise
        with capsys.disabled():
            print(f"\nPASS criterion {number}: {title} ({elapsed:.2f}s)")
    return run


def load(name, seed=None):
    return cli.load_scenario(cli.bundled_text(name), seed_override=seed)


def staircase_count(exponents, n):
    """Monomials outside a monomial ideal, counted by enumerating a box."""
    box = max(max(e) for e in exponents) + 1
    count = 0
    for m in itertools.product(range(box), repeat=n):
        if not any(all(a <= b for a, b in zip(e, m)) for e in exponents):
            count += 1
    return count


def random_isolated_germ(n, rng, max_degree=4):
    variables = default_variables(n)
    while True:
        terms = {}
        for i in range(n):
            terms[tuple(rng.randint(2, max_degree) if j == i else 0 for j in range(n))] = rng.choice([1, 2, 3])
        for _ in range(2):
            e = tuple(rng.randint(0, 2) for _ in range(n))
            if 2 <= sum(e) <= max_degree:
                terms[e] = terms.get(e, 0) + rng.randint(-3, 3)
        g = Polynomial(terms, variables)
        if g.order() >= 2 and is_finite(inv.milnor_number(g)):
            return g


def test_criterion_01_milnor_grid(criterion):
    with criterion(1, "Milnor-number grid", 1.0):
        XY, XYZ = ("x", "y"), ("x", "y", "z")
        for a in range(2, 6):
            for b in range(2, 6):
                f = parse_poly(f"x^{a} + y^{b}", XY)
                expected = staircase_count([(a - 1, 0), (0, b - 1)], 2)
                assert expected == (a - 1) * (b - 1)
                assert inv.milnor_number(f) == expected
        for a in (2, 3, 4):
            for b in (2, 3, 4):
                for c in (2, 3, 4):
                    f = parse_poly(f"x^{a} + y^{b} + z^{c}", XYZ)
                    expected = staircase_count([(a - 1, 0, 0), (0, b - 1, 0), (0, 0, c - 1)], 3)
                    assert expected == prod((a - 1, b - 1, c - 1))
                    assert inv.milnor_number(f) == expected


def test_criterion_02_le_greuel_closure(criterion):
    with criterion(2, "Le-Greuel closure on bundled ICIS pairs", 5.0):
        pairs = []
        for name in ("a1-cone", "brieskorn-333", "cusp-curve"):
            s = load(name)
            pairs.append((s.g, s.f))
        s = load("icis-sphere-linear")
        pairs.append((s.ambient.equation, s.g))
        assert len(pairs) >= 3
        for first, linear in pairs:
            n = first.nvars
            # independent value: the pair's fibre is the Milnor fibre of `first` on the hyperplane
            mu_pair = inv.milnor_number(inv.restrict_to_hyperplane(first, linear)) if n > 1 else 0
            chi = inv.icis_fiber_euler_characteristic(first, linear)
            assert chi == 1 + (-1) ** (n - 2) * mu_pair
            assert inv.milnor_number(first) + mu_pair == inv.le_greuel_number(first, linear)


def test_criterion_03_branch_pipeline(criterion):
    with criterion(3, "branch pipeline on whitney-umbrella and two-branch", 5.0):
        expected = {"whitney-umbrella": [1], "two-branch": [1, 1]}
        for name, multiplicities in expected.items():
            for seed in br.BUNDLED_SEEDS:
                s = load(name, seed)
                B = cl.decompose_critical_locus(inv.jacobian_ideal(s.g), seed=seed)
                assert B.complex_count() == len(multiplicities)
                assert sorted(cl.branch_multiplicity(b, seed) for b in B) == multiplicities
                transversal = inv.transversal_slice_form(s.variables, seed)
                for b in B:
                    assert inv.branch_point_data(s.g, b, transversal).slice_milnor == 1
                    for k in range(3):
                        form = random_linear_form(s.variables, 1000 * seed + k)
                        assert cl.local_degree_along_branch(form, b) == 1


def test_criterion_04_morse_count_two_routes(criterion):
    quadric = "x^2 + y^2 + z^2"
    with criterion(4, "Morse count m by the assembly route and the polar route", 20.0):
        for name in ONE_DIM_SCENARIOS:
            start = time.perf_counter()
            base = load(name)
            for f in (base.f, parse_poly(quadric, base.variables)):
                s = br.Scenario(name, base.ambient, f, base.g, base.seed)
                r = br.verify_thm_generalization_6_4(s)
                c = r.check("defect")
                assert r.status == br.VERIFIED, r.reason
                assert c.routes_disjoint()
                assert c.lhs == c.rhs
                m = r.counts["m"]
                assert isinstance(m, int) and m >= 0
                if name == "whitney-umbrella" and f is base.f:
                    assert m == 1
            assert time.perf_counter() - start < 10.0, name


def test_criterion_05_euler_obstruction_closure(criterion):
    with criterion(5, "Euler obstruction of a one-dimensional locus by two routes", 10.0):
        for name in ONE_DIM_SCENARIOS:
            s = load(name)
            ctx = br.ScenarioContext(s)
            report = br.verify_cor_generalization_6_6(s, ctx)
            assert report.status == br.VERIFIED, report.reason
            correction = ctx.branch_sum(
                lambda i: ctx.branch_multiplicity(i) * (ctx.eu_branch(i) - ctx.brasselet_point(i, "l")))
            assembled = report.lhs + correction
            direct = inv.euler_obstruction_1dim(s.g, cl.decompose_critical_locus(inv.jacobian_ideal(s.g), seed=s.seed), s.seed)
            assert assembled == direct
        rng = random.Random(5)
        for _ in range(5):
            g = random_isolated_germ(3, rng)
            isolated = inv.euler_obstruction_hypersurface_isolated(g)
            assert inv.euler_obstruction_1dim(g, cl.empty_branch_set()) == isolated
            s = br.Scenario("random", br.AmbientSpace.affine(g.variables), br.generic_linear(g.variables, 42), g)
            report = br.verify_cor_generalization_6_6(s)
            assert report.lhs == isolated


def test_criterion_06_degeneration_suite(criterion):
    with criterion(6, "one-dimensional verifiers reduce to the isolated baselines", 15.0):
        for name in ISOLATED_SCENARIOS:
            s = load(name)
            reports, ctx = br.verify_all(s)
            by_name = {r.identity: r for r in reports}
            assert all(r.status == br.VERIFIED for r in reports), name
            assert all(r.mode == br.ISOLATED for r in reports)
            A, d, f, g = list(s.ambient.equations), s.ambient.d, s.f, s.g
            l = br.hyperplane_form(s.variables, s.seed)
            chi = inv.complete_intersection_fiber_chi
            sign = (-1) ** (d - 1)
            polar = inv.symmetric_polar_curve(f, g, A, seed=s.seed)
            n_q = inv.mu_of_polar(polar, f)[0]
            m_q = inv.mu_of_polar(polar, g)[0]
            B_f, B_g = chi(A + [f]), chi(A + [g])
            # B_f - B_{f,X^g} = (-1)^(d-1) n_q
            thm = by_name["thm_6_4"]
            assert thm.lhs == B_f - chi(A + [g, f]) == sign * n_q
            assert thm.counts["n_q"] == n_q
            # B_{f,X^g} = B_{g,X^f}
            b1 = by_name["brasselet_1"]
            assert b1.lhs == b1.rhs == chi(A + [f, g]) == chi(A + [g, f])
            # Eu_{X^g} = B_{g,X cap H}
            eu_xg = inv.euler_obstruction_hypersurface_isolated(g, s.seed) if not A else \
                chi(A + [g, br.euler_slice_form(s.variables, s.seed)])
            g66 = by_name["gen_6_6"]
            assert g66.lhs == g66.rhs == chi(A + [l, g]) == eu_xg
            # B_f - B_g = (-1)^(d-1) (n_q - m_q)
            g65 = by_name["gen_6_5"]
            assert g65.lhs == g65.rhs == B_g - B_f == sign * (m_q - n_q)
            # B_f - B_{f,X cap H} = (-1)^(d-1) I_0
            base = by_name["dg_baseline"]
            assert base.check("f: B on X minus B on X^H").lhs == B_f - chi(A + [l, f]) == \
                sign * inv.i0_polar_intersection(f, s.seed, A)
            # polar difference = (-1)^d Eu_{f,X}
            eu_x = 1 if not A else inv.euler_obstruction_hypersurface_isolated(A[0], s.seed)
            c = base.check("f: polar difference")
            assert c.lhs == c.rhs == (-1) ** d * (eu_x - B_f)


def test_criterion_07_parity_inequalities(criterion):
    with criterion(7, "parity inequalities on bundled and random germs", 15.0):
        for name in cli.bundled_names():
            s = load(name)
            r = br.verify_cor_generalization_6_6(s)
            assert r.conditions["parity"], name
        for n in (2, 3, 4):
            rng = random.Random(100 + n)
            variables = default_variables(n)
            for k in range(10):
                g = random_isolated_germ(n, rng, max_degree=3 if n == 4 else 4)
                s = br.Scenario("random", br.AmbientSpace.affine(variables), br.generic_linear(variables, k), g, k)
                ctx = br.ScenarioContext(s)
                r = br.verify_cor_generalization_6_6(s, ctx)
                assert r.status == br.VERIFIED, (n, g.render(), r.reason)
                lhs, eu = r.lhs, r.values["Eu_X^g"]
                assert (lhs >= eu) if n % 2 == 0 else (lhs <= eu)


def test_criterion_08_sign_and_integrality(criterion):
    with criterion(8, "sign rule and nonnegative integral counts", 30.0):
        for seed in br.BUNDLED_SEEDS:
            for name in cli.bundled_names():
                reports, ctx = br.verify_all(load(name, seed))
                for r in reports:
                    assert r.counts_valid(), (name, r.identity, r.counts)
                    assert all(isinstance(v, int) and not isinstance(v, bool) for v in r.counts.values())
                base = next(r for r in reports if r.identity == "dg_baseline")
                roles = ["f"] if ctx.g_type() == br.ONE_DIM else ["f", "g"]
                for role in roles:
                    assert (-1) ** ctx.d * base.values[f"Eu_{role},X"] >= 0, (name, role)
                    assert base.conditions[f"{role}: sign rule"]


def test_criterion_09_determinism(criterion):
    with criterion(9, "byte-identical reports and seed-stable statuses", 30.0):
        first = [cli.canonical_json(cli.run_verify(cli.bundled_text(n))[0]) for n in cli.bundled_names()]
        second = [cli.canonical_json(cli.run_verify(cli.bundled_text(n))[0]) for n in cli.bundled_names()]
        assert first == second
        statuses = set()
        for seed in br.BUNDLED_SEEDS:
            run = tuple(
                tuple(r["status"] for r in cli.run_verify(cli.bundled_text(n), seed)[0]["reports"])
                for n in cli.bundled_names()
            )
            statuses.add(run)
        assert len(statuses) == 1


def test_criterion_10_performance(criterion):
    with criterion(10, "full bundled suite under 60 s, every ideal computation under 10 s", 60.0):
        with ie.timing_probe() as records:
            for name in cli.bundled_names():
                _, code = cli.run_verify(cli.bundled_text(name))
                assert code == 0, name
        assert records
        slowest = max(seconds for _, seconds in records)
        assert slowest < 10.0, f"slowest ideal computation took {slowest:.2f}s"
