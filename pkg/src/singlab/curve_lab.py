"""Branches of one-dimensional germs at the origin.

Plane curves are expanded with Duval's rational variant of the Newton-Puiseux
algorithm (at most one algebraic extension).  Space curves are projected to a
plane, expanded there, and lifted back coordinate by coordinate using
elimination polynomials that are linear in the lifted coordinate.

A parametrization is a tuple of truncated power series in ``t``: coordinate
``i`` is a list of coefficients of ``t^0 .. t^(N-1)`` where ``N`` is the
branch's ``truncation_order``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Sequence

import sympy

from . import ideal_engine as ie
from .errors import (
    ExtensionTooDeep,
    GenericityUnstable,
    HintRejected,
    LiftingFailed,
    NotACurve,
    OriginNotInVariety,
    RestrictionVanishes,
    SquarefreeRequired,
    TruncationTooShort,
)
from .poly_core import (
    AlgebraicNumber,
    MonomialOrder,
    NumberField,
    Polynomial,
    field_of,
    parse_poly,
    random_linear_form,
    split_seed,
)

T_VALUES = (Fraction(1, 7), Fraction(1, 11), Fraction(1, 13))
MAX_DOUBLINGS = 3
PROJECTION_SEEDS = 3

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# truncated univariate series (coefficient lists, lowest power first)

def _s_trunc(a: list, prec: int) -> list:
    a = list(a[:prec])
    return a + [ZERO] * (prec - len(a))


def _s_add(a: list, b: list) -> list:
    return [x + y for x, y in zip(a, b)]


def _s_scale(a: list, c) -> list:
    return [c * x for x in a]


def _s_mul(a: list, b: list, prec: int) -> list:
    out = [ZERO] * prec
    for i, x in enumerate(a[:prec]):
        if not x:
            continue
        for j in range(min(len(b), prec - i)):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _s_inv(a: list, prec: int) -> list:
    """1/a for a series with nonzero constant term."""
    if not a or not a[0]:
        raise ZeroDivisionError("series has no constant term")
    inv0 = ONE / a[0]
    out = [ZERO] * prec
    out[0] = inv0
    for k in range(1, prec):
        acc = ZERO
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j] and out[k - j]:
                acc = acc + a[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def series_order(a: Sequence):
    """Index of the first nonzero coefficient, or None when all vanish."""
    for i, c in enumerate(a):
        if c:
            return i
    return None


def compose_series(terms, series: Sequence[list], prec: int) -> list:
    """Sum of c * prod_i series_i^e_i truncated at t^prec, for terms (e, c)."""
    cache: list[dict[int, list]] = [{1: _s_trunc(s, prec)} for s in series]

    def power(i, k):
        got = cache[i].get(k)
        if got is None:
            got = _s_mul(power(i, k // 2), power(i, k - k // 2), prec)
            cache[i][k] = got
        return got

    out = [ZERO] * prec
    for e, c in terms:
        prod = None
        for i, k in enumerate(e):
            if k:
                prod = power(i, k) if prod is None else _s_mul(prod, power(i, k), prec)
        if prod is None:
            out[0] = out[0] + c
        else:
            out = [x + c * y for x, y in zip(out, prod)]
    return out


def _poly_degree(s: Sequence) -> int:
    d = -1
    for i, c in enumerate(s):
        if c:
            d = i
    return d


# ---------------------------------------------------------------------------
# branch records

@dataclass(frozen=True)
class PuiseuxBranch:
    """Parametrized irreducible branch t -> (phi_1(t), ..., phi_n(t)) through 0.

    ``exact`` means the truncated parametrization is itself a polynomial map
    onto the branch, so evaluations and compositions need no truncation.
    ``conjugates`` is the number of complex branches this record represents
    (the degree of the coefficient field when an extension was needed).
    """

    parametrization: tuple
    truncation_order: int
    variables: tuple
    source: str = "computed"
    exact: bool = False
    conjugates: int = 1

    def __post_init__(self):
        if len(self.parametrization) != len(self.variables):
            raise ValueError("one series per variable required")
        if any(s and s[0] for s in self.parametrization):
            raise ValueError("branch must pass through the origin")
        if all(series_order(s) is None for s in self.parametrization):
            raise ValueError("parametrization is identically zero")

    @property
    def field(self) -> NumberField | None:
        return field_of(c for s in self.parametrization for c in s)

    def polynomial_degree(self) -> int:
        return max(_poly_degree(s) for s in self.parametrization)

    def compose(self, f: Polynomial) -> tuple[list, int | None]:
        """f(phi(t)) as (coefficients, certified precision); precision None means exact."""
        f = f.reembed(self.variables) if f.variables != self.variables else f
        if self.exact:
            prec = max(f.total_degree(), 0) * max(self.polynomial_degree(), 1) + 1
            return compose_series(f.items(), self.parametrization, prec), None
        prec = self.truncation_order
        return compose_series(f.items(), self.parametrization, prec), prec

    def order_of(self, f: Polynomial):
        """ord_t f(phi(t)); None when the composition vanishes identically (exact branches)."""
        coeffs, prec = self.compose(f)
        k = series_order(coeffs)
        if prec is not None and (k is None or k >= prec):
            raise TruncationTooShort(f"ord_t of {f.render()} not certified below order {prec}")
        return k

    def render(self) -> list[str]:
        out = []
        for s in self.parametrization:
            deg = _poly_degree(s)
            text = Polynomial({(i,): c for i, c in enumerate(s) if c}, ("t",)).render()
            if not self.exact and deg >= 0:
                text = f"{text} + O(t^{self.truncation_order})"
            out.append(text)
        return out

    def __str__(self):
        return "(" + ", ".join(self.render()) + ")"


@dataclass(frozen=True)
class BranchSet:
    branches: tuple
    residual_certificate: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    def complex_count(self) -> int:
        return sum(b.conjugates for b in self.branches)


def empty_branch_set(reason: str = "empty locus") -> BranchSet:
    return BranchSet((), {"method": reason})


# ---------------------------------------------------------------------------
# factoring univariate polynomials over Q or Q(theta) (sympy)

def _sympy_field(K: NumberField):
    dom = K.__dict__.get("_sympy_domain")
    if dom is None:
        z = sympy.Symbol("_z")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * z**i for i, c in enumerate(K.modulus))
        dom = sympy.QQ.algebraic_field(sympy.CRootOf(expr, 0))
        K.__dict__["_sympy_domain"] = dom
    return dom


def _to_sympy(c, K, dom):
    if isinstance(c, AlgebraicNumber):
        theta = dom.from_sympy(dom.ext)
        out, power = dom.zero, dom.one
        for a in c.coeffs:
            out = out + dom.convert(sympy.Rational(a.numerator, a.denominator)) * power
            power = power * theta
        return out
    c = Fraction(c)
    q = sympy.Rational(c.numerator, c.denominator)
    return dom.convert(q) if K is not None else sympy.QQ.convert(q)


def _from_sympy(c, K):
    if K is None:
        return Fraction(int(c.numerator), int(c.denominator))
    coeffs = [Fraction(int(a.numerator), int(a.denominator)) for a in reversed(c.to_list())]
    return K.element(coeffs)


def factor_univariate(coeffs: Sequence, K: NumberField | None) -> list[tuple[list, int]]:
    """Irreducible factors (monic, lowest degree first) with multiplicities over Q or K."""
    z = sympy.Symbol("_z")
    dom = _sympy_field(K) if K is not None else sympy.QQ
    rep = [_to_sympy(c, K, dom) for c in reversed(list(coeffs))]
    poly = sympy.Poly.from_list(rep, z, domain=dom)
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fc = [_from_sympy(c, K) for c in reversed(fac.rep.to_list())]
        lead = fc[-1]
        out.append(([c / lead for c in fc], mult))
    return out


def _sympy_poly(f: Polynomial):
    gens = sympy.symbols(f"_a0:{f.nvars}")
    terms = {e: sympy.Rational(c.numerator, c.denominator) for e, c in f.items()}
    return sympy.Poly.from_dict(terms, *gens, domain="QQ"), gens


def _from_sympy_poly(p, variables) -> Polynomial:
    terms = {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in p.terms()}
    return Polynomial(terms, variables)


def polynomial_gcd(polys: Sequence[Polynomial]) -> Polynomial:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise ValueError("gcd of nothing")
    variables = polys[0].variables
    acc, gens = _sympy_poly(polys[0])
    for p in polys[1:]:
        acc = acc.gcd(_sympy_poly(p.reembed(variables))[0])
    return _from_sympy_poly(acc, variables).monic()


def squarefree_part(f: Polynomial) -> Polynomial:
    p, _ = _sympy_poly(f)
    return _from_sympy_poly(p.sqf_part(), f.variables).monic()


def is_squarefree(f: Polynomial) -> bool:
    g = polynomial_gcd([f] + [f.differentiate(v) for v in f.variables])
    return g.total_degree() == 0


# ---------------------------------------------------------------------------
# Newton-Puiseux (Duval's rational variant)

def _bi_shift_div(F: dict, di: int, dj: int) -> dict:
    return {(i - di, j - dj): c for (i, j), c in F.items()}


def _transform(P: dict, xi, u: int, v: int, p: int, q: int) -> dict:
    """P(xi^v X^q, X^p (xi^u + Y)) as a dict in (X, Y)."""
    out: dict = {}
    xi_u = xi**u
    for (i, j), c in P.items():
        base = c * xi ** (v * i) if i else c
        xexp = q * i + p * j
        for k in range(j + 1):
            coeff = base * comb(j, k) * xi_u ** (j - k)
            key = (xexp, k)
            val = out.get(key, ZERO) + coeff
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


def _edges(F: dict, r: int):
    """Lower Newton polygon edges from (0, r) down to the Y-free terms, as (p, q, l, points)."""
    cur = (0, r)
    edges = []
    while cur[1] > 0:
        cands = [(i, j) for (i, j) in F if j < cur[1]]
        if not cands:
            break
        # Y ~ X^mu makes X^i Y^j of order i + mu*j; the edge is where that is minimal
        mu = min(Fraction(i - cur[0], cur[1] - j) for i, j in cands)
        on = [(i, j) for i, j in F if j <= cur[1] and (i - cur[0]) == mu * (cur[1] - j)]
        on.append(cur)
        p, q = mu.numerator, mu.denominator
        l = q * cur[0] + p * cur[1]
        edges.append((p, q, l, sorted(set(on), key=lambda ij: ij[1])))
        cur = min(on, key=lambda ij: ij[1])
    return edges


def _solve_regular(F: dict, prec: int) -> list:
    """The unique series Y(X) with Y(0) = 0 and F(X, Y(X)) = 0, when dF/dY(0,0) != 0."""
    FY = {(i, j - 1): c * j for (i, j), c in F.items() if j}
    Y = [ZERO]
    size = 1
    while size < prec:
        size = min(2 * size, prec)
        Yt = _s_trunc(Y, size)
        xs = [ZERO, ONE] + [ZERO] * (size - 2) if size > 1 else [ZERO]
        val = compose_series(F.items(), [xs, Yt], size)
        der = compose_series(FY.items(), [xs, Yt], size)
        corr = _s_mul(val, _s_inv(der, size), size)
        Y = [a - b for a, b in zip(Yt, corr)]
    return _s_trunc(Y, prec)


@dataclass
class _Expansion:
    xc: object
    xq: int
    ypoly: dict
    Y: list
    K: NumberField | None


def _duval(F: dict, K, xc, xq: int, ypoly: dict, prec: int, out: list):
    if F and all(j >= 1 for _, j in F):
        out.append(_Expansion(xc, xq, ypoly, [ZERO] * prec, K))
        F = _bi_shift_div(F, 0, 1)
    axis = [j for (i, j) in F if i == 0]
    if not axis:
        raise ArithmeticError("unexpected factor X in Newton-Puiseux recursion")
    r = min(axis)
    if r == 0:
        return
    if r == 1:
        out.append(_Expansion(xc, xq, ypoly, _solve_regular(F, prec), K))
        return
    for p, q, l, points in _edges(F, r):
        j0 = points[0][1]
        phi = [ZERO] * ((points[-1][1] - j0) // q + 1)
        for i, j in points:
            phi[(j - j0) // q] = F[(i, j)]
        for psi, _mult in factor_univariate(phi, K):
            if len(psi) == 2:
                xi, K2 = -psi[0], K
            elif K is None:
                K2 = NumberField(psi)
                xi = K2.generator
            else:
                raise ExtensionTooDeep("a Puiseux step needs a second algebraic extension")
            u = next(u for u in range(1, p + 1) if (u * q) % p == 1 % p)
            v = (u * q - 1) // p
            F1 = _bi_shift_div(_transform(F, xi, u, v, p, q), l, 0)
            y1 = _transform(ypoly, xi, u, v, p, q)
            _duval(F1, K2, xc * xi ** (v * xq), xq * q, y1, prec, out)


def _ordinary(x) -> Fraction | AlgebraicNumber:
    return x if isinstance(x, AlgebraicNumber) else Fraction(x)


def newton_puiseux(fcurve: Polynomial, truncation_order: int | None = None) -> BranchSet:
    """All branches at the origin of a squarefree plane curve fcurve = 0."""
    if fcurve.nvars != 2:
        raise ValueError("newton_puiseux needs a polynomial in exactly two variables")
    if fcurve.is_zero() or fcurve.constant_term() != 0:
        raise OriginNotInVariety(f"{fcurve.render()} does not vanish at the origin")
    if not fcurve.is_rational():
        raise ValueError("newton_puiseux expects rational coefficients")
    if not is_squarefree(fcurve):
        raise SquarefreeRequired(f"{fcurve.render()} has a repeated factor")
    prec = truncation_order or 4 * fcurve.total_degree()
    variables = fcurve.variables
    F = {tuple(e): Fraction(c) for e, c in fcurve.items()}
    branches = []
    if all(i >= 1 for i, _ in F):
        axis = (tuple(_s_trunc([], prec)), tuple(_s_trunc([ZERO, ONE], prec)))
        branches.append(PuiseuxBranch(axis, prec, variables, exact=True))
        F = _bi_shift_div(F, 1, 0)
    expansions: list[_Expansion] = []
    root_count = min((j for (i, j) in F if i == 0), default=0)
    if root_count:
        _duval(F, None, ONE, 1, {(0, 1): ONE}, prec, expansions)
    counted = 0
    for ex in expansions:
        xs = [ZERO] * prec
        if ex.xq < prec:
            xs[ex.xq] = _ordinary(ex.xc)
        tser = [ZERO, ONE] + [ZERO] * (prec - 2)
        ys = compose_series(ex.ypoly.items(), [tser, ex.Y], prec)
        conj = ex.K.degree if ex.K is not None else 1
        counted += conj * ex.xq
        poly_branch = PuiseuxBranch((tuple(xs), tuple(ys)), prec, variables, exact=True, conjugates=conj)
        if series_order(poly_branch.compose(fcurve)[0]) is None:
            branches.append(poly_branch)
        else:
            branches.append(PuiseuxBranch((tuple(xs), tuple(ys)), prec, variables, conjugates=conj))
    if counted != root_count:
        raise ArithmeticError(f"Puiseux root count {counted} differs from the Newton polygon height {root_count}")
    cert = {"method": "newton-polygon", "polynomial": fcurve.render(), "root_count": root_count}
    return BranchSet(tuple(branches), cert)


# ---------------------------------------------------------------------------
# branch invariants

def branch_multiplicity(b: PuiseuxBranch, seed: int = 42) -> int:
    """Order of a generic linear form on the branch (3 seeded forms, minimum attained twice)."""
    orders = []
    for s in split_seed(seed, 3, "branch-multiplicity"):
        k = b.order_of(random_linear_form(b.variables, s))
        orders.append(k if k is not None else float("inf"))
    low = min(orders)
    if low == float("inf") or orders.count(low) < 2:
        raise GenericityUnstable(f"linear-form orders {orders} on the branch are not stable")
    return int(low)


def local_degree_along_branch(f: Polynomial, b: PuiseuxBranch) -> int:
    """ord_t f(phi(t)): the number of points of f = delta on the branch near 0."""
    if f.constant_term() != 0:
        raise OriginNotInVariety(f"{f.render()} does not vanish at the origin")
    try:
        k = b.order_of(f)
    except TruncationTooShort:
        if all(not c for c in b.compose(f)[0]):
            raise RestrictionVanishes(f"{f.render()} vanishes on the branch up to order {b.truncation_order}")
        raise
    if k is None:
        raise RestrictionVanishes(f"{f.render()} vanishes identically on the branch {b}")
    return k


def point_on_branch(b: PuiseuxBranch, t_value) -> tuple:
    """Exact coordinates of phi(t_value) for t_value != 0."""
    t_value = Fraction(t_value)
    if t_value == 0:
        raise ValueError("the specialization parameter must be nonzero")
    if not b.exact:
        raise TruncationTooShort("a truncated series does not evaluate to an exact point of the branch")
    out = []
    for s in b.parametrization:
        acc = ZERO
        for c in reversed(s[: _poly_degree(s) + 1]):
            acc = acc * t_value + c
        out.append(acc)
    return tuple(out)


def with_doubling(compute: Callable[[int], object], truncation_order: int):
    """Run compute(N), doubling N on TruncationTooShort (at most MAX_DOUBLINGS times)."""
    for k in range(MAX_DOUBLINGS + 1):
        try:
            return compute(truncation_order * 2**k)
        except TruncationTooShort:
            if k == MAX_DOUBLINGS:
                raise


# ---------------------------------------------------------------------------
# space curves: projection and lifting

def _default_truncation(I: ie.Ideal) -> int:
    return 4 * max(g.total_degree() for g in I.generators)


def _linear_elements(gb_polys, c_index: int):
    """(A, B) with element = A*c + B, for basis elements of degree one in coordinate c."""
    out = []
    for g in gb_polys:
        degs = {e[c_index] for e in g}
        if max(degs) != 1:
            continue
        A = {e[:c_index] + (0,) + e[c_index + 1 :]: v for e, v in g.items() if e[c_index] == 1}
        B = {e: v for e, v in g.items() if e[c_index] == 0}
        out.append((A, B))
    return out


def _lift_coordinate(A: dict, B: dict, series: list, prec: int):
    """c = -B(phi)/A(phi) as a series, with its certified precision; None if c does not vanish at 0."""
    a = compose_series(A.items(), series, prec)
    b = compose_series(B.items(), series, prec)
    k = series_order(a)
    if k is None:
        return None
    kb = series_order(b)
    if kb is not None and kb < k:
        return "pole"
    shifted_a = a[k:]
    shifted_b = b[k:] if k < len(b) else []
    eff = prec - k
    c = _s_mul(_s_scale(_s_trunc(shifted_b, eff), -ONE), _s_inv(shifted_a, eff), eff)
    if c and c[0]:
        return "elsewhere"
    return c, eff


def _try_projection(I: ie.Ideal, plane: tuple[int, int], prec: int):
    n = len(I.variables)
    a, b = plane
    plane_vars = (I.variables[a], I.variables[b])
    fibre = I + Polynomial.var(plane_vars[0], I.variables) + Polynomial.var(plane_vars[1], I.variables)
    if not ie.is_finite(ie.colength(fibre)):
        raise LiftingFailed("projection is not finite at the origin")
    others = [c for c in range(n) if c not in plane]
    curve_poly = None
    lifts = {}
    for c in others:
        keep = (I.variables[c], plane_vars[0], plane_vars[1])
        J = I
        drop = [v for v in I.variables if v not in keep]
        if drop:
            J = ie.eliminate(I, drop)
        gens = [g.reembed(keep) for g in J.generators]
        G = ie._buchberger([dict(g.items()) for g in gens], MonomialOrder("elimination", 1).key())
        polys = [g for _, g in G]
        free = [Polynomial({e[1:]: v for e, v in g.items()}, plane_vars) for g in polys if all(e[0] == 0 for e in g)]
        if not free:
            raise LiftingFailed(f"projection to {plane_vars} is not a curve")
        h = squarefree_part(polynomial_gcd(free))
        if h.total_degree() == 0:
            raise LiftingFailed(f"projection to {plane_vars} is not a curve")
        if curve_poly is None:
            curve_poly = h
        lifts[c] = _linear_elements(polys, 0)
    if curve_poly is None:
        # n == 2 never reaches here; for completeness use the plane ideal directly
        raise LiftingFailed("no coordinate to lift")
    plane_branches = newton_puiseux(curve_poly, prec)
    result = []
    for pb in plane_branches:
        series = [list(s) for s in pb.parametrization]
        coords: dict[int, list] = {a: series[0], b: series[1]}
        eff_prec = prec
        skip = False
        for c in others:
            lifted = None
            for A, B in lifts[c]:
                got = _lift_coordinate(A, B, [[ZERO] * prec] + series, prec)
                if got is None:
                    continue
                lifted = got
                break
            if lifted is None:
                raise LiftingFailed(f"no unique lift of coordinate {I.variables[c]} over a plane branch")
            if lifted in ("pole", "elsewhere"):
                skip = True
                break
            coords[c], p_c = lifted
            eff_prec = min(eff_prec, p_c)
        if skip:
            continue
        param = tuple(tuple(_s_trunc(coords[i], eff_prec)) for i in range(n))
        result.append((param, eff_prec, pb.conjugates))
    return result, curve_poly


def _finish_branches(I: ie.Ideal, raw, source="computed") -> list[PuiseuxBranch]:
    out = []
    for param, prec, conj in raw:
        if prec < 2:
            raise LiftingFailed("lifting lost all precision")
        approx = PuiseuxBranch(param, prec, I.variables, source, exact=False, conjugates=conj)
        for g in I.generators:
            coeffs, _ = approx.compose(g)
            if series_order(coeffs) is not None:
                raise LiftingFailed(f"lifted branch does not satisfy {g.render()}")
        poly = PuiseuxBranch(param, prec, I.variables, source, exact=True, conjugates=conj)
        exact = all(series_order(poly.compose(g)[0]) is None for g in I.generators)
        out.append(poly if exact else approx)
    return out


def _generic_change(n: int, seed: int):
    rng = random.Random(seed)
    while True:
        M = sympy.Matrix(n, n, lambda i, j: rng.choice((-3, -2, -1, 1, 2, 3)) if i != j else rng.choice((1, 2, 3)))
        if M.det() != 0:
            return M


def _decompose_in_coordinates(I: ie.Ideal, prec: int, seed: int):
    n = len(I.variables)
    errors = []
    for plane in combinations(range(n), 2):
        try:
            raw, h = _try_projection(I, plane, prec)
            return _finish_branches(I, raw), {"method": "projection", "plane": [I.variables[i] for i in plane], "plane_curve": h.render()}
        except (LiftingFailed, ExtensionTooDeep) as exc:
            errors.append(exc)
    for s in split_seed(seed, PROJECTION_SEEDS, "projection"):
        M = _generic_change(n, s)
        Minv = M.inv()
        new_vars = tuple(f"_u{i}" for i in range(n))
        # x = Minv * u
        images = {}
        for i, v in enumerate(I.variables):
            terms = {}
            for j in range(n):
                c = Minv[i, j]
                if c != 0:
                    e = tuple(1 if k == j else 0 for k in range(n))
                    terms[e] = Fraction(int(c.p), int(c.q))
            images[v] = Polynomial(terms, new_vars)
        J = ie.Ideal([g.substitute(images, new_vars) for g in I.generators], new_vars)
        try:
            raw, h = _try_projection(J, (0, 1), prec)
        except (LiftingFailed, ExtensionTooDeep) as exc:
            errors.append(exc)
            continue
        back = []
        for param, p, conj in raw:
            xs = []
            for i in range(n):
                acc = [ZERO] * p
                for j in range(n):
                    c = Minv[i, j]
                    if c != 0:
                        acc = _s_add(acc, _s_scale(list(param[j]), Fraction(int(c.p), int(c.q))))
                xs.append(tuple(acc))
            back.append((tuple(xs), p, conj))
        try:
            branches = _finish_branches(I, back)
        except LiftingFailed as exc:
            errors.append(exc)
            continue
        return branches, {"method": "projection", "plane": "generic", "seed": s, "plane_curve": h.render()}
    if errors and all(isinstance(e, ExtensionTooDeep) for e in errors):
        raise errors[-1]
    raise LiftingFailed(f"no projection gave a unique lifting ({len(errors)} attempts)")


def parse_hint(entries: Sequence[str], variables: Sequence[str], prec: int) -> PuiseuxBranch:
    """A user parametrization given as one polynomial in t per coordinate."""
    if len(entries) != len(variables):
        raise HintRejected(f"hint has {len(entries)} entries for {len(variables)} variables")
    series = []
    for text in entries:
        p = parse_poly(text, ("t",)) if isinstance(text, str) else text
        coeffs = [ZERO] * (p.total_degree() + 1 if not p.is_zero() else 1)
        for (k,), c in p.items():
            coeffs[k] = c
        series.append(coeffs)
    width = max(len(s) for s in series)
    prec = max(prec, width + 1)
    param = tuple(tuple(_s_trunc(s, prec)) for s in series)
    try:
        return PuiseuxBranch(param, prec, tuple(variables), "user-supplied", exact=True)
    except ValueError as exc:
        raise HintRejected(str(exc)) from exc


def implicitize(b: PuiseuxBranch) -> ie.Ideal:
    """Ideal of the image of an exact rational branch (t eliminated from the graph)."""
    if not b.exact or b.field is not None:
        raise ValueError("implicitization needs an exact rational parametrization")
    t = "_tpar"
    ext = (t,) + tuple(b.variables)
    gens = []
    for v, s in zip(b.variables, b.parametrization):
        phi = Polynomial({(k,) + (0,) * len(b.variables): c for k, c in enumerate(s) if c}, ext)
        gens.append(Polynomial.var(v, ext) - phi)
    return ie.eliminate(ie.Ideal(gens, ext), [t])


def _verify_hints(I: ie.Ideal, hints: Sequence[PuiseuxBranch]) -> dict:
    for h in hints:
        for g in I.generators:
            if series_order(h.compose(g)[0]) is not None:
                raise HintRejected(f"hint {h} does not annihilate {g.render()}")
    ideals = [implicitize(h) for h in hints]
    for (i, A), (j, B) in combinations(enumerate(ideals), 2):
        if ie.same_ideal(A, B):
            raise HintRejected(f"hints {i} and {j} parametrize the same branch")
    J = ideals[0]
    for A in ideals[1:]:
        J = ie.intersect(J, A)
    residual = ie.saturate(I, J)
    if ie.colength(residual) != 0:
        raise HintRejected("hints do not cover the locus at the origin")
    return {"method": "hints", "residual_colength": 0}


def decompose_critical_locus(I: ie.Ideal, hint=None, seed: int = 42, truncation_order: int | None = None) -> BranchSet:
    """Branches of the one-dimensional germ V(I) at the origin."""
    I = ie._as_ideal(I)
    if ie.krull_dimension_at_origin(I) != 1:
        raise NotACurve("the locus is not one-dimensional at the origin")
    prec = truncation_order or _default_truncation(I)
    if hint:
        branches = [h if isinstance(h, PuiseuxBranch) else parse_hint(h, I.variables, prec) for h in hint]
        cert = _verify_hints(I, branches)
        return BranchSet(tuple(branches), cert)
    if len(I.variables) == 2:
        h = squarefree_part(polynomial_gcd(list(I.generators)))
        if h.total_degree() == 0:
            raise NotACurve("generators have no common curve component")
        bs = newton_puiseux(h, prec)
        # keep only branches of h on which I vanishes
        kept = _finish_branches(I, [(b.parametrization, b.truncation_order, b.conjugates) for b in bs])
        return BranchSet(tuple(kept), dict(bs.residual_certificate, method="gcd+newton-polygon"))
    branches, cert = _decompose_in_coordinates(I, prec, seed)
    return BranchSet(tuple(branches), cert)
