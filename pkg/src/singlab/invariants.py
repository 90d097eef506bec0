"""Local invariants of germs: Milnor numbers, Le-Greuel numbers, Euler obstructions,
polar curves and their multiplicities.

Every "small level" quantity is computed algebraically: per-point data along a
branch is read off at exact branch points for three parameter values
(``curve_lab.T_VALUES``) and must agree at all three.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import curve_lab as cl
from . import ideal_engine as ie
from .errors import (
    ExtensionTooDeep,
    GenericityUnstable,
    LiftingFailed,
    NonIsolated,
    NotICIS,
    OriginNotInVariety,
    PolarNotCurve,
    SliceNotTransverse,
    TransversalNotIsolated,
    TruncationTooShort,
)
from .ideal_engine import INFINITE, Ideal, is_finite
from .poly_core import Polynomial, random_linear_form, split_seed

GENERICITY_SEEDS = 3


# ---------------------------------------------------------------------------
# Jacobians, minors, restrictions

def gradient(f: Polynomial) -> list[Polynomial]:
    return [f.differentiate(v) for v in f.variables]


def jacobian_ideal(f: Polynomial) -> Ideal:
    return Ideal(gradient(f), f.variables)


def determinant(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    if len(rows) == 1:
        return rows[0][0]
    total = None
    for j, entry in enumerate(rows[0]):
        if entry.is_zero():
            continue
        minor = determinant([r[:j] + r[j + 1 :] for r in rows[1:]])
        term = entry * minor
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else Polynomial.zero(rows[0][0].variables)


def maximal_minors(functions: Sequence[Polynomial]) -> list[Polynomial]:
    """All k x k minors of the Jacobian matrix of k functions."""
    rows = [gradient(f) for f in functions]
    n, k = len(rows[0]), len(rows)
    out = []
    for cols in combinations(range(n), k):
        d = determinant([[r[c] for c in cols] for r in rows])
        if not d.is_zero():
            out.append(d)
    return out


def hyperplane_substitution(l: Polynomial, variables: Sequence[str]):
    """Solve a homogeneous linear l = 0 for the last variable it involves: (variable, image, remaining)."""
    if any(sum(e) != 1 for e, _ in l.items()):
        raise ValueError("slice must be a homogeneous linear form")
    coeffs = {v: l.coefficient(tuple(1 if w == v else 0 for w in l.variables)) for v in l.variables}
    pivots = [v for v in variables if coeffs.get(v)]
    if not pivots:
        raise SliceNotTransverse("the slicing form does not involve the germ's variables")
    v = pivots[-1]
    rest = tuple(w for w in variables if w != v)
    solved = Polynomial.zero(rest)
    for w in rest:
        c = coeffs.get(w)
        if c:
            solved = solved + Polynomial.var(w, rest) * (-c / coeffs[v])
    return v, solved, rest


def restrict_to_hyperplane(f: Polynomial, l: Polynomial) -> Polynomial:
    """f on {l = 0} for a homogeneous linear l, eliminating the last variable l involves."""
    v, solved, rest = hyperplane_substitution(l, f.variables)
    return f.substitute({v: solved}, rest)


def _linear(l: Polynomial) -> bool:
    return l.total_degree() <= 1


# ---------------------------------------------------------------------------
# Milnor numbers

def milnor_number(f: Polynomial):
    """colength of the Jacobian ideal at 0; INFINITE for a non-isolated singularity."""
    if f.constant_term() != 0:
        raise OriginNotInVariety(f"{f.render()} does not vanish at the origin")
    return ie.colength(jacobian_ideal(f))


@dataclass(frozen=True)
class GermAtPoint:
    """A function localized at an exact point, optionally restricted to levels of other functions."""

    function: Polynomial
    center: tuple
    ambient_restriction: tuple = ()


def _restricted_milnor_translated(g: Polynomial, restrictions: Sequence[Polynomial]):
    """Milnor number at 0 of g on {r = 0 for r in restrictions}, all germs already centered."""
    if not restrictions:
        return ie.colength(jacobian_ideal(g))
    if all(_linear(r) for r in restrictions):
        h, pending = g, [r.reembed(g.variables) for r in restrictions]
        while pending:
            r = pending.pop(0)
            if r.is_zero():
                raise SliceNotTransverse("slicing forms are linearly dependent")
            v, solved, rest = hyperplane_substitution(r, h.variables)
            h = h.substitute({v: solved}, rest)
            pending = [q.substitute({v: solved}, rest) for q in pending]
        if not h.variables:
            raise SliceNotTransverse("slices leave no variables")
        jac = jacobian_ideal(h)
        if not jac.generators:
            raise SliceNotTransverse("the restricted function is constant")
        return ie.colength(jac)
    rank_rows = maximal_minors(list(restrictions))
    if all(m.constant_term() == 0 for m in rank_rows):
        raise SliceNotTransverse("restricting levels are singular at the point")
    gens = list(restrictions) + maximal_minors(list(restrictions) + [g])
    return ie.colength(Ideal(gens, g.variables))


def milnor_number_at(germ: GermAtPoint):
    g = germ.function
    center = tuple(germ.center)
    h = g.translate(center)
    h = h - h.constant_term()
    restrictions = []
    for r in germ.ambient_restriction:
        rt = r.reembed(g.variables).translate(center)
        restrictions.append(rt - rt.constant_term())
    return _restricted_milnor_translated(h, restrictions)


def _stable_minimum(values: list, what: str):
    low = min(values)
    if values.count(low) < 2:
        raise GenericityUnstable(f"{what}: sampled values {values} have no repeated minimum")
    return low


def sectional_milnor(f: Polynomial, seed: int = 42, samples: int = GENERICITY_SEEDS):
    """Milnor number of f on a generic hyperplane through 0 (minimum of seeded samples, attained twice)."""
    if f.nvars < 2:
        raise ValueError("a hyperplane section needs at least two variables")
    if f.constant_term() != 0:
        raise OriginNotInVariety(f"{f.render()} does not vanish at the origin")
    values = []
    for s in split_seed(seed, samples, "sectional"):
        l = random_linear_form(f.variables, s)
        h = restrict_to_hyperplane(f, l)
        values.append(ie.colength(jacobian_ideal(h)) if not h.is_zero() else INFINITE)
    low = _stable_minimum(values, "sectional Milnor number")
    if not is_finite(low):
        raise NonIsolated(f"generic hyperplane sections of {f.render()} are not isolated")
    return low


# ---------------------------------------------------------------------------
# complete intersections

def icis_number(functions: Sequence[Polynomial]):
    """colength of (f_1..f_{k-1}) + k x k minors of the Jacobian of (f_1..f_k)."""
    functions = list(functions)
    if len(functions) == 1:
        return milnor_number(functions[0])
    gens = functions[:-1] + maximal_minors(functions)
    return ie.colength(Ideal(gens, functions[0].variables))


def le_greuel_number(f: Polynomial, g: Polynomial):
    return icis_number([f, g])


def icis_milnor_number(functions: Sequence[Polynomial]) -> int:
    """Milnor number of the ICIS (f_1..f_k) via the Le-Greuel chain."""
    functions = list(functions)
    mu = 0
    for k in range(1, len(functions) + 1):
        value = icis_number(functions[:k])
        if not is_finite(value):
            raise NotICIS(f"({', '.join(f.render() for f in functions[:k])}) is not an isolated complete intersection")
        mu = value - mu
    return mu


def icis_fiber_euler_characteristic(f: Polynomial, g: Polynomial) -> int:
    """chi of {f = delta, g = alpha} near 0 for an ICIS pair (f, g)."""
    n = f.nvars
    return 1 + (-1) ** (n - 2) * icis_milnor_number([f, g])


def complete_intersection_fiber_chi(functions: Sequence[Polynomial]) -> int:
    n = functions[0].nvars
    k = len(functions)
    return 1 + (-1) ** (n - k) * icis_milnor_number(functions)


# ---------------------------------------------------------------------------
# Euler obstructions

def euler_obstruction_hypersurface_isolated(g: Polynomial, seed: int = 42) -> int:
    if not is_finite(milnor_number(g)):
        raise NonIsolated(f"{g.render()} does not have an isolated singularity")
    n = g.nvars
    if n == 1:
        return 1
    return 1 + (-1) ** (n - 2) * sectional_milnor(g, seed)


@dataclass(frozen=True)
class BranchPointData:
    """Per-point data of g along a branch, stable over the sampled parameter values."""

    slice_milnor: int
    slice_sectional: int | None
    points: tuple


def _stable(values, what):
    if len(set(values)) != 1:
        raise GenericityUnstable(f"{what} differs between sample points: {values}")
    return values[0]


def branch_point_data(g: Polynomial, b: cl.PuiseuxBranch, level: Polynomial, sectional_seed: int | None = None):
    """mu of g on {level = level(p)} at p in b, and (optionally) the sectional mu of that germ."""
    mus, secs, pts = [], [], []
    for t in cl.T_VALUES:
        p = cl.point_on_branch(b, t)
        pts.append(p)
        germ = GermAtPoint(g, p, (level,))
        mu = milnor_number_at(germ)
        if not is_finite(mu):
            raise TransversalNotIsolated(f"{g.render()} is not isolated on the level through {p}")
        mus.append(mu)
        if sectional_seed is not None:
            if not _linear(level):
                raise ValueError("sectional data needs a linear transversal slice")
            h = g.translate(p)
            h = h - h.constant_term()
            lt = level.reembed(g.variables).translate(p)
            h = restrict_to_hyperplane(h, lt - lt.constant_term())
            if h.nvars < 2:
                secs.append(0)
            else:
                secs.append(sectional_milnor(h, sectional_seed))
    return BranchPointData(
        _stable(mus, "transversal Milnor number"),
        _stable(secs, "transversal sectional Milnor number") if secs else None,
        tuple(pts),
    )


def transversal_slice_form(variables, seed: int) -> Polynomial:
    return random_linear_form(variables, split_seed(seed, 1, "transversal")[0])


def euler_obstruction_along_branch(g: Polynomial, b: cl.PuiseuxBranch, seed: int = 42) -> int:
    """Eu of {g = 0} at a generic point of the branch, via the transversal hypersurface germ."""
    l = transversal_slice_form(g.variables, seed)
    data = branch_point_data(g, b, l, sectional_seed=seed)
    m = g.nvars - 1  # variables of the transversal germ
    if m == 1:
        return 1
    return 1 + (-1) ** (m - 2) * data.slice_sectional


def euler_obstruction_1dim(g: Polynomial, branches: cl.BranchSet, seed: int = 42) -> int:
    """Eu of {g = 0} at 0 for a one-dimensional singular locus with the given branches."""
    n = g.nvars
    total = 1 + (-1) ** (n - 2) * sectional_milnor(g, seed)
    l = transversal_slice_form(g.variables, seed)
    for b in branches:
        mb = cl.branch_multiplicity(b, seed)
        data = branch_point_data(g, b, l, sectional_seed=seed)
        total += b.conjugates * (-1) ** (n - 1) * mb * (data.slice_milnor + data.slice_sectional)
    return total


# ---------------------------------------------------------------------------
# polar curves

@dataclass
class PolarCurveData:
    """Closure of the critical locus of (f, g) on the ambient regular part, off {f g = 0}."""

    ideal: Ideal
    f: Polynomial
    g: Polynomial
    ambient: tuple = ()
    components: cl.BranchSet | None = None
    component_mu: tuple = ()
    decomposition_error: str | None = None
    empty: bool = False
    seed: int = 42
    _cache: dict = field(default_factory=dict, repr=False)

    def local_ideal_without_origin_component(self) -> Ideal:
        """The polar ideal with embedded or isolated components at 0 removed."""
        got = self._cache.get("clean")
        if got is None:
            m = Ideal([Polynomial.var(v, self.ideal.variables) for v in self.ideal.variables], self.ideal.variables)
            got = ie.saturate(self.ideal, m)
            self._cache["clean"] = got
        return got


def polar_ideal(f: Polynomial, g: Polynomial, ambient: Sequence[Polynomial] = ()) -> Ideal:
    ambient = list(ambient)
    gens = ambient + maximal_minors(ambient + [f, g])
    I = Ideal(gens, f.variables)
    if not I.generators:
        raise PolarNotCurve("the pair has identically dependent differentials")
    for h in (f, g):
        if not h.is_zero() and h.total_degree() > 0:
            I = ie.saturate(I, Ideal([h], f.variables))
    return I


def _is_empty_at_origin(I: Ideal) -> bool:
    if not I.generators:
        return False
    if any(g.constant_term() != 0 for g in I.generators):
        return ie.colength(I) == 0
    return False


def symmetric_polar_curve(f: Polynomial, g: Polynomial, ambient: Sequence[Polynomial] = (), seed: int = 42, decompose: bool = True) -> PolarCurveData:
    ambient = tuple(ambient)
    I = polar_ideal(f, g, ambient)
    if _is_empty_at_origin(I):
        return PolarCurveData(I, f, g, ambient, cl.empty_branch_set("empty polar curve"), (), None, True, seed)
    dim = ie.krull_dimension_at_origin(I)
    if dim > 1:
        raise PolarNotCurve(f"polar locus has dimension {dim} at the origin")
    if dim <= 0:
        return PolarCurveData(I, f, g, ambient, cl.empty_branch_set("polar locus is a point"), (), None, True, seed)
    data = PolarCurveData(I, f, g, ambient, seed=seed)
    if decompose:
        try:
            comps = cl.decompose_critical_locus(I, seed=seed)
            mus = []
            for b in comps:
                mus.append(polar_component_mu(data, b))
            data.components = comps
            data.component_mu = tuple(mus)
        except (LiftingFailed, ExtensionTooDeep, TruncationTooShort) as exc:
            data.components = None
            data.decomposition_error = f"{type(exc).__name__}: {exc}"
    return data


def polar_component_mu(P: PolarCurveData, b: cl.PuiseuxBranch) -> int:
    """Milnor number of g on {ambient = 0, f = f(p)} at generic points p of the component."""
    vals = []
    for t in cl.T_VALUES:
        p = cl.point_on_branch(b, t)
        f_t = P.f.translate(p)
        g_t = P.g.translate(p)
        levels = [a.translate(p) for a in P.ambient] + [f_t - f_t.constant_term()]
        vals.append(_restricted_milnor_translated(g_t - g_t.constant_term(), levels))
    return _stable(vals, "polar component Milnor number")


def mu_of_polar(P: PolarCurveData, weight: Polynomial):
    """Sum over components of (local degree of weight) * mu; returns (value, route)."""
    if P.empty:
        return 0, "empty"
    if P.components is not None:
        total = 0
        for b, mu in zip(P.components, P.component_mu):
            total += b.conjugates * cl.local_degree_along_branch(weight, b) * mu
        return total, "decomposition"
    clean = P.local_ideal_without_origin_component()
    value = ie.colength(clean + weight.reembed(clean.variables))
    if not is_finite(value):
        raise PolarNotCurve("polar curve meets the weight's zero set in a curve")
    return value, "flat-deformation"


def mu_f_of_polar(P: PolarCurveData, f: Polynomial) -> int:
    return mu_of_polar(P, f)[0]


def i0_polar_intersection(f: Polynomial, seed: int = 42, ambient: Sequence[Polynomial] = ()) -> int:
    """Intersection multiplicity at 0 of {f = 0} with the polar curve of f relative to a generic linear form."""
    l = random_linear_form(f.variables, split_seed(seed, 1, "polar-linear")[0])
    I = polar_ideal(l, f, ambient)
    if _is_empty_at_origin(I):
        return 0
    dim = ie.krull_dimension_at_origin(I)
    if dim <= 0:
        return 0
    if dim > 1:
        raise PolarNotCurve(f"polar locus of {f.render()} has dimension {dim}")
    return ie.intersection_multiplicity_at_origin(I, f)


# ---------------------------------------------------------------------------
# Milnor fibre of a function with a one-dimensional singular locus

def iomdine_perturbation_chi(g: Polynomial, branches: cl.BranchSet, seed: int = 42, start: int | None = None, window: int = 3, max_start: int = 12):
    """chi of the Milnor fibre of g from mu(g + l^N) and branch data, stable over `window` consecutive N.

    Returns (chi, record) with the N values used.
    """
    n = g.nvars
    l = random_linear_form(g.variables, split_seed(seed, 1, "perturbation")[0])
    correction = 0
    for b in branches:
        ml = cl.local_degree_along_branch(l, b)
        data = branch_point_data(g, b, l)
        correction += b.conjugates * ml * data.slice_milnor
    N0 = start or max(g.total_degree() + 1, 4)
    history = []
    for N in range(N0, max_start + window):
        mu = milnor_number(g + l**N)
        if not is_finite(mu):
            history.append((N, None))
            continue
        chi = 1 + (-1) ** (n - 1) * (mu - N * correction)
        history.append((N, chi))
        tail = [c for _, c in history[-window:]]
        if len(tail) == window and None not in tail and len(set(tail)) == 1:
            return chi, {"perturbation": l.render(), "exponents": [k for k, _ in history[-window:]], "branch_sum": correction}
    raise GenericityUnstable(f"perturbation Euler characteristic did not stabilize: {history}")


def perturbation_chi(g: Polynomial, seed: int = 42, start: int | None = None, window: int = 3, max_start: int = 12):
    """chi of the Milnor fibre of g from mu(g + l^N) alone, without branch data.

    For large N the Milnor number of g + l^N is affine in N; the slope and the
    intercept give chi. The slope must repeat over ``window`` consecutive steps.
    Returns (chi, record).
    """
    n = g.nvars
    l = random_linear_form(g.variables, split_seed(seed, 1, "perturbation")[0])
    N0 = start or max(g.total_degree() + 1, 4)
    mus = []
    for N in range(N0, max_start + window + 1):
        mu = milnor_number(g + l**N)
        mus.append((N, mu if is_finite(mu) else None))
        tail = mus[-(window + 1):]
        if len(tail) < window + 1 or any(m is None for _, m in tail):
            continue
        slopes = {b[1] - a[1] for a, b in zip(tail, tail[1:])}
        if len(slopes) == 1:
            slope = slopes.pop()
            N1, mu1 = tail[0]
            chi = 1 + (-1) ** (n - 1) * (mu1 - N1 * slope)
            return chi, {"perturbation": l.render(), "exponents": [k for k, _ in tail], "slope": slope}
    raise GenericityUnstable(f"mu(g + l^N) did not become affine in N: {mus}")
