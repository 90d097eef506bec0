"""Scenarios, stratification descriptors, Brasselet numbers and two-route identity checks.

A verifier evaluates both sides of an identity through separate computations and
records which primitive computations fed each side. Every primitive is memoized
per scenario by a ``ScenarioContext``, together with the primitives it used, so
the recorded call graph of a side is complete even when values come from cache.

Supported ambient spaces: affine space (any critical locus of g of dimension at
most one), hypersurfaces with an isolated singularity (g with an isolated
stratified critical point), and declared stratifications (user-supplied Euler
obstruction and fibre Euler characteristic tables).
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from . import curve_lab as cl
from . import ideal_engine as ie
from . import invariants as inv
from .errors import (
    HypothesisError,
    HypothesisFailed,
    MissingStratumChi,
    NonIsolated,
    OriginNotInVariety,
    UnsupportedError,
    UnsupportedWeight,
)
from .ideal_engine import Ideal, is_finite
from .poly_core import Polynomial, random_linear_form, split_seed

AFFINE = "affine-space"
HYPERSURFACE = "isolated-hypersurface"
DECLARED = "declared"

BUNDLED_SEEDS = (42, 7, 1234)

VERIFIED = "verified"
VIOLATED = "violated"
HYPOTHESIS_FAILED = "hypothesis-failed"


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# stratifications

@dataclass(frozen=True)
class Stratum:
    """One stratum of a descriptor.

    ``kind`` is one of origin, regular, f-zero, g-regular, g-off, branch.
    ``eu`` is the Euler obstruction of the ambient space along the stratum,
    ``eu_g`` that of {g = 0} for strata inside it. ``chi`` is an optional
    user-supplied Euler characteristic of the stratum's intersection with a
    nearby level of f.
    """

    name: str
    dim: int
    eu: int | None
    kind: str = "regular"
    defining: str = ""
    contains_origin: bool = False
    in_xf: bool = False
    in_xg: bool = False
    eu_g: int | None = None
    branch: int | None = None
    chi: int | None = None


@dataclass(frozen=True)
class StratificationDescriptor:
    strata: tuple

    def __post_init__(self):
        points = [s for s in self.strata if s.contains_origin]
        if len(points) != 1 or points[0].dim != 0:
            raise ValueError("a descriptor needs exactly one stratum {0} of dimension 0")
        names = [s.name for s in self.strata]
        if len(set(names)) != len(names):
            raise ValueError("stratum names must be distinct")

    @property
    def dimension(self) -> int:
        return max(s.dim for s in self.strata)

    @property
    def origin(self) -> Stratum:
        return next(s for s in self.strata if s.contains_origin)

    def stratum(self, name: str) -> Stratum:
        for s in self.strata:
            if s.name == name:
                return s
        raise KeyError(name)

    def names(self) -> list[str]:
        return [s.name for s in self.strata]


@dataclass(frozen=True)
class AmbientSpace:
    kind: str
    variables: tuple
    d: int
    equation: Polynomial | None = None
    stratification: StratificationDescriptor | None = None

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def equations(self) -> tuple:
        return (self.equation,) if self.equation is not None else ()

    @classmethod
    def affine(cls, variables: Sequence[str]) -> "AmbientSpace":
        variables = tuple(variables)
        return cls(AFFINE, variables, len(variables))

    @classmethod
    def hypersurface(cls, h: Polynomial) -> "AmbientSpace":
        if h.constant_term() != 0:
            raise OriginNotInVariety(f"{h.render()} does not vanish at the origin")
        mu = inv.milnor_number(h)
        if not is_finite(mu):
            raise NonIsolated(f"ambient hypersurface {h.render()} does not have an isolated singularity")
        return cls(HYPERSURFACE, tuple(h.variables), len(h.variables) - 1, h)

    @classmethod
    def declared(cls, variables: Sequence[str], descriptor: StratificationDescriptor) -> "AmbientSpace":
        for s in descriptor.strata:
            if s.eu is None:
                raise ValueError(f"declared stratum {s.name} needs an Euler obstruction value")
        return cls(DECLARED, tuple(variables), descriptor.dimension, None, descriptor)

    def base_descriptor(self, seed: int = 42) -> StratificationDescriptor:
        if self.kind == DECLARED:
            return self.stratification
        if self.kind == AFFINE:
            eu0 = 1
            top = Stratum("X\\0", self.d, 1, "regular", "C^n minus the origin")
        else:
            eu0 = inv.euler_obstruction_hypersurface_isolated(self.equation, seed)
            top = Stratum("X\\0", self.d, 1, "regular", f"{{{self.equation.render()} = 0}} minus the origin")
        origin = Stratum("{0}", 0, eu0, "origin", "the origin", True, True, True)
        return StratificationDescriptor((origin, top))


def relative_to(V: StratificationDescriptor, f: Polynomial | None = None) -> StratificationDescriptor:
    """Split every positive-dimensional stratum along {f = 0}."""
    out = []
    for s in V.strata:
        if s.contains_origin or s.in_xf:
            out.append(s)
            continue
        out.append(replace(s, name=f"{s.name}&f=0", dim=s.dim - 1, kind="f-zero", defining=f"{s.defining}, f = 0", in_xf=True))
        out.append(replace(s, name=f"{s.name}\\f=0", defining=f"{s.defining}, f != 0"))
    return StratificationDescriptor(tuple(out))


def refine_first(V: StratificationDescriptor, g: Polynomial, branches: cl.BranchSet, f: Polynomial | None = None,
                 eu_along: Sequence[int] | None = None) -> StratificationDescriptor:
    """Refinement by the critical locus of g: its branches become strata.

    With ``f`` given, strata are split along {f = 0} first. ``eu_along`` gives the
    Euler obstruction of {g = 0} along each branch.
    """
    W = relative_to(V, f) if f is not None else V
    if not len(branches):
        return W
    out = []
    for s in W.strata:
        if s.contains_origin or s.in_xf or s.dim < W.dimension:
            out.append(s)
            continue
        out.append(replace(s, defining=f"{s.defining}, off the critical locus of g"))
        for j, b in enumerate(branches, start=1):
            out.append(Stratum(
                f"b{j}\\0", 1, s.eu, "branch", f"branch {', '.join(b.render())}",
                False, False, True, eu_along[j - 1] if eu_along is not None else None, j - 1,
            ))
    return StratificationDescriptor(tuple(out))


def refine_second(V: StratificationDescriptor, f: Polynomial, g: Polynomial, branches: cl.BranchSet,
                  eu_along: Sequence[int] | None = None) -> StratificationDescriptor:
    """Split each stratum into its parts off {g = 0}, on {g = 0} off the critical locus, and on the branches."""
    out = []
    top = V.dimension
    for s in V.strata:
        if s.contains_origin:
            out.append(s)
            continue
        out.append(replace(s, name=f"{s.name}\\g=0", kind=s.kind if s.kind != "regular" else "g-off",
                           defining=f"{s.defining}, g != 0", in_xg=False))
        carries = len(branches) and not s.in_xf and s.dim == top
        out.append(replace(s, name=f"{s.name}&g=0", dim=s.dim - 1, kind="g-regular",
                           defining=f"{s.defining}, g = 0" + (", off the critical locus" if carries else ""),
                           in_xg=True, eu_g=1, chi=None))
        if carries:
            for j, b in enumerate(branches, start=1):
                out.append(Stratum(
                    f"{s.name}&b{j}", 1, s.eu, "branch", f"branch {', '.join(b.render())}",
                    False, s.in_xf, True, eu_along[j - 1] if eu_along is not None else None, j - 1,
                ))
    return StratificationDescriptor(tuple(out))


# ---------------------------------------------------------------------------
# weights

@dataclass(frozen=True)
class ConstructibleWeight:
    kind: str
    values: tuple

    @classmethod
    def euler_obstruction(cls, V: StratificationDescriptor) -> "ConstructibleWeight":
        return cls("euler-obstruction", tuple((s.name, s.eu) for s in V.strata))

    @classmethod
    def unit(cls, V: StratificationDescriptor) -> "ConstructibleWeight":
        return cls("unit", tuple((s.name, 1) for s in V.strata))

    def value(self, name: str) -> int:
        return dict(self.values)[name]


def normal_morse_index_eu(V_prime: Stratum, V: Stratum, weight: ConstructibleWeight | None = None,
                          descriptor: StratificationDescriptor | None = None) -> int:
    """Normal Morse index of the Euler obstruction of the closure of V along V_prime."""
    if weight is not None and weight.kind != "euler-obstruction":
        raise UnsupportedWeight(f"normal Morse index is only available for Euler obstruction weights, not {weight.kind}")
    if descriptor is not None:
        for s in (V_prime, V):
            if s not in descriptor.strata:
                raise ValueError(f"stratum {s.name} is not in the active descriptor")
    return 1 if V_prime == V else 0


# ---------------------------------------------------------------------------
# scenarios

@dataclass(frozen=True)
class Scenario:
    name: str
    ambient: AmbientSpace
    f: Polynomial
    g: Polynomial
    seed: int = 42
    checks: tuple = ()
    branch_hints: tuple | None = None
    f_is_generic: bool = False

    @property
    def variables(self) -> tuple:
        return self.ambient.variables


def generic_linear(variables: Sequence[str], seed: int) -> Polynomial:
    return random_linear_form(tuple(variables), split_seed(seed, 1, "function")[0])


def hyperplane_form(variables: Sequence[str], seed: int) -> Polynomial:
    return random_linear_form(tuple(variables), split_seed(seed, 1, "hyperplane")[0])


def euler_slice_form(variables: Sequence[str], seed: int) -> Polynomial:
    return random_linear_form(tuple(variables), split_seed(seed, 1, "euler")[0])


def with_seed(s: Scenario, seed: int) -> Scenario:
    """The same scenario under another seed; a generic f is redrawn from it."""
    f = generic_linear(s.variables, seed) if s.f_is_generic else s.f
    return replace(s, seed=seed, f=f)


ISOLATED = "isolated"
SMOOTH = "smooth"
ONE_DIM = "one-dimensional"


class ScenarioContext:
    """Per-scenario memo of every primitive computation, with dependency tracking."""

    def __init__(self, scenario: Scenario, branches: cl.BranchSet | None = None):
        self.s = scenario
        self.X = scenario.ambient
        self.n = self.X.n
        self.d = self.X.d
        self.seed = scenario.seed
        self.A = list(self.X.equations)
        self.functions = {
            "f": scenario.f,
            "g": scenario.g,
            "l": hyperplane_form(self.X.variables, self.seed),
            "l'": euler_slice_form(self.X.variables, self.seed),
        }
        if self.X.equation is not None:
            self.functions["h"] = self.X.equation
        self._given_branches = branches
        self._cache: dict = {}
        self._stack: list[set] = []

    # -- memo and routes

    def _memo(self, node: str, compute: Callable):
        if node in self._cache:
            value, deps = self._cache[node]
        else:
            self._stack.append(set())
            try:
                value = compute()
            finally:
                deps = frozenset(self._stack.pop())
            self._cache[node] = (value, deps)
        for trace in self._stack:
            trace.add(node)
            trace.update(deps)
        return value

    def _guard(self, node: str, compute: Callable):
        """Memoized hypothesis check; it is part of neither side of any identity."""
        if node not in self._cache:
            saved, self._stack = self._stack, []
            try:
                value = compute()
            finally:
                self._stack = saved
            self._cache[node] = (value, frozenset())
        return self._cache[node][0]

    @contextmanager
    def route(self):
        trace: set = set()
        self._stack.append(trace)
        try:
            yield trace
        finally:
            self._stack.remove(trace)

    def evaluate(self, compute: Callable):
        """(value, sorted call graph) of a computation built from memoized primitives."""
        with self.route() as trace:
            value = compute()
        return value, tuple(sorted(trace))

    def fn(self, role: str) -> Polynomial:
        return self.functions[role]

    # -- classification and hypotheses

    def g_type(self) -> str:
        def compute():
            g = self.fn("g")
            if g.constant_term() != 0:
                raise OriginNotInVariety(f"g = {g.render()} does not vanish at the origin")
            if self.X.kind == AFFINE:
                mu = self.milnor("g")
                if mu == 0:
                    return SMOOTH
                if is_finite(mu):
                    return ISOLATED
                dim = ie.krull_dimension_at_origin(inv.jacobian_ideal(g))
                if dim == 1:
                    return ONE_DIM
                raise HypothesisFailed(f"the critical locus of g has dimension {dim} at the origin")
            if self.X.kind == HYPERSURFACE:
                value = self.critical_on_ambient("g")
                if is_finite(value):
                    return ISOLATED
                raise UnsupportedError("a one-dimensional stratified critical locus on a singular ambient hypersurface is not supported")
            raise MissingStratumChi("identity checks on a declared stratification need fibre Euler characteristics for every stratum and function")
        return self._guard("classify(g)", compute)

    def check_hypotheses(self):
        def compute():
            f = self.fn("f")
            if f.constant_term() != 0:
                raise OriginNotInVariety(f"f = {f.render()} does not vanish at the origin")
            kind = self.g_type()
            if self.X.kind == AFFINE:
                if not is_finite(self.milnor("f")):
                    raise HypothesisFailed("f does not have an isolated singularity")
                locus = inv.jacobian_ideal(self.fn("g"))
            else:
                if not is_finite(inv.icis_number(self.A + [f])):
                    raise HypothesisFailed("f does not have an isolated singularity on the ambient space")
                locus = Ideal(self.A + inv.maximal_minors(self.A + [self.fn("g")]), self.X.variables)
            if kind != SMOOTH:
                if ie.krull_dimension_at_origin(locus + f) > 0:
                    raise HypothesisFailed("the critical locus of g meets {f = 0} outside the origin")
            return kind
        return self._guard("hypotheses", compute)

    # -- primitives

    def milnor(self, role: str):
        return self._memo(f"milnor({role})", lambda: inv.milnor_number(self.fn(role)))

    def critical_on_ambient(self, role: str):
        return self._memo(f"critical-colength({role} on X)",
                          lambda: ie.colength(Ideal(self.A + inv.maximal_minors(self.A + [self.fn(role)]), self.X.variables)))

    def fiber_chi(self, *roles: str) -> int:
        """chi of the Milnor fibre of the last function on the complete intersection of the others."""
        label = ",".join((["h"] if self.A else []) + list(roles))
        return self._memo(f"fiber-chi({label})",
                          lambda: inv.complete_intersection_fiber_chi(self.A + [self.fn(r) for r in roles]))

    def eu_ambient(self) -> int:
        def compute():
            if self.X.kind == AFFINE:
                return 1
            return inv.euler_obstruction_hypersurface_isolated(self.fn("h"), self.seed)
        return self._memo("eu(X)", compute)

    def eu_isolated(self, role: str) -> int:
        """Eu at 0 of {role = 0} on X for an isolated stratified critical point."""
        def compute():
            if self.X.kind == AFFINE:
                return inv.euler_obstruction_hypersurface_isolated(self.fn(role), self.seed)
            return inv.complete_intersection_fiber_chi(self.A + [self.fn(role), self.fn("l'")])
        return self._memo(f"eu-isolated({role})", compute)

    def sectional(self, role: str) -> int:
        return self._memo(f"sectional({role})", lambda: inv.sectional_milnor(self.fn(role), self.seed))

    def branches(self) -> cl.BranchSet:
        def compute():
            if self.g_type() != ONE_DIM:
                return cl.empty_branch_set("isolated critical point")
            if self._given_branches is not None:
                return self._given_branches
            return cl.decompose_critical_locus(inv.jacobian_ideal(self.fn("g")), hint=self.s.branch_hints, seed=self.seed)
        return self._memo("critical-locus(g)", compute)

    def _branch(self, i: int) -> cl.PuiseuxBranch:
        return self.branches().branches[i]

    def conj(self, i: int) -> int:
        return self._branch(i).conjugates

    def branch_multiplicity(self, i: int) -> int:
        return self._memo(f"multiplicity(b{i + 1})", lambda: cl.branch_multiplicity(self._branch(i), self.seed))

    def local_degree(self, role: str, i: int) -> int:
        return self._memo(f"local-degree({role} on b{i + 1})",
                          lambda: cl.local_degree_along_branch(self.fn(role), self._branch(i)))

    def _point_data(self, i: int, level: str, sectional: bool):
        tag = "with sectional" if sectional else "plain"
        return self._memo(
            f"point-data(b{i + 1} on {level}, {tag})",
            lambda: inv.branch_point_data(self.fn("g"), self._branch(i), self.fn(level), self.seed if sectional else None),
        )

    def branch_mu(self, i: int, level: str) -> int:
        """Milnor number of g on {level = delta} at the points of branch i."""
        return self._memo(f"branch-mu(b{i + 1} on {level})", lambda: self._point_data(i, level, False).slice_milnor)

    def branch_sectional(self, i: int, level: str) -> int:
        return self._memo(f"branch-sectional(b{i + 1} on {level})", lambda: self._point_data(i, level, True).slice_sectional)

    def eu_branch(self, i: int) -> int:
        return self._memo(f"eu-branch(b{i + 1})",
                          lambda: inv.euler_obstruction_along_branch(self.fn("g"), self._branch(i), self.seed))

    def eu_1dim(self) -> int:
        return self._memo("eu-1dim(g)", lambda: inv.euler_obstruction_1dim(self.fn("g"), self.branches(), self.seed))

    def perturbation_chi(self) -> int:
        return self._memo("perturbation(g)", lambda: inv.perturbation_chi(self.fn("g"), self.seed)[0])

    def polar(self, a: str, b: str) -> inv.PolarCurveData:
        return self._memo(f"polar({a},{b})",
                          lambda: inv.symmetric_polar_curve(self.fn(a), self.fn(b), self.A, seed=self.seed))

    def polar_mu(self, a: str, b: str, weight: str) -> int:
        return self._memo(f"polar-mu({a},{b}; {weight})", lambda: inv.mu_of_polar(self.polar(a, b), self.fn(weight))[0])

    def i0(self, role: str) -> int:
        return self._memo(f"i0({role})", lambda: inv.i0_polar_intersection(self.fn(role), self.seed, self.A))

    # -- assembled quantities

    def branch_sum(self, term: Callable[[int], int]) -> int:
        return sum(self.conj(i) * term(i) for i in range(len(self.branches())))

    def brasselet_point(self, i: int, level: str) -> int:
        """Brasselet number of g on the smooth level {level = delta} at the points of branch i."""
        return 1 + _sign(self.n - 2) * self.branch_mu(i, level)

    def chi_slice(self, route: str = "icis") -> int:
        """chi of {g = 0} on a nearby level of f, for g with a one-dimensional critical locus."""
        def compute():
            if route == "icis":
                chi_fg = self.fiber_chi("f", "g")
            elif route == "morse":
                n_reg = self.polar_mu("f", "g", "g")
                chi_fg = self.perturbation_chi() - _sign(self.d - 1) * n_reg
            else:
                raise ValueError(f"unknown route {route}")
            return chi_fg - _sign(self.n - 2) * self.branch_sum(lambda i: self.local_degree("f", i) * self.branch_mu(i, "f"))
        return self._memo(f"chi-slice({route})", compute)

    def brasselet_f_on_xg(self, route: str = "icis") -> int:
        if self.g_type() != ONE_DIM:
            return self.fiber_chi("g", "f")
        return self.chi_slice(route) + self.branch_sum(lambda i: self.local_degree("f", i) * (self.eu_branch(i) - 1))

    def brasselet_g(self) -> int:
        if self.g_type() == ONE_DIM:
            return self.perturbation_chi()
        return self.fiber_chi("g")

    def eu_g(self) -> int:
        if self.g_type() == ONE_DIM:
            return self.eu_1dim()
        return self.eu_isolated("g")

    def invariant_table(self) -> dict:
        """A fixed set of invariants for reports; entries that cannot be computed are recorded as such."""
        table: dict = {}

        def put(key, compute):
            try:
                value = compute()
            except (HypothesisError, UnsupportedError) as exc:
                value = f"unavailable: {type(exc).__name__}"
            table[key] = value if is_finite(value) or isinstance(value, str) else "infinite"

        if self.X.kind == AFFINE:
            put("mu(f)", lambda: self.milnor("f"))
            put("mu(g)", lambda: self.milnor("g"))
            put("sectional mu(g)", lambda: self.sectional("g") if self.n > 1 else 0)
        elif self.X.kind == HYPERSURFACE:
            put("mu(h)", lambda: inv.milnor_number(self.fn("h")))
            put("sectional mu(h)", lambda: self.sectional("h"))
            put("mu(h,f)", lambda: inv.icis_milnor_number(self.A + [self.fn("f")]))
            put("mu(h,g)", lambda: inv.icis_milnor_number(self.A + [self.fn("g")]))
        put("Eu(X)", self.eu_ambient)
        put("Eu(X^g)", self.eu_g)
        rows = []
        try:
            count = len(self.branches())
        except (HypothesisError, UnsupportedError):
            count = 0
        for i in range(count):
            row = {"parametrization": list(self._branch(i).render()), "conjugates": self.conj(i)}
            for key, compute in (
                ("multiplicity", lambda: self.branch_multiplicity(i)),
                ("local degree of f", lambda: self.local_degree("f", i)),
                ("transversal mu", lambda: self.branch_mu(i, "l")),
                ("transversal sectional mu", lambda: self.branch_sectional(i, "l")),
                ("Eu(X^g) along branch", lambda: self.eu_branch(i)),
            ):
                try:
                    row[key] = compute()
                except (HypothesisError, UnsupportedError) as exc:
                    row[key] = f"unavailable: {type(exc).__name__}"
            rows.append(row)
        table["branches"] = rows
        return table


# ---------------------------------------------------------------------------
# reports

@dataclass
class Check:
    name: str
    lhs: int
    rhs: int
    lhs_route: tuple
    rhs_route: tuple
    shared_inputs: tuple = ()

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def routes_disjoint(self) -> bool:
        return not (set(self.lhs_route) & set(self.rhs_route)) - set(self.shared_inputs)

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds,
                "lhs_route": list(self.lhs_route), "rhs_route": list(self.rhs_route),
                "shared_inputs": list(self.shared_inputs)}


@dataclass
class IdentityReport:
    identity: str
    checks: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    conditions: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    status: str = VERIFIED
    reason: str | None = None
    mode: str | None = None

    @property
    def lhs(self):
        return self.checks[0].lhs if self.checks else None

    @property
    def rhs(self):
        return self.checks[0].rhs if self.checks else None

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def counts_valid(self) -> bool:
        return all(isinstance(v, int) and v >= 0 for v in self.counts.values())

    def finalize(self) -> "IdentityReport":
        if self.reason is not None:
            self.status = HYPOTHESIS_FAILED
        elif all(c.holds for c in self.checks) and all(self.conditions.values()) and self.counts_valid():
            self.status = VERIFIED
        else:
            self.status = VIOLATED
            failing = [c.name for c in self.checks if not c.holds]
            failing += [k for k, v in self.conditions.items() if not v]
            failing += [f"count {k}" for k, v in self.counts.items() if not (isinstance(v, int) and v >= 0)]
            self.reason = "failed: " + ", ".join(failing)
        return self

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "status": self.status,
            "reason": self.reason,
            "mode": self.mode,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "checks": [c.to_dict() for c in self.checks],
            "counts": dict(self.counts),
            "conditions": dict(self.conditions),
            "values": dict(self.values),
        }


def _add_check(ctx: ScenarioContext, report: IdentityReport, name: str, lhs: Callable, rhs: Callable,
               shared: tuple = ()) -> Check:
    lv, lr = ctx.evaluate(lhs)
    rv, rr = ctx.evaluate(rhs)
    c = Check(name, lv, rv, lr, rr, shared)
    report.checks.append(c)
    return c


# per-branch checks compare two computations on the same branch
BRANCH_INPUT = ("critical-locus(g)",)

ONE_DIM_VERIFIERS = (
    "thm_6_4", "brasselet_1", "difference_eu", "gen_6_6", "gen_6_5", "prop_6_6_2",
)


def _run(name: str, body: Callable, scenario: Scenario, ctx: ScenarioContext | None) -> IdentityReport:
    ctx = ctx or ScenarioContext(scenario)
    report = IdentityReport(name)
    try:
        kind = ctx.check_hypotheses()
        report.mode = ONE_DIM if kind == ONE_DIM else ISOLATED
        body(ctx, report, kind == ONE_DIM)
        if kind == SMOOTH and name in ONE_DIM_VERIFIERS:
            report.reason = "g is smooth at the origin, so it has no critical locus there"
    except HypothesisError as exc:
        report.reason = f"{type(exc).__name__}: {exc}"
    return report.finalize()


# ---------------------------------------------------------------------------
# verifiers

def _thm_6_4(ctx: ScenarioContext, r: IdentityReport, one_dim: bool):
    d = ctx.d

    def lhs():
        value = ctx.fiber_chi("f") - ctx.brasselet_f_on_xg("icis")
        if one_dim:
            value -= ctx.branch_sum(lambda i: ctx.local_degree("f", i) * (1 - ctx.eu_branch(i)))
        return value

    c = _add_check(ctx, r, "defect", lhs, lambda: _sign(d - 1) * ctx.polar_mu("f", "g", "f"))
    r.counts["m" if one_dim else "n_q"] = _sign(d - 1) * c.lhs
    r.values["B_f,X"] = ctx.fiber_chi("f")
    r.values["B_f,X^g"] = ctx.brasselet_f_on_xg("icis")


def _brasselet_1(ctx: ScenarioContext, r: IdentityReport, one_dim: bool):
    def rhs():
        if not one_dim:
            return ctx.fiber_chi("g", "f")
        return ctx.brasselet_f_on_xg("morse") - ctx.branch_sum(
            lambda i: ctx.local_degree("f", i) * (ctx.eu_branch(i) - ctx.brasselet_point(i, "f")))

    _add_check(ctx, r, "B_g,X^f", lambda: ctx.fiber_chi("f", "g"), rhs)


def _difference_eu(ctx: ScenarioContext, r: IdentityReport, one_dim: bool):
    d = ctx.d

    def lhs():
        value = ctx.eu_ambient() - ctx.eu_g()
        if one_dim:
            value -= ctx.branch_sum(lambda i: ctx.branch_multiplicity(i) * (1 - ctx.eu_branch(i)))
        return value

    c = _add_check(ctx, r, "difference", lhs, lambda: _sign(d - 1) * ctx.polar_mu("l", "g", "l"))
    r.counts["m" if one_dim else "n_q"] = _sign(d - 1) * c.lhs
    if one_dim:
        for i in range(len(ctx.branches())):
            _add_check(ctx, r, f"multiplicity b{i + 1} equals generic local degree",
                       lambda: ctx.branch_multiplicity(i), lambda: ctx.local_degree("l", i), BRANCH_INPUT)


def _gen_6_6(ctx: ScenarioContext, r: IdentityReport, one_dim: bool):
    def rhs():
        value = ctx.eu_g()
        if one_dim:
            value -= ctx.branch_sum(lambda i: ctx.branch_multiplicity(i) * (ctx.eu_branch(i) - ctx.brasselet_point(i, "l")))
        return value

    c = _add_check(ctx, r, "B_g,X^H", lambda: ctx.fiber_chi("l", "g"), rhs)
    eu = ctx.eu_g()
    r.values["Eu_X^g"] = eu
    r.conditions["parity"] = c.lhs >= eu if ctx.d % 2 == 0 else c.lhs <= eu
    if one_dim:
        for i in range(len(ctx.branches())):
            _add_check(ctx, r, f"Eu along b{i + 1} equals Eu of the level slice",
                       lambda: ctx.eu_branch(i), lambda: 1 + _sign(ctx.n - 3) * ctx.branch_sectional(i, "l"), BRANCH_INPUT)


def _gen_6_5(ctx: ScenarioContext, r: IdentityReport, one_dim: bool):
    d = ctx.d

    def rhs():
        value = _sign(d - 1) * (ctx.polar_mu("f", "g", "g") - ctx.polar_mu("f", "g", "f"))
        if one_dim:
            value -= ctx.branch_sum(lambda i: ctx.local_degree("f", i) * (1 - ctx.brasselet_point(i, "f")))
        return value

    _add_check(ctx, r, "B_g,X - B_f,X", lambda: ctx.brasselet_g() - ctx.fiber_chi("f"), rhs)
    if one_dim:
        r.counts["n_reg"] = ctx.polar_mu("f", "g", "g")
        r.counts["m_reg"] = ctx.polar_mu("f", "g", "f")
    else:
        r.counts["n_q"] = ctx.polar_mu("f", "g", "f")
        r.counts["m_q"] = ctx.polar_mu("f", "g", "g")


def _prop_6_6_2(ctx: ScenarioContext, r: IdentityReport, one_dim: bool):
    d = ctx.d

    def correction():
        if not one_dim:
            return 0
        return ctx.branch_sum(lambda i: ctx.branch_multiplicity(i) * (ctx.eu_branch(i) - ctx.brasselet_point(i, "l")))

    _add_check(ctx, r, "B_g,X", ctx.brasselet_g,
               lambda: _sign(d - 1) * ctx.polar_mu("l", "g", "g") + ctx.eu_g() - correction())
    _add_check(ctx, r, "n_reg by the two-hyperplane difference",
               lambda: _sign(d - 1) * (ctx.brasselet_g() - ctx.fiber_chi("l", "g")),
               lambda: ctx.polar_mu("l", "g", "g"))
    _add_check(ctx, r, "hyperplane degeneration", lambda: ctx.eu_g() - correction(), lambda: ctx.fiber_chi("l", "g"))
    r.counts["n_reg"] = ctx.polar_mu("l", "g", "g")
    if not one_dim:
        eu_gx = ctx.eu_ambient() - ctx.brasselet_g()
        r.values["Eu_g,X"] = eu_gx
        r.counts["morse_points"] = _sign(d) * eu_gx


def _dg_baseline(ctx: ScenarioContext, r: IdentityReport, one_dim: bool):
    d = ctx.d
    roles = ["f"] if one_dim else ["f", "g"]
    for role in roles:
        _add_check(ctx, r, f"{role}: B on X minus B on X^H",
                   lambda: ctx.fiber_chi(role) - ctx.fiber_chi("l", role),
                   lambda: _sign(d - 1) * ctx.i0(role))
        _add_check(ctx, r, f"{role}: polar difference",
                   lambda: ctx.polar_mu("l", role, role) - ctx.polar_mu("l", role, "l"),
                   lambda: _sign(d) * (ctx.eu_ambient() - ctx.fiber_chi(role)))
        eu_fx = ctx.eu_ambient() - ctx.fiber_chi(role)
        r.values[f"Eu_{role},X"] = eu_fx
        r.conditions[f"{role}: sign rule"] = _sign(d) * eu_fx >= 0
        r.counts[f"i0({role})"] = ctx.i0(role)
        r.counts[f"morse_points({role})"] = _sign(d) * eu_fx


VERIFIERS = {
    "thm_6_4": _thm_6_4,
    "brasselet_1": _brasselet_1,
    "difference_eu": _difference_eu,
    "gen_6_6": _gen_6_6,
    "gen_6_5": _gen_6_5,
    "prop_6_6_2": _prop_6_6_2,
    "dg_baseline": _dg_baseline,
}


def verify_thm_generalization_6_4(s: Scenario, ctx: ScenarioContext | None = None) -> IdentityReport:
    """Brasselet-number defect of f on X versus X^g equals the polar Morse count m."""
    return _run("thm_6_4", _thm_6_4, s, ctx)


def verify_cor_brasselet_number_1(s: Scenario, ctx: ScenarioContext | None = None) -> IdentityReport:
    """B of g on X^f versus B of f on X^g corrected along the branches."""
    return _run("brasselet_1", _brasselet_1, s, ctx)


def verify_cor_difference_euler_obstructions(s: Scenario, ctx: ScenarioContext | None = None) -> IdentityReport:
    """Eu of X minus Eu of X^g, corrected along the branches, against the polar count for a generic l."""
    return _run("difference_eu", _difference_eu, s, ctx)


def verify_cor_generalization_6_6(s: Scenario, ctx: ScenarioContext | None = None) -> IdentityReport:
    """B of g on a generic hyperplane section against Eu of X^g with branch corrections."""
    return _run("gen_6_6", _gen_6_6, s, ctx)


def verify_cor_generalization_6_5(s: Scenario, ctx: ScenarioContext | None = None) -> IdentityReport:
    """B_g - B_f against the polar counts n_reg - m_reg with branch corrections."""
    return _run("gen_6_5", _gen_6_5, s, ctx)


def verify_prop_generalization_6_6_2(s: Scenario, ctx: ScenarioContext | None = None) -> IdentityReport:
    """B of g on X against the polar count relative to a generic l and Eu of X^g."""
    return _run("prop_6_6_2", _prop_6_6_2, s, ctx)


def verify_dg_baseline(s: Scenario, ctx: ScenarioContext | None = None) -> IdentityReport:
    """Isolated-singularity baselines: hyperplane difference against I_0, polar difference against Eu_f."""
    return _run("dg_baseline", _dg_baseline, s, ctx)


def verify(s: Scenario, check: str, ctx: ScenarioContext | None = None) -> IdentityReport:
    if check not in VERIFIERS:
        raise ValueError(f"unknown check {check!r}; known: {', '.join(sorted(VERIFIERS))}")
    return _run(check, VERIFIERS[check], s, ctx)


def verify_all(s: Scenario, checks: Sequence[str] | None = None) -> tuple[list[IdentityReport], ScenarioContext]:
    ctx = ScenarioContext(s)
    checks = list(checks if checks is not None else (s.checks or VERIFIERS))
    return [verify(s, c, ctx) for c in checks], ctx


# ---------------------------------------------------------------------------
# Brasselet numbers and fibre Euler characteristics

def chi_milnor_fiber(f: Polynomial, X: AmbientSpace, seed: int = 42) -> int:
    """Eu-weighted Euler characteristic of X on a nearby level of f, i.e. B_{f,X}(0)."""
    if X.kind == DECLARED:
        return _declared_sum(X.stratification, lambda s: s.eu)
    if f.constant_term() != 0:
        raise OriginNotInVariety(f"{f.render()} does not vanish at the origin")
    if X.kind == AFFINE:
        mu = inv.milnor_number(f)
        if not is_finite(mu):
            raise NonIsolated(f"{f.render()} does not have an isolated singularity")
        return 1 + _sign(X.n - 1) * mu
    if not is_finite(inv.icis_number([X.equation, f])):
        raise NonIsolated(f"{f.render()} does not have an isolated singularity on the ambient space")
    return inv.complete_intersection_fiber_chi([X.equation, f])


def _declared_sum(V: StratificationDescriptor, weight: Callable[[Stratum], int]) -> int:
    total = 0
    for s in V.strata:
        if s.contains_origin:
            continue
        if s.chi is None:
            raise MissingStratumChi(f"stratum {s.name} has no Euler characteristic on the level of f")
        total += s.chi * weight(s)
    return total


def chi_hypersurface_slice(g: Polynomial, f: Polynomial, branches: cl.BranchSet | None = None, seed: int = 42,
                           route: str = "icis") -> int:
    """chi of {g = 0} on a nearby level of f in affine space."""
    s = Scenario("slice", AmbientSpace.affine(g.variables), f, g, seed)
    ctx = ScenarioContext(s, branches)
    ctx.check_hypotheses()
    if ctx.g_type() != ONE_DIM:
        return ctx.fiber_chi("f", "g")
    return ctx.chi_slice(route)


def brasselet_number(f: Polynomial, X: AmbientSpace, refined: StratificationDescriptor, seed: int = 42,
                     g: Polynomial | None = None, branches: cl.BranchSet | None = None, route: str = "icis") -> int:
    """Sum over strata of chi(stratum on a nearby level of f) times Eu.

    Without ``g`` this is B_{f,X}(0) over all strata of ``refined``. With ``g`` it
    is B_{f,X^g}(0) over the strata inside {g = 0}, weighted by their ``eu_g``.
    Strata with a user-supplied ``chi`` use it; otherwise the value comes from
    Milnor numbers, Le-Greuel numbers and branch data.
    """
    inside = [s for s in refined.strata if not s.contains_origin and (g is None or s.in_xg)]
    if X.kind == DECLARED or all(s.chi is not None for s in inside):
        return _declared_sum(StratificationDescriptor((refined.origin, *inside)),
                             lambda s: s.eu if g is None else s.eu_g)
    has_branches = any(s.kind == "branch" for s in inside)
    ctx = None
    if g is None:
        whole = chi_milnor_fiber(f, X, seed)
    else:
        ctx = ScenarioContext(Scenario("brasselet", X, f, g, seed), branches)
        ctx.check_hypotheses()
        whole = ctx.fiber_chi("g", "f") if ctx.g_type() != ONE_DIM else ctx.chi_slice(route)
        branches = ctx.branches()
    if has_branches and branches is None:
        raise ValueError("branch strata need the branch set")
    total = 0
    branch_points = 0
    for s in inside:
        if s.kind != "branch":
            continue
        b = branches.branches[s.branch]
        points = b.conjugates * cl.local_degree_along_branch(f, b)
        branch_points += points
        if g is None:
            weight = s.eu
        else:
            weight = s.eu_g if s.eu_g is not None else ctx.eu_branch(s.branch)
        total += points * weight
    for s in inside:
        if s.kind == "branch" or s.in_xf:
            continue
        chi = s.chi if s.chi is not None else whole - branch_points
        weight = s.eu if g is None else s.eu_g
        total += chi * (weight if weight is not None else 1)
    return total
