"""Global Groebner bases (Buchberger) and local standard bases (Mora).

Internally polynomials are plain ``dict`` maps from exponent tuples to
coefficients; the public functions take and return :class:`Ideal` and
:class:`Polynomial` values.
"""

from __future__ import annotations

import contextlib
import contextvars
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import NonIsolatedIntersection, NotACurve, OriginNotInVariety, SaturationDiverged
from .poly_core import DEGREVLEX, NEGDEGREVLEX, MonomialOrder, Polynomial

MAX_SATURATION_STEPS = 64


class _Infinite:
    """Colength of an ideal that is not zero-dimensional at the origin."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self


INFINITE = _Infinite()


def is_finite(value) -> bool:
    return value is not INFINITE


# ---------------------------------------------------------------------------
# timing probe (per-context, no global state shared between threads)

_probe: contextvars.ContextVar[list | None] = contextvars.ContextVar("ideal_probe", default=None)


@contextlib.contextmanager
def timing_probe():
    """Collect (operation, seconds) for every basis computation inside the block."""
    records: list[tuple[str, float]] = []
    token = _probe.set(records)
    try:
        yield records
    finally:
        _probe.reset(token)


@contextlib.contextmanager
def _timed(name: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        records = _probe.get()
        if records is not None:
            records.append((name, time.perf_counter() - start))


# ---------------------------------------------------------------------------
# public types

class Ideal:
    """Ideal given by generators in a fixed variable list (zero generators dropped)."""

    __slots__ = ("generators", "variables")

    def __init__(self, generators: Iterable[Polynomial], variables: Sequence[str] | None = None):
        gens = list(generators)
        if variables is None:
            if not gens:
                raise ValueError("variables required for an ideal without generators")
            variables = gens[0].variables
        self.variables = tuple(variables)
        fixed = []
        for g in gens:
            if g.variables != self.variables:
                g = g.reembed(self.variables)
            if not g.is_zero():
                fixed.append(g)
        self.generators = tuple(fixed)

    def __add__(self, other):
        if isinstance(other, Polynomial):
            other = Ideal([other], self.variables)
        return Ideal(self.generators + other.generators, self.variables)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return f"Ideal([{', '.join(g.render() for g in self.generators)}], {list(self.variables)})"

    def translate(self, center) -> "Ideal":
        return Ideal([g.translate(center) for g in self.generators], self.variables)


@dataclass(frozen=True)
class StandardBasis:
    basis: tuple[Polynomial, ...]
    order: MonomialOrder
    is_reduced: bool

    def leading_exponents(self) -> list[tuple[int, ...]]:
        key = self.order.key()
        return [max(g.items(), key=lambda ec: key(ec[0]))[0] for g in self.basis]

    def leading_ideal_generators(self) -> list[Polynomial]:
        if not self.basis:
            return []
        variables = self.basis[0].variables
        return [Polynomial({e: 1}, variables) for e in self.leading_exponents()]


def _as_ideal(I) -> Ideal:
    if isinstance(I, Ideal):
        return I
    return Ideal(list(I))


# ---------------------------------------------------------------------------
# dict-polynomial kernels

def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _lead(p: dict, key):
    return max(p, key=key)


def _sub_mul(f: dict, c, shift, g: dict) -> dict:
    """f - c * x^shift * g (in place on a copy)."""
    out = dict(f)
    for e, d in g.items():
        m = tuple(a + b for a, b in zip(e, shift))
        v = out.get(m)
        v = -c * d if v is None else v - c * d
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _monic(p: dict, lm) -> dict:
    c = p[lm]
    if c == 1:
        return p
    inv = 1 / c
    return {e: v * inv for e, v in p.items()}


def _reduce_full(f: dict, G: list, key) -> dict:
    """Full reduction of f by monic G = [(lm, poly)] under a global order."""
    f = dict(f)
    rem = {}
    while f:
        lm = _lead(f, key)
        c = f[lm]
        for glm, g in G:
            if _divides(glm, lm):
                f = _sub_mul(f, c, tuple(a - b for a, b in zip(lm, glm)), g)
                break
        else:
            rem[lm] = c
            del f[lm]
    return rem


def _spoly(f, flm, g, glm):
    lcm = _lcm(flm, glm)
    sf = tuple(a - b for a, b in zip(lcm, flm))
    sg = tuple(a - b for a, b in zip(lcm, glm))
    out = {tuple(a + b for a, b in zip(e, sf)): c / f[flm] for e, c in f.items()}
    return _sub_mul(out, 1 / g[glm], sg, g)


def _to_fast(polys: list[dict]):
    """Rational input runs on GMP rationals; algebraic coefficients stay as they are."""
    if all(isinstance(c, (int, Fraction)) for p in polys for c in p.values()):
        return [{e: mpq(c.numerator, c.denominator) for e, c in p.items()} for p in polys], True
    return polys, False


def _from_fast(basis: list[tuple], converted: bool) -> list[tuple]:
    if not converted:
        return basis
    return [(lm, {e: Fraction(int(c.numerator), int(c.denominator)) for e, c in p.items()}) for lm, p in basis]


def _buchberger(polys: list[dict], key) -> list[tuple]:
    """Reduced Groebner basis (list of (leading exponent, monic poly))."""
    polys, converted = _to_fast(polys)
    return _from_fast(_buchberger_kernel(polys, key), converted)


def _buchberger_kernel(polys: list[dict], key) -> list[tuple]:
    """Normal pair selection with the product and chain criteria."""
    G: list[tuple] = []
    pairs: set[tuple[int, int]] = set()
    for p in polys:
        if not p:
            continue
        r = _reduce_full(p, [g for g in G if g is not None], key)
        if not r:
            continue
        lm = _lead(r, key)
        G.append((lm, _monic(r, lm)))
        k = len(G) - 1
        pairs.update((i, k) for i in range(k))
    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_lcm(G[ij[0]][0], G[ij[1]][0])), ij))
        pairs.discard((i, j))
        li, lj = G[i][0], G[j][0]
        if _coprime(li, lj):
            continue
        lcm = _lcm(li, lj)
        chain = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if _divides(G[k][0], lcm) and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        s = _spoly(G[i][1], li, G[j][1], lj)
        r = _reduce_full(s, G, key)
        if r:
            lm = _lead(r, key)
            G.append((lm, _monic(r, lm)))
            k = len(G) - 1
            pairs.update((a, k) for a in range(k))
    # minimalize then interreduce
    minimal = []
    for idx, (lm, g) in enumerate(G):
        if any(_divides(olm, lm) and (olm != lm or o < idx) for o, (olm, _) in enumerate(G) if o != idx):
            continue
        minimal.append((lm, g))
    reduced = []
    for idx, (lm, g) in enumerate(minimal):
        others = [m for o, m in enumerate(minimal) if o != idx]
        tail = {e: c for e, c in g.items() if e != lm}
        r = _reduce_full(tail, others, key)
        r[lm] = g[lm]
        reduced.append((lm, _monic(r, lm)))
    reduced.sort(key=lambda t: key(t[0]))
    return reduced


def _ecart(p: dict, lm) -> int:
    return max(sum(e) for e in p) - sum(lm)


COLENGTH_BOUNDS = (4, 8, 16, 32)


def _truncate(p: dict, bound) -> dict:
    if bound is None:
        return p
    return {e: c for e, c in p.items() if sum(e) < bound}


def _nf_mora(f: dict, T: list, key, bound=None) -> dict:
    """Mora's weak normal form; T = [(lm, poly, ecart)] and grows with reducers of larger ecart.

    With ``bound`` set, m^bound is known to lie in the ideal and higher terms are dropped.
    """
    h = _truncate(dict(f), bound)
    T = list(T)
    while h:
        lm = _lead(h, key)
        best = None
        for t in T:
            if _divides(t[0], lm) and (best is None or t[2] < best[2]):
                best = t
        if best is None:
            break
        eh = _ecart(h, lm)
        if best[2] > eh:
            T.append((lm, h, eh))
        c = h[lm] / best[1][best[0]]
        h = _truncate(_sub_mul(h, c, tuple(a - b for a, b in zip(lm, best[0])), best[1]), bound)
    return h


def _corner_bound(leading: list, n: int):
    """Smallest k with every monomial of degree k in the monomial ideal, if any."""
    for i in range(n):
        if not any(e[i] > 0 and all(e[j] == 0 for j in range(n) if j != i) for e in leading):
            return None
    top = 0
    seen = {(0,) * n}
    stack = [(0,) * n]
    while stack:
        m = stack.pop()
        top = max(top, sum(m))
        for i in range(n):
            nxt = m[:i] + (m[i] + 1,) + m[i + 1 :]
            if nxt in seen or any(_divides(e, nxt) for e in leading):
                continue
            seen.add(nxt)
            stack.append(nxt)
    return top + 1


def _mora(polys: list[dict], key, bound=None) -> list[tuple]:
    polys, converted = _to_fast(polys)
    return _from_fast(_mora_kernel(polys, key, bound), converted)


def _mora_kernel(polys: list[dict], key, bound=None) -> list[tuple]:
    """Standard basis for a local degree order via Mora's tangent-cone normal form.

    Uses the highest-corner bound: once the leading monomials contain a power of
    the maximal ideal, terms of that degree lie in the ideal and are discarded.
    A ``bound`` passed in computes a standard basis of I + m^bound instead.
    """
    S: list[tuple] = []
    pairs: set[tuple[int, int]] = set()
    n = len(next(iter(polys[0]))) if polys and polys[0] else 0

    def add(p):
        nonlocal bound, S
        lm = _lead(p, key)
        p = _monic(p, lm)
        if bound is not None:
            p = _truncate(p, bound) or {lm: p[lm]}
        S.append((lm, p, _ecart(p, lm)))
        k = len(S) - 1
        pairs.update((i, k) for i in range(k))
        new_bound = _corner_bound([t[0] for t in S], n)
        if new_bound is not None and (bound is None or new_bound < bound):
            bound = new_bound
            S = [(a, q, _ecart(q, a)) for a, q in ((a, _truncate(b, bound) or {a: b[a]}) for a, b, _ in S)]

    for p in polys:
        if p:
            h = _nf_mora(p, S, key, bound)
            if h:
                add(h)
    while pairs:
        i, j = min(pairs, key=lambda ij: (sum(_lcm(S[ij[0]][0], S[ij[1]][0])), key(_lcm(S[ij[0]][0], S[ij[1]][0])), ij))
        pairs.discard((i, j))
        li, lj = S[i][0], S[j][0]
        if _coprime(li, lj):
            continue
        lcm = _lcm(li, lj)
        if bound is not None and sum(lcm) >= bound:
            continue
        if any(
            k not in (i, j)
            and _divides(S[k][0], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(S))
        ):
            continue
        s = _spoly(S[i][1], li, S[j][1], lj)
        h = _nf_mora(s, S, key, bound)
        if h:
            add(h)
    out = []
    for idx, (lm, p, _) in enumerate(S):
        if any(_divides(olm, lm) and (olm != lm or o < idx) for o, (olm, _, _) in enumerate(S) if o != idx):
            continue
        out.append((lm, p))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return out


def _to_dicts(I: Ideal) -> list[dict]:
    return [dict(g.items()) for g in I.generators]


# ---------------------------------------------------------------------------
# public operations

def groebner_basis(I, order: MonomialOrder = DEGREVLEX) -> StandardBasis:
    I = _as_ideal(I)
    if not order.is_global:
        raise ValueError("groebner_basis needs a global order; use local_standard_basis")
    with _timed("groebner_basis"):
        G = _buchberger(_to_dicts(I), order.key())
    return StandardBasis(tuple(Polynomial(g, I.variables) for _, g in G), order, True)


def local_standard_basis(I) -> StandardBasis:
    I = _as_ideal(I)
    with _timed("local_standard_basis"):
        S = _mora(_to_dicts(I), NEGDEGREVLEX.key())
    return StandardBasis(tuple(Polynomial(g, I.variables) for _, g in S), NEGDEGREVLEX, False)


def staircase_size(leading: Sequence[tuple[int, ...]], n: int):
    """Number of monomials outside the monomial ideal generated by ``leading``."""
    if n == 0:
        return 0 if leading else 1
    for i in range(n):
        pure = any(e[i] > 0 and all(e[j] == 0 for j in range(n) if j != i) for e in leading)
        if not pure and not any(sum(e) == 0 for e in leading):
            return INFINITE
    if any(sum(e) == 0 for e in leading):
        return 0
    seen = {(0,) * n}
    stack = [(0,) * n]
    while stack:
        m = stack.pop()
        for i in range(n):
            nxt = m[:i] + (m[i] + 1,) + m[i + 1 :]
            if nxt in seen or any(_divides(e, nxt) for e in leading):
                continue
            seen.add(nxt)
            stack.append(nxt)
    return len(seen)


def colength(I):
    """dim_C of O_{C^n,0}/I, or INFINITE when I is not zero-dimensional at 0."""
    I = _as_ideal(I)
    n = len(I.variables)
    if not I.generators:
        return INFINITE if n else 1
    polys = _to_dicts(I)
    key = NEGDEGREVLEX.key()
    # Work modulo m^B first. If no standard monomial of I + m^B reaches degree
    # B - 1, then m^(B-1) lies in I + m^B, hence in I by Nakayama, and the count
    # is exact. Positive-dimensional ideals fall through to the unbounded run.
    with _timed("colength"):
        for bound in COLENGTH_BOUNDS:
            S = _mora(polys, key, bound)
            count, top = _bounded_staircase([lm for lm, _ in S], n, bound)
            if top < bound - 1:
                return count
    sb = local_standard_basis(I)
    return staircase_size(sb.leading_exponents(), n)


def _bounded_staircase(leading, n, bound):
    """Count and top degree of the standard monomials of degree below ``bound``."""
    if any(sum(e) == 0 for e in leading):
        return 0, -1
    seen = {(0,) * n}
    stack = [(0,) * n]
    top = 0
    while stack:
        m = stack.pop()
        top = max(top, sum(m))
        if sum(m) + 1 >= bound:
            continue
        for i in range(n):
            nxt = m[:i] + (m[i] + 1,) + m[i + 1 :]
            if nxt in seen or any(_divides(e, nxt) for e in leading):
                continue
            seen.add(nxt)
            stack.append(nxt)
    return len(seen), top


def _dimension_from_leading(leading, n: int) -> int:
    if any(sum(e) == 0 for e in leading):
        return -1
    supports = [frozenset(i for i, k in enumerate(e) if k) for e in leading]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            s = frozenset(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def krull_dimension_at_origin(I) -> int:
    I = _as_ideal(I)
    for g in I.generators:
        if g.constant_term() != 0:
            raise OriginNotInVariety(f"generator {g.render()} does not vanish at the origin")
    if not I.generators:
        return len(I.variables)
    sb = local_standard_basis(I)
    return _dimension_from_leading(sb.leading_exponents(), len(I.variables))


def global_dimension(I) -> int:
    """Affine dimension of V(I) from a degrevlex leading ideal (-1 for the unit ideal)."""
    I = _as_ideal(I)
    if not I.generators:
        return len(I.variables)
    gb = groebner_basis(I)
    return _dimension_from_leading(gb.leading_exponents(), len(I.variables))


def reduce(p: Polynomial, gb: StandardBasis) -> Polynomial:
    """Normal form of p with respect to a reduced global Groebner basis."""
    key = gb.order.key()
    G = [(lm, dict(g.items())) for lm, g in zip(gb.leading_exponents(), gb.basis)]
    return Polynomial(_reduce_full(dict(p.items()), G, key), p.variables)


def contains(I, p: Polynomial) -> bool:
    I = _as_ideal(I)
    return reduce(p.reembed(I.variables), groebner_basis(I)).is_zero()


def same_ideal(I, J) -> bool:
    return groebner_basis(_as_ideal(I)).basis == groebner_basis(_as_ideal(J)).basis


def eliminate(I, drop: Iterable[str]) -> Ideal:
    """I intersected with the subring in the remaining variables (block elimination order)."""
    I = _as_ideal(I)
    drop = [v for v in I.variables if v in set(drop)]
    keep = [v for v in I.variables if v not in drop]
    if not keep:
        raise ValueError("cannot eliminate every variable")
    order_vars = tuple(drop + keep)
    gens = [g.reembed(order_vars) for g in I.generators]
    with _timed("eliminate"):
        G = _buchberger([dict(g.items()) for g in gens], MonomialOrder("elimination", len(drop)).key())
    k = len(drop)
    out = []
    for _, g in G:
        if all(not any(e[:k]) for e in g):
            out.append(Polynomial({e[k:]: c for e, c in g.items()}, keep))
    return Ideal(out, keep)


def _fresh(variables: Sequence[str]) -> str:
    name = "_t"
    while name in variables:
        name += "_"
    return name


def intersect(I, J) -> Ideal:
    I, J = _as_ideal(I), _as_ideal(J)
    t = _fresh(I.variables)
    ext = (t,) + I.variables
    T = Polynomial.var(t, ext)
    gens = [T * g.reembed(ext) for g in I.generators] + [(1 - T) * g.reembed(ext) for g in J.generators]
    return Ideal(eliminate(Ideal(gens, ext), [t]).generators, I.variables)


def divide_exact(f: Polynomial, h: Polynomial) -> Polynomial:
    key = DEGREVLEX.key()
    hd = dict(h.items())
    hlm = _lead(hd, key)
    q: dict = {}
    r = dict(f.items())
    while r:
        lm = _lead(r, key)
        if not _divides(hlm, lm):
            raise ArithmeticError(f"{h.render()} does not divide {f.render()}")
        c = r[lm] / hd[hlm]
        shift = tuple(a - b for a, b in zip(lm, hlm))
        q[shift] = c
        r = _sub_mul(r, c, shift, hd)
    return Polynomial(q, f.variables)


def quotient(I, J) -> Ideal:
    """I : J."""
    I, J = _as_ideal(I), _as_ideal(J)
    result = None
    for h in J.generators:
        inter = intersect(I, Ideal([h], I.variables))
        Q = Ideal([divide_exact(g, h) for g in inter.generators], I.variables)
        result = Q if result is None else intersect(result, Q)
    return result if result is not None else Ideal([Polynomial.constant(1, I.variables)], I.variables)


def saturate(I, J) -> Ideal:
    """I : J^infinity by iterated quotients until the reduced basis stabilizes."""
    I, J = _as_ideal(I), _as_ideal(J)
    current = Ideal(groebner_basis(I).basis, I.variables)
    for _ in range(MAX_SATURATION_STEPS):
        nxt = Ideal(groebner_basis(quotient(current, J)).basis, I.variables)
        if nxt.generators == current.generators:
            return current
        current = nxt
    raise SaturationDiverged(f"no stabilization after {MAX_SATURATION_STEPS} quotients")


def intersection_multiplicity_at_origin(curve, hyper: Polynomial) -> int:
    curve = _as_ideal(curve)
    if hyper.constant_term() != 0:
        raise OriginNotInVariety("hypersurface does not pass through the origin")
    if krull_dimension_at_origin(curve) != 1:
        raise NotACurve("ideal is not one-dimensional at the origin")
    value = colength(curve + hyper.reembed(curve.variables))
    if value is INFINITE:
        raise NonIsolatedIntersection("curve and hypersurface share a component through the origin")
    return value
