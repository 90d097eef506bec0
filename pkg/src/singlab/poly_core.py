"""Exact multivariate polynomials over Q or a single simple extension Q(theta).

Coefficients are ``fractions.Fraction`` or :class:`AlgebraicNumber`.  Arithmetic
on algebraic numbers collapses back to ``Fraction`` whenever the value is
rational, so rational data never silently changes type.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import sympy

from .errors import ExtensionTooDeep, PolySyntaxError, UnknownVariable

Exponent = tuple[int, ...]


# ---------------------------------------------------------------------------
# univariate helpers over Q (coefficient lists, lowest degree first)

def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _upoly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
    return _trim(q), a


def _upoly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _upoly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


class NumberField:
    """Q(theta) for theta a root of an irreducible monic polynomial."""

    def __init__(self, minimal_polynomial: Sequence, name: str = "θ", check: bool = True):
        coeffs = [Fraction(c) for c in minimal_polynomial]
        _trim(coeffs)
        if len(coeffs) < 3:
            raise ValueError("minimal polynomial must have degree at least 2")
        lead = coeffs[-1]
        self.modulus = tuple(c / lead for c in coeffs)
        self.degree = len(self.modulus) - 1
        self.name = name
        if check:
            t = sympy.Symbol("t")
            expr = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(self.modulus))
            if not sympy.Poly(expr, t, domain="QQ").is_irreducible:
                raise ValueError(f"{self.modulus} is reducible over Q")

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"NumberField({[str(c) for c in self.modulus]})"

    @property
    def generator(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, (Fraction(0), Fraction(1)))

    def reduce(self, coeffs: Sequence) -> list:
        c = [Fraction(x) for x in coeffs]
        _trim(c)
        if len(c) > self.degree:
            _, c = _upoly_divmod(c, list(self.modulus))
        return c

    def element(self, coeffs: Sequence) -> Union[Fraction, "AlgebraicNumber"]:
        c = self.reduce(coeffs)
        if len(c) <= 1:
            return c[0] if c else Fraction(0)
        return AlgebraicNumber(self, tuple(c))


class AlgebraicNumber:
    """Element of a NumberField, stored as a polynomial in the generator."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Sequence):
        self.field = field
        self.coeffs = tuple(field.reduce(coeffs))

    @property
    def minimal_polynomial(self):
        return self.field.modulus

    def _lift(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field != self.field:
                raise ExtensionTooDeep("arithmetic across two different algebraic extensions")
            return other.coeffs
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o))
        return self.field.element(
            [(self.coeffs[i] if i < len(self.coeffs) else 0) + (o[i] if i < len(o) else 0) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return self.field.element([-c for c in self.coeffs])

    def __sub__(self, other):
        if self._lift(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.field.element(_upoly_mul(self.coeffs, o))

    __rmul__ = __mul__

    def inverse(self):
        # extended Euclid in Q[t] against the modulus
        r0, r1 = list(self.field.modulus), list(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(_trim(r1)) > 1:
            q, r = _upoly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("algebraic zero")
        return self.field.element([c / r1[0] for c in s1])

    def __truediv__(self, other):
        if isinstance(other, AlgebraicNumber):
            self._lift(other)
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return self.field.element([c / Fraction(other) for c in self.coeffs])
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = Fraction(1), self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return len(self.coeffs) <= 1 and (self.coeffs[0] if self.coeffs else 0) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __str__(self):
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else (self.field.name if i == 1 else f"{self.field.name}^{i}")
            parts.append(_coeff_times(c, mono))
        return _join_signed(parts) if parts else "0"

    __repr__ = __str__


Coefficient = Union[Fraction, AlgebraicNumber]


def field_of(coeffs: Iterable) -> NumberField | None:
    """The unique extension field used by a set of coefficients (None for Q)."""
    found = None
    for c in coeffs:
        if isinstance(c, AlgebraicNumber):
            if found is None:
                found = c.field
            elif found != c.field:
                raise ExtensionTooDeep("coefficients from two different extensions")
    return found


def as_coefficient(c) -> Coefficient:
    if isinstance(c, AlgebraicNumber):
        return c
    return Fraction(c)


# ---------------------------------------------------------------------------
# monomial orders

def degrevlex_key(e: Exponent):
    return (sum(e), tuple(-x for x in reversed(e)))


def negdegrevlex_key(e: Exponent):
    return (-sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class MonomialOrder:
    """kind is 'degrevlex', 'negdegrevlex' or 'elimination'.

    For 'elimination' the first ``block`` variables are the ones eliminated.
    """

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "negdegrevlex", "elimination"):
            raise ValueError(f"unknown order {self.kind}")

    @property
    def is_global(self) -> bool:
        return self.kind != "negdegrevlex"

    @property
    def is_local(self) -> bool:
        return self.kind == "negdegrevlex"

    def key(self):
        if self.kind == "degrevlex":
            return degrevlex_key
        if self.kind == "negdegrevlex":
            return negdegrevlex_key
        b = self.block

        def elim_key(e):
            return (sum(e[:b]), sum(e), tuple(-x for x in reversed(e)))

        return elim_key


DEGREVLEX = MonomialOrder("degrevlex")
NEGDEGREVLEX = MonomialOrder("negdegrevlex")


# ---------------------------------------------------------------------------
# polynomials

def _coeff_text(c) -> str:
    if isinstance(c, AlgebraicNumber):
        return f"({c})"
    return str(c)


def _coeff_times(c, mono: str) -> str:
    if not mono:
        return _coeff_text(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{_coeff_text(c)}*{mono}"


def _join_signed(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


class Polynomial:
    """Immutable sparse polynomial; terms are kept in degrevlex-descending order."""

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | Iterable = (), variables: Sequence[str] = ()):
        self.variables = tuple(variables)
        n = len(self.variables)
        raw: dict[Exponent, Coefficient] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            c = as_coefficient(c)
            if e in raw:
                c = raw[e] + c
            raw[e] = c
        self._terms = {e: raw[e] for e in sorted(raw, key=degrevlex_key, reverse=True) if raw[e]}
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c, variables: Sequence[str]) -> "Polynomial":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls({}, variables)

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "Polynomial":
        if name not in variables:
            raise UnknownVariable(name)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls({e: 1}, variables)

    @classmethod
    def _raw(cls, terms: dict, variables: tuple) -> "Polynomial":
        # trusted fast path: terms already canonical modulo ordering
        p = cls.__new__(cls)
        p.variables = variables
        p._terms = {e: terms[e] for e in sorted(terms, key=degrevlex_key, reverse=True) if terms[e]}
        p._hash = None
        return p

    # basic accessors
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def coefficient(self, e: Exponent) -> Coefficient:
        return self._terms.get(tuple(e), Fraction(0))

    def constant_term(self) -> Coefficient:
        return self.coefficient((0,) * self.nvars)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (the order at the origin)."""
        return min((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self._index(var)
        return max((e[i] for e in self._terms), default=-1)

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial._raw({e: c for e, c in self._terms.items() if sum(e) == k}, self.variables)

    def is_rational(self) -> bool:
        return all(not isinstance(c, AlgebraicNumber) for c in self._terms.values())

    def field(self) -> NumberField | None:
        return field_of(self._terms.values())

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariable(var) from None

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return Polynomial.constant(other, self.variables)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out[e] + c if e in out else c
        return Polynomial._raw(out, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self._terms.items()}, self.variables)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return Polynomial._raw({e: c * other for e, c in self._terms.items()}, self.variables)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return Polynomial._raw(out, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Polynomial":
        return self * c

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return self == Polynomial.constant(other, self.variables)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self._terms.items())))
        return self._hash

    # calculus and composition
    def differentiate(self, var: str) -> "Polynomial":
        i = self._index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial._raw(out, self.variables)

    def evaluate(self, point) -> Coefficient:
        """Evaluate at a point given as a sequence or a name->value mapping."""
        if isinstance(point, Mapping):
            point = [point[v] for v in self.variables]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * (x**k)
            total = total + term
        return total

    def substitute(self, assignment: Mapping[str, object], variables: Sequence[str] | None = None) -> "Polynomial":
        """Compose with polynomials in ``variables`` (default: own variables).

        Unassigned variables pass through and must also exist in the target ring.
        """
        target = tuple(variables) if variables is not None else self.variables
        for v in assignment:
            if v not in self.variables:
                raise UnknownVariable(v)
        images = []
        for v in self.variables:
            if v in assignment:
                img = assignment[v]
                if not isinstance(img, Polynomial):
                    img = Polynomial.constant(img, target)
                elif img.variables != target:
                    img = img.reembed(target)
            else:
                img = Polynomial.var(v, target)
            images.append(img)
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(1, target), 1: img} for img in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k // 2) * power(i, k - k // 2)
            return cache[k]

        out: dict = {}
        for e, c in self._terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    term = power(i, k) if term is None else term * power(i, k)
            if term is None:
                key = (0,) * len(target)
                out[key] = out[key] + c if key in out else c
                continue
            for f, d in term._terms.items():
                out[f] = out[f] + c * d if f in out else c * d
        return Polynomial._raw(out, target)

    def reembed(self, variables: Sequence[str]) -> "Polynomial":
        """Same polynomial viewed in another variable list (must contain every used variable)."""
        variables = tuple(variables)
        idx = []
        for i, v in enumerate(self.variables):
            if v in variables:
                idx.append(variables.index(v))
            else:
                if any(e[i] for e in self._terms):
                    raise UnknownVariable(v)
                idx.append(None)
        out = {}
        for e, c in self._terms.items():
            f = [0] * len(variables)
            for i, k in enumerate(e):
                if idx[i] is not None:
                    f[idx[i]] = k
            out[tuple(f)] = c
        return Polynomial._raw(out, variables)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables) if any(e[i] for e in self._terms))

    def translate(self, center: Sequence) -> "Polynomial":
        """p(x + center)."""
        assignment = {v: Polynomial.var(v, self.variables) + c for v, c in zip(self.variables, center) if c}
        return self.substitute(assignment) if assignment else self

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        if not self._terms:
            return self
        lead = max(self._terms, key=order.key())
        return self * (Fraction(1) / self._terms[lead])

    # text
    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            parts.append(_coeff_times(c, mono))
        return _join_signed(parts)

    __str__ = render

    def __repr__(self):
        return f"Polynomial({self.render()!r}, {list(self.variables)})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise PolySyntaxError(f"unexpected character {ch!r}", text, start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise PolySyntaxError(msg, self.text, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            if tok[0] in ("num", "id", "("):
                self.fail("implicit multiplication is not allowed", tok)
            self.fail(f"unexpected {tok[1]!r}", tok)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                p = p * self.unary()
            elif kind in ("num", "id", "("):
                self.fail("implicit multiplication is not allowed")
            else:
                return p

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be a nonnegative integer literal", tok)
            base = base ** int(tok[1])
            if self.peek()[0] == "^":
                self.fail("chained exponent")
        return base

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "num":
            value = Fraction(int(tok[1]))
            if self.peek()[0] == "/":
                self.take()
                den = self.take()
                if den[0] != "num":
                    self.fail("fraction denominator must be an integer literal", den)
                if int(den[1]) == 0:
                    self.fail("zero denominator", den)
                value = value / int(den[1])
            return Polynomial.constant(value, self.variables)
        if kind == "id":
            if tok[1] not in self.variables:
                raise UnknownVariable(f"{tok[1]} (position {tok[2]})")
            return Polynomial.var(tok[1], self.variables)
        if kind == "(":
            p = self.expr()
            close = self.take()
            if close[0] != ")":
                self.fail("expected ')'", close)
            return p
        self.fail(f"unexpected {tok[1]!r}" if kind != "end" else "unexpected end of input", tok)


def parse_poly(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse the polynomial grammar: integers, a/b, names, + - * ^ and parentheses."""
    return _Parser(text, variables).parse()


def render(p: Polynomial) -> str:
    return p.render()


def differentiate(p: Polynomial, var: str) -> Polynomial:
    return p.differentiate(var)


def substitute(p: Polynomial, assignment: Mapping[str, object], variables: Sequence[str] | None = None) -> Polynomial:
    return p.substitute(assignment, variables)


# ---------------------------------------------------------------------------
# seeded genericity

LINEAR_COEFFICIENTS = tuple(c for c in range(-17, 18) if c)


def default_variables(n: int) -> tuple[str, ...]:
    return ("x", "y", "z", "w")[:n] if n <= 4 else tuple(f"x{i + 1}" for i in range(n))


def split_seed(seed: int, count: int = 3, salt: str = "") -> list[int]:
    """Derive ``count`` independent child seeds from one seed."""
    rng = random.Random(f"{seed}:{salt}")
    return [rng.randrange(2**31) for _ in range(count)]


def random_linear_form(n: int | Sequence[str], seed: int) -> Polynomial:
    """Degree-1 form with nonzero coefficients in [-17, 17], reproducible per seed."""
    variables = default_variables(n) if isinstance(n, int) else tuple(n)
    if not variables:
        raise ValueError("need at least one variable")
    rng = random.Random(seed)
    terms = {}
    for i in range(len(variables)):
        e = tuple(1 if j == i else 0 for j in range(len(variables)))
        terms[e] = rng.choice(LINEAR_COEFFICIENTS)
    return Polynomial(terms, variables)
