"""Exact sparse polynomials over QQ or F_p in weighted N-graded polynomial rings.

Monomials are bare exponent tuples; a polynomial keeps its terms as a tuple
of (exponents, coefficient) pairs, strictly sorted descending under the
ring's monomial order, with no zero coefficients.  Values are immutable and
safe to share.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import RingMismatchError, ValidationError

MINUS_INFINITY = float("-inf")

MAX_VARIABLES = 64
MAX_WEIGHT = 9999

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.2e18."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """The rationals (p == 0) or a prime field F_p with p < 2**31.

    QQ elements are Fractions in lowest terms; F_p elements are ints in [0, p).
    """

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p:
            if not (2 <= p < 2**31) or not is_prime(p):
                raise ValidationError(f"field characteristic must be a prime below 2^31, got {p}")
        self.p = p

    @property
    def kind(self) -> str:
        return "rationals" if self.p == 0 else "prime_field"

    @property
    def zero(self):
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.p == 0 else 1

    def from_int(self, n: int):
        return Fraction(n) if self.p == 0 else n % self.p

    def fraction(self, num: int, den: int):
        if self.p == 0:
            return Fraction(num, den)
        d = den % self.p
        if d == 0:
            raise ValidationError(f"denominator {den} vanishes in F_{self.p}")
        return num % self.p * pow(d, self.p - 2, self.p) % self.p

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else a * b % self.p

    def neg(self, a):
        return -a if self.p == 0 else -a % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        return 1 / a if self.p == 0 else pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"F{self.p}"


QQ = Field(0)


def prime_field(p: int) -> Field:
    return Field(p)


class MonomialOrder:
    """Monomial order on exponent tuples: weighted grevlex or plain lex.

    Keys compare tuple-lexicographically; larger key means larger monomial.
    Module terms extend this position-over-term: the component with the
    smallest priority rank dominates any monomial difference.
    """

    __slots__ = ("base",)

    def __init__(self, base: str):
        if base not in ("grevlex", "lex"):
            raise ValidationError(f"unknown monomial order {base!r}")
        self.base = base

    def key(self, weights, exps):
        if self.base == "grevlex":
            d = 0
            for e, w in zip(exps, weights):
                d += e * w
            return (d, tuple(-e for e in reversed(exps)))
        return exps

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.base == other.base

    def __hash__(self):
        return hash(("MonomialOrder", self.base))

    def __repr__(self):
        return self.base


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class GradedRing:
    """A weighted polynomial ring k[x_1..x_n] with positive integer weights.

    The degree-0 piece is the coefficient field, so the ring is connected
    N-graded.  The monomial order is fixed at construction and gives every
    polynomial of the ring one canonical term order.
    """

    __slots__ = ("field", "names", "weights", "order", "_mono_cache")

    def __init__(self, field: Field, variables, order: MonomialOrder = GREVLEX):
        names = tuple(name for name, _ in variables)
        weights = tuple(int(w) for _, w in variables)
        if len(names) > MAX_VARIABLES:
            raise ValidationError(f"too many variables ({len(names)} > {MAX_VARIABLES})")
        if len(set(names)) != len(names):
            raise ValidationError("variable names must be distinct")
        for name in names:
            if not _IDENT_RE.match(name):
                raise ValidationError(f"bad variable name {name!r}")
        for w in weights:
            if not 1 <= w <= MAX_WEIGHT:
                raise ValidationError(f"weights must lie in [1, {MAX_WEIGHT}], got {w}")
        self.field = field
        self.names = names
        self.weights = weights
        self.order = order
        self._mono_cache = {}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def degree_of(self, exps) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def key(self, exps):
        return self.order.key(self.weights, exps)

    def poly(self, coeff_map) -> "Polynomial":
        """Canonicalize {exps: coeff} into a Polynomial."""
        items = [(e, c) for e, c in coeff_map.items() if c]
        items.sort(key=lambda item: self.key(item[0]), reverse=True)
        return Polynomial(self, tuple(items))

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    @property
    def one(self) -> "Polynomial":
        return self.constant(self.field.one)

    def constant(self, c) -> "Polynomial":
        if not c:
            return self.zero
        return Polynomial(self, (((0,) * self.nvars, c),))

    def variable(self, i: int) -> "Polynomial":
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, ((exps, self.field.one),))

    def gens(self):
        return [self.variable(i) for i in range(self.nvars)]

    def from_int(self, n: int) -> "Polynomial":
        return self.constant(self.field.from_int(n))

    def monomials_of_degree(self, d: int):
        """All exponent tuples of weighted degree exactly d, in a fixed order."""
        if d < 0:
            return ()
        cached = self._mono_cache.get(d)
        if cached is None:
            cached = tuple(_enumerate_monomials(self.weights, d))
            self._mono_cache[d] = cached
        return cached

    def __eq__(self, other):
        return (
            isinstance(other, GradedRing)
            and self.field == other.field
            and self.names == other.names
            and self.weights == other.weights
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.field, self.names, self.weights, self.order))

    def __repr__(self):
        vars_ = ",".join(f"{n}:{w}" for n, w in zip(self.names, self.weights))
        return f"{self.field!r}[{vars_}]"


def _enumerate_monomials(weights, d):
    n = len(weights)
    if n == 0:
        if d == 0:
            yield ()
        return
    w = weights[0]
    if n == 1:
        if d % w == 0:
            yield (d // w,)
        return
    rest = weights[1:]
    for e in range(d // w, -1, -1):
        for tail in _enumerate_monomials(rest, d - e * w):
            yield (e,) + tail


class Polynomial:
    """Immutable sparse polynomial; the zero polynomial has an empty term tuple."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms):
        self.ring = ring
        self.terms = terms

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        self._check(other)
        field = self.ring.field
        acc = dict(self.terms)
        for e, c in other.terms:
            s = field.add(acc.get(e, field.zero), c)
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return self.ring.poly(acc)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, tuple((e, neg(c)) for e, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        self._check(other)
        field = self.ring.field
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                s = field.add(acc.get(e, field.zero), field.mul(c1, c2))
                if s:
                    acc[e] = s
                else:
                    del acc[e]
        return self.ring.poly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValidationError("negative exponent")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c):
        if not c:
            return self.ring.zero
        mul = self.ring.field.mul
        return Polynomial(self.ring, tuple((e, mul(cc, c)) for e, cc in self.terms))

    def lead(self):
        """(exponents, coefficient) of the largest term, or None for 0."""
        return self.terms[0] if self.terms else None

    def degree(self):
        """Weighted degree; MINUS_INFINITY for the zero polynomial."""
        if not self.terms:
            return MINUS_INFINITY
        deg = self.ring.degree_of
        return max(deg(e) for e, _ in self.terms)

    def homogeneous_degree(self):
        """Common weighted degree of all terms, MINUS_INFINITY for 0, None if mixed."""
        if not self.terms:
            return MINUS_INFINITY
        deg = self.ring.degree_of
        d = deg(self.terms[0][0])
        for e, _ in self.terms[1:]:
            if deg(e) != d:
                return None
        return d

    def is_homogeneous(self) -> bool:
        return self.homogeneous_degree() is not None

    def coefficient(self, exps):
        for e, c in self.terms:
            if e == exps:
                return c
        return self.ring.field.zero

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.terms):
            mono = "*".join(
                name if exp == 1 else f"{name}^{exp}"
                for name, exp in zip(self.ring.names, e)
                if exp
            )
            neg = (c < 0) if self.ring.field.p == 0 else False
            mag = -c if neg else c
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = f"{mag}"
            if idx == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"


def weighted_degree(p: Polynomial):
    return p.degree()


def is_homogeneous(p: Polynomial) -> bool:
    return p.is_homogeneous()


def substitute(p: Polynomial, images, target: GradedRing) -> Polynomial:
    """Apply the ring map sending variable i to images[i]; exact."""
    if len(images) != p.ring.nvars:
        raise ValidationError(
            f"arity mismatch: {p.ring.nvars} variables, {len(images)} images"
        )
    for im in images:
        if im.ring != target:
            raise RingMismatchError("substitution images must live in the target ring")
    if p.ring.field != target.field:
        raise RingMismatchError("substitution requires matching coefficient fields")
    result = target.zero
    pow_cache = {}
    for exps, c in p.terms:
        term = target.constant(c)
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                power = pow_cache.get(key)
                if power is None:
                    power = images[i] ** e
                    pow_cache[key] = power
                term = term * power
        result = result + term
    return result


def embed(p: Polynomial, target: GradedRing) -> Polynomial:
    """Reinterpret p in a ring whose first variables extend p's ring."""
    pad = target.nvars - p.ring.nvars
    if pad < 0 or target.weights[: p.ring.nvars] != p.ring.weights:
        raise RingMismatchError("target ring does not extend the source ring")
    return target.poly({e + (0,) * pad: c for e, c in p.terms})


def homogenize(p: Polynomial, total: GradedRing, to_degree=None) -> Polynomial:
    """Homogenize with the last variable of `total`, which must have weight 1.

    Every term of weighted degree d picks up the factor last^(D - d), where
    D is `to_degree` (defaults to deg p).  Dehomogenizing (last -> 1)
    recovers p.
    """
    src = p.ring
    if total.nvars != src.nvars + 1 or total.weights[-1] != 1:
        raise ValidationError("homogenization target must add one weight-1 variable")
    if total.weights[:-1] != src.weights:
        raise ValidationError("homogenization target must preserve weights")
    if not p.terms:
        if to_degree is None:
            raise ValidationError("cannot homogenize the zero polynomial")
        return total.zero
    deg = src.degree_of
    top = max(deg(e) for e, _ in p.terms)
    target_degree = top if to_degree is None else to_degree
    if target_degree < top:
        raise ValidationError(
            f"cannot homogenize degree-{top} polynomial to degree {target_degree}"
        )
    return total.poly({e + (target_degree - deg(e),): c for e, c in p.terms})


def dehomogenize(p: Polynomial, base: GradedRing) -> Polynomial:
    """Substitute 1 for the last variable and drop it."""
    total = p.ring
    if total.nvars != base.nvars + 1 or total.weights[:-1] != base.weights:
        raise ValidationError("dehomogenization rings are incompatible")
    acc = {}
    field = base.field
    for e, c in p.terms:
        key = e[:-1]
        s = field.add(acc.get(key, field.zero), c)
        if s:
            acc[key] = s
        else:
            del acc[key]
    return base.poly(acc)
