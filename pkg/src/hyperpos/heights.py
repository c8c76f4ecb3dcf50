"""Places of the rationals, normalized absolute values, logarithmic heights,
Weil functions, and empirical margin checks for the defect-relation statement.

Everything is carried multiplicatively as exact rationals; logarithms are taken
only when a report is rendered.  Over the rationals every place has local degree
one, so the normalized norm is the plain absolute value at each place.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product as iter_product
from math import gcd, isqrt
from typing import Optional, Sequence

from .errors import DomainError
from .polyring import HomoPoly, ZeroPolynomial
from .position import HypersurfaceFamily, Variety


class ZeroInput(DomainError):
    code = "ZeroInput"


class PointOnHypersurface(DomainError):
    code = "PointOnHypersurface"


class PointNotOnVariety(DomainError):
    code = "PointNotOnVariety"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


def _prime_factors(n: int) -> list:
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# places and absolute values

class Place:
    """A place of the rationals: the archimedean one or a prime."""

    __slots__ = ("prime",)

    def __init__(self, prime: Optional[int] = None):
        if prime is not None and not _is_prime(prime):
            raise DomainError(f"finite places need a prime, got {prime}")
        object.__setattr__(self, "prime", prime)

    def __setattr__(self, name, value):
        raise AttributeError("Place is immutable")

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def __eq__(self, other):
        return isinstance(other, Place) and self.prime == other.prime

    def __hash__(self):
        return hash(("place", self.prime))

    def __repr__(self):
        return "Place(oo)" if self.prime is None else f"Place({self.prime})"


INFINITE = Place()


def default_places(prime_bound: int = 13) -> tuple:
    places = [INFINITE]
    places.extend(Place.finite(p) for p in range(2, prime_bound + 1) if _is_prime(p))
    return tuple(places)


def normalized_abs(x, v: Place) -> Fraction:
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("absolute value of zero has no normalization")
    if not v.is_finite:
        return abs(x)
    p = v.prime
    ord_p = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        ord_p += 1
    while den % p == 0:
        den //= p
        ord_p -= 1
    return Fraction(1, p ** ord_p) if ord_p >= 0 else Fraction(p ** -ord_p)


class ProductFormulaResult:
    __slots__ = ("product", "ok", "places")

    def __init__(self, product, ok, places):
        self.product = product
        self.ok = ok
        self.places = places

    def __repr__(self):
        return f"ProductFormulaResult(product={self.product}, ok={self.ok})"


def product_formula_check(x) -> ProductFormulaResult:
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("product formula needs a nonzero rational")
    primes = sorted(set(_prime_factors(x.numerator)) | set(_prime_factors(x.denominator)))
    places = (INFINITE,) + tuple(Place.finite(p) for p in primes)
    prod = Fraction(1)
    for v in places:
        prod *= normalized_abs(x, v)
    return ProductFormulaResult(prod, prod == 1, places)


# ---------------------------------------------------------------------------
# points and log values

class RationalPoint:
    """Projective point with coprime integer coordinates, first nonzero positive."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        raw = []
        for c in coords:
            f = Fraction(c)
            if f.denominator != 1:
                raise DomainError(f"point coordinates must be integers, got {c}")
            raw.append(f.numerator)
        if not raw or all(c == 0 for c in raw):
            raise ZeroInput("projective points need a nonzero coordinate")
        g = gcd(*raw)
        lead = next(c for c in raw if c != 0)
        if lead < 0:
            g = -g
        object.__setattr__(self, "coords", tuple(c // g for c in raw))

    def __setattr__(self, name, value):
        raise AttributeError("RationalPoint is immutable")

    @property
    def ambient(self) -> int:
        return len(self.coords) - 1

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other):
        return isinstance(other, RationalPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


class LogRational:
    """log(argument)/root held exactly; the log itself is taken only on render."""

    __slots__ = ("argument", "root")

    def __init__(self, argument, root: int = 1):
        argument = Fraction(argument)
        if argument <= 0:
            raise DomainError(f"log argument must be positive, got {argument}")
        if root < 1:
            raise DomainError(f"root must be a positive integer, got {root}")
        object.__setattr__(self, "argument", argument)
        object.__setattr__(self, "root", root)

    def __setattr__(self, name, value):
        raise AttributeError("LogRational is immutable")

    def _lift(self, root: int) -> Fraction:
        return self.argument ** (root // self.root)

    def __add__(self, other):
        r = self.root * other.root // gcd(self.root, other.root)
        return LogRational(self._lift(r) * other._lift(r), r)

    def __sub__(self, other):
        r = self.root * other.root // gcd(self.root, other.root)
        return LogRational(self._lift(r) / other._lift(r), r)

    def scale(self, factor) -> "LogRational":
        factor = Fraction(factor)
        if factor < 0:
            raise DomainError(f"scale factor must be non-negative, got {factor}")
        return LogRational(self.argument ** factor.numerator, self.root * factor.denominator)

    def value(self, digits: int = 50) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            num = Decimal(self.argument.numerator).ln()
            den = Decimal(self.argument.denominator).ln()
            out = (num - den) / self.root
        with localcontext() as ctx:
            ctx.prec = digits
            return +out

    def __float__(self):
        return float(self.value())

    def _key(self, other):
        r = self.root * other.root // gcd(self.root, other.root)
        return self._lift(r), other._lift(r)

    def __eq__(self, other):
        if not isinstance(other, LogRational):
            return NotImplemented
        a, b = self._key(other)
        return a == b

    def __lt__(self, other):
        a, b = self._key(other)
        return a < b

    def __le__(self, other):
        a, b = self._key(other)
        return a <= b

    def __hash__(self):
        return hash(("log", self.argument, self.root))

    def __repr__(self):
        if self.root == 1:
            return f"log({self.argument})"
        return f"log({self.argument})/{self.root}"


LOG_ONE = LogRational(1)


# ---------------------------------------------------------------------------
# heights

def height_point(x: RationalPoint) -> LogRational:
    """Coprime integer coordinates leave only the archimedean contribution."""
    return LogRational(max(abs(c) for c in x.coords))


def height_scalar(x) -> LogRational:
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("height of zero scalar is undefined")
    return LogRational(max(abs(x.numerator), x.denominator))


def _coefficient_places(values) -> tuple:
    primes = set()
    for val in values:
        primes.update(_prime_factors(val.numerator))
        primes.update(_prime_factors(val.denominator))
    return tuple(Place.finite(p) for p in sorted(primes))


def height_poly(q: HomoPoly) -> LogRational:
    coeffs = list(q.terms.values())
    if not coeffs:
        raise ZeroPolynomial("height of the zero polynomial is undefined")
    arg = max(abs(c) for c in coeffs)
    for v in _coefficient_places(coeffs):
        arg *= max(normalized_abs(c, v) for c in coeffs)
    return LogRational(arg)


# ---------------------------------------------------------------------------
# Weil functions

def _poly_norm(q: HomoPoly, v: Place) -> Fraction:
    return max(normalized_abs(c, v) for c in q.terms.values())


def _point_norm(x: RationalPoint, v: Place) -> Fraction:
    return max(normalized_abs(c, v) for c in x.coords if c != 0)


def weil_function(q: HomoPoly, x: RationalPoint, v: Place) -> LogRational:
    if not q.terms:
        raise ZeroPolynomial("Weil function of the zero polynomial is undefined")
    value = q.evaluate(x.coords)
    if value == 0:
        raise PointOnHypersurface(f"{x!r} lies on the hypersurface")
    d = q.degree
    return LogRational(_point_norm(x, v) ** d * _poly_norm(q, v) / normalized_abs(value, v))


def weil_support(q: HomoPoly, x: RationalPoint) -> tuple:
    """Places where the Weil function can be nonzero: all others contribute 0."""
    if not q.terms:
        raise ZeroPolynomial("Weil function of the zero polynomial is undefined")
    value = q.evaluate(x.coords)
    if value == 0:
        raise PointOnHypersurface(f"{x!r} lies on the hypersurface")
    return (INFINITE,) + _coefficient_places(list(q.terms.values()) + [value])


# ---------------------------------------------------------------------------
# margins for the defect-relation inequality

class MarginReport:
    __slots__ = ("point", "lhs", "rhs", "slack")

    def __init__(self, point, lhs, rhs, slack):
        self.point = point
        self.lhs = lhs
        self.rhs = rhs
        self.slack = slack

    def __repr__(self):
        return f"MarginReport(point={self.point}, slack={self.slack:.6g})"


class MarginSummary:
    __slots__ = ("min_slack", "negative_points")

    def __init__(self, min_slack, negative_points):
        self.min_slack = min_slack
        self.negative_points = negative_points

    def __repr__(self):
        return f"MarginSummary(min_slack={self.min_slack}, negative={len(self.negative_points)})"


def theorem15_margin(v: Variety, fam: HypersurfaceFamily, delta, eps,
                     places, points) -> list:
    """Per-point slack of the truncated inequality over the given places.

    Negative slack marks a candidate member of the exceptional locus; such
    points are reported alongside the rest, never dropped.
    """
    delta = Fraction(delta)
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    places = default_places() if places is None else tuple(places)
    if len(set(places)) != len(places):
        raise DomainError("duplicate places in S")
    lift = fam.lcm_d
    multiplier = delta * (v.dim_n + 1) + eps
    reports = []
    for x in points:
        if x.ambient + 1 != v.num_vars:
            raise DomainError(f"{x!r} has {x.ambient + 1} coordinates, ambient needs {v.num_vars}")
        for g in v.generators:
            if g.evaluate(x.coords) != 0:
                raise PointNotOnVariety(f"{x!r} does not satisfy a defining equation")
        for j, member in enumerate(fam.members):
            if member.evaluate(x.coords) == 0:
                raise PointOnHypersurface(f"{x!r} lies on family member {j + 1}")
        arg = Fraction(1)
        for place in places:
            for member, d in zip(fam.members, fam.degrees):
                arg *= weil_function(member, x, place).argument ** (lift // d)
        lhs = LogRational(arg, lift)
        rhs = height_point(x).scale(multiplier)
        slack = float(rhs.value() - lhs.value())
        reports.append(MarginReport(x, lhs, rhs, slack))
    return reports


def summarize_margins(reports) -> MarginSummary:
    if not reports:
        return MarginSummary(None, ())
    return MarginSummary(min(r.slack for r in reports),
                         tuple(r.point for r in reports if r.slack < 0))


# ---------------------------------------------------------------------------
# point sampling

def sample_points(v: Variety, count: int, max_shell: int = 64) -> tuple:
    """First `count` canonical rational points on V, enumerated by max-norm."""
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    found = []
    for shell in range(1, max_shell + 1):
        for tup in iter_product(range(-shell, shell + 1), repeat=v.num_vars):
            if max(abs(t) for t in tup) != shell:
                continue
            lead = next((t for t in tup if t != 0), 0)
            if lead < 0 or gcd(*tup) != 1:
                continue
            if any(g.evaluate(tup) != 0 for g in v.generators):
                continue
            found.append(RationalPoint(tup))
            if len(found) == count:
                return tuple(found)
    raise DomainError(f"only {len(found)} points found within max-norm {max_shell}")
