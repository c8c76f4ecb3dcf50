"""Buchberger engine: reduced bases, normal forms, dimension, degree, Hilbert data.

Everything here is exact rational arithmetic.  Dimensions come out of the
leading-term ideal combinatorially, so no primary decomposition or radical
computation is ever needed.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .errors import DomainError
from .polyring import (
    EmptyInput,
    HomoPoly,
    grevlex_key,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    poly_from_json,
    poly_to_json,
    rat_from_str,
    rat_to_str,
)


class MixedAmbient(DomainError):
    code = "MixedAmbient"


class _EmptySentinel:
    """Dimension marker for the empty projective set (dim = -infinity)."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"


EMPTY = _EmptySentinel()


# ---------------------------------------------------------------------------
# monomial orders

class MonomialOrder:
    """Total multiplicative monomial order; larger key means larger monomial."""

    __slots__ = ("kind", "weights")

    def __init__(self, kind: str, weights=None):
        if kind not in ("grevlex", "lex", "weighted"):
            raise DomainError(f"unknown monomial order kind {kind!r}")
        if kind == "weighted":
            if weights is None:
                raise DomainError("weighted order needs a weight vector")
            weights = tuple(Fraction(w) for w in weights)
            if any(w < 0 for w in weights):
                raise DomainError("weights must be non-negative")
        elif weights is not None:
            raise DomainError(f"{kind} order takes no weights")
        self.kind = kind
        self.weights = weights

    def key(self, mono):
        if self.kind == "grevlex":
            return grevlex_key(mono)
        if self.kind == "lex":
            return tuple(mono)
        if len(mono) != len(self.weights):
            raise MixedAmbient(
                f"monomial has {len(mono)} variables, weight vector has {len(self.weights)}")
        wdeg = sum(w * e for w, e in zip(self.weights, mono))
        return (wdeg, grevlex_key(mono))

    def tag(self):
        if self.kind == "weighted":
            return {"weighted": [rat_to_str(w) for w in self.weights]}
        return self.kind

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder)
                and self.kind == other.kind and self.weights == other.weights)

    def __hash__(self):
        return hash((self.kind, self.weights))

    def __repr__(self):
        if self.kind == "weighted":
            return f"MonomialOrder(weighted, {list(self.weights)})"
        return f"MonomialOrder({self.kind})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def weighted_order(weights) -> MonomialOrder:
    return MonomialOrder("weighted", weights)


def order_to_json(order: MonomialOrder):
    return order.tag()


def order_from_json(obj) -> MonomialOrder:
    if obj == "grevlex":
        return GREVLEX
    if obj == "lex":
        return LEX
    if isinstance(obj, dict) and set(obj) == {"weighted"}:
        return MonomialOrder("weighted", [rat_from_str(w) for w in obj["weighted"]])
    raise DomainError(f"bad order encoding {obj!r}")


def leading_monomial(p: HomoPoly, order: MonomialOrder):
    return max(p.terms, key=order.key)


# ---------------------------------------------------------------------------
# division

def _reduce_terms(terms, reducers, order):
    """Full remainder of a term dict modulo (lm, lc, terms) reducer triples."""
    work = dict(terms)
    remainder = {}
    while work:
        mono = max(work, key=order.key)
        coef = work.pop(mono)
        if coef == 0:
            continue
        hit = None
        for lm, lc, tms in reducers:
            if mono_divides(lm, mono):
                hit = (lm, lc, tms)
                break
        if hit is None:
            remainder[mono] = coef
            continue
        lm, lc, tms = hit
        shift = mono_div(mono, lm)
        factor = coef / lc
        for gm, gc in tms.items():
            if gm == lm:
                continue
            mm = mono_mul(gm, shift)
            nv = work.get(mm, Fraction(0)) - factor * gc
            if nv == 0:
                work.pop(mm, None)
            else:
                work[mm] = nv
    return remainder


def s_polynomial(f: HomoPoly, g: HomoPoly, order: MonomialOrder) -> HomoPoly:
    lmf = leading_monomial(f, order)
    lmg = leading_monomial(g, order)
    big = mono_lcm(lmf, lmg)
    a = f.mul_term(mono_div(big, lmf), 1 / f.terms[lmf])
    b = g.mul_term(mono_div(big, lmg), 1 / g.terms[lmg])
    return a - b


# ---------------------------------------------------------------------------
# Groebner bases

class GroebnerBasis:
    """Reduced basis plus its order; immutable, safe to share across threads."""

    __slots__ = ("generators", "order", "reduced", "num_vars", "_lead", "_reducers", "_hilbert")

    def __init__(self, generators, order: MonomialOrder, reduced: bool, num_vars: int):
        gens = tuple(generators)
        for g in gens:
            if g.nvars != num_vars:
                raise MixedAmbient(f"generator in {g.nvars} variables, ambient has {num_vars}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "reduced", reduced)
        object.__setattr__(self, "num_vars", num_vars)
        lead = tuple(leading_monomial(g, order) for g in gens)
        object.__setattr__(self, "_lead", lead)
        object.__setattr__(self, "_reducers",
                           tuple((lm, g.terms[lm], g.terms) for lm, g in zip(lead, gens)))
        object.__setattr__(self, "_hilbert", {})

    def __setattr__(self, name, value):
        raise AttributeError("GroebnerBasis is immutable")

    @property
    def leading_monomials(self):
        return self._lead

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis)
                and self.generators == other.generators
                and self.order == other.order
                and self.num_vars == other.num_vars)

    def __hash__(self):
        return hash((self.generators, self.order, self.num_vars))

    def __repr__(self):
        return f"GroebnerBasis({len(self.generators)} gens, {self.num_vars} vars, {self.order!r})"


def normal_form(p: HomoPoly, gb: GroebnerBasis) -> HomoPoly:
    if p.nvars != gb.num_vars:
        raise MixedAmbient(f"polynomial in {p.nvars} variables, basis in {gb.num_vars}")
    if p.is_zero or not gb.generators:
        return p
    return HomoPoly(p.nvars, _reduce_terms(p.terms, gb._reducers, gb.order))


def _pair(a, b):
    return (a, b) if a < b else (b, a)


def groebner_basis(gens: Sequence[HomoPoly], order: MonomialOrder,
                   num_vars: Optional[int] = None) -> GroebnerBasis:
    """Reduced Groebner basis of <gens>, deterministic for fixed input."""
    sizes = {g.nvars for g in gens}
    if num_vars is not None:
        sizes.add(num_vars)
    if len(sizes) > 1:
        raise MixedAmbient(f"generators live in different ambient rings: {sorted(sizes)}")
    if not sizes:
        raise EmptyInput("no generators and no ambient size given")
    nv = sizes.pop()

    basis = [g.content_free() for g in gens if not g.is_zero]
    key = cache_key(basis, order, nv) if _CACHE_DIR is not None else None
    cached = _cache_fetch(key)
    if cached is not None:
        return cached
    lms = [leading_monomial(g, order) for g in basis]
    reducers = [(lm, g.terms[lm], g.terms) for lm, g in zip(lms, basis)]
    pending = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pending:
        i, j = min(pending,
                   key=lambda ij: (order.key(mono_lcm(lms[ij[0]], lms[ij[1]])), ij))
        pending.discard((i, j))
        big = mono_lcm(lms[i], lms[j])
        if big == mono_mul(lms[i], lms[j]):
            continue  # coprime leading monomials
        if any(k != i and k != j and mono_divides(lms[k], big)
               and _pair(i, k) not in pending and _pair(j, k) not in pending
               for k in range(len(basis))):
            continue  # chain criterion
        s = s_polynomial(basis[i], basis[j], order)
        red = _reduce_terms(s.terms, reducers, order)
        if red:
            h = HomoPoly(nv, red).content_free()
            lm = leading_monomial(h, order)
            pending.update((k, len(basis)) for k in range(len(basis)))
            basis.append(h)
            lms.append(lm)
            reducers.append((lm, h.terms[lm], h.terms))

    # minimalize: ascending scan keeps only generators with undominated leads
    basis.sort(key=lambda g: order.key(leading_monomial(g, order)))
    minimal = []
    min_lms = []
    for g in basis:
        lm = leading_monomial(g, order)
        if not any(mono_divides(m, lm) for m in min_lms):
            minimal.append(g)
            min_lms.append(lm)

    # interreduce: leads are pairwise underivable so one full pass suffices
    for idx in range(len(minimal)):
        others = [(min_lms[k], minimal[k].terms[min_lms[k]], minimal[k].terms)
                  for k in range(len(minimal)) if k != idx]
        minimal[idx] = HomoPoly(nv, _reduce_terms(minimal[idx].terms, others, order))
    monic = [g.scale(1 / g.terms[leading_monomial(g, order)]) for g in minimal]
    monic.sort(key=lambda g: order.key(leading_monomial(g, order)))
    out = GroebnerBasis(monic, order, True, nv)
    _cache_store(key, out)
    return out


# ---------------------------------------------------------------------------
# dimension / Hilbert data

def _cone_dimension(lead_monomials, num_vars):
    """Krull dimension of the affine cone cut out by the leading-term ideal.

    Largest variable subset S with no leading monomial supported inside S;
    -1 flags the unit ideal.
    """
    if any(mono_degree(m) == 0 for m in lead_monomials):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lead_monomials]
    for size in range(num_vars, 0, -1):
        for sub in combinations(range(num_vars), size):
            sset = frozenset(sub)
            if not any(sup <= sset for sup in supports):
                return size
    return 0


def hilbert_function(gb: GroebnerBasis, u: int) -> int:
    """Count of degree-u monomials outside the leading-term ideal."""
    if u < 0:
        raise DomainError(f"degree must be non-negative, got {u}")
    cache = gb._hilbert
    if u in cache:
        return cache[u]
    ambient = gb.num_vars - 1
    lms = gb.leading_monomials
    total = 0

    def dfs(start, cur, sign):
        nonlocal total
        deg = mono_degree(cur)
        if deg > u:
            return  # every superset lcm is at least this large
        total += sign * comb(ambient + u - deg, ambient)
        for k in range(start, len(lms)):
            dfs(k + 1, mono_lcm(cur, lms[k]), -sign)

    dfs(0, (0,) * gb.num_vars, 1)
    cache[u] = total
    return total


def _all_monomials(num_vars, u):
    if num_vars == 1:
        yield (u,)
        return
    for head in range(u, -1, -1):
        for tail in _all_monomials(num_vars - 1, u - head):
            yield (head,) + tail


def standard_monomials(gb: GroebnerBasis, u: int):
    """Degree-u monomial basis of the quotient, order-descending."""
    if u < 0:
        raise DomainError(f"degree must be non-negative, got {u}")
    lms = gb.leading_monomials
    out = [m for m in _all_monomials(gb.num_vars, u)
           if not any(mono_divides(lm, m) for lm in lms)]
    out.sort(key=gb.order.key, reverse=True)
    return out


class IdealProfile:
    """Projective dimension plus lazily interpolated degree for one basis."""

    __slots__ = ("gb", "projective_dimension", "_degree")

    def __init__(self, gb: GroebnerBasis):
        self.gb = gb
        cone = _cone_dimension(gb.leading_monomials, gb.num_vars)
        self.projective_dimension = EMPTY if cone <= 0 else cone - 1
        self._degree = None

    @property
    def hilbert_values(self):
        return gb_hilbert_cache(self.gb)

    @property
    def degree(self):
        """Normalized leading Hilbert coefficient; None for the empty set."""
        if self.projective_dimension is EMPTY:
            return None
        if self._degree is None:
            self._degree = _interpolated_degree(self.gb, self.projective_dimension)
        return self._degree

    def __repr__(self):
        return f"IdealProfile(dim={self.projective_dimension!r})"


def gb_hilbert_cache(gb: GroebnerBasis):
    return gb._hilbert


def _interpolated_degree(gb: GroebnerBasis, dim: int) -> int:
    # beyond the lcm degrees every inclusion-exclusion binomial is a true
    # polynomial in u, so H agrees with its Hilbert polynomial from s0 on;
    # the stability window is a belt-and-braces check on top of that bound
    s0 = max(0, sum(mono_degree(m) for m in gb.leading_monomials) - (gb.num_vars - 1))
    window = []
    s = s0
    while s <= s0 + 60:
        diff = sum((-1) ** (dim - k) * comb(dim, k) * hilbert_function(gb, s + k)
                   for k in range(dim + 1))
        window.append(diff)
        if len(window) >= 3 and window[-1] == window[-2] == window[-3]:
            if window[-1] <= 0:
                raise DomainError("Hilbert leading coefficient not positive")
            return window[-1]
        s += 1
    raise DomainError("Hilbert polynomial fit did not stabilize")


def ideal_profile(gb: GroebnerBasis) -> IdealProfile:
    return IdealProfile(gb)


# ---------------------------------------------------------------------------
# serialization and on-disk cache

def gb_to_json(gb: GroebnerBasis) -> dict:
    return {
        "vars": gb.num_vars,
        "order": order_to_json(gb.order),
        "reduced": gb.reduced,
        "generators": [poly_to_json(g) for g in gb.generators],
    }


def gb_from_json(obj: dict) -> GroebnerBasis:
    return GroebnerBasis(
        [poly_from_json(g) for g in obj["generators"]],
        order_from_json(obj["order"]),
        bool(obj["reduced"]),
        int(obj["vars"]),
    )


_CACHE_DIR = None


def set_cache_dir(path: Optional[str]) -> None:
    """Enable (or with None disable) the on-disk basis cache."""
    global _CACHE_DIR
    _CACHE_DIR = path
    if path is not None:
        os.makedirs(path, exist_ok=True)


def cache_key(gens: Sequence[HomoPoly], order: MonomialOrder, num_vars: int) -> str:
    payload = json.dumps(
        {
            "vars": num_vars,
            "order": order_to_json(order),
            "generators": sorted(
                json.dumps(poly_to_json(g), sort_keys=True, separators=(",", ":"))
                for g in gens
            ),
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _cache_fetch(key):
    if _CACHE_DIR is None or key is None:
        return None
    path = os.path.join(_CACHE_DIR, key + ".json")
    try:
        with open(path, encoding="utf-8") as handle:
            return gb_from_json(json.load(handle))
    except (OSError, ValueError, KeyError):
        return None


def _cache_store(key, gb):
    if _CACHE_DIR is None or key is None:
        return
    path = os.path.join(_CACHE_DIR, key + ".json")
    if os.path.exists(path):
        return  # write-once
    fd, tmp = tempfile.mkstemp(dir=_CACHE_DIR, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            json.dump(gb_to_json(gb), handle, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass
