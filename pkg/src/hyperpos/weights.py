"""Hilbert weights, the chained Evertse-Ferretti inequality check, and the
explicit truncation-level bound formulas with prior-work comparisons.

The weight S(u,c) is computed from the initial ideal under a weighted order
built from complementary weights: leading monomials then carry minimal
c-weight, so the surviving standard monomials carry maximal c-weight.  That
route is standard but not proved here, so the brute-force oracle stays as a
permanent cross-check, not a scaffold.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, factorial, floor
from typing import Optional, Sequence

from .errors import DomainError
from .groebner import (
    EMPTY,
    GREVLEX,
    groebner_basis,
    hilbert_function,
    ideal_profile,
    normal_form,
    standard_monomials,
    weighted_order,
)
from .polyring import DimensionMismatch, HomoPoly
from .position import IndexOutOfRange, Variety


class OracleTooLarge(DomainError):
    code = "OracleTooLarge"


class SubsetNotEmptyOnV(DomainError):
    code = "SubsetNotEmptyOnV"


class UTooSmall(DomainError):
    code = "UTooSmall"


class FloorAmbiguous(DomainError):
    code = "FloorAmbiguous"


def _weight_vector(v: Variety, c) -> tuple:
    c = tuple(Fraction(x) for x in c)
    if len(c) != v.num_vars:
        raise DimensionMismatch(f"weight vector has {len(c)} entries, ambient needs {v.num_vars}")
    if any(x < 0 for x in c):
        raise DomainError(f"weight entries must be non-negative, got {c}")
    return c


def _mono_weight(mono, c) -> Fraction:
    return sum((Fraction(e) * x for e, x in zip(mono, c)), Fraction(0))


# ---------------------------------------------------------------------------
# Hilbert weight

class HilbertWeightReport:
    __slots__ = ("u", "weight", "basis")

    def __init__(self, u, weight, basis):
        self.u = u
        self.weight = weight
        self.basis = basis

    def __repr__(self):
        return f"HilbertWeightReport(u={self.u}, weight={self.weight})"


def hilbert_weight(v: Variety, u: int, c) -> HilbertWeightReport:
    """Max total c-weight over monomial bases of the degree-u quotient."""
    if u < 1:
        raise DomainError(f"u must be positive, got {u}")
    c = _weight_vector(v, c)
    top = max(c)
    # complementary weights: the order pushes low-c monomials into the lead
    order = weighted_order(tuple(top - x for x in c))
    gb = groebner_basis(v.generators, order, num_vars=v.num_vars)
    basis = tuple(standard_monomials(gb, u))
    weight = sum((_mono_weight(m, c) for m in basis), Fraction(0))
    return HilbertWeightReport(u, weight, basis)


DEFAULT_ORACLE_CAP = 16


def hilbert_weight_bruteforce(v: Variety, u: int, c, cap: int = DEFAULT_ORACLE_CAP) -> Fraction:
    """Exhaustive S(u,c): try every independent monomial subset of full size."""
    if u < 1:
        raise DomainError(f"u must be positive, got {u}")
    c = _weight_vector(v, c)
    ambient = v.ambient
    total = comb(ambient + u, ambient)
    if total > cap:
        raise OracleTooLarge(f"{total} degree-{u} monomials exceeds the oracle cap {cap}")
    monos = standard_monomials(groebner_basis([], GREVLEX, num_vars=v.num_vars), u)
    size = hilbert_function(v.gb, u)
    coords = {m: i for i, m in enumerate(standard_monomials(v.gb, u))}
    residues = []
    for m in monos:
        nf = normal_form(HomoPoly(v.num_vars, {m: Fraction(1)}), v.gb)
        vec = [Fraction(0)] * size
        for mm, cc in nf.terms.items():
            vec[coords[mm]] = cc
        residues.append(vec)
    best = None
    for combo in combinations(range(total), size):
        if _rank([residues[i] for i in combo]) < size:
            continue
        weight = sum((_mono_weight(monos[i], c) for i in combo), Fraction(0))
        if best is None or weight > best:
            best = weight
    return best


def _rank(rows) -> int:
    rows = [list(r) for r in rows]
    cols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                factor = rows[r][col] / lead
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


# ---------------------------------------------------------------------------
# chained Evertse-Ferretti lower bound

class EfCheckResult:
    __slots__ = ("holds", "lhs", "rhs", "u", "subset")

    def __init__(self, holds, lhs, rhs, u, subset):
        self.holds = holds
        self.lhs = lhs
        self.rhs = rhs
        self.u = u
        self.subset = subset

    def __repr__(self):
        rel = ">=" if self.holds else "<"
        return f"EfCheckResult({self.lhs} {rel} {self.rhs})"


def ef_lower_bound_check(v: Variety, u: int, c, coord_subset) -> EfCheckResult:
    """Check S/(uH) against the coordinate-sum consequence of the EF theorem."""
    c = _weight_vector(v, c)
    subset = tuple(coord_subset)
    n = v.dim_n
    if len(set(subset)) != len(subset) or len(subset) != n + 1:
        raise IndexOutOfRange(f"need {n + 1} distinct coordinate indices, got {subset}")
    if any(not 0 <= i < v.num_vars for i in subset):
        raise IndexOutOfRange(f"coordinate index outside 0..{v.num_vars - 1}: {subset}")
    delta = v.degree_delta
    if u <= delta:
        raise UTooSmall(f"u must exceed the variety degree {delta}, got {u}")
    gens = list(v.generators) + [HomoPoly.variable(v.num_vars, i) for i in subset]
    dim = ideal_profile(groebner_basis(gens, GREVLEX, num_vars=v.num_vars)).projective_dimension
    if dim is not EMPTY:
        raise SubsetNotEmptyOnV(
            f"variety meets the coordinate subspace {subset} in dimension {dim}")
    s_val = hilbert_weight(v, u, c).weight
    h_val = hilbert_function(v.gb, u)
    lhs = s_val / (u * h_val)
    rhs = sum(c[i] for i in subset) / Fraction(n + 1) - (2 * n + 1) * delta * max(c) / Fraction(u)
    return EfCheckResult(lhs >= rhs, lhs, rhs, u, subset)


# ---------------------------------------------------------------------------
# explicit bounds

def defect_total(delta, n: int) -> Fraction:
    return Fraction(delta) * (n + 1)


def truncation_coefficient(q: int, delta, n: int, eps) -> Fraction:
    return q - defect_total(delta, n) - Fraction(eps)


def _e_enclosure(terms: int):
    lo = sum(Fraction(1, factorial(i)) for i in range(terms + 1))
    return lo, lo + Fraction(2, factorial(terms + 1))


def _certified_floor_times_e_power(rational_factor: Fraction, n: int) -> int:
    """floor(rational_factor * e^n), enclosure widened until the floor is certain."""
    terms = 8
    lo = hi = Fraction(0)
    while terms <= 512:
        lo_e, hi_e = _e_enclosure(terms)
        lo = rational_factor * lo_e ** n
        hi = rational_factor * hi_e ** n
        if floor(lo) == floor(hi):
            return floor(lo)
        terms *= 2
    raise FloorAmbiguous(f"enclosure [{lo}, {hi}] still straddles an integer at 512 terms")


class BoundReport:
    __slots__ = ("m0", "defect_total", "coefficient", "comparisons")

    def __init__(self, m0, defect, coefficient, comparisons=None):
        self.m0 = m0
        self.defect_total = defect
        self.coefficient = coefficient
        self.comparisons = comparisons

    def __repr__(self):
        return f"BoundReport(m0={self.m0}, defect={self.defect_total})"


def _check_positive(**named):
    for name, value in named.items():
        if value <= 0:
            raise DomainError(f"{name} must be positive, got {value}")


def truncation_m0(n: int, d: int, deg_v: int, delta, q: int, eps,
                  comparisons: Optional[dict] = None) -> BoundReport:
    """Truncation level and defect data for the distributive-constant bound."""
    delta = Fraction(delta)
    eps = Fraction(eps)
    _check_positive(n=n, d=d, deg_v=deg_v, delta=delta, q=q, eps=eps)
    factor = (Fraction(d) ** (n * n + n) * Fraction(deg_v) ** (n + 1) * delta ** n
              * Fraction(2 * n + 4) ** n * Fraction(n + 1) ** n
              * Fraction(factorial(q)) ** n / eps ** n)
    m0 = _certified_floor_times_e_power(factor, n)
    return BoundReport(m0, defect_total(delta, n),
                       truncation_coefficient(q, delta, n, eps), comparisons)


def truncation_m0_subgeneral(n: int, d: int, deg_v: int, l: int, q: int, eps) -> BoundReport:
    """Variant with (l-n+1)^n in place of Delta^n (n+1)^n."""
    eps = Fraction(eps)
    _check_positive(n=n, d=d, deg_v=deg_v, q=q, eps=eps)
    if l < n:
        raise DomainError(f"l must be at least n, got l={l}, n={n}")
    factor = (Fraction(deg_v) ** (n + 1) * Fraction(d) ** (n * n + n)
              * Fraction(l - n + 1) ** n * Fraction(2 * n + 4) ** n
              * Fraction(factorial(q)) ** n / eps ** n)
    m0 = _certified_floor_times_e_power(factor, n)
    delta_eff = Fraction(l - n + 1)
    return BoundReport(m0, defect_total(delta_eff, n),
                       truncation_coefficient(q, delta_eff, n, eps))


# ---------------------------------------------------------------------------
# prior-work comparison

class ComparisonTable:
    __slots__ = ("entries", "this_paper", "strictly_better", "n", "ambient", "l", "kappa", "q")

    def __init__(self, entries, this_paper, strictly_better, n, ambient, l, kappa, q):
        self.entries = entries
        self.this_paper = this_paper
        self.strictly_better = strictly_better
        self.n = n
        self.ambient = ambient
        self.l = l
        self.kappa = kappa
        self.q = q

    def __repr__(self):
        return f"ComparisonTable(this={self.this_paper}, entries={self.entries})"


def compare_bounds(n: int, ambient: int, l: int, kappa: int, q: int) -> ComparisonTable:
    """Total-defect bounds from the literature next to the index-based one."""
    if n < 1 or ambient < n or l < n or kappa < 1 or q < 1:
        raise DomainError(
            f"need 1 <= n <= ambient, l >= n, kappa >= 1, q >= 1; "
            f"got n={n}, ambient={ambient}, l={l}, kappa={kappa}, q={q}")
    entries = {
        "nochka": Fraction(2 * ambient - n + 1),
        "eremenko_sodin": Fraction(2 * ambient),
        "ru": Fraction(n + 1),
        "chen_ru_yan": Fraction(l * (n + 1)),
        "quang_subgeneral": Fraction((l - n + 1) * (n + 1)),
        "jyy_index": (Fraction(l - n, max(1, min(l - n, kappa))) + 1) * (n + 1),
    }
    if l + n - 2 > 0:
        entries["shi_ru"] = Fraction(l * (l - 1) * (n + 1), l + n - 2)
    this = Fraction(l - n + kappa, kappa) * (n + 1)
    better = {name: this < value for name, value in entries.items()}
    return ComparisonTable(entries, this, better, n, ambient, l, kappa, q)
