"""Leading coefficients of joint moments of the characteristic-polynomial
analogue of Hardy's Z-function over the unitary group, and the exact ratios
derived from them.

Contents:

* ``cue_moment_coefficient(l)`` — the leading coefficient
  prod_{j=0}^{l-1} j!/(j+l)! of the 2l-th absolute moment of the
  characteristic polynomial as matrix size grows,
* ``moment_exponent`` — the growth exponent l^2 + 2*h*n1 + 2*(l-h)*n2 of the
  joint moment with derivative orders (n1, n2),
* ``joint_moment_coefficient(h, l)`` — the exact coefficient for derivative
  pair (2, 1), evaluated from its partition-sum formula,
* ``tabulated_coefficient(h, n)`` — reference constants for l = 4 and
  derivative pairs (2, 1) and (3, 2), stored in factored form; the (2, 1)
  column is independently reproducible via the partition sum, the (3, 2)
  column enters purely as reference data (no printed formula exists for it,
  so nothing is extrapolated),
* ``moment_ratio`` / ``hall_ratio`` — the scaled ratios feeding the zero-gap
  optimization in `zgap.bounds` (the arithmetic factor cancels in them),
* ``arithmetic_factor(l)`` — a truncated evaluation of the Euler product
  c_l over primes, with an error estimate.  It is contextual: no bound
  computation depends on it.

All coefficient computations are exact; only ``arithmetic_factor`` is
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping

from .arith import FactoredConstant, Rational, binomial, factorial, multinomial

SOURCE_PARTITION_SUM = "partition-sum"
SOURCE_REFERENCE_TABLE = "reference-table"


@dataclass(frozen=True)
class MomentRecord:
    """One coefficient value together with where it came from."""

    h: int
    l: int
    n1: int
    n2: int
    value: Rational
    source: str

    def to_json_dict(self) -> dict:
        return {
            "h": self.h,
            "l": self.l,
            "n1": self.n1,
            "n2": self.n2,
            "numerator": str(self.value.numerator),
            "denominator": str(self.value.denominator),
            "source": self.source,
        }


@dataclass(frozen=True)
class RatioSet:
    """The scaled ratios B(h) (h = 0..l, with B(l) = 1) and the adjacent
    ratios A(h) (h = 1..l) consumed by the optimization pipeline."""

    n: int | None
    capB: dict[int, Rational]
    A: dict[int, Rational]


def cue_moment_coefficient(l: int) -> Rational:
    """prod_{j=0}^{l-1} j!/(j+l)!, exact."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    out = Fraction(1)
    for j in range(l):
        out *= Fraction(factorial(j), factorial(j + l))
    return out


def moment_exponent(h: int, l: int, n1: int, n2: int) -> int:
    """Growth exponent l^2 + 2*h*n1 + 2*(l-h)*n2 of the joint moment."""
    if not 0 <= h <= l:
        raise ValueError(f"need 0 <= h <= l, got h={h}, l={l}")
    return l * l + 2 * h * n1 + 2 * (l - h) * n2


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer tuples of fixed length summing to total, in
    lexicographic order (deterministic transcripts)."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def joint_moment_coefficient(h: int, l: int) -> Rational:
    """Exact leading coefficient of the joint moment with derivative orders
    (n1, n2) = (2, 1), from its partition-sum formula:

        (-1)**(l - h + l(l-1)/2) *
        sum_{k=0}^{2h} C(2h, k)
          sum_{h_1+..+h_l = k}  sum_{m_0+..+m_l = 2l+2h-2k}
            (-1/2)**m_0 * multinomial(k; h_j) * multinomial(2l+2h-2k; m_j)
            * prod_{j=1}^{l} 1/(2l + m_j + 2 h_j - j)!
            * prod_{j<s} (m_s + 2 h_s - m_j - 2 h_j - s + j)

    The formula is specific to the (2, 1) derivative pair; other pairs are
    not computed here.  Worst case at l = 4, h = 4 the double composition
    sum has ~1e5 summands and runs in about a second.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if not 0 <= h <= l:
        raise ValueError(f"need 0 <= h <= l, got h={h}, l={l}")
    total = Fraction(0)
    for k in range(2 * h + 1):
        outer = binomial(2 * h, k)
        remaining = 2 * l + 2 * h - 2 * k
        inner = Fraction(0)
        for hv in _compositions(k, l):
            mult_h = multinomial(k, hv)
            for mv in _compositions(remaining, l + 1):
                pair_product = 1
                for j in range(1, l + 1):
                    for s in range(j + 1, l + 1):
                        pair_product *= (
                            mv[s] + 2 * hv[s - 1] - mv[j] - 2 * hv[j - 1] - s + j
                        )
                if pair_product == 0:
                    continue
                denominator = 2 ** mv[0]
                for j in range(1, l + 1):
                    denominator *= factorial(2 * l + mv[j] + 2 * hv[j - 1] - j)
                numerator = (
                    (-1) ** mv[0]
                    * mult_h
                    * multinomial(remaining, mv)
                    * pair_product
                )
                inner += Fraction(numerator, denominator)
        total += outer * inner
    sign = (-1) ** (l - h + (l * (l - 1)) // 2)
    return sign * total


# Reference constants for l = 4: leading joint-moment coefficients for
# derivative pairs (2, 1) (key n = 1) and (3, 2) (key n = 2), in factored
# form exactly as tabulated.  Equality checks elsewhere always compare
# evaluated Rationals, never factorizations.
REFERENCE_COEFFICIENTS: dict[tuple[int, int], FactoredConstant] = {
    (0, 1): FactoredConstant(1, ((31, 1), (2, -20), (3, -10), (5, -4), (7, -2), (11, -1), (13, -1))),
    (1, 1): FactoredConstant(1, ((71, 1), (2, -22), (3, -9), (5, -4), (7, -2), (11, -2), (13, -1), (17, -1))),
    (2, 1): FactoredConstant(1, ((43, 1), (3467, 1), (2, -24), (3, -10), (5, -5), (7, -4), (11, -2), (13, -1), (17, -1), (19, -1))),
    (3, 1): FactoredConstant(1, ((271, 1), (11483, 1), (2, -26), (3, -13), (5, -5), (7, -3), (11, -2), (13, -2), (17, -1), (19, -1))),
    (4, 1): FactoredConstant(1, ((103, 1), (413129, 1), (2, -28), (3, -12), (5, -5), (7, -3), (11, -2), (13, -2), (17, -1), (19, -1), (23, -1))),
    (0, 2): FactoredConstant(1, ((103, 1), (413129, 1), (2, -28), (3, -12), (5, -5), (7, -3), (11, -2), (13, -2), (17, -1), (19, -1), (23, -1))),
    (1, 2): FactoredConstant(1, ((58452853, 1), (2, -30), (3, -11), (5, -7), (7, -4), (11, -3), (13, -2), (17, -1), (19, -1))),
    (2, 2): FactoredConstant(1, ((67, 1), (85489981, 1), (2, -32), (3, -12), (5, -7), (7, -5), (11, -3), (13, -2), (17, -1), (19, -1), (23, -1))),
    (3, 2): FactoredConstant(1, ((71, 1), (389, 1), (139091, 1), (2, -34), (3, -8), (5, -6), (7, -5), (11, -3), (13, -2), (17, -2), (19, -1), (23, -1), (29, -1))),
    (4, 2): FactoredConstant(1, ((449, 1), (1721279377, 1), (2, -36), (3, -10), (5, -7), (7, -4), (11, -3), (13, -3), (17, -2), (19, -1), (23, -1), (31, -1))),
}


def tabulated_coefficient(h: int, n: int) -> Rational:
    """Reference coefficient for l = 4, derivative pair (n+1, n), n in {1, 2}."""
    key = (h, n)
    if key not in REFERENCE_COEFFICIENTS:
        raise KeyError(f"no reference coefficient for h={h}, n={n}")
    return REFERENCE_COEFFICIENTS[key].value()


def coefficient_column(n: int) -> dict[int, Rational]:
    """All five reference coefficients h = 0..4 for derivative pair (n+1, n)."""
    return {h: tabulated_coefficient(h, n) for h in range(5)}


def moment_records(l: int = 4, pair: tuple[int, int] = (2, 1)) -> list[MomentRecord]:
    """Records for h = 0..l with every available source.

    For the (2, 1) pair the partition sum is always computed; reference
    values are attached when l = 4.  For the (3, 2) pair (l = 4 only) the
    reference table is the only source.
    """
    n1, n2 = pair
    records: list[MomentRecord] = []
    if pair == (2, 1):
        for h in range(l + 1):
            records.append(
                MomentRecord(h, l, n1, n2, joint_moment_coefficient(h, l), SOURCE_PARTITION_SUM)
            )
            if l == 4:
                records.append(
                    MomentRecord(h, l, n1, n2, tabulated_coefficient(h, 1), SOURCE_REFERENCE_TABLE)
                )
    elif pair == (3, 2):
        if l != 4:
            raise ValueError("the (3, 2) pair is tabulated for l = 4 only")
        for h in range(5):
            records.append(
                MomentRecord(h, l, n1, n2, tabulated_coefficient(h, 2), SOURCE_REFERENCE_TABLE)
            )
    else:
        raise ValueError(f"unsupported derivative pair {pair}")
    return records


def ratio_set_from_values(b: Mapping[int, Rational], n: int | None = None, l: int = 4) -> RatioSet:
    """Build the B(h) and A(h) ratio maps from coefficient values b[0..l].

    B(h) = 4**(h-l) * b[h]/b[l]  (so B(l) = 1);
    A(h) = |(2h-1)/(2h-3)| * B(h-1)/B(h).

    The arithmetic factor multiplying every b cancels in both.
    """
    capB = {h: Fraction(4) ** (h - l) * Fraction(b[h]) / Fraction(b[l]) for h in range(l + 1)}
    A = {
        h: abs(Fraction(2 * h - 1, 2 * h - 3)) * capB[h - 1] / capB[h]
        for h in range(1, l + 1)
    }
    return RatioSet(n=n, capB=capB, A=A)


def moment_ratio(h: int, l: int, n: int) -> Rational:
    """B(h, l; n) from the reference coefficients (l = 4 only)."""
    if l != 4:
        raise ValueError("ratios are tabulated for l = 4 only")
    return ratio_set_from_values(coefficient_column(n), n=n).capB[h]


def hall_ratio(h: int, n: int) -> Rational:
    """A(h, 4; n) = |(2h-1)/(2h-3)| * B(h-1)/B(h), exact."""
    if not 1 <= h <= 4:
        raise ValueError(f"h must be in 1..4, got {h}")
    return ratio_set_from_values(coefficient_column(n), n=n).A[h]


@dataclass(frozen=True)
class ArithmeticFactorEstimate:
    """Truncated Euler-product value with a conservative error estimate."""

    l: int
    value: float
    error_bound: float
    prime_cutoff: int
    inner_terms: int

    def to_json_dict(self) -> dict:
        return {
            "l": self.l,
            "value": repr(self.value),
            "error_bound": repr(self.error_bound),
            "prime_cutoff": self.prime_cutoff,
            "inner_terms": self.inner_terms,
        }


def _primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            start = p * p
            sieve[start : n + 1 : p] = b"\x00" * ((n - start) // p + 1)
    return [i for i, flag in enumerate(sieve) if flag]


def arithmetic_factor(
    l: int, prime_cutoff: int = 100_000, inner_terms: int = 64
) -> ArithmeticFactorEstimate:
    """Truncated evaluation of the arithmetic factor

        c_l = prod_p (1 - 1/p)**(l**2) * sum_m C(m+l-1, m)**2 p**(-m)

    over primes p <= prime_cutoff, inner sum over m < inner_terms.

    Error estimate combines (a) the inner-sum tail, bounded per prime by the
    first omitted term times a geometric majorant with ratio
    ((M+l)/(M+1))**2 / p, and (b) the omitted primes, where each factor's
    log is O(l**4 / p**2) (the 1/p terms cancel between the two pieces), so
    the tail is bounded by l**4 * sum_{n > cutoff} 1/n**2 < l**4 / cutoff.
    Crude but sufficient: nothing downstream consumes this value.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if prime_cutoff < 2:
        raise ValueError(f"prime_cutoff must be >= 2, got {prime_cutoff}")
    if inner_terms < 2:
        raise ValueError(f"inner_terms must be >= 2, got {inner_terms}")
    m_cut = inner_terms
    value = 1.0
    inner_tail_rel = 0.0
    for p in _primes_up_to(prime_cutoff):
        inv_p = 1.0 / p
        inner = 0.0
        term_weight = 1.0  # C(m+l-1, m)**2 * p**-m at current m
        for m in range(m_cut):
            if m > 0:
                term_weight *= ((m + l - 1) / m) ** 2 * inv_p
            inner += term_weight
        first_omitted = term_weight * ((m_cut + l - 1) / m_cut) ** 2 * inv_p
        ratio = ((m_cut + l) / (m_cut + 1)) ** 2 * inv_p
        if ratio < 1.0:
            inner_tail_rel += first_omitted / (1.0 - ratio) / inner
        else:  # cannot happen for inner_terms >= 2*l, kept defensive
            inner_tail_rel += float("inf")
        value *= (1.0 - inv_p) ** (l * l) * inner
    product_tail = l**4 / prime_cutoff
    error = abs(value) * math.expm1(inner_tail_rel + product_tail)
    return ArithmeticFactorEstimate(
        l=l,
        value=value,
        error_bound=error,
        prime_cutoff=prime_cutoff,
        inner_terms=inner_terms,
    )
