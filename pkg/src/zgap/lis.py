"""Counting permutations by the length of their longest increasing
subsequence (LIS).

``count_restricted(l, n)`` — the number of permutations of {1..n} whose LIS
has length at most l — is computed by three independent routes so each can
serve as an oracle for the others:

* direct enumeration of all n! permutations (n <= 9),
* a sum of squared standard-tableau counts over partitions with first part
  at most l (Robinson-Schensted: the LIS length of a permutation equals the
  first-row length of its insertion tableau),
* the Toeplitz determinant generating function from `zgap.series`.

The partition and hook-length helpers here are also consumed by the
unitary-group averages in `zgap.series`.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Sequence

from .arith import factorial

ENUMERATION_LIMIT = 9  # 9! = 362880 permutations; cost guard


@dataclass(frozen=True)
class Partition:
    """An integer partition: weakly decreasing positive parts."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(p <= 0 for p in self.parts):
            raise ValueError(f"partition parts must be positive, got {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"partition parts must weakly decrease, got {self.parts}")

    @property
    def weight(self) -> int:
        return sum(self.parts)


@dataclass(frozen=True)
class LisTable:
    """Computed values T(n) = #{permutations of 1..n with LIS length <= l}."""

    l: int
    values: tuple[tuple[int, int], ...]  # (n, count) pairs


def lis_length(perm: Sequence[int]) -> int:
    """Length of the longest strictly increasing subsequence of a
    permutation of 1..n (patience sorting: number of piles)."""
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm!r}")
    piles: list[int] = []
    for x in perm:
        i = bisect_left(piles, x)
        if i == len(piles):
            piles.append(x)
        else:
            piles[i] = x
    return len(piles)


@lru_cache(maxsize=None)
def _lis_length_counts(n: int) -> tuple[int, ...]:
    """counts[k] = number of permutations of 1..n with LIS length exactly k
    (index 0 unused).  Full enumeration; cached so the counts for all l come
    from one pass over the n! permutations."""
    counts = [0] * (n + 1)
    for perm in permutations(range(1, n + 1)):
        piles: list[int] = []
        for x in perm:
            i = bisect_left(piles, x)
            if i == len(piles):
                piles.append(x)
            else:
                piles[i] = x
        counts[len(piles)] += 1
    return tuple(counts)


def count_by_enumeration(l: int, n: int) -> int:
    """T(n) for LIS length <= l, by checking every permutation of 1..n."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > ENUMERATION_LIMIT:
        raise ValueError(
            f"enumeration capped at n <= {ENUMERATION_LIMIT}, got {n}"
        )
    if n == 0:
        return 1
    counts = _lis_length_counts(n)
    return sum(counts[1 : min(l, n) + 1])


def partitions_max_part(n: int, max_part: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n with every part <= max_part, parts weakly decreasing,
    generated in lexicographically decreasing order."""
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_max_part(n - first, first):
            yield (first,) + rest


def partitions_max_length(n: int, max_len: int) -> Iterator[tuple[int, ...]]:
    """Partitions of n into at most max_len parts (conjugates of the
    max-part-bounded family)."""
    for shape in partitions_max_part(n, n if n > 0 else 1):
        if len(shape) <= max_len:
            yield shape


def standard_tableaux(shape: Partition | Sequence[int]) -> int:
    """Number of standard Young tableaux of the given shape, by the hook
    length formula: weight! / prod(hook lengths).  Always an exact integer.
    """
    parts = shape.parts if isinstance(shape, Partition) else tuple(shape)
    if parts and not isinstance(shape, Partition):
        Partition(parts)  # validate
    n = sum(parts)
    if n == 0:
        return 1
    hook_product = 1
    for i, row in enumerate(parts):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for r in parts[i + 1 :] if r > j)
            hook_product *= arm + leg + 1
    count, rem = divmod(factorial(n), hook_product)
    if rem:
        raise ArithmeticError(f"hook product does not divide {n}! for {parts}")
    return count


def count_by_tableaux(l: int, n: int) -> int:
    """T(n) for LIS length <= l as sum over partitions of n with first part
    <= l of the squared standard-tableau count."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return sum(standard_tableaux(shape) ** 2 for shape in partitions_max_part(n, l))


def count_by_series(l: int, n: int) -> int:
    """T(n) read off the Toeplitz determinant generating function:
    (n!)^2 times the degree-n coefficient.  A non-integral product signals a
    series bug and raises."""
    from . import series  # deferred; series imports this module at top level

    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    det = series.toeplitz_determinant(l, n + 1)
    coeff = det.coefficient(Fraction(n))
    value = coeff * factorial(n) ** 2
    if value.denominator != 1:
        raise ArithmeticError(
            f"series count for l={l}, n={n} is non-integral: {value}"
        )
    return value.numerator


def count_table(l: int, max_n: int) -> LisTable:
    """LisTable of count_by_tableaux values for n = 0..max_n."""
    return LisTable(
        l=l, values=tuple((n, count_by_tableaux(l, n)) for n in range(max_n + 1))
    )
