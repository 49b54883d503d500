"""Families of subsets of [n] and the basic operations on them.

A set X of [n] is stored as an integer bitmask (bit i <-> element i+1).  A
family is an immutable, deduplicated collection of such masks.  For
n <= DENSE_MAX the family also carries a dense bitset: one Python int with
bit X set iff X is a member, which turns closures and degree counts into a
handful of word-parallel shifts.
"""

from __future__ import annotations

from bisect import bisect_left
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_N = 25
DENSE_MAX = 20


class AmbientSizeError(ValueError):
    """Two objects live over different ground sets."""


class NotDownSetError(ValueError):
    pass


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_N:
        raise ValueError(f"ground size n={n} outside 0..{MAX_N}")


def popcount(x: int) -> int:
    return x.bit_count()


def set_mask(elements: Iterable[int]) -> int:
    """Mask of a set given by its 1-based elements."""
    mask = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"element {e} is not a positive integer")
        mask |= 1 << (e - 1)
    return mask


def elements(mask: int) -> list[int]:
    """1-based elements of a mask, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def fmt_set(mask: int) -> str:
    if mask == 0:
        return "{}"
    return "{" + ",".join(map(str, elements(mask))) + "}"


@lru_cache(maxsize=None)
def full_bits(n: int) -> int:
    """Dense bitset of the whole power set 2^[n]."""
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def has_element_bits(n: int, i: int) -> int:
    """Dense bitset of all X in 2^[n] containing bit i.

    Uses the repunit identity (2^N - 1) / (2^P - 1) = sum_k 2^(kP) to tile
    the block pattern 0^(2^i) 1^(2^i) across 2^n positions.
    """
    half = 1 << i
    period = half << 1
    block = ((1 << half) - 1) << half
    return full_bits(n) // ((1 << period) - 1) * block


def iter_bits(bits: int) -> Iterator[int]:
    """Positions of the set bits of a dense bitset, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


class Family:
    """An immutable family of subsets of [n]."""

    __slots__ = ("n", "members", "_bits")

    def __init__(self, n: int, members: Iterable[int] = ()):
        _check_n(n)
        top = 1 << n
        ms = sorted(set(members))
        if ms and (ms[0] < 0 or ms[-1] >= top):
            bad = ms[0] if ms[0] < 0 else ms[-1]
            raise ValueError(f"set mask {bad} does not fit in n={n}")
        self.n = n
        self.members: tuple[int, ...] = tuple(ms)
        self._bits: int | None = None

    @classmethod
    def from_bits(cls, n: int, bits: int) -> Family:
        _check_n(n)
        if bits < 0 or bits > full_bits(n):
            raise ValueError(f"dense bitset does not fit in n={n}")
        fam = cls.__new__(cls)
        fam.n = n
        fam.members = tuple(iter_bits(bits))
        fam._bits = bits
        return fam

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> Family:
        """Build from 1-based element lists, e.g. ``[[1, 2], [3]]``."""
        return cls(n, (set_mask(s) for s in sets))

    @classmethod
    def power_set(cls, n: int) -> Family:
        return cls(n, range(1 << n))

    @classmethod
    def star(cls, n: int, element: int) -> Family:
        bit = 1 << (element - 1)
        return cls(n, (x for x in range(1 << n) if x & bit))

    @property
    def dense(self) -> bool:
        return self.n <= DENSE_MAX

    @property
    def bits(self) -> int:
        if self._bits is None:
            b = 0
            for x in self.members:
                b |= 1 << x
            self._bits = b
        return self._bits

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        if not isinstance(mask, int) or mask < 0:
            return False
        if self.dense:
            return bool(self.bits >> mask & 1)
        k = bisect_left(self.members, mask)
        return k < len(self.members) and self.members[k] == mask

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.n == other.n and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.n, self.members))

    def __le__(self, other: Family) -> bool:
        same_n(self, other)
        if self.dense:
            return self.bits & ~other.bits == 0
        return set(self.members) <= set(other.members)

    def __repr__(self) -> str:
        return f"Family(n={self.n}, {{{', '.join(fmt_set(x) for x in self.members)}}})"

    def union(self, other: Family) -> Family:
        same_n(self, other)
        return Family(self.n, set(self.members) | set(other.members))

    def intersection(self, other: Family) -> Family:
        same_n(self, other)
        if self.dense:
            return Family.from_bits(self.n, self.bits & other.bits)
        return Family(self.n, set(self.members) & set(other.members))

    def without(self, mask: int) -> Family:
        return Family(self.n, (x for x in self.members if x != mask))


def same_n(a: Family, b: Family) -> int:
    if a.n != b.n:
        raise AmbientSizeError(f"ambient size mismatch: n={a.n} vs n={b.n}")
    return a.n


def _subsets(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def down_closure_bits(n: int, bits: int) -> int:
    """Down-closure of a dense bitset: one shift per element."""
    for i in range(n):
        bits |= (bits & has_element_bits(n, i)) >> (1 << i)
    return bits


def up_closure_bits(n: int, bits: int) -> int:
    for i in range(n):
        bits |= (bits & ~has_element_bits(n, i)) << (1 << i)
    return bits & full_bits(n)


def down_closure(fam: Family) -> Family:
    n = fam.n
    if fam.dense:
        return Family.from_bits(n, down_closure_bits(n, fam.bits))
    out: set[int] = set()
    for x in fam.members:
        if x not in out:
            out.update(_subsets(x))
    return Family(n, out)


def up_closure(fam: Family) -> Family:
    n = fam.n
    if fam.dense:
        return Family.from_bits(n, up_closure_bits(n, fam.bits))
    full = (1 << n) - 1
    out: set[int] = set()
    for x in fam.members:
        if x not in out:
            out.update(s | x for s in _subsets(full ^ x))
    return Family(n, out)


def complement_family(fam: Family) -> Family:
    full = (1 << fam.n) - 1
    return Family(fam.n, (full ^ x for x in fam.members))


def is_down_set(fam: Family) -> bool:
    if fam.dense:
        return down_closure(fam).bits == fam.bits
    ms = set(fam.members)
    return all(x ^ (1 << i) in ms for x in ms for i in range(fam.n) if x >> i & 1)


def is_up_set(fam: Family) -> bool:
    return is_down_set(complement_family(fam))


# Pairwise relations between two masks over [n].  Every family predicate is
# "all pairs (including a member with itself) satisfy the relation".


def t_intersecting_pair(a: int, b: int, n: int, t: int = 1) -> bool:
    return popcount(a & b) >= t


def s_union_pair(a: int, b: int, n: int, s: int = 1) -> bool:
    return popcount(a | b) <= n - s


def ts_pair(a: int, b: int, n: int, t: int = 1, s: int = 1) -> bool:
    return popcount(a & b) >= t and popcount(a | b) <= n - s


def _all_pairs(fam: Family, rel) -> bool:
    ms = fam.members
    for k, a in enumerate(ms):
        for b in ms[k:]:
            if not rel(a, b):
                return False
    return True


def _all_cross(f: Family, g: Family, rel) -> bool:
    same_n(f, g)
    return all(rel(a, b) for a in f.members for b in g.members)


def _check_ts(t: int, s: int) -> None:
    if t < 1 or s < 1:
        raise ValueError("t and s must be >= 1")


def is_t_intersecting(fam: Family, t: int = 1) -> bool:
    _check_ts(t, 1)
    return _all_pairs(fam, lambda a, b: popcount(a & b) >= t)


def is_s_union(fam: Family, s: int = 1) -> bool:
    _check_ts(1, s)
    cap = fam.n - s
    return _all_pairs(fam, lambda a, b: popcount(a | b) <= cap)


def is_ts_family(fam: Family, t: int, s: int) -> bool:
    _check_ts(t, s)
    n = fam.n
    return _all_pairs(fam, lambda a, b: ts_pair(a, b, n, t, s))


def is_intersecting(fam: Family) -> bool:
    return is_t_intersecting(fam, 1)


def is_union(fam: Family) -> bool:
    return is_s_union(fam, 1)


def is_iu(fam: Family) -> bool:
    return is_ts_family(fam, 1, 1)


def is_cross_ts(f: Family, g: Family, t: int, s: int) -> bool:
    _check_ts(t, s)
    n = same_n(f, g)
    return _all_cross(f, g, lambda a, b: ts_pair(a, b, n, t, s))


def is_cross_intersecting(f: Family, g: Family) -> bool:
    return _all_cross(f, g, lambda a, b: a & b != 0)


def is_cross_union(f: Family, g: Family) -> bool:
    full = (1 << same_n(f, g)) - 1
    return _all_cross(f, g, lambda a, b: a | b != full)


def is_cross_iu(f: Family, g: Family) -> bool:
    return is_cross_ts(f, g, 1, 1)


def covering_number(fam: Family) -> int:
    """Smallest size of a set meeting every member (0 for the empty family)."""
    if 0 in fam:
        raise ValueError("covering number undefined: empty set member")
    if not fam.members:
        return 0
    for k in range(1, fam.n + 1):
        for combo in combinations(range(fam.n), k):
            t = sum(1 << i for i in combo)
            if all(x & t for x in fam.members):
                return k
    raise AssertionError("unreachable: [n] covers every non-empty set")


def minimum_covers(fam: Family) -> list[int]:
    """All covers of size covering_number(fam), as masks in ascending order."""
    k = covering_number(fam)
    masks = (sum(1 << i for i in combo) for combo in combinations(range(fam.n), k))
    return sorted(t for t in masks if all(x & t for x in fam.members))


def degree(fam: Family, i: int) -> int:
    """Number of members containing 0-based element i."""
    if fam.dense:
        return popcount(fam.bits & has_element_bits(fam.n, i))
    return sum(1 for x in fam.members if x >> i & 1)


def max_degree(fam: Family) -> int:
    return max((degree(fam, i) for i in range(fam.n)), default=0)


def link_and_deletion(fam: Family, element: int) -> tuple[Family, Family]:
    """Split on a 1-based element: (link, deletion).

    link = {F minus element : element in F}, deletion = {F : element not in F};
    both stay over the same n with the element's bit unused.
    """
    if not 1 <= element <= fam.n:
        raise ValueError(f"element {element} out of range 1..{fam.n}")
    i = element - 1
    bit = 1 << i
    if fam.dense:
        has = has_element_bits(fam.n, i)
        return (
            Family.from_bits(fam.n, (fam.bits & has) >> bit),
            Family.from_bits(fam.n, fam.bits & ~has),
        )
    return (
        Family(fam.n, (x ^ bit for x in fam.members if x & bit)),
        Family(fam.n, (x for x in fam.members if not x & bit)),
    )


def restrict_n(fam: Family, n: int) -> Family:
    """Reinterpret a family over a smaller ground set (members must fit)."""
    return Family(n, fam.members)


class WeightFn:
    """A function 2^[n] -> N stored densely, indexed by set mask."""

    __slots__ = ("n", "values")

    def __init__(self, n: int, values: Sequence[int]):
        _check_n(n)
        if len(values) != 1 << n:
            raise ValueError(f"need {1 << n} values for n={n}, got {len(values)}")
        vals = tuple(int(v) for v in values)
        if any(v < 0 for v in vals):
            raise ValueError("weights must be natural numbers")
        if sum(vals) >= 1 << 64:
            raise ValueError("total weight does not fit in 64 bits")
        self.n = n
        self.values: tuple[int, ...] = vals

    @classmethod
    def characteristic(cls, fam: Family) -> WeightFn:
        vals = [0] * (1 << fam.n)
        for x in fam.members:
            vals[x] = 1
        return cls(fam.n, vals)

    @classmethod
    def zero(cls, n: int) -> WeightFn:
        return cls(n, [0] * (1 << n))

    def __getitem__(self, mask: int) -> int:
        return self.values[mask]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightFn):
            return NotImplemented
        return self.n == other.n and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.n, self.values))

    def __repr__(self) -> str:
        items = ", ".join(f"{fmt_set(x)}: {v}" for x, v in enumerate(self.values) if v)
        return f"WeightFn(n={self.n}, {{{items}}})"

    def total(self) -> int:
        return sum(self.values)

    def is_monotone(self) -> bool:
        return self.monotonicity_violation() is None

    def monotonicity_violation(self) -> tuple[int, int] | None:
        """First (X, i) with value(X) > value(X minus bit i), if any."""
        v = self.values
        for x in range(1 << self.n):
            for i in range(self.n):
                if x >> i & 1 and v[x] > v[x ^ (1 << i)]:
                    return x, i
        return None

    def support(self) -> Family:
        return Family(self.n, (x for x, v in enumerate(self.values) if v))
