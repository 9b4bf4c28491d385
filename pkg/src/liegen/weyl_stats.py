"""Torus classes of classical groups and their Weyl-group probabilities.

A class of maximal tori of a finite classical group is labelled by a
partition (types A and 2A) or by a signed partition (types B, C, D).  The
probability attached to a class is the proportion of the Weyl group (or of
the twisted coset) lying in the corresponding conjugacy class.  All values
are exact ``Fraction`` objects.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence, Union

from .errors import ContractError, RangeError

Partition = tuple[int, ...]
SignedPart = tuple[int, int]  # (length, sign) with sign in {+1, -1}
SignedPartition = tuple[SignedPart, ...]
ClassData = Union[Partition, SignedPartition, int]


@dataclass(frozen=True)
class RankCaps:
    """Safety bounds on enumeration sizes."""

    partitions: int = 60
    signed_partitions: int = 40
    fixed_part: int = 80


CAPS = RankCaps()


class Kind(str, enum.Enum):
    A = "A"
    UA = "2A"
    C = "C"
    B = "B"
    DPLUS = "D+"
    DMINUS = "D-"
    G2 = "G2"


_MIN_RANK = {Kind.A: 2, Kind.UA: 3, Kind.C: 2, Kind.B: 3, Kind.DPLUS: 4,
             Kind.DMINUS: 4, Kind.G2: 2}
SIGNED_KINDS = frozenset({Kind.C, Kind.B, Kind.DPLUS, Kind.DMINUS})
CLASSICAL_KINDS = frozenset(set(Kind) - {Kind.G2})


@dataclass(frozen=True)
class GroupFamily:
    """Ambient group schema.  ``q`` is symbolic: only its flags exist.

    ``rank`` is ``n`` for types A/2A (natural module of dimension n) and
    ``m`` for B/C/D (dimension 2m+1 or 2m).  ``q_even`` is meaningful for
    type C only, ``p3`` (3 divides q) for G2 only.
    """

    kind: Kind
    rank: int
    q_even: bool = False
    p3: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.G2:
            if self.rank != 2:
                raise RangeError("G2 has rank 2")
        elif not _MIN_RANK[self.kind] <= self.rank:
            raise RangeError(
                f"{self.kind.value} needs rank >= {_MIN_RANK[self.kind]}, got {self.rank}")
        cap = CAPS.signed_partitions if self.kind in SIGNED_KINDS else CAPS.partitions
        if self.rank > cap:
            raise RangeError(f"rank {self.rank} exceeds cap {cap}")
        if self.q_even and self.kind is not Kind.C:
            raise ContractError("q parity only matters for type C")
        if self.p3 and self.kind is not Kind.G2:
            raise ContractError("the 3|q flag only applies to G2")

    @classmethod
    def linear(cls, n: int) -> GroupFamily:
        return cls(Kind.A, n)

    @classmethod
    def unitary(cls, n: int) -> GroupFamily:
        return cls(Kind.UA, n)

    @classmethod
    def symplectic(cls, m: int, q: str = "odd") -> GroupFamily:
        if q not in ("odd", "even"):
            raise ContractError(f"q parity must be 'odd' or 'even', got {q!r}")
        return cls(Kind.C, m, q_even=(q == "even"))

    @classmethod
    def orthogonal_odd(cls, m: int) -> GroupFamily:
        return cls(Kind.B, m)

    @classmethod
    def orthogonal_plus(cls, m: int) -> GroupFamily:
        return cls(Kind.DPLUS, m)

    @classmethod
    def orthogonal_minus(cls, m: int) -> GroupFamily:
        return cls(Kind.DMINUS, m)

    @classmethod
    def g2(cls, p3: bool) -> GroupFamily:
        return cls(Kind.G2, 2, p3=p3)

    @property
    def signed(self) -> bool:
        return self.kind in SIGNED_KINDS

    @property
    def classical(self) -> bool:
        return self.kind is not Kind.G2

    @property
    def weyl_order(self) -> int:
        """Order of W (or of the coset sigma*W for twisted types)."""
        if self.kind in (Kind.A, Kind.UA):
            return math.factorial(self.rank)
        if self.kind is Kind.G2:
            return 12
        order = 2 ** self.rank * math.factorial(self.rank)
        return order // 2 if self.kind in (Kind.DPLUS, Kind.DMINUS) else order

    def __str__(self):
        if self.kind is Kind.G2:
            return "G2(3|q)" if self.p3 else "G2(3!|q)"
        if self.kind is Kind.C:
            return f"C({self.rank},q {'even' if self.q_even else 'odd'})"
        return f"{self.kind.value}({self.rank})"


# G2 classes w1..w6: short reflection, long reflection, 1, -1, order 3, order 6.
G2_CLASS_SIZES = {1: 3, 2: 3, 3: 1, 4: 1, 5: 2, 6: 2}
G2_TORUS_ORDERS = {1: "q^2-1", 2: "q^2-1", 3: "(q-1)^2", 4: "(q+1)^2",
                   5: "q^2+q+1", 6: "q^2-q+1"}


@dataclass(frozen=True)
class TorusClass:
    """One X(q)-class of maximal tori, identified with a Weyl class."""

    family: GroupFamily
    data: ClassData
    probability: Fraction = field(compare=False)
    split: bool = False

    def __str__(self):
        return format_class(self.data)

    @property
    def label(self) -> str:
        return format_class(self.data)


# ---------------------------------------------------------------- formatting

def format_class(data: ClassData) -> str:
    if isinstance(data, int):
        return str(data)
    if data and isinstance(data[0], tuple):
        return ",".join(f"{a}{'+' if s > 0 else '-'}" for a, s in data)
    return ",".join(str(a) for a in data)


def parse_class(text: str) -> ClassData:
    """Inverse of ``format_class``; returns canonical (sorted) data."""
    text = text.strip().replace(" ", "")
    if not text:
        raise ValueError("empty class label")
    items = text.split(",")
    if all(item[-1] in "+-" for item in items):
        parts = [(int(item[:-1]), 1 if item[-1] == "+" else -1) for item in items]
        return canonical_signed(parts)
    if any(item[-1] in "+-" for item in items):
        raise ValueError(f"mixed signed and unsigned parts in {text!r}")
    return tuple(sorted((int(item) for item in items), reverse=True))


def _signed_key(part: SignedPart) -> tuple[int, int]:
    return (-part[0], -part[1])


def canonical_signed(parts: Sequence[SignedPart]) -> SignedPartition:
    for a, s in parts:
        if a < 1 or s not in (1, -1):
            raise ValueError(f"bad signed part {(a, s)}")
    return tuple(sorted(parts, key=_signed_key))


# --------------------------------------------------------------- enumeration

def partitions(n: int, caps: RankCaps = CAPS) -> list[Partition]:
    """All partitions of n in reverse lexicographic order."""
    if not 1 <= n <= caps.partitions:
        raise RangeError(f"n must lie in [1, {caps.partitions}], got {n}")
    return list(_partitions(n, n))


def _partitions(n: int, largest: int) -> Iterator[Partition]:
    """Partitions of n with parts <= largest, in reverse lexicographic order."""
    if n == 0:
        yield ()
        return
    part = []
    rest = n
    while rest:
        a = min(largest, rest)
        part.append(a)
        rest -= a
    while True:
        yield tuple(part)
        ones = 0
        while part and part[-1] == 1:
            part.pop()
            ones += 1
        if not part:
            return
        k = part.pop() - 1
        rest = ones + 1
        part.append(k)
        while rest > k:
            part.append(k)
            rest -= k
        if rest:
            part.append(rest)


def signed_partitions(m: int, caps: RankCaps = CAPS) -> list[SignedPartition]:
    """All signed partitions of m, ordered by (length desc, + before -)."""
    if not 1 <= m <= caps.signed_partitions:
        raise RangeError(f"m must lie in [1, {caps.signed_partitions}], got {m}")
    return [d for d, _, _ in _signed_table(m)]


@lru_cache(maxsize=4)
def _signed_table(m: int) -> tuple[tuple[SignedPartition, int, int], ...]:
    """(signed partition, W(B_m) centralizer order, sign product) for every class.

    Part types are visited in key order with multiplicities descending, which
    reproduces the lexicographic order on sorted part sequences.
    """
    types = [(a, s) for a in range(m, 0, -1) for s in (1, -1)]
    out = []
    prefix: list[SignedPart] = []

    def rec(i: int, rest: int, z: int, sign: int) -> None:
        if rest == 0:
            out.append((tuple(prefix), z, sign))
            return
        i = max(i, 2 * (m - rest))
        if i == len(types):
            return
        a, s = types[i]
        for k in range(rest // a, -1, -1):
            prefix.extend([(a, s)] * k)
            rec(i + 1, rest - k * a, z * (2 * a) ** k * math.factorial(k), sign * s ** k)
            if k:
                del prefix[-k:]

    rec(0, m, 1, 1)
    return tuple(out)


def sign_product(parts: SignedPartition) -> int:
    prod = 1
    for _, s in parts:
        prod *= s
    return prod


def is_split_d_class(parts: SignedPartition) -> bool:
    """All cycles even and positive: the W(B)-class splits into two W(D)-classes."""
    return all(s > 0 and a % 2 == 0 for a, s in parts)


# ------------------------------------------------------------ probabilities

def _multiplicities(items) -> dict:
    counts: dict = {}
    for item in items:
        counts[item] = counts.get(item, 0) + 1
    return counts


def centralizer_order_sym(parts: Partition) -> int:
    """z_lambda = prod i^{a_i} a_i!, the centralizer order in S_n."""
    z = 1
    for i, a in _multiplicities(parts).items():
        z *= i ** a * math.factorial(a)
    return z


def centralizer_order_hyperoctahedral(parts: SignedPartition) -> int:
    """prod (2i)^{a} a! over (length i, sign) multiplicities, in W(B_m)."""
    z = 1
    for (i, _), a in _multiplicities(parts).items():
        z *= (2 * i) ** a * math.factorial(a)
    return z


def class_size(family: GroupFamily, data: ClassData) -> int:
    """Number of elements of W (or of the coset) in the class; merged for split D."""
    if family.kind is Kind.G2:
        return G2_CLASS_SIZES[data]
    if family.kind in (Kind.A, Kind.UA):
        return math.factorial(family.rank) // centralizer_order_sym(data)
    return 2 ** family.rank * math.factorial(family.rank) // centralizer_order_hyperoctahedral(data)


def _belongs(family: GroupFamily, data) -> bool:
    if family.kind is Kind.G2:
        return isinstance(data, int) and data in G2_CLASS_SIZES
    if not isinstance(data, tuple) or not data:
        return False
    if family.signed:
        if not all(isinstance(p, tuple) for p in data):
            return False
        if sum(a for a, _ in data) != family.rank or canonical_signed(data) != data:
            return False
        if family.kind is Kind.DPLUS:
            return sign_product(data) == 1
        if family.kind is Kind.DMINUS:
            return sign_product(data) == -1
        return True
    return (all(isinstance(a, int) and a > 0 for a in data)
            and sum(data) == family.rank and list(data) == sorted(data, reverse=True))


def make_class(family: GroupFamily, data: ClassData) -> TorusClass:
    if not _belongs(family, data):
        raise ContractError(f"{format_class(data) if data else data!r} is not a torus class of {family}")
    split = family.kind is Kind.DPLUS and is_split_d_class(data)
    return TorusClass(family, data, Fraction(class_size(family, data), family.weyl_order), split)


_CACHED_RANK = 20


@lru_cache(maxsize=64)
def _cached_torus_classes(family: GroupFamily) -> tuple[TorusClass, ...]:
    return _torus_classes(family)


def _torus_classes(family: GroupFamily) -> tuple[TorusClass, ...]:
    order = family.weyl_order
    if family.kind is Kind.G2:
        return tuple(TorusClass(family, d, Fraction(G2_CLASS_SIZES[d], order), False)
                     for d in G2_CLASS_SIZES)
    if not family.signed:
        return tuple(TorusClass(family, d, Fraction(class_size(family, d), order), False)
                     for d in partitions(family.rank))
    want = {Kind.DPLUS: 1, Kind.DMINUS: -1}.get(family.kind)
    full = 2 ** family.rank * math.factorial(family.rank)
    dplus = family.kind is Kind.DPLUS
    out = []
    for d, z, sign in _signed_table(family.rank):
        if want is not None and sign != want:
            continue
        out.append(TorusClass(family, d, Fraction(full // order, z), dplus and is_split_d_class(d)))
    return tuple(out)


def torus_classes(family: GroupFamily) -> list[TorusClass]:
    # large ranks hold ~10^5 classes each and are rebuilt instead of cached
    if family.rank <= _CACHED_RANK:
        return list(_cached_torus_classes(family))
    return list(_torus_classes(family))


def class_probability(family: GroupFamily, t: TorusClass) -> Fraction:
    if t.family != family:
        raise ContractError(f"class {t} belongs to {t.family}, not {family}")
    if not _belongs(family, t.data):
        raise ContractError(f"{t} is not a torus class of {family}")
    return Fraction(class_size(family, t.data), family.weyl_order)


def exact_sum(values) -> Fraction:
    """Sum of fractions via one common denominator (fast for many terms)."""
    values = list(values)
    if not values:
        return Fraction(0)
    denom = math.lcm(*{v.denominator for v in values})
    return Fraction(sum(v.numerator * (denom // v.denominator) for v in values), denom)


def distinguished_tori(family: GroupFamily) -> list[ClassData]:
    """Torus types of the distinguished elements x1..x4 for a classical family."""
    k, r = family.kind, family.rank
    if k in (Kind.A, Kind.UA):
        return [(r,), (r - 1, 1)]
    plus, minus = 1, -1
    if k is Kind.B:
        rows = [[(r, minus)], [(r, plus)]]
    elif k is Kind.DMINUS:
        rows = [[(r, minus)], [(r - 1, minus), (1, plus)]]
    elif k is Kind.C and family.q_even:
        rows = [[(r, minus)], [(r - 1, minus), (1, plus)], [(r - 1, minus), (1, minus)],
                [(r, plus)]]
    elif k is Kind.C and r % 2 == 0:
        rows = [[(r, minus)], [(r - 1, minus), (1, plus)]]
    elif k is Kind.C:
        rows = [[(r, minus)], [(r - 1, minus), (1, minus)], [(r, plus)]]
    elif k is Kind.DPLUS and r % 2 == 1:
        rows = [[(r, plus)], [(r - 1, minus), (1, minus)]]
    elif k is Kind.DPLUS:
        rows = [[(r, plus)], [(r - 1, minus), (1, minus)], [(r - 2, minus), (2, minus)],
                [(r - 2, minus), (1, minus), (1, plus)]]
    else:
        raise ContractError(f"no distinguished elements for {family}")
    return [canonical_signed([p for p in row if p[0] > 0]) for row in rows]


def min_class_probability(family: GroupFamily) -> tuple[TorusClass, Fraction]:
    """Least probability among the tori of the distinguished elements x1..x4.

    This is the quantity bounded below by 1/(4r) for classical groups: the
    generating partner of a typical element is drawn from the torus class of
    one of these elements.  Ties go to the earliest class in canonical order.
    """
    if not family.classical:
        raise ContractError("min_class_probability is defined for classical families")
    def canonical_rank(data):
        return tuple(_signed_key(p) if family.signed else -p for p in data)

    best = None
    for data in sorted(set(distinguished_tori(family)), key=canonical_rank):
        t = make_class(family, data)
        if best is None or t.probability < best.probability:
            best = t
    return best, best.probability


# ----------------------------------------------------- sign statistics in W(B)

@lru_cache(maxsize=None)
def _stirling_cycle_row(m: int) -> tuple[int, ...]:
    """Unsigned Stirling numbers c(m, k), k = 0..m."""
    row = [1]
    for n in range(1, m + 1):
        new = [0] * (n + 1)
        for k in range(1, n + 1):
            new[k] = row[k - 1] + (n - 1) * (row[k] if k < n else 0)
        row = new
    return tuple(row)


def prob_sign_product(m: int, sign: int, caps: RankCaps = CAPS) -> Fraction:
    """P(product of cycle signs of a uniform W(B_m) element equals ``sign``).

    Draw the permutation, then sign each of its k cycles independently; for
    k >= 1 the product is uniform on {+1, -1}.
    """
    if not 1 <= m <= caps.signed_partitions:
        raise RangeError(f"m must lie in [1, {caps.signed_partitions}], got {m}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    row = _stirling_cycle_row(m)
    total = Fraction(0)
    for k in range(1, m + 1):
        # P(product = sign | k cycles) = 1/2 for every k >= 1
        total += Fraction(row[k], math.factorial(m)) * Fraction(1, 2)
    return total


@lru_cache(maxsize=None)
def _derangements(n: int) -> int:
    d = [1, 0]
    for k in range(2, n + 1):
        d.append((k - 1) * (d[-1] + d[-2]))
    return d[n]


def prob_positive_fixed_part(m: int, caps: RankCaps = CAPS) -> Fraction:
    """P(a uniform W(B_m) element has at least one positive 1-cycle)."""
    if not 1 <= m <= caps.fixed_part:
        raise RangeError(f"m must lie in [1, {caps.fixed_part}], got {m}")
    none_positive = Fraction(0)
    for j in range(m + 1):
        # j fixed points, each negative with probability 1/2
        p_j = Fraction(math.comb(m, j) * _derangements(m - j), math.factorial(m))
        none_positive += p_j / 2 ** j
    return 1 - none_positive
