"""Maximal-rank subgroup families of classical groups and torus containment.

Every family is a symbolic descriptor (kind plus integer parameters) whose
torus containment is a predicate on the cycle data of a torus class:
subset sums of the parts, signs, divisibility and block structure.

Predicates run on a ``Profile``, a tuple of precomputed features of one
class.  ``profile`` builds it from scratch; ``walk_profiles`` builds it
incrementally while enumerating all classes of a rank, which is what the
bulk verifications use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, NamedTuple

from .errors import ContractError
from .weyl_stats import (ClassData, GroupFamily, Kind, TorusClass, format_class,
                         make_class, torus_classes)


def _prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _ambient_sign(family: GroupFamily) -> int:
    return -1 if family.kind is Kind.DMINUS else 1


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


# ------------------------------------------------------------------ profiles

class Profile(NamedTuple):
    """Containment-relevant features of one torus class.

    Bitmasks have bit k set when some sub-multiset of parts has sum k:
    ``sums`` over all parts, ``sums_pos`` over positive parts, ``sums_plus`` /
    ``sums_minus`` over sub-multisets with sign product +1 / -1, ``halves``
    over half-lengths of even parts.
    """

    data: ClassData
    sums: int
    sums_pos: int
    sums_plus: int
    sums_minus: int
    halves: int
    gcd: int
    sign: int
    gu_ok: bool
    all_pos: bool
    all_even: bool
    packed: int  # every field above except data, gcd, as one bit string


# Layout of ``packed``: five bitmask segments of ``rank + 1`` bits each,
# followed by the flag bits below.
_FLAG_GU, _FLAG_POS, _FLAG_EVEN, _FLAG_PLUS, _FLAG_MINUS = range(5)
_BIT_FIELDS = ("sums", "sums_pos", "sums_plus", "sums_minus", "halves")


def _pack(state: tuple, width: int) -> int:
    sums, sums_pos, sp, sm, halves, _, sign, gu_ok, all_pos, all_even = state
    flags = (gu_ok | all_pos << 1 | all_even << 2 | (sign > 0) << 3 | (sign < 0) << 4)
    return (sums | sums_pos << width | sp << 2 * width | sm << 3 * width
            | halves << 4 * width | flags << 5 * width)


def _make(data, state: tuple, width: int) -> Profile:
    return Profile(data, *state, _pack(state, width))


def profile(data: ClassData) -> Profile:
    signed = bool(data) and isinstance(data[0], tuple)
    state = _EMPTY
    for part in data:
        state = _extend(state, part if signed else (part, 1), signed)
    rank = sum(p[0] for p in data) if signed else sum(data)
    return _make(data, state, rank + 1)


# (sums, sums_pos, sums_plus, sums_minus, halves, gcd, sign, gu_ok, all_pos, all_even)
_EMPTY = (1, 1, 1, 0, 1, 0, 1, True, True, True)


def _extend(state: tuple, part: tuple[int, int], signed: bool) -> tuple:
    sums, sums_pos, sp, sm, halves, g, sign, gu_ok, all_pos, all_even = state
    a, s = part
    even = a % 2 == 0
    if s > 0:
        sums_pos |= sums_pos << a
        sp, sm = sp | (sp << a), sm | (sm << a)
    else:
        sp, sm = sp | (sm << a), sm | (sp << a)
    return (sums | (sums << a), sums_pos, sp, sm,
            halves | (halves << (a // 2)) if even else halves,
            math.gcd(g, a), sign * s,
            gu_ok and (s > 0) == even if signed else gu_ok,
            all_pos and s > 0, all_even and even)


def walk_profiles(rank: int, signed: bool, visit: Callable[[Profile, int], None]) -> None:
    """Call ``visit(profile, class_size)`` for every class of the rank.

    Classes are partitions (``signed`` false) or signed partitions, in the
    canonical order of ``weyl_stats``.  The class size is taken in S_n, or
    in W(B_m) for signed data (for type D the merged class has that size).
    """
    if signed:
        choices = [(a, s) for a in range(rank, 0, -1) for s in (1, -1)]
        order = 2 ** rank * math.factorial(rank)
    else:
        choices = [(a, 1) for a in range(rank, 0, -1)]
        order = math.factorial(rank)
    width = rank + 1

    def rec(remaining, start, data, state, cent, last, mult):
        if remaining == 0:
            visit(_make(data, state, width), order // cent)
            return
        for idx in range(start, len(choices)):
            part = choices[idx]
            a = part[0]
            if a > remaining:
                continue
            new_mult = mult + 1 if part == last else 1
            factor = (2 * a if signed else a) * new_mult
            rec(remaining - a, idx, data + ((part if signed else a),),
                _extend(state, part, signed), cent * factor, part, new_mult)

    rec(rank, 0, (), _EMPTY, 1, None, 0)


# ------------------------------------------------------------------ families

@dataclass(frozen=True)
class SubgroupFamily:
    """One class of maximal subgroups of maximal rank, described symbolically.

    ``kind`` is one of ``ParabolicStab``, ``NondegStabA``, ``TotSingStab``,
    ``NondegStabSp``, ``NondegStabO``, ``HyperplaneSO``, ``Imprimitive``,
    ``TotSingPairGL``, ``ExtField``, ``GUOverQ``, ``TorusNormalizer``.
    """

    family: GroupFamily
    kind: str
    params: tuple = ()

    @property
    def tag(self) -> str:
        p = self.params
        if self.kind in ("ParabolicStab", "TotSingStab"):
            return f"P({p[0]})"
        if self.kind in ("NondegStabA", "NondegStabSp"):
            return f"N({p[0]})"
        if self.kind == "NondegStabO":
            return f"N({p[0]},{_sign_char(p[1])})"
        if self.kind == "HyperplaneSO":
            return f"SO({_sign_char(p[0])})"
        if self.kind == "Imprimitive":
            if len(p) == 3:
                return f"Imp({p[0]},{p[1]},{_sign_char(p[2])})"
            return f"Imp({p[0]},{p[1]})"
        if self.kind == "TotSingPairGL":
            return "GL"
        if self.kind == "ExtField":
            return f"EF({p[0]})"
        if self.kind == "GUOverQ":
            return "GU"
        return f"Norm({format_class(p[0])})"

    def __str__(self):
        return self.tag

    @property
    def predicate(self) -> Callable[[Profile], bool]:
        return _predicate(self)

    def contains(self, t: TorusClass) -> bool:
        if t.family != self.family:
            raise ContractError(f"torus class of {t.family} tested against {self.family}")
        return self.predicate(profile(t.data))


def _groups_possible(parts, ell: int, t: int, sign=None) -> bool:
    """Can the parts be split into t groups of sum ell (each of sign product ``sign``)?"""
    items = sorted(parts, reverse=True)
    if sum(a for a, _ in items) != ell * t:
        return False
    loads = [0] * t
    signs = [1] * t

    def place(i):
        if i == len(items):
            return sign is None or all(s == sign for s in signs)
        a, s = items[i]
        tried = set()
        for g in range(t):
            key = (loads[g], signs[g])
            if key in tried or loads[g] + a > ell:
                continue
            tried.add(key)
            loads[g] += a
            signs[g] *= s
            if place(i + 1):
                return True
            loads[g] -= a
            signs[g] *= s
        return False

    return place(0)


@lru_cache(maxsize=None)
def _predicate(F: SubgroupFamily) -> Callable[[Profile], bool]:
    k = F.family.kind
    p = F.params
    if F.kind in ("ParabolicStab", "NondegStabA", "NondegStabSp"):
        bit = 1 << p[0]
        return lambda pr: bool(pr.sums & bit)
    if F.kind == "TotSingStab":
        bit = 1 << p[0]
        if k is Kind.UA:
            return lambda pr: bool(pr.halves & bit)
        return lambda pr: bool(pr.sums_pos & bit)
    if F.kind == "NondegStabO":
        bit = 1 << p[0]
        if p[1] > 0:
            return lambda pr: bool(pr.sums_plus & bit)
        return lambda pr: bool(pr.sums_minus & bit)
    if F.kind == "HyperplaneSO":
        eps = p[0]
        return lambda pr: pr.sign == eps
    if F.kind == "Imprimitive":
        ell, t = p[0], p[1]
        eps = p[2] if len(p) == 3 else None

        def imprimitive(pr):
            data = pr.data
            parts = data if data and isinstance(data[0], tuple) else [(a, 1) for a in data]
            if any(a > ell for a, _ in parts):
                return False
            return _groups_possible(parts, ell, t, eps)
        return imprimitive
    if F.kind == "TotSingPairGL":
        if k is Kind.UA:
            return lambda pr: pr.all_even
        return lambda pr: pr.all_pos
    if F.kind == "ExtField":
        b = p[0]
        return lambda pr: pr.gcd % b == 0
    if F.kind == "GUOverQ":
        return lambda pr: pr.gu_ok
    if F.kind == "TorusNormalizer":
        target = p[0]
        return lambda pr: pr.data == target
    raise ContractError(f"unknown family kind {F.kind}")


def _shape(F: SubgroupFamily):
    """Decompose a predicate as (bit field, bit) or (flag, value) or a callable."""
    k, p = F.family.kind, F.params
    if F.kind in ("ParabolicStab", "NondegStabA", "NondegStabSp"):
        return ("bit", "sums", 1 << p[0])
    if F.kind == "TotSingStab":
        return ("bit", "halves" if k is Kind.UA else "sums_pos", 1 << p[0])
    if F.kind == "NondegStabO":
        return ("bit", "sums_plus" if p[1] > 0 else "sums_minus", 1 << p[0])
    if F.kind == "HyperplaneSO":
        return ("sign", p[0])
    if F.kind == "TotSingPairGL":
        return ("flag", "all_even" if k is Kind.UA else "all_pos")
    if F.kind == "ExtField":
        return ("gcd", p[0])
    if F.kind == "GUOverQ":
        return ("flag", "gu_ok")
    return ("call", F.predicate)


def union_test(families, own=None) -> Callable[[Profile], bool]:
    """Fast predicate: the class equals ``own`` or lies in one of the families.

    Bit and flag tests are merged into one mask against ``Profile.packed``,
    so the cost does not grow with the number of subset-stabilizer families.
    """
    families = list(families)
    if not families:
        return lambda pr: pr.data == own
    width = families[0].family.rank + 1
    flag_bit = {"gu_ok": _FLAG_GU, "all_pos": _FLAG_POS, "all_even": _FLAG_EVEN}
    mask, divisors, calls = 0, [], []
    for F in families:
        shape = _shape(F)
        if shape[0] == "bit":
            mask |= shape[2] << _BIT_FIELDS.index(shape[1]) * width
        elif shape[0] == "flag":
            mask |= 1 << (5 * width + flag_bit[shape[1]])
        elif shape[0] == "sign":
            mask |= 1 << (5 * width + (_FLAG_PLUS if shape[1] > 0 else _FLAG_MINUS))
        elif shape[0] == "gcd":
            divisors.append(shape[1])
        else:
            calls.append(shape[1])
    if not divisors and not calls:
        return lambda pr: bool(pr.packed & mask) or pr.data == own
    divisors = tuple(divisors)
    calls = tuple(calls)

    def test(pr: Profile) -> bool:
        if pr.packed & mask or pr.data == own:
            return True
        g = pr.gcd
        for b in divisors:
            if g % b == 0:
                return True
        for c in calls:
            if c(pr):
                return True
        return False
    return test


def _n_key(a: int, eps: int, m: int, ambient: int) -> tuple[int, int]:
    """Canonical representative of {(a, eps), (m - a, eps * ambient)}."""
    other = (m - a, eps * ambient)
    return min((a, eps), other, key=lambda x: (x[0], -x[1]))


@lru_cache(maxsize=256)
def _catalog(family: GroupFamily) -> tuple[SubgroupFamily, ...]:
    if not family.classical:
        raise ContractError("the subgroup catalog covers classical families; use g2_incidence for G2")
    k, r = family.kind, family.rank
    out: list[SubgroupFamily] = []

    def add(kind, *params):
        out.append(SubgroupFamily(family, kind, tuple(params)))

    divisors = [d for d in range(1, r) if r % d == 0]
    primes = [b for b in range(2, r + 1) if r % b == 0 and _prime(b)]

    if k is Kind.A:
        for j in range(1, r):
            add("ParabolicStab", j)
        for ell in divisors:
            add("Imprimitive", ell, r // ell)
        for b in primes:
            add("ExtField", b)
    elif k is Kind.UA:
        for j in range(1, r // 2 + 1):
            add("NondegStabA", j)
        for j in range(1, r // 2 + 1):
            add("TotSingStab", j)
        for ell in divisors:
            add("Imprimitive", ell, r // ell)
        if r % 2 == 0:
            add("TotSingPairGL")
        for b in primes:
            if b % 2:
                add("ExtField", b)
    elif k is Kind.C:
        for j in range(1, r + 1):
            add("TotSingStab", j)
        for a in range(1, r // 2 + 1):
            add("NondegStabSp", a)
        for ell in divisors:
            add("Imprimitive", ell, r // ell)
        add("TotSingPairGL")
        for b in primes:
            add("ExtField", b)
        add("GUOverQ")
        if family.q_even:
            add("HyperplaneSO", 1)
            add("HyperplaneSO", -1)
    elif k is Kind.B:
        for a in range(1, r + 1):
            for eps in (1, -1):
                add("NondegStabO", a, eps)
        for j in range(1, r + 1):
            add("TotSingStab", j)
    else:
        ambient = _ambient_sign(family)
        for j in range(1, r + 1 if k is Kind.DPLUS else r):
            add("TotSingStab", j)
        seen = set()
        for a in range(1, r):
            for eps in (1, -1):
                key = _n_key(a, eps, r, ambient)
                if key not in seen:
                    seen.add(key)
                    add("NondegStabO", *key)
        for ell in divisors:
            t = r // ell
            for eps in (1, -1):
                if eps ** t == ambient:
                    add("Imprimitive", ell, t, eps)
        if k is Kind.DPLUS:
            add("TotSingPairGL")
        for b in primes:
            add("ExtField", b)
        if (k is Kind.DPLUS) == (r % 2 == 0):
            add("GUOverQ")
    return tuple(out)


def subgroup_families(family: GroupFamily, normalizers: bool = True) -> list[SubgroupFamily]:
    """Catalog for a classical family; one ``TorusNormalizer`` per torus class if asked."""
    out = list(_catalog(family))
    if normalizers:
        out += [SubgroupFamily(family, "TorusNormalizer", (t.data,)) for t in torus_classes(family)]
    return out


def normalizer(t: TorusClass) -> SubgroupFamily:
    return SubgroupFamily(t.family, "TorusNormalizer", (t.data,))


def contains(F: SubgroupFamily, t: TorusClass) -> bool:
    return F.contains(t)


def families_containing(t: TorusClass) -> list[SubgroupFamily]:
    """M_con of a regular semisimple element with torus t: every family containing t."""
    pr = profile(t.data)
    return [F for F in _catalog(t.family) if F.predicate(pr)] + [normalizer(t)]


def shares_overgroup(t1: TorusClass, t2: TorusClass) -> bool:
    """True iff some family contains both classes (the negation of t1 ~ t2)."""
    if t1.family != t2.family:
        raise ContractError("torus classes from different families")
    if t1.data == t2.data:
        return True
    p1, p2 = profile(t1.data), profile(t2.data)
    return any(F.predicate(p1) and F.predicate(p2) for F in _catalog(t1.family))


def incidence_matrix(family: GroupFamily) -> tuple[list[TorusClass], list[SubgroupFamily], list[list[int]]]:
    """Rows are torus classes, columns the catalog (normalizers included), cells 0/1."""
    rows = torus_classes(family)
    cols = subgroup_families(family)
    profs = [profile(t.data) for t in rows]
    return rows, cols, [[int(F.predicate(pr)) for F in cols] for pr in profs]


def iter_profiles(family: GroupFamily) -> Iterator[tuple[TorusClass, Profile]]:
    for t in torus_classes(family):
        yield t, profile(t.data)


def torus(family: GroupFamily, data: ClassData) -> TorusClass:
    return make_class(family, data)
