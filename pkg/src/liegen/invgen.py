"""Leading terms of invariable generation at Weyl-group level.

Two torus classes are related (``i ~ j``) when no maximal-rank family
contains both.  The leading two-element probability is the sum over
ordered related pairs of the product of class probabilities.  The
distinguished element sets A_b are checked by intersecting the torus sets
T(x) = union of the families containing the torus of x.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractError, RangeError
from .rootsys_g2 import g2_relation
from .torus_lattice import (Profile, families_containing, profile, subgroup_families,
                            union_test, walk_profiles)
from .weyl_stats import (GroupFamily, Kind, TorusClass, exact_sum, format_class,
                         make_class, min_class_probability, distinguished_tori, torus_classes)

ORDER_RULE = "maximal order on each block"


@dataclass(frozen=True)
class ElementSpec:
    family: GroupFamily
    torus: TorusClass
    label: str
    order_rule: str = ORDER_RULE
    refinement: str = ""

    def __str__(self):
        return f"{self.label}={self.torus.label}"


@dataclass(frozen=True)
class ABSet:
    family: GroupFamily
    elements: tuple[ElementSpec, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def ab_set(family: GroupFamily) -> ABSet:
    """The distinguished elements x1..x4 for a classical family."""
    if not family.classical:
        raise RangeError("distinguished element sets exist for classical families only")
    specs = []
    rows = distinguished_tori(family)
    for i, data in enumerate(rows, start=1):
        note = ""
        if len(rows) == 4 and i in (3, 4) and family.kind is Kind.DPLUS:
            note = "x = (g, g^2) on the two blocks"
        specs.append(ElementSpec(family, make_class(family, data), f"x{i}", refinement=note))
    return ABSet(family, tuple(specs))


def element(family: GroupFamily, data, label: str = "x") -> ElementSpec:
    return ElementSpec(family, make_class(family, data), label)


def _member_test(x: ElementSpec):
    """Predicate on profiles: does the class lie in T(x)?"""
    fams = [F for F in families_containing(x.torus) if F.kind != "TorusNormalizer"]
    return union_test(fams, own=x.torus.data)


def torus_set(x: ElementSpec) -> set[TorusClass]:
    test = _member_test(x)
    return {t for t in torus_classes(x.family) if test(profile(t.data))}


def _common_family(A) -> GroupFamily:
    A = list(A)
    if not A:
        raise ContractError("the element set is empty")
    family = A[0].family
    if any(x.family != family for x in A):
        raise ContractError("elements belong to different families")
    return family


def residual_classes(A) -> set[TorusClass]:
    A = list(A)
    family = _common_family(A)
    tests = [_member_test(x) for x in A]
    return {t for t in torus_classes(family)
            if all(test(pr) for pr in [profile(t.data)] for test in tests)}


def residual_leading(A) -> Fraction:
    return exact_sum(t.probability for t in residual_classes(A))


# ------------------------------------------------------------------ relation

def _neighbor_masks(family: GroupFamily) -> tuple[list[TorusClass], list[int]]:
    """For each class, the bitset of classes sharing some family with it."""
    classes = torus_classes(family)
    profs = [profile(t.data) for t in classes]
    masks = [1 << i for i in range(len(classes))]
    for F in subgroup_families(family, normalizers=False):
        pred = F.predicate
        col = 0
        for i, pr in enumerate(profs):
            if pred(pr):
                col |= 1 << i
        for i in range(len(classes)):
            if col >> i & 1:
                masks[i] |= col
    return classes, masks


def relation_sim(family: GroupFamily) -> set[frozenset]:
    """Unordered pairs of torus classes with no common overgroup."""
    if family.kind is Kind.G2:
        by_id = {t.data: t for t in torus_classes(family)}
        return {frozenset(by_id[i] for i in pair) for pair in g2_relation(family.p3)}
    classes, masks = _neighbor_masks(family)
    out = set()
    for i, j in itertools.combinations(range(len(classes)), 2):
        if not masks[i] >> j & 1:
            out.add(frozenset((classes[i], classes[j])))
    return out


def partner_mass(family: GroupFamily) -> dict[TorusClass, Fraction]:
    """For each class t, the total probability of classes related to t."""
    classes = torus_classes(family)
    mass = {t: Fraction(0) for t in classes}
    for pair in relation_sim(family):
        a, b = tuple(pair)
        mass[a] += b.probability
        mass[b] += a.probability
    return mass


def leading_term_two_random(family: GroupFamily) -> Fraction:
    """Sum over ordered pairs (i, j) with i ~ j of P_i * P_j."""
    return exact_sum(2 * a.probability * b.probability
                     for a, b in (tuple(p) for p in relation_sim(family)))


def pinv_leading(t: TorusClass) -> Fraction:
    return partner_mass(t.family)[t]


# ----------------------------------------------------------- A_b verification

@dataclass
class SubsetResidual:
    labels: tuple[str, ...]
    count: int
    mass: Fraction
    witnesses: list[str]

    @property
    def empty(self) -> bool:
        return self.count == 0


@dataclass
class ABReport:
    family: GroupFamily
    elements: list[str]
    empty: bool
    residual: list[str]
    residual_mass: Fraction
    per_element_families: dict[str, list[str]]
    subset_residuals: list[SubsetResidual] = field(default_factory=list)

    @property
    def pairwise_residuals(self) -> dict[tuple[str, ...], SubsetResidual]:
        return {s.labels: s for s in self.subset_residuals if len(s.labels) == 2}

    @property
    def proper_subsets_nonempty(self) -> bool:
        return all(not s.empty for s in self.subset_residuals)


_WITNESSES = 3


class _Tally:
    """Accumulates, per membership mask, the count, class-size sum and witnesses."""

    def __init__(self, family: GroupFamily, specs: ABSet):
        self.family = family
        self.specs = specs
        self.tests = [_member_test(x) for x in specs]
        self.sign = {Kind.DPLUS: True, Kind.DMINUS: False}.get(family.kind)
        self.table: dict[int, list] = {}

    def visit(self, pr: Profile, size: int) -> None:
        _make_visitor([self])(pr, size)

    def report(self) -> ABReport:
        fam, k = self.family, len(self.specs)
        labels = [x.label for x in self.specs]
        full = (1 << k) - 1
        subsets = []
        residual_mass = Fraction(0)
        residual: list[str] = []
        for size in range(1, k + 1):
            for combo in itertools.combinations(range(k), size):
                want = sum(1 << i for i in combo)
                count, total, wits = 0, 0, []
                for mask in sorted(self.table):
                    if mask & want == want:
                        entry = self.table[mask]
                        count += entry[0]
                        total += entry[1]
                        wits.extend(entry[2])
                mass = Fraction(total, fam.weyl_order)
                if want == full:
                    residual_mass = mass
                    entry = self.table.get(full)
                    residual = [format_class(d) for d in entry[2]] if entry else []
                    if entry and entry[0] > len(residual):
                        residual.append(f"... {entry[0]} classes")
                else:
                    subsets.append(SubsetResidual(tuple(labels[i] for i in combo), count, mass,
                                                  [format_class(d) for d in wits[:_WITNESSES]]))
        per_element = {f"{x.label}={x.torus.label}": [F.tag for F in families_containing(x.torus)]
                       for x in self.specs}
        return ABReport(fam, [str(x) for x in self.specs], not residual, residual,
                        residual_mass, per_element, subsets)


def _make_visitor(tallies):
    """One closure updating every tally; the hot loop of the bulk verification."""
    plans = [(t.sign, [(1 << i, test) for i, test in enumerate(t.tests)], t.table)
             for t in tallies]

    def visit(pr: Profile, size: int) -> None:
        positive = pr.sign > 0
        for want, tests, table in plans:
            if want is not None and positive != want:
                continue
            mask = 0
            for bit, test in tests:
                if test(pr):
                    mask |= bit
            entry = table.get(mask)
            if entry is None:
                table[mask] = [1, size, [pr.data]]
            else:
                entry[0] += 1
                entry[1] += size
                if entry[0] <= _WITNESSES:
                    entry[2].append(pr.data)
    return visit


def verify_ab(family: GroupFamily) -> ABReport:
    return verify_many([family])[0]


def verify_many(families) -> list[ABReport]:
    """Verify several families, sharing one enumeration per (rank, signedness)."""
    families = list(families)
    tallies = {fam: _Tally(fam, ab_set(fam)) for fam in families}
    groups: dict[tuple[int, bool], list[_Tally]] = {}
    for fam in families:
        groups.setdefault((fam.rank, fam.signed), []).append(tallies[fam])
    for (rank, signed), group in groups.items():
        walk_profiles(rank, signed, _make_visitor(group))
    return [tallies[fam].report() for fam in families]


def ab_families(max_rank: int = 30) -> list[GroupFamily]:
    """Every family with a distinguished-element row, ranks up to max_rank."""
    out = []
    for r in range(2, max_rank + 1):
        out.append(GroupFamily.linear(r))
        if r >= 3:
            out.append(GroupFamily.unitary(r))
        out.append(GroupFamily.symplectic(r, "odd"))
        out.append(GroupFamily.symplectic(r, "even"))
        if r >= 3:
            out.append(GroupFamily.orthogonal_odd(r))
        if r >= 4:
            out.append(GroupFamily.orthogonal_plus(r))
            out.append(GroupFamily.orthogonal_minus(r))
    return out


def verify_all_ab(max_rank: int = 30) -> list[ABReport]:
    return verify_many(ab_families(max_rank))


# ------------------------------------------------------------- sharpness

@dataclass
class SharpnessReport:
    m: int
    triples: int
    all_triples_blocked: bool
    min_residual_mass: Fraction
    bound: Fraction
    witnesses: dict[tuple[str, str, str], str]
    proof_witness_counts: dict[str, int]
    uncovered: list[tuple[str, str, str]]

    @property
    def bound_holds(self) -> bool:
        return self.all_triples_blocked and self.min_residual_mass >= self.bound


def proof_witnesses(m: int) -> list[tuple]:
    """(1+,...,1+), (1+,...,1+,1-), (m+), (m-)."""
    ones = tuple([(1, 1)] * m)
    return [ones, ones[:-1] + ((1, -1),), ((m, 1),), ((m, -1),)]


def sharpness_triples(m: int) -> SharpnessReport:
    """Every 3-subset of torus classes of Sp_2m(q), q even, has a common torus."""
    if not 2 <= m <= 6:
        raise RangeError(f"sharpness check supports 2 <= m <= 6, got {m}")
    family = GroupFamily.symplectic(m, "even")
    classes = torus_classes(family)
    index = {t.data: i for i, t in enumerate(classes)}
    specs = [ElementSpec(family, t, t.label) for t in classes]
    tsets = []
    for x in specs:
        test = _member_test(x)
        tsets.append(sum(1 << i for i, t in enumerate(classes) if test(profile(t.data))))
    probs = [t.probability for t in classes]
    special = [index[d] for d in proof_witnesses(m)]
    names = ["(1+)^m", "(1+)^(m-1),1-", "(m+)", "(m-)"]
    counts = {n: 0 for n in names}
    witnesses, uncovered = {}, []
    blocked = True
    min_mass = None
    for a, b, c in itertools.combinations(range(len(classes)), 3):
        common = tsets[a] & tsets[b] & tsets[c]
        key = (classes[a].label, classes[b].label, classes[c].label)
        if not common:
            blocked = False
            witnesses[key] = ""
            continue
        mass = exact_sum(probs[i] for i in range(len(classes)) if common >> i & 1)
        min_mass = mass if min_mass is None else min(min_mass, mass)
        for name, i in zip(names, special):
            if common >> i & 1:
                counts[name] += 1
                witnesses[key] = classes[i].label
                break
        else:
            uncovered.append(key)
            witnesses[key] = classes[(common & -common).bit_length() - 1].label
    bound = Fraction(1, 2 ** m * math.factorial(m))
    return SharpnessReport(m, len(witnesses), blocked, min_mass or Fraction(0), bound,
                           witnesses, counts, uncovered)


# ------------------------------------------------------------------ alpha

@dataclass
class AlphaRow:
    family: GroupFamily
    minimizer: str
    value: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.value >= self.bound

    @property
    def equality(self) -> bool:
        return self.value == self.bound


@dataclass
class AlphaReport:
    rows: list[AlphaRow]

    @property
    def bound_holds(self) -> bool:
        return all(r.holds for r in self.rows)

    @property
    def equality_cases(self) -> list[AlphaRow]:
        return [r for r in self.rows if r.equality]

    @property
    def equality_only_at_d4(self) -> bool:
        eq = [(r.family.kind, r.family.rank, r.minimizer) for r in self.equality_cases]
        return eq == [(Kind.DPLUS, 4, "2-,2-")]

    @property
    def ok(self) -> bool:
        return self.bound_holds and self.equality_only_at_d4


def alpha_families(m_max: int) -> list[GroupFamily]:
    out = []
    for m in range(2, m_max + 1):
        out += [GroupFamily.symplectic(m, "odd"), GroupFamily.symplectic(m, "even")]
        if m >= 3:
            out.append(GroupFamily.orthogonal_odd(m))
        if m >= 4:
            out += [GroupFamily.orthogonal_plus(m), GroupFamily.orthogonal_minus(m)]
    return out


def alpha_report(m_max: int) -> AlphaReport:
    if not 2 <= m_max <= 30:
        raise RangeError(f"m_max must lie in [2, 30], got {m_max}")
    rows = []
    for fam in alpha_families(m_max):
        t, value = min_class_probability(fam)
        rows.append(AlphaRow(fam, t.label, value, Fraction(1, 4 * fam.rank)))
    return AlphaReport(rows)


def alpha_check(m_max: int) -> bool:
    """Bound 1/(4m) everywhere, with equality only at (2-,2-) in W(D4)."""
    return alpha_report(m_max).ok
