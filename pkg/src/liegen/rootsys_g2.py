"""Exact G2 root system, its Weyl group D12, and the torus/subgroup incidence.

Coordinates live in Q(sqrt 3) so that every reflection and every stability
test is exact.  Short roots have length 1, long roots length sqrt 3.

The incidence between the six classes of maximal tori and the maximal
subgroups of maximal rank is derived from three rules:

* a torus T_w lies in a parabolic P_J iff w is conjugate into W_J;
* the reductive overgroups of T_w correspond to w-stable (p-)closed
  subsystems Psi, and the class of the overgroup is the conjugacy class of
  the image of w in W_Psi = N_W(W(Psi)) / W(Psi);
* the torus normalizer N(T_w) contains T_w only.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ContractError


@dataclass(frozen=True)
class QSqrt3:
    """a + b*sqrt(3) with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __add__(self, other):
        return QSqrt3(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return QSqrt3(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __mul__(self, other):
        if not isinstance(other, QSqrt3):
            other = QSqrt3(Fraction(other))
        return QSqrt3(self.a * other.a + 3 * self.b * other.b,
                      self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, QSqrt3):
            other = QSqrt3(Fraction(other))
        norm = other.a * other.a - 3 * other.b * other.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 3)")
        return self * QSqrt3(other.a / norm, -other.b / norm)

    def is_zero(self):
        return self.a == 0 and self.b == 0


Vector = tuple[QSqrt3, QSqrt3]


def _vec(x, y, xs=0, ys=0) -> Vector:
    return (QSqrt3(Fraction(x), Fraction(xs)), QSqrt3(Fraction(y), Fraction(ys)))


def _dot(u: Vector, v: Vector) -> QSqrt3:
    return u[0] * v[0] + u[1] * v[1]


def _add(u: Vector, v: Vector) -> Vector:
    return (u[0] + v[0], u[1] + v[1])


def _scale(c: QSqrt3, v: Vector) -> Vector:
    return (c * v[0], c * v[1])


class RootSystemG2:
    """The 12 roots; index i and i+6 are negatives of each other."""

    def __init__(self):
        h = Fraction(1, 2)
        short = [_vec(1, 0), _vec(h, 0, 0, h), _vec(-h, 0, 0, h)]
        long = [_vec(Fraction(3, 2), 0, 0, h), _vec(0, 0, 0, 1), _vec(-Fraction(3, 2), 0, 0, h)]
        positive = short + long
        self.roots: tuple[Vector, ...] = tuple(positive + [_scale(QSqrt3(Fraction(-1)), v) for v in positive])
        self.index = {v: i for i, v in enumerate(self.roots)}
        self.is_long = tuple(_dot(v, v).a == 3 for v in self.roots)
        self.simple_short = 0                       # (1, 0)
        self.simple_long = self.index[_vec(-Fraction(3, 2), 0, 0, h)]

    def __len__(self):
        return len(self.roots)

    def neg(self, i: int) -> int:
        return (i + 6) % 12

    def sum_index(self, i: int, j: int):
        """Index of roots[i] + roots[j] if that is a root, else None."""
        return self.index.get(_add(self.roots[i], self.roots[j]))

    def string_length_below(self, i: int, j: int) -> int:
        """Largest r with roots[j] - r*roots[i] a root (the alpha-string of beta)."""
        r = 0
        v = self.roots[j]
        while True:
            v = (v[0] - self.roots[i][0], v[1] - self.roots[i][1])
            if v not in self.index:
                return r
            r += 1

    def reflection(self, i: int) -> tuple[int, ...]:
        r = self.roots[i]
        rr = _dot(r, r)
        out = []
        for v in self.roots:
            c = (_dot(v, r) * 2) / rr
            image = (v[0] - c * r[0], v[1] - c * r[1])
            out.append(self.index[image])
        return tuple(out)


PHI = RootSystemG2()

Perm = tuple[int, ...]
IDENTITY: Perm = tuple(range(12))
MINUS_ONE: Perm = tuple(PHI.neg(i) for i in range(12))


def compose(u: Perm, v: Perm) -> Perm:
    """u after v."""
    return tuple(u[v[i]] for i in range(12))


def inverse(u: Perm) -> Perm:
    out = [0] * 12
    for i, j in enumerate(u):
        out[j] = i
    return tuple(out)


def order(u: Perm) -> int:
    k, v = 1, u
    while v != IDENTITY:
        v = compose(u, v)
        k += 1
    return k


def generate(gens) -> frozenset:
    group = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = compose(s, g)
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    return frozenset(group)


@lru_cache(maxsize=None)
def weyl_group() -> tuple[Perm, ...]:
    """The 12 elements, generated by the two simple reflections."""
    gens = (PHI.reflection(PHI.simple_short), PHI.reflection(PHI.simple_long))
    return tuple(sorted(generate(gens)))


def conjugate(u: Perm, w: Perm) -> Perm:
    """u w u^-1."""
    return compose(compose(u, w), inverse(u))


def class_id(w: Perm) -> int:
    """Label 1..6: short reflection, long reflection, 1, -1, order 3, order 6."""
    if w == IDENTITY:
        return 3
    if w == MINUS_ONE:
        return 4
    k = order(w)
    if k == 2:
        negated = [i for i in range(12) if w[i] == PHI.neg(i)]
        return 2 if PHI.is_long[negated[0]] else 1
    return {3: 5, 6: 6}[k]


@dataclass(frozen=True)
class WeylClass:
    ident: int
    representative: Perm
    size: int


def conjugacy_classes_g2() -> list[WeylClass]:
    classes: dict[int, list[Perm]] = {}
    for w in weyl_group():
        classes.setdefault(class_id(w), []).append(w)
    return [WeylClass(i, min(classes[i]), len(classes[i])) for i in sorted(classes)]


def representative(ident: int) -> Perm:
    for c in conjugacy_classes_g2():
        if c.ident == ident:
            return c.representative
    raise ContractError(f"no G2 class {ident}")


# ------------------------------------------------------------ subsystems

@dataclass(frozen=True)
class Subsystem:
    roots: frozenset
    label: str
    needs_p3: bool = False  # admitted only as a 3-closed, non-closed set

    def image(self, w: Perm) -> frozenset:
        return frozenset(w[i] for i in self.roots)

    def stable_under(self, w: Perm) -> bool:
        return self.image(w) == self.roots


def _n_abs(i: int, j: int) -> int:
    """|N_{alpha,beta}| = r + 1 for roots[i] = alpha, roots[j] = beta."""
    return PHI.string_length_below(i, j) + 1


def _combo(i: int, a: int, j: int, b: int):
    v = _add(_scale(QSqrt3(Fraction(a)), PHI.roots[i]), _scale(QSqrt3(Fraction(b)), PHI.roots[j]))
    return PHI.index.get(v)


def _commutator_terms(i: int, j: int):
    """(root index, |C_{kl}|) for each root k*alpha + l*beta in [x_alpha, x_beta].

    Magnitudes of the Chevalley commutator constants:
    C_{k1} = M_{alpha,beta,k}, C_{1l} = M_{beta,alpha,l},
    C_{32} = M_{alpha+beta,alpha,2}/3, C_{23} = 2 M_{alpha+beta,beta,2}/3,
    with M_{a,b,k} = (1/k!) prod_{t<k} N_{a, t*a+b}.
    """
    def m_const(a, b, k):
        value, cur = Fraction(1), b
        for t in range(k):
            if cur is None:
                return Fraction(0)
            value *= _n_abs(a, cur)
            cur = PHI.sum_index(a, cur)
        return value / math.factorial(k)

    out = []
    for k, l in ((1, 1), (2, 1), (3, 1), (1, 2), (1, 3), (3, 2), (2, 3)):
        target = _combo(i, k, j, l)
        if target is None:
            continue
        ab = PHI.sum_index(i, j)
        if l == 1:
            c = m_const(i, j, k)
        elif k == 1:
            c = m_const(j, i, l)
        elif (k, l) == (3, 2):
            c = m_const(ab, i, 2) / 3
        else:
            c = 2 * m_const(ab, j, 2) / 3
        out.append((target, c))
    return out


def _is_closed(psi: frozenset, p: int | None) -> bool:
    """Closed (p is None) or p-closed under the commutator relations."""
    for i, j in itertools.product(psi, repeat=2):
        if j in (i, PHI.neg(i)):
            continue
        for k, c in _commutator_terms(i, j):
            if k in psi:
                continue
            if c == 0:
                raise AssertionError("vanishing structure constant in characteristic 0")
            if p is not None and c.denominator == 1 and c.numerator % p == 0:
                continue
            return False
    return True


def _label(psi: frozenset) -> str:
    n_long = sum(PHI.is_long[i] for i in psi)
    n_short = len(psi) - n_long
    return {(6, 0): "A2", (0, 6): "~A2", (2, 2): "A1x~A1",
            (2, 0): "A1", (0, 2): "~A1"}[(n_long, n_short)]


@lru_cache(maxsize=None)
def subsystems(p3: bool) -> tuple[Subsystem, ...]:
    """Proper nonempty symmetric subsystems that are closed (or 3-closed if p3)."""
    pairs = [frozenset({i, PHI.neg(i)}) for i in range(6)]
    out = []
    for k in range(1, 6):
        for combo in itertools.combinations(pairs, k):
            psi = frozenset().union(*combo)
            if _is_closed(psi, None):
                out.append(Subsystem(psi, _label(psi)))
            elif p3 and _is_closed(psi, 3):
                out.append(Subsystem(psi, _label(psi), needs_p3=True))
    return tuple(sorted(out, key=lambda s: (len(s.roots), sorted(s.roots))))


def stable_subsystems(w: Perm, p3: bool) -> list[Subsystem]:
    return [psi for psi in subsystems(p3) if psi.stable_under(w)]


def reflection_subgroup(psi: Subsystem) -> frozenset:
    return generate([PHI.reflection(i) for i in psi.roots])


def normalizer(subgroup: frozenset) -> frozenset:
    return frozenset(u for u in weyl_group()
                     if all(conjugate(u, h) in subgroup for h in subgroup))


@dataclass(frozen=True)
class QuotientClass:
    """Conjugacy class of W_Psi = N_W(W(Psi))/W(Psi), as a set of cosets."""

    index: int          # 0 is the trivial class
    cosets: frozenset   # each coset is a frozenset of Weyl elements
    quotient_order: int

    @property
    def trivial(self) -> bool:
        return self.index == 0


@lru_cache(maxsize=None)
def quotient_classes(psi: Subsystem) -> tuple[QuotientClass, ...]:
    sub = reflection_subgroup(psi)
    norm = normalizer(sub)
    cosets = {frozenset(compose(n, h) for h in sub) for n in norm}
    seen: set = set()
    classes = []
    trivial = frozenset(sub)
    ordered = sorted(cosets, key=lambda c: (c != trivial, min(c)))
    for c in ordered:
        if c in seen:
            continue
        rep = min(c)
        orbit = frozenset(frozenset(compose(conjugate(n, rep), h) for h in sub) for n in norm)
        seen |= orbit
        classes.append(orbit)
    return tuple(QuotientClass(i, orbit, len(cosets)) for i, orbit in enumerate(classes))


def subgroup_class_of(w: Perm, psi: Subsystem) -> QuotientClass:
    """Class in W_Psi of the image of w; this labels the X(q)-class of K(Psi)^g."""
    if not psi.stable_under(w):
        raise ContractError(f"{psi.label} is not stable under w")
    for qc in quotient_classes(psi):
        if any(w in coset for coset in qc.cosets):
            return qc
    raise AssertionError("w stabilizes Psi but lies outside N_W(W(Psi))")


# ------------------------------------------------------------- incidence

@dataclass(frozen=True)
class Column:
    """One X(q)-class of maximal subgroups of maximal rank."""

    label: str
    kind: str       # parabolic | subsystem | normalizer
    note: str = ""


@dataclass
class Incidence:
    p3: bool
    columns: list[Column]
    cells: dict     # (class id, column label) -> bool
    report: list[str]

    @property
    def classes(self) -> list[int]:
        return [1, 2, 3, 4, 5, 6]

    def column_set(self, label: str) -> set[int]:
        return {j for j in self.classes if self.cells[(j, label)]}

    def row(self, j: int) -> set[str]:
        return {c.label for c in self.columns if self.cells[(j, c.label)]}

    def shares(self, i: int, j: int) -> bool:
        return bool(self.row(i) & self.row(j))


_SUBGROUP_NAMES = {
    ("A2", True): "SL3.2[long]", ("A2", False): "SU3.2[long]",
    ("~A2", True): "SL3.2[short]", ("~A2", False): "SU3.2[short]",
    ("A1x~A1", True): "C",
}
# Maximal reductive overgroups; A1 / ~A1 subsystem subgroups sit inside
# parabolics and inside C, so they are not maximal.
_MAXIMAL_TYPES = ("A2", "~A2", "A1x~A1")
_EVEN_ORDER_TORI = {1, 2, 3, 4}


def _conjugate_into(w: Perm, subgroup: frozenset) -> bool:
    return any(conjugate(u, w) in subgroup for u in weyl_group())


def _torus_in_subsystem_class(w: Perm, psi: Subsystem, qc: QuotientClass) -> bool:
    # Some W-conjugate Psi' of Psi is w-stable with w in the matching class.
    for u in weyl_group():
        w_u = conjugate(inverse(u), w)
        if psi.stable_under(w_u) and subgroup_class_of(w_u, psi).index == qc.index:
            return True
    return False


@lru_cache(maxsize=None)
def g2_incidence(p3: bool) -> Incidence:
    columns: list[Column] = []
    cells: dict = {}
    report: list[str] = []
    reps = {c.ident: c.representative for c in conjugacy_classes_g2()}

    for name, root in (("P[short]", PHI.simple_short), ("P[long]", PHI.simple_long)):
        levi = generate([PHI.reflection(root)])
        columns.append(Column(name, "parabolic", "Levi Weyl group <s> for a simple root"))
        for j, w in reps.items():
            cells[(j, name)] = _conjugate_into(w, levi)

    # one representative per W-orbit of maximal subsystem types
    seen_types = set()
    for psi in subsystems(p3):
        if psi.label not in _MAXIMAL_TYPES or psi.label in seen_types:
            continue
        seen_types.add(psi.label)
        for qc in quotient_classes(psi):
            name = _SUBGROUP_NAMES.get((psi.label, qc.trivial))
            if name is None:
                raise AssertionError(f"unexpected W_Psi class for {psi.label}")
            columns.append(Column(name, "subsystem",
                                  f"Psi={psi.label}, |W_Psi|={qc.quotient_order}, class {qc.index}"))
            for j, w in reps.items():
                cells[(j, name)] = _torus_in_subsystem_class(w, psi, qc)

    for j in reps:
        name = f"Norm({j})"
        columns.append(Column(name, "normalizer"))
        for i in reps:
            cells[(i, name)] = i == j

    # cross-check against torus orders: even-order tori lie in C
    derived = {j for j in reps if cells[(j, "C")]}
    if derived == _EVEN_ORDER_TORI:
        report.append("C column agrees with the even-order torus rule: classes 1-4")
    else:
        report.append(f"C column {sorted(derived)} DISAGREES with even-order tori "
                      f"{sorted(_EVEN_ORDER_TORI)}")
    return Incidence(p3, columns, cells, report)


def g2_relation(p3: bool) -> set[frozenset]:
    """Pairs {i, j} of torus classes with no common overgroup column."""
    inc = g2_incidence(p3)
    return {frozenset((i, j)) for i, j in itertools.combinations(inc.classes, 2)
            if not inc.shares(i, j)}
