"""Acceptance criteria 1-10.  A summary line per criterion is printed by conftest."""

import math
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from liegen import ffmc
from liegen.invgen import (ab_set, alpha_report, element, leading_term_two_random, pinv_leading,
                           proof_witnesses, relation_sim, residual_classes, residual_leading,
                           sharpness_triples, torus_set, verify_all_ab)
from liegen.rootsys_g2 import g2_incidence
from liegen.torus_lattice import shares_overgroup
from liegen.weyl_stats import (GroupFamily, Kind, exact_sum, make_class, prob_positive_fixed_part,
                               prob_sign_product, torus_classes)

from .oracles import (hyperoctahedral_type_counts, positive_fixed_point_probability,
                      positive_fixed_point_series, sign_product_probability, torus_type_counts)

C1 = pytest.mark.criterion(1, "G2 leading term 1/9 for 3 | q")
C2 = pytest.mark.criterion(2, "SL2 leading term 1/2")
C3 = pytest.mark.criterion(3, "distinguished element sets: empty residuals up to rank 30")
C4 = pytest.mark.criterion(4, "G2 fine structure")
C5 = pytest.mark.criterion(5, "alpha bound 1/(4m) with equality only at (2-,2-) in W(D4)")
C6 = pytest.mark.criterion(6, "sign statistics in W(B_m)")
C7 = pytest.mark.criterion(7, "sharpness for Sp_2m(q), q even, m = 2, 3, 4")
C8 = pytest.mark.criterion(8, "normalization and relation properties")
C9 = pytest.mark.criterion(9, "finite-field oracle for GL3(2) and SL2(5)")
C10 = pytest.mark.criterion(10, "Weyl bridge for GL3(101) and SL2(q)")


def timed(fn, *args):
    start = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - start


# ------------------------------------------------------------------ 1, 2

@C1
def test_g2_leading_term():
    value, elapsed = timed(leading_term_two_random, GroupFamily.g2(p3=True))
    assert value == Fraction(1, 9)
    assert elapsed < 1


@C2
def test_sl2_leading_term():
    value, elapsed = timed(leading_term_two_random, GroupFamily.linear(2))
    assert value == Fraction(1, 2)
    assert elapsed < 1


# ------------------------------------------------------------------ 3

@C3
def test_ab_sets_up_to_rank_30():
    reports, elapsed = timed(verify_all_ab, 30)
    kinds = {(r.family.kind, r.family.q_even) for r in reports}
    assert kinds == {(Kind.A, False), (Kind.UA, False), (Kind.C, False), (Kind.C, True),
                     (Kind.B, False), (Kind.DPLUS, False), (Kind.DMINUS, False)}
    assert max(r.family.rank for r in reports) == 30
    bad = [str(r.family) for r in reports if not r.empty]
    assert bad == []
    for r in reports:
        if len(r.elements) >= 3:
            assert r.proper_subsets_nonempty, str(r.family)
    assert elapsed < 60


# ------------------------------------------------------------------ 4

@C4
def test_g2_pinv_minimum():
    classes = torus_classes(GroupFamily.g2(p3=True))
    assert min(pinv_leading(t) for t in classes if t.data in (3, 4, 5, 6)) == Fraction(1, 6)


@C4
def test_g2_reflection_mass():
    classes = torus_classes(GroupFamily.g2(p3=True))
    assert sum(t.probability for t in classes if t.data in (1, 2)) == Fraction(1, 2)


@C4
def test_g2_star_property():
    inc = g2_incidence(True)
    for j in inc.classes:
        assert inc.shares(1, j) and inc.shares(2, j), j


# ------------------------------------------------------------------ 5

@C5
def test_alpha_bound_holds():
    rep = alpha_report(30)
    covered = {(r.family.kind, r.family.rank) for r in rep.rows}
    for m in range(2, 31):
        assert (Kind.C, m) in covered
        if m >= 4:
            assert (Kind.DPLUS, m) in covered and (Kind.DMINUS, m) in covered
    assert rep.bound_holds
    d4 = [r for r in rep.rows if (r.family.kind, r.family.rank) == (Kind.DPLUS, 4)][0]
    assert (d4.minimizer, d4.value) == ("2-,2-", Fraction(1, 16))


@C5
def test_alpha_equality_only_at_d4():
    rep = alpha_report(30)
    eq = [(str(r.family), r.minimizer, str(r.value)) for r in rep.equality_cases]
    assert eq == [("D+(4)", "2-,2-", "1/16")]


@C5
@pytest.mark.parametrize("m", [2, 3, 4])
def test_alpha_oracle_enumeration(m):
    cases = [(GroupFamily.symplectic(m), None)]
    if m == 4:
        cases += [(GroupFamily.orthogonal_plus(4), "even"), (GroupFamily.orthogonal_minus(4), "odd")]
    for fam, flips in cases:
        counts = hyperoctahedral_type_counts(m, flips)
        total = sum(counts.values())
        for t in torus_classes(fam):
            assert t.probability == Fraction(counts[t.data], total)


# ------------------------------------------------------------------ 6

@C6
def test_sign_product_half():
    for m in range(1, 31):
        assert prob_sign_product(m, 1) == prob_sign_product(m, -1) == Fraction(1, 2)
    for m in (1, 2, 3, 4):
        assert sign_product_probability(m, 1) == Fraction(1, 2)


@C6
def test_positive_fixed_part():
    floor = (1 - 1 / math.e) / 2
    for m in range(2, 81):
        value = prob_positive_fixed_part(m)
        assert float(value) >= floor
        assert value == positive_fixed_point_series(m)
    for m in (2, 3, 4):
        assert prob_positive_fixed_part(m) == positive_fixed_point_probability(m)
    assert abs(float(prob_positive_fixed_part(60)) - (1 - math.exp(-0.5))) <= 0.01


# ------------------------------------------------------------------ 7

@C7
@pytest.mark.parametrize("m", [2, 3, 4])
def test_sharpness(m):
    rep, elapsed = timed(sharpness_triples, m)
    n = len(torus_classes(GroupFamily.symplectic(m, "even")))
    assert rep.triples == math.comb(n, 3)
    assert rep.all_triples_blocked
    assert rep.min_residual_mass >= Fraction(1, 2 ** m * math.factorial(m))
    assert rep.uncovered == []
    assert elapsed < 30


@C7
def test_sharpness_witnesses_lie_in_residuals():
    m = 3
    fam = GroupFamily.symplectic(m, "even")
    rep = sharpness_triples(m)
    by_label = {t.label: t for t in torus_classes(fam)}
    witness_labels = {make_class(fam, d).label for d in proof_witnesses(m)}
    for triple, w in list(rep.witnesses.items())[::7]:
        assert w in witness_labels
        specs = [element(fam, by_label[x].data, x) for x in triple]
        assert by_label[w] in residual_classes(specs)
        assert residual_leading(specs) >= Fraction(1, 2 ** m * math.factorial(m))


# ------------------------------------------------------------------ 8

def _all_families(r):
    out = [GroupFamily.linear(r), GroupFamily.symplectic(r, "odd"), GroupFamily.symplectic(r, "even")]
    if r >= 3:
        out += [GroupFamily.unitary(r), GroupFamily.orthogonal_odd(r)]
    if r >= 4:
        out += [GroupFamily.orthogonal_plus(r), GroupFamily.orthogonal_minus(r)]
    return out


@C8
def test_probabilities_sum_to_one_up_to_rank_30():
    for r in range(2, 31):
        for fam in _all_families(r):
            assert exact_sum(t.probability for t in torus_classes(fam)) == 1, str(fam)
    for p3 in (False, True):
        assert exact_sum(t.probability for t in torus_classes(GroupFamily.g2(p3))) == 1


_SMALL = [f for r in range(2, 8) for f in _all_families(r)] + [GroupFamily.g2(False),
                                                              GroupFamily.g2(True)]


@C8
@settings(max_examples=25, deadline=None)
@given(st.sampled_from(_SMALL))
def test_relation_symmetric_and_irreflexive(fam):
    rel = relation_sim(fam)
    assert all(len(pair) == 2 for pair in rel)
    if fam.kind is Kind.G2:
        return
    classes = torus_classes(fam)
    for a in classes[::2]:
        for b in classes:
            assert shares_overgroup(a, b) == shares_overgroup(b, a)
            assert (frozenset((a, b)) in rel) == (a != b and not shares_overgroup(a, b))


@C8
@settings(max_examples=30, deadline=None)
@given(st.sampled_from([f for f in _SMALL if f.classical]), st.data())
def test_residual_monotone(fam, data):
    classes = torus_classes(fam)
    picks = data.draw(st.lists(st.sampled_from(classes), min_size=1, max_size=3))
    A = [element(fam, t.data, f"y{i}") for i, t in enumerate(picks)]
    B = A + [element(fam, data.draw(st.sampled_from(classes)).data, "z")]
    assert residual_classes(B) <= residual_classes(A)
    assert residual_leading(B) <= residual_leading(A)
    for x in A:
        assert residual_classes(A) <= torus_set(x)


@C8
def test_full_element_sets_give_empty_residual_directly():
    for r in range(4, 9):
        for fam in _all_families(r):
            assert residual_classes(ab_set(fam)) == set(), str(fam)


# ------------------------------------------------------------------ 9

ORACLE_GROUPS = [("GL", 3, 2), ("SL", 2, 5)]


@pytest.fixture(scope="module")
def oracles():
    # brute force with sympy, computed before any sampler output is seen
    return {g: torus_type_counts(*g) for g in ORACLE_GROUPS}


@C9
def test_oracle_values(oracles):
    assert oracles[("GL", 3, 2)] == (168, {(3,): 48, (2, 1): 56})
    assert oracles[("SL", 2, 5)][0] == 120


@C9
@pytest.mark.parametrize("group,n,q", ORACLE_GROUPS)
def test_exhaustive_matches_oracle(oracles, group, n, q):
    order, counts = oracles[(group, n, q)]
    rep = ffmc.torus_statistics(group, n, q, exhaustive=True)
    assert rep.samples == order
    assert rep.regular_semisimple == sum(counts.values())
    assert rep.counts == dict(counts)


@C9
@pytest.mark.parametrize("group,n,q", ORACLE_GROUPS)
def test_monte_carlo_within_4_sigma(oracles, group, n, q):
    order, counts = oracles[(group, n, q)]
    N = 100_000
    rep = ffmc.torus_statistics(group, n, q, samples=N, seed=20261018)
    lams = set(counts) | set(rep.counts)
    exact_rs = Fraction(sum(counts.values()), order)
    for lam, p, got in [(lam, Fraction(counts.get(lam, 0), order), rep.frequency(lam))
                        for lam in lams] + [("rs", exact_rs, Fraction(rep.regular_semisimple, N))]:
        sigma = math.sqrt(float(p) * (1 - float(p)) / N)
        assert abs(float(got - p)) <= 4 * sigma + 1e-12, (lam, float(got), float(p))


# ------------------------------------------------------------------ 10

@C10
def test_weyl_bridge():
    start = time.perf_counter()
    gl = ffmc.torus_statistics("GL", 3, 101, samples=100_000, seed=42)
    for lam, exact in {(3,): Fraction(1, 3), (2, 1): Fraction(1, 2), (1, 1, 1): Fraction(1, 6)}.items():
        assert abs(float(gl.frequency(lam) - exact)) <= 0.02, lam
    sl = ffmc.torus_statistics("SL", 2, 101, samples=100_000, seed=42)
    for lam in ((2,), (1, 1)):
        assert abs(float(sl.frequency(lam)) - 0.5) <= 0.02, lam
    fractions = []
    for q in (5, 7, 11, 13, 101):
        rep = ffmc.torus_statistics("SL", 2, q, samples=100_000, seed=42)
        fractions.append(float(rep.non_regular_fraction))
        assert fractions[-1] <= 3 / q, q
    assert all(a > b for a, b in zip(fractions, fractions[1:])), fractions
    assert time.perf_counter() - start < 60
