import itertools

import pytest
from hypothesis import given, settings, strategies as st

from liegen.errors import ContractError
from liegen.torus_lattice import (SubgroupFamily, families_containing, profile, shares_overgroup,
                                  subgroup_families, union_test, walk_profiles)
from liegen.weyl_stats import (GroupFamily, Kind, make_class, partitions, sign_product,
                               signed_partitions, torus_classes)

P, M = 1, -1


def tags(fam, normalizers=False):
    return [F.tag for F in subgroup_families(fam, normalizers)]


def test_catalog_linear_3():
    assert tags(GroupFamily.linear(3)) == ["P(1)", "P(2)", "Imp(1,3)", "EF(3)"]
    assert len(subgroup_families(GroupFamily.linear(3))) == 4 + 3


def test_catalog_orthogonal_odd():
    t = tags(GroupFamily.orthogonal_odd(4))
    assert t == ([f"N({a},{s})" for a in range(1, 5) for s in "+-"]
                 + [f"P({k})" for k in range(1, 5)])


def test_catalog_symplectic_q_even_has_hyperplanes():
    assert {"SO(+)", "SO(-)"} <= set(tags(GroupFamily.symplectic(3, "even")))
    assert not {"SO(+)", "SO(-)"} & set(tags(GroupFamily.symplectic(3, "odd")))


def test_catalog_side_conditions():
    assert "EF(2)" not in tags(GroupFamily.unitary(6))
    assert "EF(3)" in tags(GroupFamily.unitary(6))
    assert "GU" in tags(GroupFamily.orthogonal_plus(4))
    assert "GU" not in tags(GroupFamily.orthogonal_minus(4))
    assert "GU" in tags(GroupFamily.orthogonal_minus(5))
    assert "GL" not in tags(GroupFamily.orthogonal_minus(6))
    assert "P(6)" not in tags(GroupFamily.orthogonal_minus(6))


def test_complement_dedup():
    t = tags(GroupFamily.orthogonal_plus(4))
    assert "N(1,-)" in t and "N(3,-)" not in t
    assert "N(2,+)" in t and "N(2,-)" in t
    t = tags(GroupFamily.orthogonal_minus(4))
    assert ("N(2,+)" in t) != ("N(2,-)" in t)


def test_hyperplane_examples():
    fam = GroupFamily.symplectic(5, "even")
    so_minus = SubgroupFamily(fam, "HyperplaneSO", (-1,))
    assert so_minus.contains(make_class(fam, ((5, M),)))
    assert not so_minus.contains(make_class(fam, ((5, P),)))


def test_gu_example():
    fam = GroupFamily.symplectic(5)
    gu = SubgroupFamily(fam, "GUOverQ")
    assert gu.contains(make_class(fam, ((5, M),)))
    assert not gu.contains(make_class(fam, ((5, P),)))


def test_nondegenerate_orthogonal_example():
    fam = GroupFamily.orthogonal_plus(6)
    n2m = SubgroupFamily(fam, "NondegStabO", (2, -1))
    assert n2m.contains(make_class(fam, ((4, M), (2, M))))
    assert not n2m.contains(make_class(fam, ((4, P), (1, M), (1, M))))


def test_family_mismatch():
    F = subgroup_families(GroupFamily.linear(3))[0]
    with pytest.raises(ContractError):
        F.contains(make_class(GroupFamily.linear(4), (4,)))
    a = make_class(GroupFamily.linear(3), (3,))
    b = make_class(GroupFamily.linear(4), (4,))
    with pytest.raises(ContractError):
        shares_overgroup(a, b)


def test_shares_overgroup_examples():
    fam = GroupFamily.linear(2)
    two, ones = (make_class(fam, d) for d in ((2,), (1, 1)))
    assert not shares_overgroup(two, ones)
    assert shares_overgroup(two, two)
    fam = GroupFamily.linear(3)
    assert shares_overgroup(make_class(fam, (2, 1)), make_class(fam, (1, 1, 1)))


def test_every_class_has_its_normalizer():
    for fam in (GroupFamily.symplectic(4), GroupFamily.orthogonal_minus(5), GroupFamily.unitary(5)):
        for t in torus_classes(fam):
            fams = families_containing(t)
            assert fams[-1].kind == "TorusNormalizer" and fams[-1].contains(t)


def _subset_sums(parts, keep=lambda p: True):
    out = set()
    for r in range(len(parts) + 1):
        for combo in itertools.combinations(parts, r):
            if all(keep(p) for p in combo):
                out.add((sum(a for a, _ in combo), sign_product(combo)))
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.data())
def test_profile_bitmasks_against_subsets(m, data):
    d = data.draw(st.sampled_from(signed_partitions(m)))
    pr = profile(d)
    sums = _subset_sums(d)
    pos = _subset_sums(d, lambda p: p[1] > 0)
    for k in range(m + 1):
        assert bool(pr.sums >> k & 1) == any(s == k for s, _ in sums)
        assert bool(pr.sums_pos >> k & 1) == any(s == k for s, _ in pos)
        assert bool(pr.sums_plus >> k & 1) == ((k, 1) in sums)
        assert bool(pr.sums_minus >> k & 1) == ((k, -1) in sums)
    assert pr.sign == sign_product(d)


@pytest.mark.parametrize("m", range(1, 7))
def test_hyperplane_predicate_is_sign_product(m):
    if m < 2:
        pytest.skip("type C starts at rank 2")
    fam = GroupFamily.symplectic(m, "even")
    for eps in (1, -1):
        F = SubgroupFamily(fam, "HyperplaneSO", (eps,))
        for t in torus_classes(fam):
            assert F.contains(t) == (sign_product(t.data) == eps)


@pytest.mark.parametrize("kind", [Kind.DPLUS, Kind.DMINUS])
def test_orthogonal_complement_consistency(kind):
    for m in (4, 5, 6):
        fam = GroupFamily(kind, m)
        amb = 1 if kind is Kind.DPLUS else -1
        for t in torus_classes(fam):
            assert sign_product(t.data) == amb
            pr = profile(t.data)
            for a in range(1, m):
                for eps in (1, -1):
                    x = SubgroupFamily(fam, "NondegStabO", (a, eps)).predicate(pr)
                    y = SubgroupFamily(fam, "NondegStabO", (m - a, eps * amb)).predicate(pr)
                    assert x == y


@pytest.mark.parametrize("signed,rank", [(False, 7), (True, 5)])
def test_walk_matches_direct_profiles(signed, rank):
    seen = []
    walk_profiles(rank, signed, lambda pr, size: seen.append((pr, size)))
    expected = signed_partitions(rank) if signed else partitions(rank)
    assert [pr.data for pr, _ in seen] == expected
    for pr, size in seen:
        assert pr == profile(pr.data)


@pytest.mark.parametrize("fam", [GroupFamily.linear(6), GroupFamily.unitary(6),
                                 GroupFamily.symplectic(4, "even"), GroupFamily.orthogonal_odd(4),
                                 GroupFamily.orthogonal_plus(4), GroupFamily.orthogonal_minus(6)])
def test_union_test_matches_predicates(fam):
    cat = subgroup_families(fam, normalizers=False)
    classes = torus_classes(fam)
    for t in classes[::3]:
        chosen = [F for F in cat if F.contains(t)]
        test = union_test(chosen, own=t.data)
        for u in classes:
            pr = profile(u.data)
            assert test(pr) == (u.data == t.data or any(F.predicate(pr) for F in chosen))


def test_imprimitive_orthogonal_carries_block_type():
    fam = GroupFamily.orthogonal_plus(4)
    t = make_class(fam, ((1, M),) * 4)
    imp_minus = SubgroupFamily(fam, "Imprimitive", (1, 4, -1))
    imp_plus = SubgroupFamily(fam, "Imprimitive", (1, 4, 1))
    assert imp_minus.contains(t) and not imp_plus.contains(t)
    minus_blocks = make_class(fam, ((2, M), (1, P), (1, M)))
    assert not SubgroupFamily(fam, "Imprimitive", (2, 2, 1)).contains(minus_blocks)
    assert SubgroupFamily(fam, "Imprimitive", (2, 2, -1)).contains(minus_blocks)
    assert SubgroupFamily(fam, "Imprimitive", (2, 2, 1)).contains(make_class(fam, ((2, P), (2, P))))
