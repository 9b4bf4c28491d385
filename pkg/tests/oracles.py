"""Brute-force oracles, written independently of the package internals."""
import itertools
from collections import Counter
from fractions import Fraction
from functools import lru_cache

import sympy


@lru_cache(maxsize=None)
def partition_count(n):
    """Euler's pentagonal recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * (partition_count(n - g1) + partition_count(n - g2))
        k += 1
    return total


def signed_cycle_type(perm, signs):
    """Multiset of (cycle length, product of signs on the cycle)."""
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        length, sign, i = 0, 1, start
        while i not in seen:
            seen.add(i)
            sign *= signs[i]
            length += 1
            i = perm[i]
        out.append((length, sign))
    return tuple(sorted(out, key=lambda p: (-p[0], -p[1])))


def hyperoctahedral_type_counts(m, flips=None):
    """Counter of signed cycle types over W(B_m).

    flips = 'even' restricts to W(D_m), 'odd' to the other coset.
    """
    counts = Counter()
    for perm in itertools.permutations(range(m)):
        for signs in itertools.product((1, -1), repeat=m):
            neg = signs.count(-1)
            if flips == "even" and neg % 2:
                continue
            if flips == "odd" and neg % 2 == 0:
                continue
            counts[signed_cycle_type(perm, signs)] += 1
    return counts


def cycle_type_counts(n):
    counts = Counter()
    for perm in itertools.permutations(range(n)):
        counts[tuple(a for a, _ in signed_cycle_type(perm, (1,) * n))] += 1
    return counts


def sign_product_probability(m, sign):
    counts = hyperoctahedral_type_counts(m)
    total = sum(counts.values())
    hits = sum(c for t, c in counts.items() if _prod(s for _, s in t) == sign)
    return Fraction(hits, total)


def positive_fixed_point_probability(m):
    counts = hyperoctahedral_type_counts(m)
    total = sum(counts.values())
    return Fraction(sum(c for t, c in counts.items() if (1, 1) in t), total)


def positive_fixed_point_series(m):
    """Inclusion-exclusion: P(some positive 1-cycle) = sum (-1)^(k+1) / (k! 2^k)."""
    return sum(Fraction((-1) ** (k + 1), sympy.factorial(k) * 2 ** k) for k in range(1, m + 1))


def _prod(values):
    out = 1
    for v in values:
        out *= v
    return out


def factor_degree_partition(coeffs_high_first, p):
    """Irreducible factor degrees with multiplicity, via sympy's factorization over GF(p)."""
    x = sympy.symbols("x")
    poly = sympy.Poly([int(c) for c in coeffs_high_first], x, modulus=p)
    degrees = []
    for fac, mult in poly.factor_list()[1]:
        degrees += [fac.degree()] * mult
    return tuple(sorted(degrees, reverse=True))


def squarefree_oracle(coeffs_high_first, p):
    x = sympy.symbols("x")
    poly = sympy.Poly([int(c) for c in coeffs_high_first], x, modulus=p)
    return all(mult == 1 for _, mult in poly.factor_list()[1])


def enumerate_matrix_group(group, n, q):
    """All matrices of GL_n(q) or SL_n(q), with sympy determinants and char polys."""
    out = []
    for entries in itertools.product(range(q), repeat=n * n):
        M = sympy.Matrix(n, n, list(entries))
        d = M.det() % q
        if d == 0 or (group == "SL" and d != 1):
            continue
        out.append(M)
    return out


def torus_type_counts(group, n, q):
    """(group order, Counter of partitions over squarefree char polys)."""
    x = sympy.symbols("x")
    mats = enumerate_matrix_group(group, n, q)
    counts = Counter()
    cache = {}
    for M in mats:
        coeffs = tuple(int(c) % q for c in M.charpoly(x).all_coeffs())
        if coeffs not in cache:
            cache[coeffs] = (factor_degree_partition(coeffs, q)
                             if squarefree_oracle(coeffs, q) else None)
        lam = cache[coeffs]
        if lam is not None:
            counts[lam] += 1
    return len(mats), counts
