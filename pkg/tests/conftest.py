"""Shared oracles for the test suite.

Everything here is implemented independently of the package internals:
permutation-expansion determinants, Fraction-based pivot tests, a direct
multiset search for 2x2 Gram decompositions, Prüfer-sequence tree
enumeration with brute-force isomorphism, and Cayley-table conjugacy
counting. Agreement between these and the library is the point of the
tests, so none of them may call back into blocksmith.
"""

from __future__ import annotations

import bisect
import itertools
from fractions import Fraction
from math import isqrt

import pytest


# ---------------------------------------------------------------- matrices


def naive_det(rows) -> int:
    """Permutation expansion; exponential, fine for size <= 6."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def fraction_definiteness(rows) -> str:
    """'pd', 'psd', or 'indefinite' via exact Gaussian pivots."""
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    rank_deficient = False
    for k in range(n):
        if a[k][k] < 0:
            return "indefinite"
        if a[k][k] == 0:
            # the whole row and column must vanish for PSD to survive
            if any(a[k][j] != 0 for j in range(k, n)):
                return "indefinite"
            rank_deficient = True
            continue
        for i in range(k + 1, n):
            factor = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= factor * a[k][j]
    return "psd" if rank_deficient else "pd"


# ---------------------------------------------------- 2x2 Gram brute force


def gram2_decompositions(a: int, b: int, d: int) -> set:
    """All multisets of nonnegative nonzero rows (x, y) with
    sum x^2 = a, sum x*y = b, sum y^2 = d, every row satisfying the strict
    contribution bound (non-strict only when det = 1).

    Direct nonincreasing multiset recursion over an explicit pool; shares
    no code with the solver.
    """
    det = a * d - b * b
    assert det > 0 and a > 0

    def quad(x: int, y: int) -> int:
        return d * x * x - 2 * b * x * y + a * y * y

    pool = []
    for x in range(isqrt(a), -1, -1):
        for y in range(isqrt(d), -1, -1):
            if (x, y) == (0, 0):
                continue
            q = quad(x, y)
            if q < det or (det == 1 and q == det):
                pool.append((x, y))
    pool.sort(reverse=True)

    found = set()

    def rec(idx: int, ra: int, rb: int, rd: int, rows: tuple):
        if ra == 0 and rb == 0 and rd == 0:
            if rows:
                found.add(rows)
            return
        if idx >= len(pool) or ra < 0 or rb < 0 or rd < 0:
            return
        x, y = pool[idx]
        # max copies of this row that still fit
        copies = 0
        na, nb, nd = ra, rb, rd
        while na >= 0 and nb >= 0 and nd >= 0:
            rec(idx + 1, na, nb, nd, rows + (pool[idx],) * copies)
            copies += 1
            na -= x * x
            nb -= x * y
            nd -= y * y

    rec(0, a, b, d, ())
    return found


# ------------------------------------------------------------------- trees


def prufer_trees(n: int):
    """Every labeled tree on vertices 0..n-1, decoded from Prüfer sequences."""
    if n == 1:
        return
    if n == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        work = list(seq)
        leaves = sorted(v for v in range(n) if degree[v] == 1)
        for v in work:
            leaf = leaves.pop(0)
            edges.append((min(leaf, v), max(leaf, v)))
            degree[v] -= 1
            if degree[v] == 1:
                bisect.insort(leaves, v)
        u, v = leaves
        edges.append((min(u, v), max(u, v)))
        yield tuple(sorted(edges))


def _relabel(edges, perm):
    return tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))


def canonical_free_tree(edges, n: int):
    return min(_relabel(edges, perm) for perm in itertools.permutations(range(n)))


def canonical_marked_tree(edges, mark: int, n: int):
    best = None
    for perm in itertools.permutations(range(n)):
        key = (_relabel(edges, perm), perm[mark])
        if best is None or key < best:
            best = key
    return best


def marked_tree_classes(e: int) -> set:
    """Isomorphism classes of (tree with e edges, marked vertex)."""
    n = e + 1
    shapes = {}
    for edges in prufer_trees(n):
        shapes.setdefault(canonical_free_tree(edges, n), edges)
    classes = set()
    for edges in shapes.values():
        for mark in range(n):
            classes.add(canonical_marked_tree(edges, mark, n))
    return classes


def oracle_tree_cartan(edges, mark: int, m: int):
    """Cartan matrix of a marked tree, straight from the definition: the
    exceptional vertex has weight m, every other vertex weight 1, entries
    sum the weights of shared endpoints."""
    e = len(edges)

    def w(v):
        return m if v == mark else 1

    rows = []
    for i, (u1, v1) in enumerate(edges):
        row = []
        for j, (u2, v2) in enumerate(edges):
            if i == j:
                row.append(w(u1) + w(v1))
            else:
                shared = {u1, v1} & {u2, v2}
                row.append(w(shared.pop()) if shared else 0)
        rows.append(row)
    return rows


# ------------------------------------------------------------------ groups


def conjugacy_class_count(elements, mul) -> int:
    elements = list(elements)
    identity = None
    for e in elements:
        if all(mul(e, g) == g for g in elements):
            identity = e
            break
    assert identity is not None
    inverse = {}
    for g in elements:
        for h in elements:
            if mul(g, h) == identity:
                inverse[g] = h
                break
    reps = set()
    for g in elements:
        orbit = frozenset(mul(mul(h, g), inverse[h]) for h in elements)
        reps.add(orbit)
    return len(reps)


def cyclic_group(n: int):
    return list(range(n)), lambda a, b: (a + b) % n


def klein_four():
    els = list(itertools.product((0, 1), repeat=2))
    return els, lambda a, b: ((a[0] ^ b[0]), (a[1] ^ b[1]))


def dihedral8():
    els = list(itertools.product(range(4), range(2)))

    def mul(g, h):
        a, b = g
        c, d = h
        return ((a + (c if b == 0 else -c)) % 4, b ^ d)

    return els, mul


def quaternion8():
    # units +-1, +-i, +-j, +-k as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    table = {
        (1, 1): (1, 0),
        (1, 2): (1, 3),
        (1, 3): (-1, 2),
        (2, 1): (-1, 3),
        (2, 2): (1, 0),
        (2, 3): (1, 1),
        (3, 1): (1, 2),
        (3, 2): (-1, 1),
        (3, 3): (1, 0),
    }

    def mul(g, h):
        sg, ag = g
        sh, ah = h
        if ag == 0:
            return (sg * sh, ah)
        if ah == 0:
            return (sg * sh, ag)
        if ag == ah:
            return (-sg * sh, 0)
        s, axis = table[(ag, ah)]
        return (sg * sh * s, axis)

    els = [(s, a) for s in (1, -1) for a in range(4)]
    return els, mul


def semidihedral16():
    els = list(itertools.product(range(8), range(2)))

    def mul(g, h):
        a, b = g
        c, d = h
        return ((a + c * (3 if b else 1)) % 8, b ^ d)

    return els, mul


@pytest.fixture
def rng():
    import random

    return random.Random(20260814)
