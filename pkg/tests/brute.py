"""Independent brute-force oracle for the test suite.

Nothing here uses the package's tables, spans or solvers: products come
straight from the structure constants and every question is answered by
exhaustive enumeration over coordinate tuples.
"""

from __future__ import annotations

import itertools

import numpy as np


def all_coords(ring):
    return list(itertools.product(*[range(m) for m in ring.orders]))


def add(ring, a, b):
    return tuple((x + y) % m for x, y, m in zip(a, b, ring.orders))


def neg(ring, a):
    return tuple((-x) % m for x, m in zip(a, ring.orders))


def mul(ring, a, b):
    v = np.einsum("i,j,ijk->k", np.array(a), np.array(b), ring.table)
    return tuple(int(x) % m for x, m in zip(v, ring.orders))


def one(ring):
    return tuple(ring.one_coords)


def zero(ring):
    return tuple(0 for _ in ring.orders)


def units(ring):
    els = all_coords(ring)
    o = one(ring)
    out = {}
    for a in els:
        for b in els:
            if mul(ring, a, b) == o and mul(ring, b, a) == o:
                out[a] = b
                break
    return out


def idempotents(ring):
    return [a for a in all_coords(ring) if mul(ring, a, a) == a]


def right_ideal(ring, gens):
    """Every ``sum(g_i r_i)``; exhaustive over coefficient tuples."""
    els = all_coords(ring)
    out = set()
    for rs in itertools.product(els, repeat=len(gens)):
        acc = zero(ring)
        for g, r in zip(gens, rs):
            acc = add(ring, acc, mul(ring, g, r))
        out.add(acc)
    return out


def two_sided_ideal(ring, gens):
    """Closure of the generators under addition and two-sided multiplication."""
    els = all_coords(ring)
    ideal = {zero(ring)} | set(gens)
    changed = True
    while changed:
        changed = False
        cur = list(ideal)
        for x in cur:
            for r in els:
                for y in (mul(ring, r, x), mul(ring, x, r)):
                    if y not in ideal:
                        ideal.add(y)
                        changed = True
            for z in cur:
                s = add(ring, x, z)
                if s not in ideal:
                    ideal.add(s)
                    changed = True
    return ideal


def mat_mul(ring, A, B):
    """Matrices as nested coordinate tuples."""
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero(ring)
            for l in range(k):
                acc = add(ring, acc, mul(ring, A[i][l], B[l][j]))
            row.append(acc)
        out.append(row)
    return out


def mat_identity(ring, n):
    return [[one(ring) if i == j else zero(ring) for j in range(n)] for i in range(n)]


def transvection(ring, n, i, j, r):
    """``I + r e_ij``."""
    M = mat_identity(ring, n)
    M[i][j] = r
    return M


def gl2_count(ring):
    """Exhaustive count of invertible 2x2 matrices.

    For each ``M`` every column of a right inverse is searched over all of
    ``R^2``; ``M`` counts when some right inverse is also a left inverse.
    """
    els = all_coords(ring)
    mt = {(a, b): mul(ring, a, b) for a in els for b in els}
    o, z = one(ring), zero(ring)

    def lin(a, b, x, y):
        return add(ring, mt[a, x], mt[b, y])

    pairs = [(x, y) for x in els for y in els]
    count = 0
    for a, b, c, d in itertools.product(els, repeat=4):
        col1 = [(x, y) for x, y in pairs if lin(a, b, x, y) == o and lin(c, d, x, y) == z]
        if not col1:
            continue
        col2 = [(x, y) for x, y in pairs if lin(a, b, x, y) == z and lin(c, d, x, y) == o]
        found = False
        for p, r in col1:
            for q, s in col2:
                # N = [[p, q], [r, s]]; N M = I as well
                if (lin(p, q, a, c) == o and lin(p, q, b, d) == z
                        and lin(r, s, a, c) == z and lin(r, s, b, d) == o):
                    found = True
                    break
            if found:
                break
        count += found
    return count


def rank_mod_p(vectors, p):
    """Rank of integer row vectors over GF(p) by plain Gaussian elimination."""
    rows = [[x % p for x in v] for v in vectors]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def product_tables(ring):
    """Index-level addition and multiplication tables from the structure constants."""
    els = all_coords(ring)
    pos = {c: k for k, c in enumerate(els)}
    n = len(els)
    add_t = np.zeros((n, n), dtype=np.int64)
    mul_t = np.zeros((n, n), dtype=np.int64)
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            add_t[i, j] = pos[add(ring, a, b)]
            mul_t[i, j] = pos[mul(ring, a, b)]
    return els, pos, add_t, mul_t
