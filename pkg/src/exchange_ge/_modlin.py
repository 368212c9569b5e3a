"""Linear algebra over Z/N by diagonal reduction.

Everything in this package lives on finite abelian groups of the form
``Z/m1 + ... + Z/md``.  Embedding each summand into ``Z/N`` (N the exponent)
turns every additive problem into a linear system over the principal ideal
ring ``Z/N``, which we diagonalize with unimodular row/column transforms built
from the extended gcd.  The diagonal need not satisfy the Smith divisibility
chain; solving only needs *some* diagonal form.
"""

from __future__ import annotations

from math import gcd


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


class Diagonalized:
    """``U @ A @ V == diag(pivots)`` over Z/N, with U applied to a tracked rhs."""

    def __init__(self, A: list[list[int]], N: int, rhs: list[int] | None = None):
        m = len(A)
        n = len(A[0]) if m else 0
        S = [[x % N for x in row] for row in A]
        b = [x % N for x in rhs] if rhs is not None else [0] * m
        V = [[int(i == j) for j in range(n)] for i in range(n)]
        pivots: list[int] = []
        t = 0
        while t < min(m, n):
            best = None
            for i in range(t, m):
                row = S[i]
                for j in range(t, n):
                    if row[j]:
                        g = gcd(row[j], N)
                        if best is None or g < best[0]:
                            best = (g, i, j)
                            if g == 1:
                                break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                S[t], S[pi] = S[pi], S[t]
                b[t], b[pi] = b[pi], b[t]
            if pj != t:
                for row in S:
                    row[t], row[pj] = row[pj], row[t]
                for row in V:
                    row[t], row[pj] = row[pj], row[t]
            self._clear(S, b, V, t, m, n, N)
            pivots.append(S[t][t])
            t += 1
        self.N = N
        self.S = S
        self.rhs = b
        self.V = V
        self.pivots = pivots
        self.m = m
        self.n = n

    @staticmethod
    def _clear(S, b, V, t, m, n, N):
        while True:
            changed = False
            for i in range(t + 1, m):
                c = S[i][t]
                if not c:
                    continue
                a = S[t][t]
                if c % a == 0:
                    q = c // a
                    ri, rt = S[i], S[t]
                    for j in range(t, n):
                        ri[j] = (ri[j] - q * rt[j]) % N
                    b[i] = (b[i] - q * b[t]) % N
                    continue
                g, s, u = xgcd(a, c)
                x, y = -c // g, a // g
                rt, ri = S[t], S[i]
                for j in range(t, n):
                    p, r = rt[j], ri[j]
                    rt[j] = (s * p + u * r) % N
                    ri[j] = (x * p + y * r) % N
                bt, bi = b[t], b[i]
                b[t] = (s * bt + u * bi) % N
                b[i] = (x * bt + y * bi) % N
            for j in range(t + 1, n):
                c = S[t][j]
                if not c:
                    continue
                a = S[t][t]
                if c % a == 0:
                    q = c // a
                    for row in S:
                        row[j] = (row[j] - q * row[t]) % N
                    for row in V:
                        row[j] = (row[j] - q * row[t]) % N
                    continue
                g, s, u = xgcd(a, c)
                x, y = -c // g, a // g
                for M in (S, V):
                    for row in M:
                        p, r = row[t], row[j]
                        row[t] = (s * p + u * r) % N
                        row[j] = (x * p + y * r) % N
                changed = True
            if not changed:
                return

    def image_size(self) -> int:
        size = 1
        for p in self.pivots:
            size *= self.N // gcd(p, self.N)
        return size

    def solution(self) -> list[int] | None:
        N = self.N
        y = [0] * self.n
        for t, p in enumerate(self.pivots):
            c = self.rhs[t]
            g = gcd(p, N)
            if c % g:
                return None
            mod = N // g
            y[t] = (c // g) * pow(p // g, -1, mod) % mod if mod > 1 else 0
        for t in range(len(self.pivots), self.m):
            if self.rhs[t]:
                return None
        return [sum(self.V[i][k] * y[k] for k in range(self.n)) % N for i in range(self.n)]


def solve_mod(A: list[list[int]], b: list[int], N: int) -> list[int] | None:
    """One solution of ``A x = b`` over Z/N, or None if the system is inconsistent."""
    if not A:
        return []
    return Diagonalized(A, N, b).solution()


def image_size_mod(A: list[list[int]], N: int) -> int:
    """Number of elements in the image of ``x -> A x`` on (Z/N)^n."""
    if not A or not A[0]:
        return 1
    return Diagonalized(A, N).image_size()
