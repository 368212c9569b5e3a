"""Preset rings and the preset-name grammar.

Names accepted by :func:`preset` (``x`` or ``×`` separates direct factors at
top level)::

    Z/n                      integers mod n
    Fq                       finite field with q = p^k elements
    Mk(<name>)               k x k matrices over a preset
    UTk(<name>)              upper-triangular k x k matrices over a preset
    Fp[x1..xn]/m^2           F_p[x1..xn] modulo all degree-2 monomials
    Ex2.12(Fp)               alias for Fp[x1..x4]/m^2
    <name> x <name>          direct product

Instances are cached by name, so two lookups of the same name return the same
ring object.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache

import numpy as np

from .errors import ParseError
from .ring import Ring, RingSpec, load_ring


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ParseError(f"F{q}: field order must be a prime power")
    p = next(f for f in range(2, q + 1) if q % f == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ParseError(f"F{q}: field order must be a prime power")
    return p, k


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num by monic den, coefficients low degree first."""
    num = [c % p for c in num]
    dd = len(den) - 1
    for s in range(len(num) - 1, dd - 1, -1):
        c = num[s]
        if c:
            for t in range(dd + 1):
                num[s - dd + t] = (num[s - dd + t] - c * den[t]) % p
    return num[:dd] + [0] * max(0, dd - len(num))


def irreducible_polynomial(p: int, k: int) -> list[int]:
    """First monic irreducible of degree k over F_p (coefficients low first, lex order)."""
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0 and k > 1:
            continue
        reducible = False
        for deg in range(1, k // 2 + 1):
            for gt in itertools.product(range(p), repeat=deg):
                g = list(gt) + [1]
                if not any(_poly_mod(f, g, p)):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return f
    raise AssertionError("no irreducible polynomial found")


def cyclic_spec(n: int) -> RingSpec:
    return RingSpec(f"Z/{n}", [n], [[[1 % n]]], [1 % n])


def galois_field_spec(q: int) -> RingSpec:
    p, k = _factor_prime_power(q)
    if k == 1:
        return RingSpec(f"F{p}", [p], [[[1]]], [1])
    f = irreducible_polynomial(p, k)
    table = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            mono = [0] * (i + j) + [1]
            table[i, j] = _poly_mod(mono, f, p) if i + j >= k else mono + [0] * (k - len(mono))
    return RingSpec(f"F{q}", [p] * k, table, [1] + [0] * (k - 1), {"kind": "field", "poly": f})


def matrix_ring_spec(base: Ring, k: int, upper: bool = False) -> RingSpec:
    d = base.d
    pairs = [(a, b) for a in range(k) for b in range(k) if not upper or a <= b]
    pos = {pr: n for n, pr in enumerate(pairs)}
    D = len(pairs) * d
    table = np.zeros((D, D, D), dtype=np.int64)
    for (a, b), u in pos.items():
        for (c, e), v in pos.items():
            if b != c:
                continue
            w = pos[(a, e)]
            for l in range(d):
                for m in range(d):
                    table[u * d + l, v * d + m, w * d:(w + 1) * d] = base.table[l, m]
    one = [0] * D
    for a in range(k):
        u = pos[(a, a)]
        one[u * d:(u + 1) * d] = base.one_coords
    name = f"{'UT' if upper else 'M'}{k}({base.name})"
    return RingSpec(name, list(base.orders) * len(pairs), table, one,
                    {"kind": "upper" if upper else "matrix", "k": k, "base": base.name})


def square_zero_spec(p: int, nvars: int = 4) -> RingSpec:
    """``F_p[x1..xn]/<x1..xn>^2``: basis ``1, a1..an`` with every ``ai*aj = 0``."""
    D = nvars + 1
    table = np.zeros((D, D, D), dtype=np.int64)
    table[0, 0, 0] = 1
    for i in range(1, D):
        table[0, i, i] = 1
        table[i, 0, i] = 1
    return RingSpec(f"F{p}[x1..x{nvars}]/m^2", [p] * D, table, [1] + [0] * nvars,
                    {"kind": "square-zero", "p": p, "nvars": nvars})


def direct_product_spec(r: Ring, s: Ring) -> RingSpec:
    d, e = r.d, s.d
    D = d + e
    table = np.zeros((D, D, D), dtype=np.int64)
    table[:d, :d, :d] = r.table
    table[d:, d:, d:] = s.table
    return RingSpec(f"{r.name} x {s.name}", list(r.orders) + list(s.orders), table,
                    list(r.one_coords) + list(s.one_coords), {"kind": "product"})


def _split_top(name: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    i = 0
    while i < len(name):
        ch = name[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and (ch == "×" or name[i:i + 3] == " x "):
            parts.append(cur)
            cur = ""
            i += 1 if ch == "×" else 3
            continue
        cur += ch
        i += 1
    parts.append(cur)
    return [p.strip() for p in parts]


_PATTERNS = [
    (re.compile(r"Z/(\d+)"), lambda m: cyclic_spec(int(m[1]))),
    (re.compile(r"F(\d+)"), lambda m: galois_field_spec(int(m[1]))),
    (re.compile(r"M(\d+)\((.+)\)"), lambda m: matrix_ring_spec(preset(m[2]), int(m[1]))),
    (re.compile(r"UT(\d+)\((.+)\)"), lambda m: matrix_ring_spec(preset(m[2]), int(m[1]), upper=True)),
    (re.compile(r"Ex2\.12\(F(\d+)\)"), lambda m: square_zero_spec(int(m[1]), 4)),
    (re.compile(r"F(\d+)\[x1\.\.x(\d+)\]/m\^2"), lambda m: square_zero_spec(int(m[1]), int(m[2]))),
]


@lru_cache(maxsize=None)
def preset(name: str) -> Ring:
    """Look up (and build on first use) a preset ring by name."""
    name = name.strip()
    parts = _split_top(name)
    if len(parts) > 1:
        factors = [preset(part) for part in parts]
        canonical = " x ".join(f.name for f in factors)
        if canonical != name:
            return preset(canonical)
        ring = factors[0]
        for f in factors[1:]:
            ring = load_ring(direct_product_spec(ring, f))
        return ring
    for pattern, build in _PATTERNS:
        m = pattern.fullmatch(name)
        if m:
            if pattern.pattern.startswith("F(") and m[1] != str(int(m[1])):
                break
            spec = build(m)
            if spec.name != name:
                return preset(spec.name)
            return load_ring(spec)
    raise ParseError(f"unknown preset ring {name!r}", field="ring")


def is_square_zero(ring: Ring) -> bool:
    return ring.tags.get("kind") == "square-zero"


ROSTER = (
    [f"Z/{n}" for n in range(2, 31)]
    + ["F2", "F4", "M2(F2)", "UT2(F2)", "Ex2.12(F2)", "Z/6 x F2"]
)
"""Rings exercised by the exhaustive suites."""
