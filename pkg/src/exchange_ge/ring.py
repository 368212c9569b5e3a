"""Finite unital rings given by structure constants.

A ring is presented on the additive group ``Z/m1 + ... + Z/md`` with basis
``b1..bd``; multiplication is the bilinear extension of a ``d x d`` table of
coordinate vectors.  Elements are addressed by an integer index in the
*canonical order*: lexicographic on reduced coordinates, first coordinate most
significant.  Every search in the package walks elements in this order, which
is what makes witnesses and transcripts reproducible.

Rings of order at most :data:`TABLE_CAP` get full addition/multiplication
tables and pre-built element objects; bigger rings (up to :data:`ORDER_CAP`)
fall back to coordinate arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    AssociativityViolation,
    BadCoordinates,
    CapExceeded,
    MixedRings,
    UnitLawViolation,
)

TABLE_CAP = 1024
ORDER_CAP = 65536
_SPAN_CACHE_LIMIT = 20000


@dataclass
class RingSpec:
    """Raw presentation of a ring.

    ``mul_table[i][j]`` is the coordinate vector of ``b_i * b_j``.
    """

    name: str
    additive_orders: Sequence[int]
    mul_table: Sequence
    one: Sequence[int]
    tags: dict = field(default_factory=dict)


class Element:
    """An element of a finite ring; immutable, compared by index."""

    __slots__ = ("ring", "idx")

    def __init__(self, ring: "Ring", idx: int):
        self.ring = ring
        self.idx = idx

    @property
    def coords(self) -> tuple[int, ...]:
        return self.ring.coords_of(self.idx)

    def _check(self, other: "Element") -> None:
        if other.ring is not self.ring and other.ring != self.ring:
            raise MixedRings(f"{self.ring.name} vs {other.ring.name}")

    def __add__(self, other: "Element") -> "Element":
        if other.ring is not self.ring:
            self._check(other)
        return self.ring._add_idx(self.idx, other.idx)

    def __sub__(self, other: "Element") -> "Element":
        if other.ring is not self.ring:
            self._check(other)
        return self.ring._sub_idx(self.idx, other.idx)

    def __neg__(self) -> "Element":
        return self.ring._neg_idx(self.idx)

    def __mul__(self, other: "Element") -> "Element":
        if other.ring is not self.ring:
            self._check(other)
        return self.ring._mul_idx(self.idx, other.idx)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.idx == other.idx and (self.ring is other.ring or self.ring == other.ring)

    def __hash__(self) -> int:
        return hash((self.ring.name, self.idx))

    def __lt__(self, other: "Element") -> bool:
        return self.idx < other.idx

    def __le__(self, other: "Element") -> bool:
        return self.idx <= other.idx

    def is_zero(self) -> bool:
        return self.idx == 0

    def __repr__(self) -> str:
        c = self.coords
        return str(c[0]) if len(c) == 1 else "(" + ",".join(map(str, c)) + ")"


@dataclass(frozen=True)
class FullnessWitness:
    """``sum(x_i * target * y_i) == 1``, certifying that ``R target R = R``."""

    left_coeffs: tuple[Element, ...]
    right_coeffs: tuple[Element, ...]
    target: Element

    def replay(self) -> bool:
        ring = self.target.ring
        total = ring.zero
        for x, y in zip(self.left_coeffs, self.right_coeffs):
            total = total + x * self.target * y
        return len(self.left_coeffs) == len(self.right_coeffs) and total == ring.one


class Ring:
    """A validated finite unital ring.  Build with :func:`load_ring`."""

    def __init__(self, spec: RingSpec):
        self.name = spec.name
        self.orders = tuple(int(m) for m in spec.additive_orders)
        self.d = len(self.orders)
        self.table = np.asarray(spec.mul_table, dtype=np.int64).reshape(self.d, self.d, self.d)
        self.one_coords = tuple(int(c) for c in spec.one)
        self.tags = dict(spec.tags)
        self.size = prod(self.orders)
        self.exponent = int(np.lcm.reduce(np.array(self.orders, dtype=np.int64))) if self.d else 1
        w = [1] * self.d
        for i in range(self.d - 2, -1, -1):
            w[i] = w[i + 1] * self.orders[i + 1]
        self._weights = tuple(w)
        # sparse structure constants: (i, j) -> [(k, c), ...]
        self._sc = [
            [[(k, int(c)) for k, c in enumerate(self.table[i, j]) if c] for j in range(self.d)]
            for i in range(self.d)
        ]
        self._elems: list[Element] | None = None
        self._add = self._mul = self._neg = None
        self._span_cache: dict = {}
        self._opposite: Ring | None = None
        if self.size <= TABLE_CAP:
            self._build_tables()

    # -- identity -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Ring):
            return NotImplemented
        return (
            self.name == other.name
            and self.orders == other.orders
            and self.one_coords == other.one_coords
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.name, self.orders))

    def __repr__(self) -> str:
        return f"Ring({self.name!r}, order={self.size})"

    # -- coordinates --------------------------------------------------------
    def index_of(self, coords: Sequence[int]) -> int:
        return sum((int(c) % m) * w for c, m, w in zip(coords, self.orders, self._weights))

    def coords_of(self, idx: int) -> tuple[int, ...]:
        out = []
        for m, w in zip(self.orders, self._weights):
            out.append((idx // w) % m)
        return tuple(out)

    def element(self, coords) -> Element:
        """Element from a coordinate sequence (or a bare int when d == 1)."""
        if isinstance(coords, (int, np.integer)):
            if self.d != 1:
                raise BadCoordinates(f"{self.name} needs {self.d} coordinates")
            coords = (int(coords),)
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.d:
            raise BadCoordinates(f"{self.name} needs {self.d} coordinates, got {len(coords)}")
        return self.at(self.index_of(coords))

    def at(self, idx: int) -> Element:
        if self._elems is not None:
            return self._elems[idx]
        return Element(self, idx)

    def scale(self, x: Element, n: int) -> Element:
        """``n`` copies of ``x`` added together (n may be negative)."""
        return self.element(tuple(c * n for c in x.coords))

    @cached_property
    def zero(self) -> Element:
        return self.at(0)

    @cached_property
    def one(self) -> Element:
        return self.at(self.index_of(self.one_coords))

    @cached_property
    def basis(self) -> tuple[Element, ...]:
        return tuple(self.element([int(i == j) for j in range(self.d)]) for i in range(self.d))

    def elements(self) -> Iterator[Element]:
        """All elements in canonical order."""
        if self._elems is not None:
            return iter(self._elems)
        return (Element(self, i) for i in range(self.size))

    # -- arithmetic ---------------------------------------------------------
    def _add_coords(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.orders))

    def _mul_coords(self, a, b):
        out = [0] * self.d
        sc = self._sc
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = sc[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                f = ai * bj
                for k, c in row[j]:
                    out[k] += f * c
        return tuple(v % m for v, m in zip(out, self.orders))

    def _add_idx(self, i: int, j: int) -> Element:
        if self._add is not None:
            return self._elems[self._add[i][j]]
        return Element(self, self.index_of(self._add_coords(self.coords_of(i), self.coords_of(j))))

    def _sub_idx(self, i: int, j: int) -> Element:
        if self._add is not None:
            return self._elems[self._add[i][self._neg[j]]]
        a, b = self.coords_of(i), self.coords_of(j)
        return Element(self, self.index_of(tuple(x - y for x, y in zip(a, b))))

    def _neg_idx(self, i: int) -> Element:
        if self._neg is not None:
            return self._elems[self._neg[i]]
        return Element(self, self.index_of(tuple(-x for x in self.coords_of(i))))

    def _mul_idx(self, i: int, j: int) -> Element:
        if self._mul is not None:
            return self._elems[self._mul[i][j]]
        return Element(self, self.index_of(self._mul_coords(self.coords_of(i), self.coords_of(j))))

    def _build_tables(self) -> None:
        n, d = self.size, self.d
        coords = np.array([self.coords_of(i) for i in range(n)], dtype=np.int64).reshape(n, d)
        orders = np.array(self.orders, dtype=np.int64)
        weights = np.array(self._weights, dtype=np.int64)
        add = np.empty((n, n), dtype=np.int64)
        mul = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            add[a] = (((coords[a] + coords) % orders) * weights).sum(axis=1)
            left = np.einsum("i,ijk->jk", coords[a], self.table)  # b -> a*b on coordinates
            mul[a] = (((coords @ left) % orders) * weights).sum(axis=1)
        neg = (((-coords) % orders) * weights).sum(axis=1)
        self.np_add, self.np_mul, self.np_neg = add, mul, neg
        self._add, self._mul, self._neg = add.tolist(), mul.tolist(), neg.tolist()
        self._elems = [Element(self, i) for i in range(n)]

    def require_tables(self) -> None:
        if self._add is None:
            raise CapExceeded(f"{self.name} has order {self.size} > {TABLE_CAP}; no tables")

    # -- derived structure -------------------------------------------------
    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.transpose(1, 0, 2)))

    @cached_property
    def idempotents(self) -> tuple[Element, ...]:
        """All idempotents, canonical order."""
        if self._mul is not None:
            m = self._mul
            return tuple(self._elems[i] for i in range(self.size) if m[i][i] == i)
        return tuple(x for x in self.elements() if x * x == x)

    @cached_property
    def unit_inverses(self) -> dict[int, int]:
        """Map unit index -> inverse index (table mode only)."""
        self.require_tables()
        one = self.one.idx
        hits = np.argwhere(self.np_mul == one)
        left = {}
        for a, b in hits.tolist():
            left.setdefault(a, b)
        return {a: b for a, b in left.items() if self._mul[b][a] == one}

    @cached_property
    def units(self) -> tuple[Element, ...]:
        if self._mul is not None:
            return tuple(self._elems[i] for i in sorted(self.unit_inverses))
        return tuple(x for x in self.elements() if is_unit(x) is not None)

    def opposite(self) -> "Ring":
        """The opposite ring (same coordinates, reversed multiplication)."""
        if self._opposite is None:
            name = self.name[:-3] if self.name.endswith("^op") else self.name + "^op"
            spec = RingSpec(name, self.orders, self.table.transpose(1, 0, 2), self.one_coords, dict(self.tags))
            op = Ring(spec)
            op._opposite = self
            self._opposite = op
        return self._opposite

    def transfer(self, x: Element) -> Element:
        """The element with the same coordinates in this ring (used for ``R^op``)."""
        return self.at(x.idx)


def load_ring(spec: RingSpec) -> Ring:
    """Validate a presentation and return a ring handle.

    Raises:
        BadCoordinates: wrong shapes, unreduced entries, or a table that is not
            well defined on the additive group.
        UnitLawViolation: ``one`` is not a two-sided identity on some basis element.
        AssociativityViolation: first basis triple where associativity fails.
    """
    orders = [int(m) for m in spec.additive_orders]
    d = len(orders)
    if d == 0 or any(m < 1 for m in orders):
        raise BadCoordinates("additive orders must be a non-empty list of positive integers")
    size = prod(orders)
    if size > ORDER_CAP:
        raise CapExceeded(f"ring order {size} exceeds cap {ORDER_CAP}")
    try:
        T = np.asarray(spec.mul_table, dtype=np.int64).reshape(d, d, d)
    except ValueError as exc:
        raise BadCoordinates(f"mul_table must have {d}x{d}x{d} entries") from exc
    one = [int(c) for c in spec.one]
    if len(one) != d:
        raise BadCoordinates(f"one must have {d} coordinates")
    m = np.array(orders, dtype=np.int64)
    for k in range(d):
        if not 0 <= one[k] < orders[k]:
            raise BadCoordinates(f"one coordinate {k} not reduced mod {orders[k]}")
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if not 0 <= T[i, j, k] < orders[k]:
                    raise BadCoordinates(f"table entry b{i}*b{j} coordinate {k} not reduced mod {orders[k]}")
            # bilinear extension must respect the additive orders of b_i and b_j
            if np.any((orders[i] * T[i, j]) % m) or np.any((orders[j] * T[i, j]) % m):
                raise BadCoordinates(f"product b{i}*b{j} is not killed by the orders of its factors")
    ring = Ring(RingSpec(spec.name, orders, T, one, dict(spec.tags)))
    for i, b in enumerate(ring.basis):
        if ring.one * b != b or b * ring.one != b:
            raise UnitLawViolation(i)
    # (b_i b_j) b_k vs b_i (b_j b_k) via contracted structure constants
    lhs = np.einsum("ijl,lkm->ijkm", T, T) % m
    rhs = np.einsum("jkl,ilm->ijkm", T, T) % m
    bad = np.argwhere(np.any(lhs != rhs, axis=3))
    if len(bad):
        i, j, k = (int(v) for v in bad[0])
        raise AssociativityViolation(i, j, k)
    return ring


# ---------------------------------------------------------------------------
# additive spans with witnesses


class Span:
    """Additive subgroup generated by ``gens``, explored breadth first.

    Every member remembers the generator that first reached it, so
    :meth:`counts` returns how many copies of each generator sum to it.
    """

    def __init__(self, ring: Ring, gens: Sequence[Element]):
        self.ring = ring
        self.gens = tuple(gens)
        parent: dict[int, tuple[int, int] | None] = {0: None}
        frontier = [0]
        gidx = []
        seen_g = set()
        for g in self.gens:
            # duplicate and zero generators never reach anything new first
            gidx.append(-1 if g.idx in seen_g or g.idx == 0 else g.idx)
            seen_g.add(g.idx)
        if ring._add is not None:
            add = ring._add
            while frontier:
                nxt = []
                for x in frontier:
                    row = add[x]
                    for k, g in enumerate(gidx):
                        if g < 0:
                            continue
                        s = row[g]
                        if s not in parent:
                            parent[s] = (x, k)
                            nxt.append(s)
                frontier = nxt
        else:
            while frontier:
                nxt = []
                for x in frontier:
                    for k, g in enumerate(gidx):
                        if g < 0:
                            continue
                        s = ring._add_idx(x, g).idx
                        if s not in parent:
                            parent[s] = (x, k)
                            nxt.append(s)
                frontier = nxt
        self._parent = parent

    def __contains__(self, x: Element) -> bool:
        return x.idx in self._parent

    def __len__(self) -> int:
        return len(self._parent)

    def members(self) -> list[Element]:
        return [self.ring.at(i) for i in sorted(self._parent)]

    def counts(self, x: Element) -> list[int] | None:
        if x.idx not in self._parent:
            return None
        out = [0] * len(self.gens)
        node = self._parent[x.idx]
        while node is not None:
            prev, k = node
            out[k] += 1
            node = self._parent[prev]
        return out


def _cached_span(ring: Ring, key, builder) -> Span:
    cache = ring._span_cache
    span = cache.get(key)
    if span is None:
        if len(cache) > _SPAN_CACHE_LIMIT:
            cache.clear()
        span = builder()
        cache[key] = span
    return span


def _same_ring(elements: Sequence[Element]) -> Ring:
    ring = elements[0].ring
    for x in elements[1:]:
        if x.ring is not ring and x.ring != ring:
            raise MixedRings(f"{ring.name} vs {x.ring.name}")
    return ring


class IdealSpan:
    """Right, left or two-sided ideal generated by a list of elements.

    Additive generators are ``a_i*m`` (right), ``m*a_i`` (left) or
    ``m*a_i*n`` (two-sided) with ``m, n`` running over ``1`` then the basis.
    """

    def __init__(self, ring: Ring, generators: Sequence[Element], side: str):
        self.ring = ring
        self.generators = tuple(generators)
        self.side = side
        mults = (ring.one,) + ring.basis
        labels = []
        add_gens = []
        for i, a in enumerate(self.generators):
            if side == "right":
                for m in mults:
                    labels.append((i, None, m))
                    add_gens.append(a * m)
            elif side == "left":
                for m in mults:
                    labels.append((i, m, None))
                    add_gens.append(m * a)
            else:
                for m in mults:
                    for n in mults:
                        labels.append((i, m, n))
                        add_gens.append(m * a * n)
        self.labels = labels
        self.span = Span(ring, add_gens)

    def __contains__(self, x: Element) -> bool:
        return x in self.span

    def __len__(self) -> int:
        return len(self.span)

    def members(self) -> list[Element]:
        return self.span.members()

    def coefficients(self, x: Element) -> list[Element] | None:
        """One-sided coefficients ``c_i`` with ``x = sum a_i c_i`` (or ``c_i a_i``)."""
        counts = self.span.counts(x)
        if counts is None:
            return None
        ring = self.ring
        coeffs = [ring.zero] * len(self.generators)
        for cnt, (i, m, n) in zip(counts, self.labels):
            if cnt:
                mult = n if self.side == "right" else m
                coeffs[i] = coeffs[i] + ring.scale(mult, cnt)
        return coeffs

    def terms(self, x: Element) -> list[tuple[int, Element, Element]] | None:
        """Two-sided terms ``(i, l, r)`` with ``x = sum l * a_i * r``."""
        counts = self.span.counts(x)
        if counts is None:
            return None
        out = []
        for cnt, (i, m, n) in zip(counts, self.labels):
            if cnt:
                out.append((i, self.ring.scale(m, cnt), n))
        return out


def right_ideal(generators: Sequence[Element]) -> IdealSpan:
    ring = _same_ring(generators)
    key = ("right", tuple(g.idx for g in generators))
    return _cached_span(ring, key, lambda: IdealSpan(ring, generators, "right"))


def left_ideal(generators: Sequence[Element]) -> IdealSpan:
    ring = _same_ring(generators)
    key = ("left", tuple(g.idx for g in generators))
    return _cached_span(ring, key, lambda: IdealSpan(ring, generators, "left"))


def two_sided_ideal(generators: Sequence[Element]) -> IdealSpan:
    ring = _same_ring(generators)
    key = ("two", tuple(g.idx for g in generators))
    return _cached_span(ring, key, lambda: IdealSpan(ring, generators, "two"))


# ---------------------------------------------------------------------------
# element predicates


def solve_right_combination(generators: Sequence[Element], b: Element) -> list[Element] | None:
    """Coefficients ``x_i`` with ``sum(a_i * x_i) == b``, or None if ``b`` is not in the right ideal."""
    if not generators:
        return [] if b.is_zero() else None
    _same_ring(list(generators) + [b])
    return right_ideal(generators).coefficients(b)


def solve_left_combination(generators: Sequence[Element], b: Element) -> list[Element] | None:
    """Coefficients ``x_i`` with ``sum(x_i * a_i) == b``, or None."""
    if not generators:
        return [] if b.is_zero() else None
    _same_ring(list(generators) + [b])
    return left_ideal(generators).coefficients(b)


def is_unit(x: Element) -> Element | None:
    """Two-sided inverse of ``x`` or None."""
    ring = x.ring
    if ring._mul is not None:
        inv = ring.unit_inverses.get(x.idx)
        return None if inv is None else ring.at(inv)
    c = right_ideal([x]).coefficients(ring.one)
    if c is None:
        return None
    y = c[0]
    return y if y * x == ring.one else None


def is_regular(x: Element) -> Element | None:
    """First ``y`` in canonical order with ``x*y*x == x``, or None."""
    ring = x.ring
    if ring._mul is not None:
        m = ring._mul
        xi = x.idx
        row = m[xi]
        for y in range(ring.size):
            if m[row[y]][xi] == xi:
                return ring.at(y)
        return None
    for y in ring.elements():
        if x * y * x == x:
            return y
    return None


def is_full(a: Element) -> FullnessWitness | None:
    """Witness that the two-sided ideal ``RaR`` is all of ``R``, or None."""
    ring = a.ring
    terms = two_sided_ideal([a]).terms(ring.one)
    if terms is None:
        return None
    return FullnessWitness(tuple(t[1] for t in terms), tuple(t[2] for t in terms), a)


def right_annihilator(x: Element) -> list[Element]:
    return [r for r in x.ring.elements() if (x * r).is_zero()]
