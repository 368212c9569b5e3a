"""Idempotent witnesses for the exchange property and its consequences.

Each search walks idempotents in canonical order and solves ideal membership
by breadth-first spans, so every certificate is deterministic and carries the
ring elements needed to replay it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NoCover, NoSystemFound, NotCovering, NotExchange, NotFull
from .ring import (
    Element,
    FullnessWitness,
    Ring,
    Span,
    is_full,
    right_ideal,
    two_sided_ideal,
)


@dataclass(frozen=True)
class IdempotentCertificate:
    """``e*e == e``, ``e == a*x`` and ``1 - e == (1 - a)*y``."""

    a: Element
    e: Element
    x: Element
    y: Element

    def replay(self) -> bool:
        one = self.a.ring.one
        return (
            self.e * self.e == self.e
            and self.a * self.x == self.e
            and (one - self.a) * self.y == one - self.e
        )


@dataclass(frozen=True)
class ExchangeVerdict:
    holds: bool
    checked: int
    failing: Element | None = None


@dataclass(frozen=True)
class OrthogonalSystem:
    """Orthogonal idempotents summing to 1, with ``e_j`` in the j-th right ideal.

    ``memberships[j]`` are coefficients ``c`` with ``e_j == sum(g * c)`` over
    ``generators[j]``.
    """

    idempotents: tuple[Element, ...]
    generators: tuple[tuple[Element, ...], ...]
    memberships: tuple[tuple[Element, ...], ...]

    def replay(self) -> bool:
        es = self.idempotents
        if not es:
            return False
        ring = es[0].ring
        total = ring.zero
        for i, e in enumerate(es):
            total = total + e
            if e * e != e:
                return False
            for j, f in enumerate(es):
                if i != j and not (e * f).is_zero():
                    return False
        if total != ring.one:
            return False
        for e, gens, coeffs in zip(es, self.generators, self.memberships):
            acc = ring.zero
            for g, c in zip(gens, coeffs):
                acc = acc + g * c
            if acc != e or len(gens) != len(coeffs):
                return False
        return True


@dataclass(frozen=True)
class SubequivalenceWitness:
    """``fR`` is isomorphic to a direct summand of ``eR``.

    ``s`` lies in ``eRf``, ``t`` in ``fRe`` and ``t*s == f``; then ``s*t`` is
    an idempotent below ``e`` whose right ideal is a copy of ``fR``.
    """

    f: Element
    e: Element
    s: Element
    t: Element

    def replay(self) -> bool:
        e, f, s, t = self.e, self.f, self.s, self.t
        st = s * t
        return (
            e * s * f == s
            and f * t * e == t
            and t * s == f
            and st * st == st
            and e * st == st
            and st * e == st
        )


@dataclass(frozen=True)
class CoveringIdempotent:
    """Idempotent ``e`` in ``sum(e_i R)`` with ``e*e_1 == e_1`` and ``e_i R`` below ``eR`` as summands."""

    inputs: tuple[Element, ...]
    e: Element
    coefficients: tuple[Element, ...]
    subequivalences: tuple[SubequivalenceWitness, ...]

    def replay(self) -> bool:
        ring = self.e.ring
        acc = ring.zero
        for ei, c in zip(self.inputs, self.coefficients):
            acc = acc + ei * c
        return (
            self.e * self.e == self.e
            and acc == self.e
            and self.e * self.inputs[0] == self.inputs[0]
            and all(w.replay() and w.e == self.e and w.f == f for w, f in zip(self.subequivalences, self.inputs))
            and len(self.subequivalences) == len(self.inputs)
        )

    def ideal_equality(self) -> bool:
        """``ReR == Re_1R + ... + Re_nR`` by explicit two-sided closure."""
        lhs = set(x.idx for x in two_sided_ideal([self.e]).members())
        rhs = set(x.idx for x in two_sided_ideal(list(self.inputs)).members())
        return lhs == rhs


@dataclass(frozen=True)
class FullIdempotent:
    """Idempotent ``e`` with ``e == a*r`` (or ``r*a`` when ``side == 'left'``) and ``ReR == R``."""

    a: Element
    e: Element
    r: Element
    fullness: FullnessWitness
    side: str = "right"

    def replay(self) -> bool:
        prod = self.a * self.r if self.side == "right" else self.r * self.a
        return (
            self.e * self.e == self.e
            and prod == self.e
            and self.fullness.target == self.e
            and self.fullness.replay()
        )


def exchange_idempotent(a: Element) -> IdempotentCertificate:
    """First idempotent ``e`` with ``e`` in ``aR`` and ``1 - e`` in ``(1 - a)R``.

    Raises:
        NotExchange: no such idempotent, i.e. the ring fails the exchange
            criterion at ``a``.
    """
    ring = a.ring
    one = ring.one
    ideal_a = right_ideal([a])
    ideal_b = right_ideal([one - a])
    for e in ring.idempotents:
        if e in ideal_a and (one - e) in ideal_b:
            x = ideal_a.coefficients(e)[0]
            y = ideal_b.coefficients(one - e)[0]
            return IdempotentCertificate(a, e, x, y)
    raise NotExchange(a)


def check_exchange(ring: Ring) -> ExchangeVerdict:
    """Run :func:`exchange_idempotent` on every element."""
    n = 0
    for a in ring.elements():
        n += 1
        try:
            exchange_idempotent(a)
        except NotExchange:
            return ExchangeVerdict(False, n, a)
    return ExchangeVerdict(True, n)


def orthogonal_idempotents(ideal_generators: Sequence[Sequence[Element]]) -> OrthogonalSystem:
    """Orthogonal idempotents ``e_j`` in ``I_j`` with ``sum(e_j) == 1``.

    ``I_j`` is the right ideal generated by ``ideal_generators[j]``.  The
    search picks ``e_1`` in ``I_1`` with ``1 - e_1`` in ``I_2 + ... + I_n``,
    then continues inside the corner ``(1 - e_1) R (1 - e_1)``: the next
    idempotent must sit below the remaining sum, and so on.  Backtracking over
    the canonical idempotent order makes the search exhaustive, so a failure
    means no such system exists.

    Raises:
        NotCovering: the ideals do not sum to ``R``.
        NoSystemFound: the ideals cover ``R`` but no system exists (the ring is
            not an exchange ring).
    """
    gens = [tuple(g) for g in ideal_generators]
    if not gens:
        raise NotCovering("no ideals given")
    ring = next(g[0].ring for g in gens if g) if any(gens) else None
    if ring is None:
        raise NotCovering("all ideals are zero")
    n = len(gens)
    ideals = [right_ideal(list(g)) if g else None for g in gens]
    tails = []
    for k in range(n):
        flat = [x for g in gens[k:] for x in g]
        tails.append(right_ideal(flat) if flat else None)
    one, zero = ring.one, ring.zero
    if tails[0] is None or one not in tails[0]:
        raise NotCovering("the right ideals do not sum to R")

    def member(k, x):
        return x.is_zero() if ideals[k] is None else x in ideals[k]

    def search(k: int, rest: Element, chosen: list[Element]):
        if k == n - 1:
            return chosen + [rest] if member(k, rest) else None
        for e in ring.idempotents:
            if not member(k, e) or e * rest != e or rest * e != e:
                continue
            remaining = rest - e
            tail = tails[k + 1]
            if remaining.is_zero() or (tail is not None and remaining in tail):
                found = search(k + 1, remaining, chosen + [e])
                if found is not None:
                    return found
        return None

    found = search(0, one, [])
    if found is None:
        raise NoSystemFound("no orthogonal idempotent system subordinate to the ideals")
    memberships = []
    for k, e in enumerate(found):
        if ideals[k] is None:
            memberships.append(())
        else:
            memberships.append(tuple(ideals[k].coefficients(e)))
    return OrthogonalSystem(tuple(found), tuple(gens), tuple(memberships))


def subequivalence(f: Element, e: Element) -> SubequivalenceWitness | None:
    """Witness that ``fR`` is isomorphic to a direct summand of ``eR``."""
    ring = f.ring
    cache = ring._span_cache
    key = ("subeq", f.idx, e.idx)
    if key in cache:
        return cache[key]
    result = None
    seen = set()
    mults = (ring.one,) + ring.basis
    for r in ring.elements():
        s = e * r * f
        if s.idx in seen:
            continue
        seen.add(s.idx)
        # t = f m e with t*s == f: span of f*b*e*s over b
        gens = [f * m * e * s for m in mults]
        span = Span(ring, gens)
        counts = span.counts(f)
        if counts is not None:
            m_total = ring.zero
            for c, m in zip(counts, mults):
                if c:
                    m_total = m_total + ring.scale(m, c)
            result = SubequivalenceWitness(f, e, s, f * m_total * e)
            break
    cache[key] = result
    return result


def covering_idempotent(idempotents: Sequence[Element]) -> CoveringIdempotent:
    """An idempotent ``e`` in ``e_1R + ... + e_nR`` with ``e_1R <= eR`` and every ``e_iR`` a summand-copy in ``eR``.

    Raises:
        NoCover: no idempotent qualifies (cannot happen over an exchange ring).
    """
    es = tuple(idempotents)
    ring = es[0].ring
    span = right_ideal(list(es))
    e1 = es[0]
    for e in ring.idempotents:
        if e not in span or e * e1 != e1:
            continue
        witnesses = []
        for f in es:
            w = subequivalence(f, e)
            if w is None:
                break
            witnesses.append(w)
        else:
            return CoveringIdempotent(es, e, tuple(span.coefficients(e)), tuple(witnesses))
    raise NoCover("no covering idempotent found")


def full_idempotent_in_range(a: Element) -> FullIdempotent:
    """Idempotent ``e`` in ``aR`` generating ``R`` as a two-sided ideal.

    Follows the construction through an orthogonal decomposition: write
    ``1 = sum(x_i a y_i)``, split ``1`` into orthogonal ``g_i`` in ``x_i a R``,
    transport each ``g_i`` to the idempotent ``a y_i x_i`` in ``aR`` and cover
    those by a single idempotent.

    Raises:
        NotFull: ``RaR != R``.
    """
    ring = a.ring
    wit = is_full(a)
    if wit is None:
        raise NotFull(f"{a!r} does not generate R as a two-sided ideal")
    xs = list(wit.left_coeffs)
    system = orthogonal_idempotents([[x * a] for x in xs])
    es, ys = [], []
    for x, g, coeff in zip(xs, system.idempotents, system.memberships):
        y = coeff[0] * g  # g = x a y with y = y g
        ys.append(y)
        es.append(a * y * x)
    cover = covering_idempotent(es)
    r = ring.zero
    for y, x, c in zip(ys, xs, cover.coefficients):
        r = r + y * x * c
    e = cover.e
    fullness = is_full(e)
    if fullness is None or a * r != e:
        raise NoCover("covering idempotent is not full; broken oracle")
    return FullIdempotent(a, e, r, fullness, "right")


def full_idempotent_in_corange(a: Element) -> FullIdempotent:
    """Mirror of :func:`full_idempotent_in_range`: idempotent ``f = r*a`` with ``RfR == R``."""
    ring = a.ring
    op = ring.opposite()
    res = full_idempotent_in_range(op.transfer(a))
    f = ring.transfer(res.e)
    fullness = is_full(f)
    return FullIdempotent(a, f, ring.transfer(res.r), fullness, "left")
