"""Brute-force ground truth for module-theoretic claims.

Finitely generated projective right modules are represented by idempotent
matrices: ``P`` (``m x m``) stands for the column module ``P R^m``.  Two such
modules are isomorphic exactly when there are ``X = P X Q`` and ``Y = Q Y P``
with ``X Y = P`` and ``Y X = Q``.

Absence of an isomorphism is proven by an invariant, the *signature*
``(|M e| for e in idempotents(R))``.  ``M e`` is ``Hom(eR, M)``, so isomorphic
modules share it, the signature of a direct sum is the entrywise product, and
a direct summand's signature divides the whole one's.  Presence is proven by
an explicit witness.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from ._modlin import image_size_mod
from .diagonalize import unit_regular_factorization
from .errors import BudgetExhausted, CapExceeded, NoUnit, WrongRing
from .linsolve import image_size, solve_linear
from .matrices import Mat
from .presets import is_square_zero
from .ring import Element, Ring, is_regular, right_ideal, two_sided_ideal

DEFAULT_BUDGET = 512


# ---------------------------------------------------------------------------
# projective modules


@dataclass(frozen=True)
class ProjectiveClass:
    """A projective module given by an idempotent matrix."""

    representative: Mat

    @property
    def size(self) -> int:
        return self.representative.rows

    def __post_init__(self):
        P = self.representative
        if P.rows != P.cols or P @ P != P:
            raise ValueError("representative must be a square idempotent matrix")


@dataclass(frozen=True)
class IsoWitness:
    """``X Y == P`` and ``Y X == Q`` with ``X = P X Q`` and ``Y = Q Y P``."""

    P: Mat
    Q: Mat
    X: Mat
    Y: Mat

    def replay(self) -> bool:
        P, Q, X, Y = self.P, self.Q, self.X, self.Y
        return X @ Y == P and Y @ X == Q and P @ X @ Q == X and Q @ Y @ P == Y


@dataclass(frozen=True)
class SubequivWitness:
    """``Y X == P`` with ``X = Q X P`` and ``Y = P Y Q``; ``X Y`` is then an idempotent below ``Q``."""

    P: Mat
    Q: Mat
    X: Mat
    Y: Mat

    def replay(self) -> bool:
        P, Q, X, Y = self.P, self.Q, self.X, self.Y
        E = X @ Y
        return Y @ X == P and Q @ X @ P == X and P @ Y @ Q == Y and E @ E == E and Q @ E == E and E @ Q == E


def _as_matrix(P: ProjectiveClass | Mat) -> Mat:
    return P.representative if isinstance(P, ProjectiveClass) else P


def signature(P: ProjectiveClass | Mat) -> tuple[int, ...]:
    """``|P R^m e|`` for each idempotent ``e`` of ``R`` (canonical order); ``e = 1`` gives ``|P R^m|``."""
    P = _as_matrix(P)
    ring = P.ring
    m = P.rows
    out = []
    for e in ring.idempotents:
        if e.is_zero():
            out.append(1)
            continue

        def fn(v: list[Element], e=e) -> list[Element]:
            return [x * e for x in (P @ Mat(ring, [[x] for x in v])).col(0)]

        out.append(image_size(ring, m, fn))
    return tuple(out)


def _zero_matrix_candidates(ring: Ring, rows: int, cols: int):
    """Structured ``Z`` first (partial identities), used before random sampling."""
    one, zero = ring.one, ring.zero
    k = min(rows, cols)
    seen = set()
    for perm in itertools.permutations(range(cols), k):
        Z = Mat(ring, [[one if i < k and perm[i] == j else zero for j in range(cols)] for i in range(rows)])
        if Z.key() not in seen:
            seen.add(Z.key())
            yield Z
        if len(seen) > 24:
            return


def _z_stream(ring: Ring, rows: int, cols: int, budget: int, seed: int):
    """Candidates for the free parameter ``Z``; exhaustive when the space fits in ``budget``.

    Yields ``(Z, exhaustive)`` where ``exhaustive`` tells whether the stream
    covers every matrix.
    """
    total = ring.size ** (rows * cols)
    if total <= budget:
        for combo in itertools.product(list(ring.elements()), repeat=rows * cols):
            yield Mat(ring, [combo[i * cols:(i + 1) * cols] for i in range(rows)]), True
        return
    yield from ((Z, False) for Z in _zero_matrix_candidates(ring, rows, cols))
    rng = random.Random(seed)
    for _ in range(budget):
        yield Mat(ring, [[ring.at(rng.randrange(ring.size)) for _ in range(cols)] for _ in range(rows)]), False


def _solve_partner(X: Mat, P: Mat, Q: Mat, iso: bool) -> Mat | None:
    """``Y`` of the right shape completing ``X`` to a witness (``iso`` or summand)."""
    ring = P.ring
    m, k = P.rows, Q.rows
    if iso:
        # X: m x k, Y = Q Y P: k x m, need X Y = P, Y X = Q
        rows, cols = k, m

        def fn(y):
            Y = Q @ Mat(ring, [y[i * cols:(i + 1) * cols] for i in range(rows)]) @ P
            return (X @ Y).flat() + (Y @ X).flat()

        target = P.flat() + Q.flat()
    else:
        # X: k x m (Q X P), Y = P Y Q: m x k, need Y X = P
        rows, cols = m, k

        def fn(y):
            Y = P @ Mat(ring, [y[i * cols:(i + 1) * cols] for i in range(rows)]) @ Q
            return (Y @ X).flat()

        target = P.flat()
    if rows == 0 or cols == 0:
        return None
    sol = solve_linear(ring, rows * cols, fn, target)
    if sol is None:
        return None
    Y = Mat(ring, [sol[i * cols:(i + 1) * cols] for i in range(rows)])
    return (Q @ Y @ P) if iso else (P @ Y @ Q)


def module_iso(
    P: ProjectiveClass | Mat,
    Q: ProjectiveClass | Mat,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> IsoWitness | None:
    """Isomorphism witness between two projectives, or None when proven absent.

    Raises:
        BudgetExhausted: signatures agree but no witness turned up within
            ``budget`` samples of the (non-exhausted) parameter space.
    """
    P, Q = _as_matrix(P), _as_matrix(Q)
    if P == Q:
        return IsoWitness(P, Q, P, P)
    if signature(P) != signature(Q):
        return None
    ring = P.ring
    m, k = P.rows, Q.rows
    if all(x.is_zero() for x in P.flat()):
        Z = Mat.zeros(ring, m, k)
        return IsoWitness(P, Q, Z, Mat.zeros(ring, k, m))
    exhaustive = False
    for Z, exhaustive in _z_stream(ring, m, k, budget, seed):
        X = P @ Z @ Q
        Y = _solve_partner(X, P, Q, iso=True)
        if Y is not None:
            return IsoWitness(P, Q, X, Y)
    if exhaustive:
        return None
    raise BudgetExhausted(f"no isomorphism found within {budget} samples")


def subequiv(
    P: ProjectiveClass | Mat,
    Q: ProjectiveClass | Mat,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
) -> SubequivWitness | None:
    """Witness that ``P``'s module is isomorphic to a direct summand of ``Q``'s, or None if proven absent.

    Raises:
        BudgetExhausted: as for :func:`module_iso`.
    """
    P, Q = _as_matrix(P), _as_matrix(Q)
    ring = P.ring
    m, k = P.rows, Q.rows
    if all(x.is_zero() for x in P.flat()):
        return SubequivWitness(P, Q, Mat.zeros(ring, k, m), Mat.zeros(ring, m, k))
    if P == Q:
        return SubequivWitness(P, Q, P, P)
    if any(b % a for a, b in zip(signature(P), signature(Q))):
        return None
    exhaustive = False
    for Z, exhaustive in _z_stream(ring, k, m, budget, seed):
        X = Q @ Z @ P
        Y = _solve_partner(X, P, Q, iso=False)
        if Y is not None:
            return SubequivWitness(P, Q, X, Y)
    if exhaustive:
        return None
    raise BudgetExhausted(f"no summand embedding found within {budget} samples")


# ---------------------------------------------------------------------------
# enumeration


def idempotent_matrices(ring: Ring, k: int, cap: int = 1 << 22) -> list[Mat]:
    """Every idempotent ``k x k`` matrix, canonical (row-major index) order."""
    ring.require_tables()
    n = ring.size
    total = n ** (k * k)
    if total > cap:
        raise CapExceeded(f"{n}^{k * k} candidate matrices exceed {cap}")
    idx = np.arange(total, dtype=np.int64)
    E = []
    for _ in range(k * k):
        idx, digit = np.divmod(idx, n)
        E.append(digit)
    E = E[::-1]  # row-major, first entry most significant
    add, mul = ring.np_add, ring.np_mul
    mask = np.ones(total, dtype=bool)
    for i in range(k):
        for j in range(k):
            acc = mul[E[i * k], E[j]]
            for l in range(1, k):
                acc = add[acc, mul[E[i * k + l], E[l * k + j]]]
            mask &= acc == E[i * k + j]
    hits = np.nonzero(mask)[0]
    at = ring.at
    out = []
    for h in hits.tolist():
        out.append(Mat(ring, [[at(int(E[i * k + j][h])) for j in range(k)] for i in range(k)]))
    return out


@dataclass
class MonoidTable:
    """Isomorphism classes of projectives represented by idempotent matrices up to ``bound``.

    Classes beyond the enumerated universe are appended on demand when a sum
    is not isomorphic to any known class.
    """

    ring: Ring
    bound: int
    classes: list[ProjectiveClass]
    signatures: list[tuple[int, ...]]
    member_counts: list[int]
    exhaustive: bool = True
    budget: int = DEFAULT_BUDGET
    iso_witnesses: dict = field(default_factory=dict)
    _add: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, P: Mat) -> int:
        """Index of the class of ``P``; appends a new class when none matches."""
        sig = signature(P)
        for i, (cls, s) in enumerate(zip(self.classes, self.signatures)):
            if s != sig:
                continue
            try:
                w = module_iso(P, cls.representative, budget=self.budget)
            except BudgetExhausted:
                self.exhaustive = False
                continue
            if w is not None:
                self.iso_witnesses[P.key()] = (i, w)
                return i
        self.classes.append(ProjectiveClass(P))
        self.signatures.append(sig)
        self.member_counts.append(1)
        return len(self.classes) - 1

    def add(self, i: int, j: int) -> int:
        """Class of the block sum of classes ``i`` and ``j``."""
        key = (min(i, j), max(i, j))
        if key not in self._add:
            S = Mat.block_diag(self.classes[key[0]].representative, self.classes[key[1]].representative)
            self._add[key] = self.class_of(S)
        return self._add[key]

    def multiple(self, i: int, n: int) -> int:
        c = i
        for _ in range(n - 1):
            c = self.add(c, i)
        return c

    def copy(self) -> "MonoidTable":
        """Independent table; classes appended to it do not leak into the original."""
        return replace(
            self,
            classes=list(self.classes),
            signatures=list(self.signatures),
            member_counts=list(self.member_counts),
            iso_witnesses=dict(self.iso_witnesses),
            _add=dict(self._add),
        )

    def zero_class(self) -> int:
        return self.signatures.index(tuple(1 for _ in self.signatures[0]))

    def is_generator(self, i: int) -> bool:
        entries = [x for x in self.classes[i].representative.flat() if not x.is_zero()]
        return bool(entries) and self.ring.one in two_sided_ideal(entries)


_TABLES: dict = {}


def enumerate_projective_classes(ring: Ring, bound: int = 2, budget: int = DEFAULT_BUDGET) -> MonoidTable:
    """Group every idempotent matrix of size ``<= bound`` into isomorphism classes.

    Classes are ordered by the first matrix (smallest size, then canonical
    order) that represents them.  Enumeration is cached per ``(ring, bound)``;
    each call gets its own copy, since sums may append classes.

    Raises:
        CapExceeded: the candidate space is too large to enumerate.
    """
    key = (ring.name, bound, budget)
    if key in _TABLES:
        return _TABLES[key].copy()
    table = MonoidTable(ring, bound, [], [], [], budget=budget)
    for k in range(1, bound + 1):
        for P in idempotent_matrices(ring, k):
            before = len(table.classes)
            c = table.class_of(P)
            if len(table.classes) == before:
                table.member_counts[c] += 1
    _TABLES[key] = table
    return table.copy()


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    """Outcome of an oracle check; ``exhaustive`` is False when some search hit its budget."""

    ring: str
    prop: str
    holds: bool
    bound: int | None = None
    exhaustive: bool = True
    checked: int = 0
    witness: Any = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "property": self.prop,
            "bound": self.bound,
            "verdict": "yes" if self.holds else "no",
            "exhaustive": "yes" if self.exhaustive else "no",
            "checked": self.checked,
            "witness": _jsonable(self.witness),
            "details": _jsonable(self.details),
        }

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(x):
    if isinstance(x, Element):
        return list(x.coords)
    if isinstance(x, Mat):
        return [[list(e.coords) for e in row] for row in x.entries()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def check_separative(ring: Ring, bound: int = 2, budget: int = DEFAULT_BUDGET) -> Verdict:
    """``A+A ~ A+B ~ B+B => A ~ B`` over all class pairs of the bounded universe.

    Premises are refuted by signatures where possible: equal signatures of the
    three sums force ``sig(A) == sig(B)``.  Only pairs with equal signatures
    need explicit sums.  The equivalent three-module form (cancel ``C`` from
    ``A+C ~ B+C`` when ``C`` is a summand of ``A^n`` and ``B^n``, ``n <= 2``)
    is checked on the same universe.
    """
    table = enumerate_projective_classes(ring, bound, budget)
    n = len(table.classes)
    sigs = list(table.signatures)
    checked = 0
    for i in range(n):
        for j in range(i + 1, n):
            checked += 1
            if sigs[i] != sigs[j]:
                continue
            if table.add(i, i) == table.add(i, j) == table.add(j, j):
                return Verdict(ring.name, "separative", False, bound, table.exhaustive, checked,
                               {"A": table.classes[i].representative, "B": table.classes[j].representative})
    cross = 0
    for i in range(n):
        for j in range(i + 1, n):
            if sigs[i] != sigs[j]:
                continue
            for c in range(n):
                cross += 1
                if table.add(i, c) != table.add(j, c):
                    continue
                if _summand_of_multiple(table, c, i) and _summand_of_multiple(table, c, j):
                    return Verdict(ring.name, "separative", False, bound, table.exhaustive, checked,
                                   {"A": table.classes[i].representative, "B": table.classes[j].representative,
                                    "C": table.classes[c].representative, "form": "three-module"})
    return Verdict(ring.name, "separative", True, bound, table.exhaustive, checked,
                   details={"classes": n, "three_module_checks": cross})


def _summand_of_multiple(table: MonoidTable, c: int, a: int, max_n: int = 2) -> bool:
    for mult in range(1, max_n + 1):
        target = table.multiple(a, mult)
        for dcls in range(len(table.classes)):
            if table.add(c, dcls) == target:
                return True
    return False


def check_generator_cancellation(ring: Ring, bound: int = 2, budget: int = DEFAULT_BUDGET) -> Verdict:
    """``A+C ~ B+C => A ~ B`` for generators ``A, B`` (trace ideal ``R``) of the bounded universe."""
    table = enumerate_projective_classes(ring, bound, budget)
    n = len(table.classes)
    gens = [i for i in range(n) if table.is_generator(i)]
    checked = 0
    for a, b in itertools.combinations(gens, 2):
        for c in range(n):
            checked += 1
            if table.signatures[a] != table.signatures[b]:
                continue  # sig(A)sig(C) == sig(B)sig(C) would force equality
            if table.add(a, c) == table.add(b, c):
                return Verdict(ring.name, "generator-cancellation", False, bound, table.exhaustive, checked,
                               {"A": table.classes[a].representative, "B": table.classes[b].representative,
                                "C": table.classes[c].representative})
    return Verdict(ring.name, "generator-cancellation", True, bound, table.exhaustive, checked,
                   details={"generators": len(gens), "classes": n})


def check_stable_rank_one(ring: Ring) -> Verdict:
    """For all ``a, b`` with ``aR + bR = R`` some ``a + b y`` is a unit.  Exhaustive."""
    ring.require_tables()
    n = ring.size
    add, mul = ring.np_add, ring.np_mul
    one = ring.one.idx
    unit = np.zeros(n, dtype=bool)
    unit[list(ring.unit_inverses)] = True
    ideals = [np.unique(mul[a]) for a in range(n)]
    checked = 0
    for a in range(n):
        reach = add[a][mul]  # reach[b, y] = a + b*y
        ok = unit[reach].any(axis=1)
        for b in np.nonzero(~ok)[0].tolist():
            if one in add[np.ix_(ideals[a], ideals[b])]:
                return Verdict(ring.name, "stable-rank-one", False, None, True, checked,
                               {"a": ring.at(a), "b": ring.at(b)})
        checked += n
    return Verdict(ring.name, "stable-rank-one", True, None, True, checked)


def check_exchange_property(ring: Ring) -> Verdict:
    from .exchange import check_exchange

    v = check_exchange(ring)
    return Verdict(ring.name, "exchange", v.holds, None, True, v.checked,
                   None if v.holds else {"a": v.failing})


def cross_validate_unit_regular(ring: Ring, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Unit-regularity by search agrees with ``r.ann(d) ~ R/dR`` for every regular ``d``.

    With ``d y d = d`` the annihilator is ``(1 - y d)R`` and ``R/dR`` is
    ``(1 - d y)R``, both single idempotents.
    """
    one = ring.one
    checked = 0
    exhaustive = True
    for d in ring.elements():
        y = is_regular(d)
        if y is None:
            continue
        checked += 1
        try:
            factored = unit_regular_factorization(d).replay()
        except NoUnit:
            factored = False
        P = Mat(ring, [[one - y * d]])
        Q = Mat(ring, [[one - d * y]])
        try:
            iso = module_iso(P, Q, budget=budget) is not None
        except BudgetExhausted:
            exhaustive = False
            continue
        if iso != factored:
            return Verdict(ring.name, "unit-regular-cross-check", False, 1, exhaustive, checked,
                           {"d": d, "factorization": factored, "isomorphic": iso})
    return Verdict(ring.name, "unit-regular-cross-check", True, 1, exhaustive, checked)


def independence_invariant(A: Mat) -> bool:
    """The nilpotent parts of the entries are linearly independent over the base field.

    Only defined over the square-zero rings ``Fp[x1..xn]/m^2``, where an
    element is its scalar coordinate plus a nilpotent part.  Scalar parts
    are ignored.

    Raises:
        WrongRing: ``A`` lives over another ring.
    """
    ring = A.ring
    if not is_square_zero(ring):
        raise WrongRing(f"independence invariant needs a square-zero preset, got {ring.name}")
    p = ring.orders[0]
    vecs = []
    for x in A.flat():
        vecs.append(list(x.coords[1:]))
    if len(vecs) > ring.d - 1:
        return False
    cols = [list(col) for col in zip(*vecs)]  # nvars x entries
    return image_size_mod(cols, p) == p ** len(vecs)


def unimodular_pair(a: Element, b: Element) -> bool:
    return a.ring.one in right_ideal([a, b])
