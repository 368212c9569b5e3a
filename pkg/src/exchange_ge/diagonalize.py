"""Constructive diagonalization of invertible and regular matrices.

The pipeline works on a mutable copy of the matrix and records every
elementary operation.  Row scalings by units never enter a transcript: the
working matrix ``M`` is kept in the relation ``E A F = diag(delta) M``, so a
row operation on ``M`` with coefficient ``r`` is recorded as
``delta_i r delta_j^-1`` and a scaling of row ``k`` by ``u^-1`` only updates
``delta_k``.  At the end ``diag(delta) M`` is the certified diagonal.

Row-level steps (orthogonalize, fullify, regularize) are written once against
a :class:`_Line`; the transposed versions run the same code on a column over
the opposite ring, where a left coefficient becomes a right one.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    NoCover,
    NotCovering,
    NotFull,
    NotIdempotentEntry,
    NotInvertible,
    NotRegularMatrix,
    NotUnimodular,
    NoUnit,
    NoSystemFound,
)
from .exchange import full_idempotent_in_range, orthogonal_idempotents
from .linsolve import solve_linear
from .matrices import (
    COL,
    ROW,
    ElementaryOp,
    GEDecomposition,
    Mat,
    Transcript,
    apply_transcript,
    general_linear_group,
    is_invertible,
)
from .ring import Element, FullnessWitness, Ring, is_full, is_unit, solve_right_combination

STRATEGIES = ("unit-first", "full")


# ---------------------------------------------------------------------------
# working state


class _Work:
    def __init__(self, A: Mat):
        self.ring = A.ring
        self.rows = A.rows
        self.cols = A.cols
        self.M = A.to_lists()
        one = self.ring.one
        self.delta = [one] * A.rows
        self.delta_inv = [one] * A.rows
        self.ops: list[ElementaryOp] = []

    def row(self, i: int, j: int, r: Element) -> None:
        """``row_i += r * row_j`` on ``M``."""
        if r.is_zero():
            return
        Mi, Mj = self.M[i], self.M[j]
        for c in range(self.cols):
            Mi[c] = Mi[c] + r * Mj[c]
        self.ops.append(ElementaryOp(ROW, i, j, self.delta[i] * r * self.delta_inv[j]))

    def col(self, i: int, j: int, r: Element) -> None:
        """``col_i += col_j * r`` on ``M``."""
        if r.is_zero():
            return
        for rw in self.M:
            rw[i] = rw[i] + rw[j] * r
        self.ops.append(ElementaryOp(COL, i, j, r))

    def scale_row(self, k: int, u: Element, u_inv: Element) -> None:
        """Replace row ``k`` of ``M`` by ``u^-1 * row_k``, absorbing ``u`` into delta."""
        self.M[k] = [u_inv * x for x in self.M[k]]
        self.delta[k] = self.delta[k] * u
        self.delta_inv[k] = u_inv * self.delta_inv[k]

    def swap(self, side: str, i: int, j: int) -> None:
        """Signed swap: line ``i`` becomes old line ``j``; line ``j`` becomes minus old line ``i``."""
        one, minus = self.ring.one, -self.ring.one
        step = self.row if side == ROW else self.col
        step(i, j, one)
        step(j, i, minus)
        step(i, j, one)

    def move(self, src: tuple[int, int], dst: tuple[int, int]) -> None:
        if src[0] != dst[0]:
            self.swap(ROW, dst[0], src[0])
        if src[1] != dst[1]:
            self.swap(COL, dst[1], src[1])

    def matrix(self) -> Mat:
        return Mat(self.ring, self.M)

    def transcript(self, side: str | None = None) -> Transcript:
        ops = tuple(op for op in self.ops if side is None or op.side == side)
        return Transcript(self.ring, self.rows, self.cols, ops)


class _Line:
    """A row of the working matrix (column ops) or a column (row ops, opposite ring)."""

    def __init__(self, work: _Work, index: int, start: int, transposed: bool = False):
        self.work = work
        self.index = index
        self.start = start
        self.transposed = transposed
        self.ring = work.ring.opposite() if transposed else work.ring

    def entries(self) -> list[Element]:
        M, k, s = self.work.M, self.index, self.start
        if self.transposed:
            return [self.ring.transfer(M[r][k]) for r in range(s, self.work.rows)]
        return list(M[k][s:])

    def op(self, i: int, j: int, r: Element) -> None:
        """Entry ``i`` += entry ``j`` times ``r`` (product taken in ``self.ring``)."""
        s = self.start
        if self.transposed:
            self.work.row(s + i, s + j, self.work.ring.transfer(r))
        else:
            self.work.col(s + i, s + j, r)


# ---------------------------------------------------------------------------
# row-level steps


def _orthogonalize(line: _Line):
    a = line.entries()
    try:
        system = orthogonal_idempotents([[x] for x in a])
    except NotCovering as exc:
        raise NotUnimodular(f"row {a} is not right unimodular") from exc
    es = system.idempotents
    rs = [m[0] for m in system.memberships]  # e_i = a_i r_i
    n = len(a)
    for k in range(n):
        ak = line.entries()[k]
        for i in range(n):
            if i != k:
                # e_i a_k = (current entry i) * r_i a_k, whether or not entry i was already replaced
                line.op(k, i, -(rs[i] * ak))
    b = line.entries()
    return list(es), rs, a, b


def _fullify(line: _Line):
    es, rs, a, b = _orthogonalize(line)
    one = line.ring.one
    for i in range(1, len(b)):
        line.op(0, i, one)
    b1 = line.entries()[0]
    wit = is_full(b1)
    if wit is None:
        raise NotFull("sum of an orthogonal decomposition is not full; broken oracle")
    return es, rs, a, b1, wit


def _regularize_second(line: _Line):
    ring = line.ring
    one = ring.one
    a_orig = line.entries()
    es1, _, _, b1, _ = _fullify(line)
    fi = full_idempotent_in_range(b1)
    a2 = line.entries()[1]
    line.op(1, 0, -(fi.r * a2))
    es2, rs2, _, _ = _orthogonalize(line)
    c2 = line.entries()[1]
    y = rs2[1]
    g = one - es2[1]
    left = es2[1] * (one - fi.e) * es1[1]
    wit = is_full(g)
    if wit is None:
        raise NotFull("complement idempotent is not full; broken oracle")
    return c2, y, g, left, a_orig[1], wit


# ---------------------------------------------------------------------------
# public certificates


@dataclass(frozen=True)
class RowReduction:
    """Column operations taking ``alpha`` to ``b`` with ``R = b_1R + ... + b_nR`` direct.

    ``b_i = e_i a_i = a_i r_i a_i`` and the ``e_i = a_i r_i`` are orthogonal
    idempotents summing to 1.
    """

    alpha: tuple[Element, ...]
    transcript: Transcript
    b: tuple[Element, ...]
    e: tuple[Element, ...]
    r: tuple[Element, ...]

    def replay(self) -> bool:
        ring = self.transcript.ring
        row = apply_transcript(Mat(ring, [self.alpha]), self.transcript).row(0)
        if row != self.b or self.transcript.side_only(ROW).ops:
            return False
        total = ring.zero
        for i, (a, b, e, r) in enumerate(zip(self.alpha, self.b, self.e, self.r)):
            total = total + e
            if e * e != e or a * r != e or b != e * a or b != a * r * a:
                return False
            # bR = eR: b = e b and e = b r
            if e * b != b or b * r != e:
                return False
            for j, f in enumerate(self.e):
                if i != j and not (e * f).is_zero():
                    return False
        return total == ring.one


@dataclass(frozen=True)
class LeadingEntry:
    transcript: Transcript
    b1: Element
    fullness: FullnessWitness


@dataclass(frozen=True)
class SecondEntry:
    """Column operations after which entry 2 is ``c2`` with ``c2 R = (1-g)R`` and ``RgR = R``.

    ``c2 == left * a2`` (``a2`` the original second entry) and ``c2 y c2 == c2``.
    """

    alpha: tuple[Element, ...]
    transcript: Transcript
    c2: Element
    y: Element
    g: Element
    left: Element
    fullness: FullnessWitness

    def replay(self) -> bool:
        ring = self.transcript.ring
        one = ring.one
        row = apply_transcript(Mat(ring, [self.alpha]), self.transcript).row(0)
        c2, y, g = self.c2, self.y, self.g
        return (
            row[1] == c2
            and not self.transcript.side_only(ROW).ops
            and c2 == self.left * self.alpha[1]
            and c2 * y * c2 == c2
            and g * g == g
            and one - g == c2 * y  # (1-g)R = c2 R
            and (one - g) * c2 == c2
            and self.fullness.target == g
            and self.fullness.replay()
        )


@dataclass(frozen=True)
class PivotCertificate:
    """Operations bringing a regular ``d`` to position (1,1) with ``dR = (1-p)R`` and ``Rd = R(1-q)``.

    The ideal equalities are witnessed by ``1-p = d y``, ``d = (1-p) d``,
    ``1-q = y d`` and ``d = d (1-q)``.  When ``shortcut`` is set the (1,1)
    entry was already a unit, ``p = q = 0`` and no fullness is claimed.
    """

    transcript: Transcript
    d: Element
    y: Element
    p: Element
    q: Element
    fullness_p: FullnessWitness | None
    fullness_q: FullnessWitness | None
    shortcut: bool = False

    def replay(self, A: Mat) -> bool:
        one = A.ring.one
        d, y, p, q = self.d, self.y, self.p, self.q
        ok = (
            apply_transcript(A, self.transcript)[0, 0] == d
            and d * y * d == d
            and p * p == p
            and q * q == q
            and one - p == d * y
            and (one - p) * d == d
            and one - q == y * d
            and d * (one - q) == d
        )
        if not ok:
            return False
        if self.shortcut:
            return is_unit(d) is not None and p.is_zero() and q.is_zero()
        return all(
            w is not None and w.target == t and w.replay()
            for w, t in ((self.fullness_p, p), (self.fullness_q, q))
        )


@dataclass(frozen=True)
class UnitRegularFactorization:
    d: Element
    u: Element
    u_inv: Element
    e: Element

    def replay(self) -> bool:
        one = self.d.ring.one
        return (
            self.u * self.u_inv == one
            and self.u_inv * self.u == one
            and self.e * self.e == self.e
            and self.u * self.e == self.d
        )


# ---------------------------------------------------------------------------
# public steps


def _row_work(alpha: Mat | Sequence[Element]) -> tuple[_Work, tuple[Element, ...]]:
    if not isinstance(alpha, Mat):
        alpha = Mat(alpha[0].ring, [list(alpha)])
    if alpha.rows != 1:
        raise NotUnimodular("expected a single row")
    return _Work(alpha), alpha.row(0)


def orthogonalize_row(alpha: Mat | Sequence[Element]) -> RowReduction:
    """Column operations splitting a unimodular row into a direct decomposition of ``R``.

    Raises:
        NotUnimodular: the entries do not generate ``R`` as a right ideal.
    """
    work, a = _row_work(alpha)
    es, rs, _, b = _orthogonalize(_Line(work, 0, 0))
    return RowReduction(a, work.transcript(), tuple(b), tuple(es), tuple(rs))


def fullify_leading_entry(alpha: Mat | Sequence[Element]) -> LeadingEntry:
    """Column operations making the first entry full (``R b1 R = R``)."""
    work, a = _row_work(alpha)
    if len(a) < 2:
        raise NotUnimodular("need at least two entries")
    _, _, _, b1, wit = _fullify(_Line(work, 0, 0))
    return LeadingEntry(work.transcript(), b1, wit)


def regularize_second_entry(alpha: Mat | Sequence[Element]) -> SecondEntry:
    """Column operations making entry 2 regular, a left multiple of the original, with full complement."""
    work, a = _row_work(alpha)
    if len(a) < 2:
        raise NotUnimodular("need at least two entries")
    c2, y, g, left, _, wit = _regularize_second(_Line(work, 0, 0))
    return SecondEntry(a, work.transcript(), c2, y, g, left, wit)


def _require_square(A: Mat) -> None:
    if A.rows != A.cols:
        raise NotInvertible(f"{A.rows}x{A.cols} matrix is not square")


def _prepare_pivot(work: _Work, k: int) -> tuple:
    """Pivot preparation on the corner starting at ``(k, k)``; returns certificate data."""
    ring = work.ring
    one, zero = ring.one, ring.zero
    d = work.M[k][k]
    d_inv = is_unit(d)
    if d_inv is not None:
        return d, d_inv, zero, zero, None, None, True
    try:
        _regularize_second(_Line(work, k, k))
        work.move((k, k + 1), (k + 1, k))
        _, y_op, _, _, _, _ = _regularize_second(_Line(work, k, k, transposed=True))
    except (NotUnimodular, NoSystemFound, NoCover, NotFull) as exc:
        raise NotInvertible(f"pivot preparation failed: {exc}") from exc
    work.move((k + 1, k), (k, k))
    d = work.M[k][k]
    y = ring.transfer(y_op)
    p = one - d * y
    q = one - y * d
    return d, y, p, q, is_full(p), is_full(q), False


def prepare_pivot(A: Mat) -> PivotCertificate:
    """Operations leaving a regular (1,1) entry ``d`` with full complementary idempotents.

    If the (1,1) entry is already a unit nothing is done (``shortcut``).

    Raises:
        NotInvertible: ``A`` is not square or a row fails to be unimodular.
    """
    _require_square(A)
    if A.rows < 2:
        raise NotInvertible("pivot preparation needs n >= 2")
    work = _Work(A)
    d, y, p, q, fp, fq, short = _prepare_pivot(work, 0)
    return PivotCertificate(work.transcript(), d, y, p, q, fp, fq, short)


def unit_regular_factorization(d: Element, cert: PivotCertificate | None = None) -> UnitRegularFactorization:
    """``d = u e`` with ``u`` a unit and ``e`` idempotent; first unit in canonical order.

    Raises:
        NoUnit: ``d`` is not unit-regular.
    """
    ring = d.ring
    for u in ring.units:
        u_inv = is_unit(u)
        e = u_inv * d
        if e * e == e:
            return UnitRegularFactorization(d, u, u_inv, e)
    raise NoUnit(f"{d!r} is not unit-regular in {ring.name}")


def _clear_idempotent(work: _Work, k: int) -> None:
    """Clear row and column ``k`` around an idempotent pivot, leaving 1 there."""
    ring = work.ring
    one = ring.one
    M = work.M
    n = work.rows
    e = M[k][k]
    if e * e != e:
        raise NotIdempotentEntry(f"pivot {e!r} is not idempotent")
    if k == n - 1:
        if e != one:
            raise NotInvertible(f"1x1 corner {e!r} is not invertible")
        return
    for j in range(k + 1, n):
        work.col(j, k, -(e * M[k][j]))
    target = one - e
    if not target.is_zero():
        bs = [M[k][j] for j in range(k + 1, n)]
        coeffs = solve_right_combination(bs, target)
        if coeffs is None:
            raise NotInvertible("first row is not right unimodular")
        for j, s in zip(range(k + 1, n), coeffs):
            work.col(k, j, s)
    for i in range(k + 1, n):
        work.row(i, k, -M[i][k])
    for j in range(k + 1, n):
        work.col(j, k, -M[k][j])


def clear_with_idempotent(A: Mat, pos: tuple[int, int] = (0, 0)) -> Transcript:
    """Operations moving the idempotent entry at ``pos`` to (1,1) and reducing ``A`` to ``1 + A'``.

    Raises:
        NotIdempotentEntry: the entry at ``pos`` is not idempotent.
        NotInvertible: ``A`` is not invertible (detected along the way).
    """
    _require_square(A)
    e = A[pos]
    if e * e != e:
        raise NotIdempotentEntry(f"entry {e!r} at {pos} is not idempotent")
    work = _Work(A)
    work.move(pos, (0, 0))
    _clear_idempotent(work, 0)
    return work.transcript()


def _first_unit(work: _Work, k: int) -> tuple[int, int] | None:
    M = work.M
    n = work.rows
    ring = work.ring
    if ring._mul is not None:
        inv = ring.unit_inverses
        for i in range(k, n):
            row = M[i]
            for j in range(k, n):
                if row[j].idx in inv:
                    return i, j
        return None
    for i in range(k, n):
        for j in range(k, n):
            if is_unit(M[i][j]) is not None:
                return i, j
    return None


def ge_diagonalize(A: Mat, strategy: str = "unit-first", check: bool = True) -> GEDecomposition:
    """Reduce an invertible matrix to an invertible diagonal one by elementary operations.

    The induction handles one corner at a time.  ``unit-first`` moves any unit
    entry of the corner to the pivot when there is one; ``full`` only accepts a
    unit already sitting at the pivot and otherwise runs pivot preparation and
    the unit-regular factorization.

    Raises:
        NotInvertible: ``A`` is not invertible.
        NoUnit: a prepared pivot is not unit-regular (the ring is not separative).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    _require_square(A)
    if check and not is_invertible(A):
        raise NotInvertible("matrix is not invertible")
    work = _Work(A)
    n = A.rows
    for k in range(n):
        pos = _first_unit(work, k) if strategy == "unit-first" else None
        if pos is not None:
            work.move(pos, (k, k))
        d = work.M[k][k]
        u_inv = is_unit(d)
        if u_inv is not None:
            work.scale_row(k, d, u_inv)
        elif k == n - 1:
            raise NotInvertible("last pivot is not a unit")
        else:
            d = _prepare_pivot(work, k)[0]
            f = unit_regular_factorization(d)
            work.scale_row(k, f.u, f.u_inv)
        _clear_idempotent(work, k)
    ring = A.ring
    diag, invs = [], []
    for i in range(n):
        x = work.delta[i] * work.M[i][i]
        xi = is_unit(x)
        if xi is None:
            raise NotInvertible(f"diagonal entry {x!r} is not a unit")
        diag.append(x)
        invs.append(xi)
    return GEDecomposition(A, work.transcript(ROW), work.transcript(COL), Mat.diagonal_of(ring, diag), tuple(invs))


# ---------------------------------------------------------------------------
# regular matrices


@dataclass(frozen=True)
class RegularDiagonalization:
    """``left`` row operations and ``right`` column operations take ``A`` to the diagonal ``D``.

    ``P A Q`` is diagonal for the invertible pair found by search, and
    ``A Y A == A``.
    """

    A: Mat
    left: Transcript
    right: Transcript
    D: Mat
    P: Mat
    Q: Mat
    Y: Mat

    def replay(self) -> bool:
        B = apply_transcript(apply_transcript(self.A, self.left), self.right)
        return (
            B == self.D
            and self.D.is_diagonal()
            and not self.left.side_only(COL).ops
            and not self.right.side_only(ROW).ops
        )


def inner_inverse(A: Mat) -> Mat | None:
    """Some ``Y`` with ``A Y A == A``, by linear solving."""
    ring = A.ring
    n, m = A.rows, A.cols

    def fn(y: list[Element]) -> list[Element]:
        Y = Mat(ring, [y[i * n:(i + 1) * n] for i in range(m)])
        return (A @ Y @ A).flat()

    sol = solve_linear(ring, n * m, fn, A.flat())
    if sol is None:
        return None
    return Mat(ring, [sol[i * n:(i + 1) * n] for i in range(m)])


def _row_factor_ops(dec: GEDecomposition) -> list[ElementaryOp]:
    """Row operations multiplying by ``D^-1 P`` where ``dec`` diagonalizes ``P``."""
    inv = dec.inverses
    diag = dec.D.diagonal()
    ops = [ElementaryOp(ROW, op.j, op.i, -op.r) for op in dec.right.ops]
    for op in reversed(dec.left.ops):
        ops.append(ElementaryOp(ROW, op.i, op.j, -(inv[op.i] * op.r * diag[op.j])))
    return [op for op in ops if not op.r.is_zero()]


def _col_factor_ops(dec: GEDecomposition) -> list[ElementaryOp]:
    """Column operations multiplying by ``Q D^-1`` where ``dec`` diagonalizes ``Q``."""
    inv = dec.inverses
    diag = dec.D.diagonal()
    ops = [ElementaryOp(COL, op.j, op.i, -op.r) for op in dec.left.ops]
    for op in reversed(dec.right.ops):
        ops.append(ElementaryOp(COL, op.i, op.j, -(diag[op.j] * op.r * inv[op.i])))
    return [op for op in ops if not op.r.is_zero()]


def _vectors(ring: Ring, n: int):
    elems = list(ring.elements())
    return itertools.product(elems, repeat=n)


def _find_q(B: Mat, rng: random.Random | None, samples: int) -> Mat | None:
    """Invertible ``Q`` with ``B Q`` diagonal, choosing each column from the annihilator of the other rows."""
    ring = B.ring
    n = B.rows
    if rng is None:
        pool = list(_vectors(ring, n))
    else:
        pool = [tuple(ring.at(rng.randrange(ring.size)) for _ in range(n)) for _ in range(samples)]
    cands = []
    for j in range(n):
        good = []
        for v in pool:
            ok = True
            for i in range(n):
                if i == j:
                    continue
                acc = ring.zero
                for x, y in zip(B.row(i), v):
                    acc = acc + x * y
                if not acc.is_zero():
                    ok = False
                    break
            if ok:
                good.append(v)
        if not good:
            return None
        cands.append(good)
    for cols in itertools.product(*cands):
        Q = Mat(ring, [[cols[j][i] for j in range(n)] for i in range(n)])
        if is_invertible(Q):
            return Q
    return None


def diagonalize_regular(A: Mat, budget: int | None = None, seed: int = 0) -> RegularDiagonalization | None:
    """Two-sided elementary diagonalization of a von Neumann regular square matrix.

    An invertible pair ``P, Q`` with ``P A Q`` diagonal is found by search:
    exhaustive over ``GL_n`` when the ring has at most 16 elements and
    ``n == 2``, seeded random sampling of ``budget`` candidates otherwise.  Both
    are then factored by :func:`ge_diagonalize` and the diagonal parts dropped,
    leaving elementary operations only.

    Returns:
        The certificate, or None when the search budget runs out.

    Raises:
        NotRegularMatrix: no ``Y`` satisfies ``A Y A == A``.
    """
    _require_square(A)
    ring = A.ring
    n = A.rows
    Y = inner_inverse(A)
    if Y is None:
        raise NotRegularMatrix("matrix is not von Neumann regular")
    identity = Mat.identity(ring, n)
    empty = Transcript(ring, n, n, ())
    if A.is_diagonal():
        return RegularDiagonalization(A, empty, empty, A, identity, identity, Y)
    if is_invertible(A):
        dec = ge_diagonalize(A, check=False)
        return RegularDiagonalization(A, dec.left, dec.right, dec.D, identity, identity, Y)

    exhaustive = ring.size <= 16 and n == 2
    rng = None if exhaustive else random.Random(seed)
    if budget is None:
        budget = 10_000 if exhaustive else 2_000
    samples = min(ring.size ** n, 4096)

    def candidates():
        yield identity
        if exhaustive:
            yield from general_linear_group(ring, n)
        else:
            from .matrices import random_invertible

            while True:
                yield random_invertible(ring, n, rng)

    found = None
    for count, P in enumerate(candidates()):
        if count > budget:
            return None
        Q = _find_q(P @ A, rng, samples)
        if Q is not None:
            found = (P, Q)
            break
    if found is None:
        return None
    P, Q = found
    left = _row_factor_ops(ge_diagonalize(P, check=False)) if P != identity else []
    right = _col_factor_ops(ge_diagonalize(Q, check=False)) if Q != identity else []
    L = Transcript(ring, n, n, tuple(left))
    R = Transcript(ring, n, n, tuple(right))
    D = apply_transcript(apply_transcript(A, L), R)
    if not D.is_diagonal():
        raise NotRegularMatrix("factored search result is not diagonal; broken oracle")
    return RegularDiagonalization(A, L, R, D, P, Q, Y)
