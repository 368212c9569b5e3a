"""Matrices over finite rings, elementary operations and their transcripts.

Conventions (indices are 0-based in the Python API, 1-based in files):

* ``ElementaryOp(ROW, i, j, r)``: ``row_i <- row_i + r * row_j`` (left
  coefficient), i.e. left multiplication by ``I + r e_ij``.
* ``ElementaryOp(COL, i, j, r)``: ``col_i <- col_i + col_j * r`` (right
  coefficient), i.e. right multiplication by ``I + r e_ji``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BadIndex, CapExceeded, DimensionMismatch, MixedRings
from .linsolve import solve_linear
from .ring import Element, Ring, is_unit

ROW = "row"
COL = "col"


class Mat:
    """Immutable matrix with entries in one ring."""

    __slots__ = ("ring", "rows", "cols", "_e")

    def __init__(self, ring: Ring, entries: Sequence[Sequence[Element]]):
        self.ring = ring
        self._e = tuple(tuple(row) for row in entries)
        self.rows = len(self._e)
        self.cols = len(self._e[0]) if self.rows else 0
        for row in self._e:
            if len(row) != self.cols:
                raise DimensionMismatch("ragged matrix rows")
            for x in row:
                if x.ring is not ring and x.ring != ring:
                    raise MixedRings(f"entry from {x.ring.name} in matrix over {ring.name}")

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Mat":
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Mat":
        return cls(ring, [[ring.zero] * cols for _ in range(rows)])

    @classmethod
    def from_coords(cls, ring: Ring, rows: Sequence[Sequence]) -> "Mat":
        """Build from nested coordinates; bare ints are allowed when ``ring.d == 1``."""
        return cls(ring, [[ring.element(c) for c in row] for row in rows])

    @classmethod
    def diagonal_of(cls, ring: Ring, entries: Sequence[Element]) -> "Mat":
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, *blocks: "Mat") -> "Mat":
        ring = blocks[0].ring
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        rows = [[ring.zero] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    rows[r0 + i][c0 + j] = b._e[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls(ring, rows)

    # -- access -------------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> Element:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple[Element, ...]:
        return self._e[i]

    def col(self, j: int) -> tuple[Element, ...]:
        return tuple(r[j] for r in self._e)

    def entries(self) -> tuple[tuple[Element, ...], ...]:
        return self._e

    def to_lists(self) -> list[list[Element]]:
        return [list(r) for r in self._e]

    def coords(self) -> list[list[tuple[int, ...]]]:
        return [[x.coords for x in r] for r in self._e]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def flat(self) -> list[Element]:
        return [x for r in self._e for x in r]

    # -- algebra ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash(tuple(x.idx for r in self._e for x in r))

    def key(self) -> tuple[int, ...]:
        return (self.rows, self.cols) + tuple(x.idx for r in self._e for x in r)

    def __add__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_shape(other)
        return Mat(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __neg__(self) -> "Mat":
        return Mat(self.ring, [[-a for a in r] for r in self._e])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        if other.ring is not self.ring and other.ring != self.ring:
            raise MixedRings(f"{self.ring.name} vs {other.ring.name}")
        z = self.ring.zero
        cols = [other.col(j) for j in range(other.cols)]
        out = []
        for r in self._e:
            row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Mat(self.ring, out)

    def scale_left(self, r: Element) -> "Mat":
        return Mat(self.ring, [[r * a for a in row] for row in self._e])

    def _same_shape(self, other: "Mat") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")

    def transpose_op(self) -> "Mat":
        """Transpose, viewed over the opposite ring (an anti-isomorphism)."""
        op = self.ring.opposite()
        return Mat(op, [[op.transfer(self._e[i][j]) for i in range(self.rows)] for j in range(self.cols)])

    def is_diagonal(self) -> bool:
        return all(x.is_zero() for i, r in enumerate(self._e) for j, x in enumerate(r) if i != j)

    def diagonal(self) -> tuple[Element, ...]:
        return tuple(self._e[i][i] for i in range(min(self.rows, self.cols)))

    def submatrix(self, r0: int, c0: int) -> "Mat":
        return Mat(self.ring, [r[c0:] for r in self._e[r0:]])

    def __repr__(self) -> str:
        return "Mat[" + "; ".join(" ".join(repr(x) for x in r) for r in self._e) + "]"


# ---------------------------------------------------------------------------
# elementary operations


@dataclass(frozen=True)
class ElementaryOp:
    side: str
    i: int
    j: int
    r: Element

    def __post_init__(self):
        if self.side not in (ROW, COL):
            raise BadIndex(f"side must be {ROW!r} or {COL!r}")
        if self.i == self.j:
            raise BadIndex(f"elementary op needs i != j (got {self.i})")
        if self.i < 0 or self.j < 0:
            raise BadIndex("negative index")

    def negated(self) -> "ElementaryOp":
        return ElementaryOp(self.side, self.i, self.j, -self.r)

    def matrix(self, n: int) -> Mat:
        """The transvection this operation multiplies by (left for rows, right for columns)."""
        ring = self.r.ring
        rows = Mat.identity(ring, n).to_lists()
        if self.side == ROW:
            rows[self.i][self.j] = self.r
        else:
            rows[self.j][self.i] = self.r
        return Mat(ring, rows)


@dataclass(frozen=True)
class Transcript:
    """Ordered elementary operations for matrices of a fixed shape over one ring."""

    ring: Ring
    rows: int
    cols: int
    ops: tuple[ElementaryOp, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[ElementaryOp]:
        return iter(self.ops)

    def then(self, other: "Transcript | Iterable[ElementaryOp]") -> "Transcript":
        ops = other.ops if isinstance(other, Transcript) else tuple(other)
        return Transcript(self.ring, self.rows, self.cols, self.ops + tuple(ops))

    def inverse(self) -> "Transcript":
        """Undo: reversed order, negated coefficients."""
        return Transcript(self.ring, self.rows, self.cols, tuple(op.negated() for op in reversed(self.ops)))

    def side_only(self, side: str) -> "Transcript":
        return Transcript(self.ring, self.rows, self.cols, tuple(op for op in self.ops if op.side == side))

    def left_matrix(self) -> Mat:
        """Product of the row-operation transvections, latest leftmost."""
        E = Mat.identity(self.ring, self.rows)
        for op in self.ops:
            if op.side == ROW:
                E = op.matrix(self.rows) @ E
        return E

    def right_matrix(self) -> Mat:
        """Product of the column-operation transvections, earliest leftmost."""
        F = Mat.identity(self.ring, self.cols)
        for op in self.ops:
            if op.side == COL:
                F = F @ op.matrix(self.cols)
        return F


def _check_transcript(A: Mat, T: Transcript) -> None:
    if T.ring is not A.ring and T.ring != A.ring:
        raise MixedRings(f"transcript over {T.ring.name}, matrix over {A.ring.name}")
    if (T.rows, T.cols) != A.shape:
        raise DimensionMismatch(f"transcript for {T.rows}x{T.cols}, matrix is {A.rows}x{A.cols}")


def apply_op_inplace(rows: list[list[Element]], op: ElementaryOp) -> None:
    i, j, r = op.i, op.j, op.r
    if op.side == ROW:
        if i >= len(rows) or j >= len(rows):
            raise BadIndex(f"row index out of range in {op}")
        ri, rj = rows[i], rows[j]
        for k in range(len(ri)):
            ri[k] = ri[k] + r * rj[k]
    else:
        if rows and (i >= len(rows[0]) or j >= len(rows[0])):
            raise BadIndex(f"column index out of range in {op}")
        for row in rows:
            row[i] = row[i] + row[j] * r


def apply_transcript(A: Mat, T: Transcript) -> Mat:
    """Replay ``T`` on ``A``; equals ``E_T @ A @ F_T``."""
    _check_transcript(A, T)
    rows = A.to_lists()
    for op in T.ops:
        apply_op_inplace(rows, op)
    return Mat(A.ring, rows)


def signed_swap_transcript(ring: Ring, n: int, i: int, j: int, side: str = ROW) -> Transcript:
    """Three operations taking lines ``(L_i, L_j)`` to ``(L_j, -L_i)``.

    On rows of the 2x2 identity this produces ``[[0, 1], [-1, 0]]``.
    """
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise BadIndex(f"bad swap indices {i}, {j} for size {n}")
    one, minus = ring.one, -ring.one
    ops = (
        ElementaryOp(side, i, j, one),
        ElementaryOp(side, j, i, minus),
        ElementaryOp(side, i, j, one),
    )
    return Transcript(ring, n, n, ops)


def move_entry(A: Mat, from_pos: tuple[int, int], to_pos: tuple[int, int]) -> Transcript:
    """Signed swaps carrying the entry at ``from_pos`` to ``to_pos`` unchanged.

    Rows are moved first, then columns.  Other entries may move or change sign.
    """
    (r1, c1), (r2, c2) = from_pos, to_pos
    for r, c in (from_pos, to_pos):
        if not (0 <= r < A.rows and 0 <= c < A.cols):
            raise BadIndex(f"position {(r, c)} outside {A.rows}x{A.cols}")
    ops: list[ElementaryOp] = []
    one, minus = A.ring.one, -A.ring.one
    if r1 != r2:
        # new row r2 = old row r1, new row r1 = -old row r2
        ops += [ElementaryOp(ROW, r2, r1, one), ElementaryOp(ROW, r1, r2, minus), ElementaryOp(ROW, r2, r1, one)]
    if c1 != c2:
        ops += [ElementaryOp(COL, c2, c1, one), ElementaryOp(COL, c1, c2, minus), ElementaryOp(COL, c2, c1, one)]
    return Transcript(A.ring, A.rows, A.cols, tuple(ops))


# ---------------------------------------------------------------------------
# invertibility


def invert(A: Mat) -> Mat | None:
    """Two-sided inverse by solving ``A X = I`` on the additive presentation."""
    if A.rows != A.cols:
        raise DimensionMismatch("only square matrices can be inverted")
    n = A.rows
    ring = A.ring
    if n == 0:
        return A

    def left_mult(x: list[Element]) -> list[Element]:
        X = Mat(ring, [x[i * n:(i + 1) * n] for i in range(n)])
        return (A @ X).flat()

    sol = solve_linear(ring, n * n, left_mult, Mat.identity(ring, n).flat())
    if sol is None:
        return None
    X = Mat(ring, [sol[i * n:(i + 1) * n] for i in range(n)])
    # finite rings are Dedekind-finite, but the check is cheap
    if X @ A != Mat.identity(ring, n):
        return None
    return X


def determinant(A: Mat) -> Element:
    """Leibniz determinant; meaningful for commutative rings only."""
    ring = A.ring
    n = A.rows
    total = ring.zero
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = ring.one
        for r in range(n):
            term = term * A[r, perm[r]]
        total = total + term if sign > 0 else total - term
    return total


def is_invertible(A: Mat) -> bool:
    if A.ring.is_commutative:
        return is_unit(determinant(A)) is not None
    return invert(A) is not None


_GL_CACHE: dict = {}


def general_linear_group(ring: Ring, n: int, cap: int = 2_000_000) -> list[Mat]:
    """Every invertible ``n x n`` matrix, canonical (row-major index) order."""
    key = (ring.name, n)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    total = ring.size ** (n * n)
    if total > cap:
        raise CapExceeded(f"|M_{n}({ring.name})| = {total} exceeds {cap}")
    out: list[Mat] = []
    if ring.is_commutative and n == 2 and ring._mul is not None:
        N = ring.size
        idx = np.arange(total, dtype=np.int64)
        a, rem = np.divmod(idx, N ** 3)
        b, rem = np.divmod(rem, N ** 2)
        c, d = np.divmod(rem, N)
        det = ring.np_add[ring.np_mul[a, d], ring.np_neg[ring.np_mul[b, c]]]
        unit_mask = np.zeros(N, dtype=bool)
        unit_mask[list(ring.unit_inverses)] = True
        keep = np.nonzero(unit_mask[det])[0]
        at = ring.at
        for k in keep.tolist():
            aa, rr = divmod(k, N ** 3)
            bb, rr = divmod(rr, N ** 2)
            cc, dd = divmod(rr, N)
            out.append(Mat(ring, [[at(aa), at(bb)], [at(cc), at(dd)]]))
    else:
        elems = list(ring.elements())
        for combo in itertools.product(elems, repeat=n * n):
            A = Mat(ring, [combo[i * n:(i + 1) * n] for i in range(n)])
            if is_invertible(A):
                out.append(A)
    _GL_CACHE[key] = out
    return out


def random_matrix(ring: Ring, rows: int, cols: int, rng: random.Random) -> Mat:
    return Mat(ring, [[ring.at(rng.randrange(ring.size)) for _ in range(cols)] for _ in range(rows)])


def random_invertible(ring: Ring, n: int, rng: random.Random, max_tries: int = 100000) -> Mat:
    for _ in range(max_tries):
        A = random_matrix(ring, n, n, rng)
        if is_invertible(A):
            return A
    raise CapExceeded("no invertible matrix found by sampling")


def elementary_group(ring: Ring, n: int, cap: int = 1_000_000) -> dict[tuple[int, ...], Mat]:
    """All products of transvections ``I + r e_ij``, keyed by :meth:`Mat.key` (finite closure)."""
    gens = [ElementaryOp(ROW, i, j, r) for i in range(n) for j in range(n) if i != j
            for r in ring.elements() if not r.is_zero()]
    start = Mat.identity(ring, n)
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for M in frontier:
            rows = M.to_lists()
            for g in gens:
                work = [list(r) for r in rows]
                apply_op_inplace(work, g)
                P = Mat(ring, work)
                k = P.key()
                if k not in seen:
                    seen[k] = P
                    nxt.append(P)
                    if len(seen) > cap:
                        raise CapExceeded("elementary group too large")
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# diagonalization certificates


@dataclass(frozen=True)
class GEDecomposition:
    """``left`` (row ops) and ``right`` (column ops) replay ``A`` to the diagonal ``D``.

    ``inverses[k]`` is a claimed inverse of ``D[k, k]``.
    """

    A: Mat
    left: Transcript
    right: Transcript
    D: Mat
    inverses: tuple[Element, ...]


@dataclass(frozen=True)
class ReplayVerdict:
    ok: bool
    reason: str = ""
    op_index: int | None = None
    position: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def replay_check(decomp: GEDecomposition, require_units: bool = True) -> ReplayVerdict:
    """Check a diagonalization certificate from its data alone.

    ``op_index`` counts left operations first, then right ones.  ``position``
    is the first entry (row-major) where the replay differs from ``D``.
    """
    A, D = decomp.A, decomp.D
    try:
        _check_transcript(A, decomp.left)
        _check_transcript(A, decomp.right)
    except (MixedRings, DimensionMismatch) as exc:
        return ReplayVerdict(False, f"carrier mismatch: {exc}")
    if D.shape != A.shape or (D.ring is not A.ring and D.ring != A.ring):
        return ReplayVerdict(False, "diagonal has wrong shape or ring")
    rows = A.to_lists()
    k = 0
    for side, T in ((ROW, decomp.left), (COL, decomp.right)):
        for op in T.ops:
            if op.side != side:
                return ReplayVerdict(False, f"{op.side} operation inside the {side} transcript", k)
            try:
                apply_op_inplace(rows, op)
            except BadIndex as exc:
                return ReplayVerdict(False, str(exc), k)
            k += 1
    for i, (got, want) in enumerate(zip(rows, D.entries())):
        for j, (x, y) in enumerate(zip(got, want)):
            if x != y:
                return ReplayVerdict(False, f"replay gives {x!r}, certificate says {y!r}", position=(i, j))
    if not D.is_diagonal():
        return ReplayVerdict(False, "D is not diagonal")
    if require_units:
        diag = D.diagonal()
        if len(decomp.inverses) != len(diag) or A.rows != A.cols:
            return ReplayVerdict(False, "missing unit inverse witnesses")
        one = A.ring.one
        for i, (x, y) in enumerate(zip(diag, decomp.inverses)):
            if x * y != one or y * x != one:
                return ReplayVerdict(False, f"diagonal entry {x!r} is not inverted by {y!r}", position=(i, i))
    return ReplayVerdict(True)
