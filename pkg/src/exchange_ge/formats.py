"""Text formats: ring specs, matrices, transcripts, certificate bundles, corpus manifests.

All formats are line based, UTF-8, ``#`` starts a comment, and indices in
files are 1-based.  An element is written as its coordinates separated by
commas (``1,0,0,0,0``); a ring with a single coordinate also accepts a bare
integer.

Ring spec::

    name: UT2(F2)-copy
    orders: 2 2 2
    table: 1 0 0  0 1 0  0 0 0
           0 0 0  0 0 0  0 1 0
           0 0 0  0 0 0  0 0 1
    one: 1 0 1

``table`` is the ``d x d x d`` tensor ``b_i * b_j`` flattened row-major
(``i`` slowest).  Lines that start with whitespace continue the previous field.

Matrix::

    ring: Z/6
    rows: 2
    cols: 2
    0 1
    5 0

Transcript (one operation per line, ``side i j coefficient``)::

    transcript
    ring: Z/6
    rows: 2
    cols: 2
    row 1 2 1
    col 2 1 5

Certificate bundle: a header, then ``[input]``, ``[left]``, ``[right]``,
``[diagonal]`` and ``[inverses]`` sections.  Every operation line ends in
``-> `` followed by the row or column it changed, as a checkpoint that lets a
verifier name the first operation that goes wrong.  The last line is
``sha256: <hex>`` over every preceding byte.  Regular-matrix certificates
(``kind: regular``) have no ``[inverses]`` section.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError, ParseError, WrongRing
from .matrices import COL, ROW, ElementaryOp, GEDecomposition, Mat, Transcript, apply_op_inplace
from .presets import preset
from .ring import Element, Ring, RingSpec, load_ring

CERT_MAGIC = "exchange-ge certificate v1"


# ---------------------------------------------------------------------------
# low-level helpers


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield n, raw, line


def format_element(x: Element) -> str:
    return ",".join(str(c) for c in x.coords)


_TOKENS: dict = {}


def parse_element(ring: Ring, token: str, line: int | None = None, field: str | None = None) -> Element:
    hit = _TOKENS.get((ring, token))
    if hit is not None:
        return hit
    try:
        coords = [int(t) for t in token.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad element {token!r}", line, field) from exc
    if len(coords) != ring.d:
        raise ParseError(f"element {token!r} needs {ring.d} coordinates for {ring.name}", line, field)
    for c, m in zip(coords, ring.orders):
        if not 0 <= c < m:
            raise ParseError(f"coordinate {c} of {token!r} not reduced mod {m}", line, field)
    x = ring.element(coords)
    if len(_TOKENS) < 100_000:
        _TOKENS[(ring, token)] = x
    return x


def format_row(xs) -> str:
    return " ".join(format_element(x) for x in xs)


# ---------------------------------------------------------------------------
# rings


def parse_ring_spec(text: str) -> RingSpec:
    """Parse a ring spec file (see module docstring).

    Raises:
        ParseError: with the offending line and field.
    """
    fields: dict[str, list[str]] = {}
    starts: dict[str, int] = {}
    current = None
    for n, raw, line in _lines(text):
        if raw[:1].isspace() and current is not None:
            fields[current].append(line.strip())
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", n)
        key, value = line.split(":", 1)
        key = key.strip()
        if key not in ("name", "orders", "table", "one"):
            raise ParseError(f"unknown field {key!r}", n, key)
        if key in fields:
            raise ParseError("duplicate field", n, key)
        fields[key] = [value.strip()]
        starts[key] = n
        current = key
    for key in ("name", "orders", "table", "one"):
        if key not in fields:
            raise ParseError("missing field", None, key)

    def ints(key: str) -> list[int]:
        try:
            return [int(t) for t in " ".join(fields[key]).split()]
        except ValueError as exc:
            raise ParseError(f"non-integer value: {exc}", starts[key], key) from exc

    name = " ".join(fields["name"]).strip()
    if not name:
        raise ParseError("empty name", starts["name"], "name")
    orders = ints("orders")
    d = len(orders)
    if d == 0 or any(m < 1 for m in orders):
        raise ParseError("orders must be positive integers", starts["orders"], "orders")
    flat = ints("table")
    if len(flat) != d ** 3:
        raise ParseError(f"expected {d ** 3} integers, got {len(flat)}", starts["table"], "table")
    one = ints("one")
    if len(one) != d:
        raise ParseError(f"expected {d} integers, got {len(one)}", starts["one"], "one")
    table = np.array(flat, dtype=np.int64).reshape(d, d, d)
    return RingSpec(name, orders, table, one)


def format_ring_spec(ring: Ring) -> str:
    d = ring.d
    lines = [f"name: {ring.name}", "orders: " + " ".join(map(str, ring.orders))]
    for i in range(d):
        row = "  ".join(" ".join(str(int(c)) for c in ring.table[i, j]) for j in range(d))
        lines.append(("table: " if i == 0 else "       ") + row)
    lines.append("one: " + " ".join(map(str, ring.one_coords)))
    return "\n".join(lines) + "\n"


_FILE_RINGS: dict[str, Ring] = {}


def resolve_ring(ref: str, base: str | os.PathLike | None = None) -> Ring:
    """A preset name, or a path to a ring spec file (relative to ``base`` if given)."""
    ref = ref.strip()
    candidates = [Path(ref)]
    if base is not None:
        candidates.insert(0, Path(base) / ref)
    for path in candidates:
        if path.is_file():
            key = str(path.resolve())
            if key not in _FILE_RINGS:
                _FILE_RINGS[key] = load_ring(parse_ring_spec(path.read_text()))
            return _FILE_RINGS[key]
    return preset(ref)


# ---------------------------------------------------------------------------
# matrices and transcripts


def _header(items, want: tuple[str, ...]) -> tuple[dict[str, str], int]:
    """Read ``key: value`` lines for ``want`` in order; returns values and the number consumed."""
    out = {}
    for k, key in enumerate(want):
        if k >= len(items):
            raise ParseError("missing header field", None, key)
        n, _, line = items[k]
        name, sep, value = line.partition(":")
        if not sep or name.strip() != key:
            raise ParseError(f"expected '{key}: ...'", n, key)
        out[key] = value.strip()
    return out, len(want)


def _positive(value: str, n: int | None, key: str) -> int:
    try:
        v = int(value)
    except ValueError as exc:
        raise ParseError(f"{value!r} is not an integer", n, key) from exc
    if v < 1:
        raise ParseError("must be positive", n, key)
    return v


def _matrix_rows(ring: Ring, items, rows: int, cols: int, field: str) -> list[list[Element]]:
    if len(items) != rows:
        where = items[0][0] if items else None
        raise ParseError(f"expected {rows} rows, got {len(items)}", where, field)
    out = []
    for n, _, line in items:
        toks = line.split()
        if len(toks) != cols:
            raise ParseError(f"expected {cols} entries, got {len(toks)}", n, field)
        out.append([parse_element(ring, t, n, field) for t in toks])
    return out


def format_matrix(A: Mat, ring_ref: str | None = None) -> str:
    lines = [f"ring: {ring_ref or A.ring.name}", f"rows: {A.rows}", f"cols: {A.cols}"]
    lines += [format_row(r) for r in A.entries()]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, ring: Ring | None = None, base=None) -> Mat:
    """Parse a matrix file; ``ring`` overrides resolution but must match the header name.

    Raises:
        ParseError, WrongRing
    """
    items = list(_lines(text))
    head, used = _header(items, ("ring", "rows", "cols"))
    file_ring = resolve_ring(head["ring"], base) if ring is None else ring
    if ring is not None and head["ring"] != ring.name:
        try:
            other = resolve_ring(head["ring"], base)
        except InputError:
            other = None
        if other is None or other != ring:
            raise WrongRing(f"matrix is over {head['ring']}, expected {ring.name}")
    rows = _positive(head["rows"], items[1][0], "rows")
    cols = _positive(head["cols"], items[2][0], "cols")
    return Mat(file_ring, _matrix_rows(file_ring, items[used:], rows, cols, "entries"))


def format_op(op: ElementaryOp) -> str:
    return f"{op.side} {op.i + 1} {op.j + 1} {format_element(op.r)}"


def parse_op(ring: Ring, line: str, n: int | None = None, field: str = "op") -> tuple[ElementaryOp, str | None]:
    """One operation line; returns the op and the raw checkpoint text (after ``->``) if present."""
    body, arrow, check = line.partition("->")
    toks = body.split()
    if len(toks) != 4:
        raise ParseError("expected 'side i j coefficient'", n, field)
    side, i, j, coeff = toks
    if side not in (ROW, COL):
        raise ParseError(f"side must be 'row' or 'col', got {side!r}", n, field)
    try:
        i1, j1 = int(i), int(j)
    except ValueError as exc:
        raise ParseError("indices must be integers", n, field) from exc
    if i1 < 1 or j1 < 1 or i1 == j1:
        raise ParseError(f"bad indices {i1}, {j1}", n, field)
    op = ElementaryOp(side, i1 - 1, j1 - 1, parse_element(ring, coeff, n, field))
    return op, (check.strip() if arrow else None)


def format_transcript(T: Transcript, ring_ref: str | None = None) -> str:
    lines = ["transcript", f"ring: {ring_ref or T.ring.name}", f"rows: {T.rows}", f"cols: {T.cols}"]
    lines += [format_op(op) for op in T.ops]
    return "\n".join(lines) + "\n"


def parse_transcript(text: str, base=None) -> Transcript:
    items = list(_lines(text))
    if not items or items[0][2].strip() != "transcript":
        raise ParseError("expected 'transcript' on the first line", items[0][0] if items else 1)
    head, used = _header(items[1:], ("ring", "rows", "cols"))
    ring = resolve_ring(head["ring"], base)
    rows = _positive(head["rows"], items[2][0], "rows")
    cols = _positive(head["cols"], items[3][0], "cols")
    ops = []
    for n, _, line in items[1 + used:]:
        op, _ = parse_op(ring, line, n)
        bound = rows if op.side == ROW else cols
        if op.i >= bound or op.j >= bound:
            raise ParseError(f"index out of range for {rows}x{cols}", n, "op")
        ops.append(op)
    return Transcript(ring, rows, cols, tuple(ops))


# ---------------------------------------------------------------------------
# certificate bundles


@dataclass
class Certificate:
    """A parsed diagonalization certificate; ``checkpoints[k]`` belongs to operation ``k`` (left then right)."""

    kind: str
    ring_ref: str
    A: Mat
    left: Transcript
    right: Transcript
    D: Mat
    inverses: tuple[Element, ...]
    checkpoints: list[str | None]
    digest_ok: bool
    digest_line: int | None

    def decomposition(self) -> GEDecomposition:
        return GEDecomposition(self.A, self.left, self.right, self.D, self.inverses)


def _checkpoint(rows: list[list[Element]], op: ElementaryOp) -> str:
    if op.side == ROW:
        return format_row(rows[op.i])
    return format_row(r[op.i] for r in rows)


def format_certificate(
    A: Mat,
    left: Transcript,
    right: Transcript,
    D: Mat,
    inverses=None,
    kind: str = "invertible",
    ring_ref: str | None = None,
) -> str:
    """Serialize a diagonalization; ``kind`` is ``invertible`` (with unit inverses) or ``regular``."""
    lines = [CERT_MAGIC, f"kind: {kind}", f"ring: {ring_ref or A.ring.name}", f"rows: {A.rows}", f"cols: {A.cols}"]
    lines.append("[input]")
    lines += [format_row(r) for r in A.entries()]
    work = A.to_lists()
    for name, T in (("left", left), ("right", right)):
        lines.append(f"[{name}]")
        for op in T.ops:
            apply_op_inplace(work, op)
            lines.append(f"{format_op(op)} -> {_checkpoint(work, op)}")
    lines.append("[diagonal]")
    lines += [format_row(r) for r in D.entries()]
    if kind == "invertible":
        lines.append("[inverses]")
        lines.append(format_row(inverses or ()))
    body = "\n".join(lines) + "\n"
    return body + "sha256: " + hashlib.sha256(body.encode()).hexdigest() + "\n"


def parse_certificate(text: str, base=None, ring: Ring | None = None) -> Certificate:
    """Parse a certificate bundle.

    A ``ring`` argument pins the expected ring; a bundle over another ring
    raises :class:`WrongRing`.

    Raises:
        ParseError, WrongRing
    """
    raw_lines = text.splitlines(keepends=True)
    digest_ok, digest_line = False, None
    body_end = len(raw_lines)
    for k in range(len(raw_lines) - 1, -1, -1):
        if raw_lines[k].strip():
            if raw_lines[k].startswith("sha256:"):
                digest_line = k + 1
                body_end = k
                want = raw_lines[k].split(":", 1)[1].strip()
                digest_ok = hashlib.sha256("".join(raw_lines[:k]).encode()).hexdigest() == want
            break
    items = [it for it in _lines("".join(raw_lines[:body_end]))]
    if not items or items[0][2].strip() != CERT_MAGIC:
        raise ParseError(f"expected {CERT_MAGIC!r}", items[0][0] if items else 1)
    head, used = _header(items[1:], ("kind", "ring", "rows", "cols"))
    kind = head["kind"]
    if kind not in ("invertible", "regular"):
        raise ParseError(f"unknown kind {kind!r}", items[1][0], "kind")
    file_ring = resolve_ring(head["ring"], base)
    if ring is not None and file_ring != ring:
        raise WrongRing(f"certificate is over {file_ring.name}, expected {ring.name}")
    rows = _positive(head["rows"], items[3][0], "rows")
    cols = _positive(head["cols"], items[4][0], "cols")

    sections: dict[str, list] = {}
    order = []
    current = None
    for item in items[1 + used:]:
        n, _, line = item
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1]
            if current in sections:
                raise ParseError("duplicate section", n, current)
            sections[current] = []
            order.append(current)
            continue
        if current is None:
            raise ParseError("content before the first section", n)
        sections[current].append(item)
    expected = ["input", "left", "right", "diagonal"] + (["inverses"] if kind == "invertible" else [])
    if order != expected:
        raise ParseError(f"sections must be {expected}, got {order}", None, "sections")

    A = Mat(file_ring, _matrix_rows(file_ring, sections["input"], rows, cols, "input"))
    checkpoints: list[str | None] = []
    transcripts = {}
    for name, side in (("left", ROW), ("right", COL)):
        ops = []
        for n, _, line in sections[name]:
            op, check = parse_op(file_ring, line, n, name)
            bound = rows if op.side == ROW else cols
            if op.i >= bound or op.j >= bound:
                raise ParseError(f"index out of range for {rows}x{cols}", n, name)
            ops.append(op)
            checkpoints.append(check)
        transcripts[name] = Transcript(file_ring, rows, cols, tuple(ops))
    D = Mat(file_ring, _matrix_rows(file_ring, sections["diagonal"], rows, cols, "diagonal"))
    inverses: tuple[Element, ...] = ()
    if kind == "invertible":
        inv_items = sections["inverses"]
        if len(inv_items) != 1:
            raise ParseError("expected one line of inverses", inv_items[0][0] if inv_items else None, "inverses")
        n, _, line = inv_items[0]
        inverses = tuple(parse_element(file_ring, t, n, "inverses") for t in line.split())
    return Certificate(kind, head["ring"], A, transcripts["left"], transcripts["right"], D, inverses,
                       checkpoints, digest_ok, digest_line)


@dataclass(frozen=True)
class CertificateVerdict:
    ok: bool
    reason: str = ""
    op_index: int | None = None
    position: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        parts = [self.reason]
        if self.op_index is not None:
            parts.append(f"at operation {self.op_index + 1}")
        if self.position is not None:
            parts.append(f"at entry ({self.position[0] + 1},{self.position[1] + 1})")
        return "FAIL: " + ", ".join(parts)


def verify_certificate(cert: Certificate) -> CertificateVerdict:
    """Replay a parsed certificate from its own data.

    Checks, in order: every checkpoint, the final matrix against the stated
    diagonal, the unit inverses (``invertible`` kind), then the digest.
    """
    from .matrices import replay_check

    work = cert.A.to_lists()
    k = 0
    for side, T in ((ROW, cert.left), (COL, cert.right)):
        for op in T.ops:
            if op.side != side:
                return CertificateVerdict(False, f"{op.side} operation in the {side} section", k)
            apply_op_inplace(work, op)
            check = cert.checkpoints[k]
            if check is not None and _checkpoint(work, op) != check:
                return CertificateVerdict(False, "checkpoint mismatch", k)
            k += 1
    if cert.kind == "invertible":
        v = replay_check(cert.decomposition())
        if not v.ok:
            return CertificateVerdict(False, v.reason, v.op_index, v.position)
    else:
        B = Mat(cert.A.ring, work)
        for i in range(B.rows):
            for j in range(B.cols):
                if B[i, j] != cert.D[i, j]:
                    return CertificateVerdict(False, "replay differs from the stated diagonal", position=(i, j))
        if not cert.D.is_diagonal():
            return CertificateVerdict(False, "stated matrix is not diagonal")
    if cert.digest_line is None:
        return CertificateVerdict(False, "missing sha256 line")
    if not cert.digest_ok:
        return CertificateVerdict(False, f"sha256 digest mismatch (line {cert.digest_line})")
    return CertificateVerdict(True)


# ---------------------------------------------------------------------------
# corpus manifest


@dataclass(frozen=True)
class CorpusEntry:
    path: str
    kind: str
    expect: str
    line: int


MANIFEST_KINDS = ("invertible", "regular")
MANIFEST_EXPECT = ("ok", "not-invertible", "not-regular", "no-unit")


def parse_manifest(text: str) -> list[CorpusEntry]:
    """Manifest lines: ``<matrix file> <invertible|regular> <expected outcome>``."""
    out = []
    for n, _, line in _lines(text):
        toks = line.split()
        if len(toks) != 3:
            raise ParseError("expected 'path kind expect'", n)
        path, kind, expect = toks
        if kind not in MANIFEST_KINDS:
            raise ParseError(f"kind must be one of {MANIFEST_KINDS}", n, "kind")
        if expect not in MANIFEST_EXPECT:
            raise ParseError(f"expect must be one of {MANIFEST_EXPECT}", n, "expect")
        out.append(CorpusEntry(path, kind, expect, n))
    return out

