"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure or counterexample, 2 input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .diagonalize import STRATEGIES, diagonalize_regular, ge_diagonalize
from .errors import ExchangeGEError, InputError, NotInvertible, NotRegularMatrix, NoUnit, WrongRing
from .formats import (
    format_certificate,
    parse_certificate,
    parse_manifest,
    parse_matrix,
    resolve_ring,
    verify_certificate,
)
from .oracle import (
    DEFAULT_BUDGET,
    Verdict,
    check_exchange_property,
    check_generator_cancellation,
    check_separative,
    check_stable_rank_one,
    enumerate_projective_classes,
)

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class JobConfig:
    command: str
    ring: str | None = None
    matrix: str | None = None
    output: str | None = None
    bound: int = 2
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    threads: int = 1
    strategy: str = "unit-first"
    regular: bool = False

    def __post_init__(self):
        if self.bound < 1 or self.budget < 1 or self.threads < 1:
            raise InputError("bounds, budget and thread count must be positive")


# ---------------------------------------------------------------------------
# commands


def cmd_classify(cfg: JobConfig, out=sys.stdout) -> int:
    ring = resolve_ring(cfg.ring)
    verdicts: list[Verdict] = [
        check_exchange_property(ring),
        check_separative(ring, cfg.bound, cfg.budget),
        check_stable_rank_one(ring),
        check_generator_cancellation(ring, cfg.bound, cfg.budget),
    ]
    labels = {"exchange": "exchange", "separative": "separative", "stable-rank-one": "sr1",
              "generator-cancellation": "generator-cancellation"}
    for v in verdicts:
        extra = f" (bound {v.bound})" if v.bound is not None else ""
        flag = "" if v.exhaustive else " [search budget hit]"
        out.write(f"{labels[v.prop]}: {'yes' if v.holds else 'no'}{extra}{flag}\n")
    if cfg.output:
        Path(cfg.output).write_text("".join(v.to_text() + "\n" for v in verdicts))
    return EXIT_OK if all(v.holds for v in verdicts) else EXIT_MATH


def _portable_ref(ref: str, base: Path, dest: Path | None) -> str:
    """Rewrite a ring-file reference so it resolves from the certificate's directory."""
    if dest is None or not (base / ref).is_file():
        return ref
    return os.path.relpath((base / ref).resolve(), dest.resolve())


def _diagonalize_one(path: str, ring_ref: str | None, regular: bool, strategy: str, budget: int, seed: int,
                     dest: Path | None = None):
    """Returns ``(certificate text, summary)``; raises library errors.

    ``dest`` is the directory the certificate will be written to.
    """
    base = Path(path).parent
    ring = resolve_ring(ring_ref, base) if ring_ref else None
    A = parse_matrix(Path(path).read_text(), ring=ring, base=base)
    ref = _portable_ref(ring_ref, Path.cwd(), dest) if ring_ref else _portable_ref(_header_ring(path), base, dest)
    if regular:
        res = diagonalize_regular(A, budget=budget, seed=seed)
        if res is None:
            raise NotRegularMatrix("search budget exhausted before a diagonalizing pair was found")
        text = format_certificate(A, res.left, res.right, res.D, kind="regular", ring_ref=ref)
        return text, f"left {len(res.left)} ops, right {len(res.right)} ops"
    dec = ge_diagonalize(A, strategy=strategy)
    text = format_certificate(A, dec.left, dec.right, dec.D, dec.inverses, ring_ref=ref)
    return text, f"left {len(dec.left)} ops, right {len(dec.right)} ops"


def _header_ring(path: str) -> str:
    for line in Path(path).read_text().splitlines():
        if line.strip().startswith("ring:"):
            return line.split(":", 1)[1].split("#", 1)[0].strip()
    return ""


def cmd_diagonalize(cfg: JobConfig, out=sys.stdout) -> int:
    dest = Path(cfg.output).parent if cfg.output else Path.cwd()
    text, summary = _diagonalize_one(cfg.matrix, cfg.ring, cfg.regular, cfg.strategy, cfg.budget, cfg.seed, dest)
    out.write(summary + "\n")
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(cfg: JobConfig, out=sys.stdout) -> int:
    path = Path(cfg.matrix)
    ring = resolve_ring(cfg.ring) if cfg.ring else None
    try:
        cert = parse_certificate(path.read_text(), base=path.parent, ring=ring)
    except WrongRing as exc:
        out.write(f"FAIL: ring mismatch: {exc}\n")
        return EXIT_MATH
    verdict = verify_certificate(cert)
    out.write(verdict.describe() + "\n")
    return EXIT_OK if verdict.ok else EXIT_MATH


_EXPECT = {NotInvertible: "not-invertible", NotRegularMatrix: "not-regular", NoUnit: "no-unit"}


def _outcome(exc: Exception | None) -> str:
    if exc is None:
        return "ok"
    for cls, name in _EXPECT.items():
        if isinstance(exc, cls):
            return name
    return type(exc).__name__


def cmd_corpus(cfg: JobConfig, out=sys.stdout) -> int:
    manifest = Path(cfg.matrix)
    entries = parse_manifest(manifest.read_text())
    outdir = Path(cfg.output) if cfg.output else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)

    def job(entry):
        path = manifest.parent / entry.path
        try:
            text, _ = _diagonalize_one(str(path), cfg.ring, entry.kind == "regular", cfg.strategy,
                                       cfg.budget, cfg.seed, outdir or Path.cwd())
        except InputError:
            raise
        except ExchangeGEError as exc:
            return entry, _outcome(exc), None
        cert = parse_certificate(text, base=outdir or Path.cwd())
        verdict = verify_certificate(cert)
        return entry, "ok" if verdict.ok else "replay-failed", text

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        results = list(pool.map(job, entries))
    failures = 0
    for entry, got, text in results:
        good = got == entry.expect
        failures += not good
        out.write(f"{'PASS' if good else 'FAIL'} {entry.path} expect={entry.expect} got={got}\n")
        if outdir and text is not None:
            (outdir / (Path(entry.path).stem + ".cert")).write_text(text)
    out.write(f"{len(results) - failures}/{len(results)} corpus entries as expected\n")
    return EXIT_OK if failures == 0 else EXIT_MATH


def cmd_enumerate(cfg: JobConfig, out=sys.stdout) -> int:
    from .formats import format_row

    ring = resolve_ring(cfg.ring)
    table = enumerate_projective_classes(ring, cfg.bound, cfg.budget)
    base = len(table.classes)
    out.write(f"ring: {ring.name}\nbound: {cfg.bound}\nclasses: {base}\n")
    out.write(f"exhaustive: {'yes' if table.exhaustive else 'no'}\n")
    for i, (cls, sig, count) in enumerate(zip(table.classes, table.signatures, table.member_counts)):
        P = cls.representative
        rep = " ; ".join(format_row(r) for r in P.entries())
        gen = "generator" if table.is_generator(i) else "-"
        out.write(f"[{i}] size={P.rows} members={count} signature={list(sig)} {gen} rep: {rep}\n")
    out.write("sums:\n")
    for i in range(base):
        row = [str(table.add(i, j)) for j in range(base)]
        out.write(f"  {i}: " + " ".join(row) + "\n")
    if len(table.classes) > base:
        out.write(f"(classes {base}..{len(table.classes) - 1} are sums beyond the bound)\n")
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "diagonalize": cmd_diagonalize,
    "verify": cmd_verify,
    "corpus": cmd_corpus,
    "enumerate-projectives": cmd_enumerate,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exchange-ge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1)
        if budget:
            sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search budget")

    c = sub.add_parser("classify", help="exchange, separativity, stable rank one")
    c.add_argument("ring", help="preset name or ring spec file")
    c.add_argument("--bound", type=int, default=2, help="largest projective matrix size")
    c.add_argument("--out", help="write JSON-lines verdicts here")
    common(c)

    d = sub.add_parser("diagonalize", help="write a diagonalization certificate")
    d.add_argument("matrix", help="matrix file")
    d.add_argument("--ring", help="expected ring (preset or spec file)")
    d.add_argument("--out", help="certificate path (default: stdout)")
    d.add_argument("--regular", action="store_true", help="two-sided diagonalization of a regular matrix")
    d.add_argument("--strategy", choices=STRATEGIES, default="unit-first")
    common(d)

    v = sub.add_parser("verify", help="replay a certificate file")
    v.add_argument("certificate")
    v.add_argument("--ring", help="fail unless the certificate is over this ring")
    common(v, budget=False)

    k = sub.add_parser("corpus", help="diagonalize and verify every manifest entry")
    k.add_argument("manifest")
    k.add_argument("--out", help="directory for certificates")
    k.add_argument("--strategy", choices=STRATEGIES, default="unit-first")
    common(k)

    e = sub.add_parser("enumerate-projectives", help="projective classes and their sums")
    e.add_argument("ring")
    e.add_argument("--bound", type=int, default=2)
    common(e)
    return p


def config_from_args(ns: argparse.Namespace) -> JobConfig:
    cmd = ns.command
    matrix = getattr(ns, "matrix", None) or getattr(ns, "certificate", None) or getattr(ns, "manifest", None)
    return JobConfig(
        command=cmd,
        ring=getattr(ns, "ring", None),
        matrix=matrix,
        output=getattr(ns, "out", None),
        bound=getattr(ns, "bound", 2),
        budget=getattr(ns, "budget", DEFAULT_BUDGET),
        seed=ns.seed,
        threads=ns.threads,
        strategy=getattr(ns, "strategy", "unit-first"),
        regular=getattr(ns, "regular", False),
    )


def run(cfg: JobConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[cfg.command](cfg, out)
    except InputError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ExchangeGEError as exc:
        err.write(f"failure: {type(exc).__name__}: {exc}\n")
        return EXIT_MATH


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
