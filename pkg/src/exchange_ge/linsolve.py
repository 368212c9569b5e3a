"""Solving additive equations over a ring's coordinate group.

Any map built from ring sums and products with fixed elements is additive,
so it is determined by its values on ``basis[l]`` placed in each unknown slot.
"""

from __future__ import annotations

from typing import Callable, Sequence

from ._modlin import image_size_mod, solve_mod
from .ring import Element, Ring

LinearMap = Callable[[list[Element]], Sequence[Element]]


def _embed(ring: Ring, values: Sequence[Element]) -> list[int]:
    N = ring.exponent
    scale = [N // m for m in ring.orders]
    out = []
    for v in values:
        out.extend(c * s for c, s in zip(v.coords, scale))
    return out


def _columns(ring: Ring, n_unknowns: int, fn: LinearMap) -> list[list[int]]:
    zero = ring.zero
    cols = []
    for u in range(n_unknowns):
        for b in ring.basis:
            x = [zero] * n_unknowns
            x[u] = b
            cols.append(_embed(ring, fn(x)))
    return cols


def solve_linear(ring: Ring, n_unknowns: int, fn: LinearMap, target: Sequence[Element]) -> list[Element] | None:
    """Some ``x`` in ``R^n_unknowns`` with ``fn(x) == target``, or None.

    ``fn`` must be additive; this is not checked.
    """
    cols = _columns(ring, n_unknowns, fn)
    rhs = _embed(ring, target)
    if not cols:
        return [] if not any(rhs) else None
    A = [list(r) for r in zip(*cols)]
    sol = solve_mod(A, rhs, ring.exponent)
    if sol is None:
        return None
    d = ring.d
    return [ring.element(sol[u * d:(u + 1) * d]) for u in range(n_unknowns)]


def image_size(ring: Ring, n_unknowns: int, fn: LinearMap) -> int:
    """Cardinality of the image of an additive map ``R^n_unknowns -> R^m``."""
    cols = _columns(ring, n_unknowns, fn)
    if not cols or not cols[0]:
        return 1
    A = [list(r) for r in zip(*cols)]
    return image_size_mod(A, ring.exponent)
