"""Exact arithmetic over finite rings and elementary diagonalization certificates."""

from .diagonalize import (
    clear_with_idempotent,
    diagonalize_regular,
    fullify_leading_entry,
    ge_diagonalize,
    orthogonalize_row,
    prepare_pivot,
    regularize_second_entry,
    unit_regular_factorization,
)
from .exchange import (
    check_exchange,
    covering_idempotent,
    exchange_idempotent,
    full_idempotent_in_range,
    orthogonal_idempotents,
)
from .matrices import (
    ElementaryOp,
    GEDecomposition,
    Mat,
    Transcript,
    apply_transcript,
    invert,
    move_entry,
    replay_check,
    signed_swap_transcript,
)
from .oracle import (
    check_generator_cancellation,
    check_separative,
    check_stable_rank_one,
    enumerate_projective_classes,
    independence_invariant,
    module_iso,
    subequiv,
)
from .presets import ROSTER, preset
from .ring import (
    Element,
    Ring,
    RingSpec,
    is_full,
    is_regular,
    is_unit,
    load_ring,
    solve_left_combination,
    solve_right_combination,
)

__version__ = "0.1.0"
