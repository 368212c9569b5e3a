"""
Rotations from transvections, then a full diagonalization
=========================================================

Three elementary row operations turn the identity into the rotation
[[0, 1], [-1, 0]].  After that we diagonalize an invertible matrix over Z/6
that has no unit entry at all, so the pivot has to be manufactured.
"""

# %%
from exchange_ge import Mat, apply_transcript, ge_diagonalize, preset, replay_check, signed_swap_transcript
from exchange_ge.formats import format_certificate

R = preset("Z/6")
T = signed_swap_transcript(R, 2, 0, 1)
for op in T:
    print(op.side, op.i + 1, op.j + 1, op.r.coords[0])
print(apply_transcript(Mat.identity(R, 2), T).to_lists())

# %%
# 3 and 4 are idempotents of Z/6 with 3 + 4 = 1, so this matrix is invertible
# (its determinant is 9 - 16 = -7 = 5) while every entry is a zero divisor.
A = Mat.from_coords(R, [[3, 4], [4, 3]])
for strategy in ("unit-first", "full"):
    dec = ge_diagonalize(A, strategy=strategy)
    print(strategy, "left ops:", len(dec.left), "right ops:", len(dec.right), "D =", dec.D.diagonal())
    print("replay:", replay_check(dec).ok)

# %%
# The certificate is plain text; every operation line records the row or
# column it changed, and a sha256 line closes the bundle.
print(format_certificate(A, dec.left, dec.right, dec.D, dec.inverses))
