"""
A matrix that elementary operations cannot diagonalize
======================================================

Over F2[x1..x4]/m^2 every product of two nilpotents vanishes.  Adding r times
one line to another only adds the scalar part of r times that line's
(nilpotent) entries, so the four nilpotent parts stay linearly independent
forever and no entry can ever become zero.
"""

# %%
import random

from exchange_ge import ElementaryOp, Mat, Transcript, apply_transcript, independence_invariant, preset
from exchange_ge.matrices import general_linear_group

R = preset("F2[x1..x4]/m^2")
a1, a2, a3, a4 = R.basis[1:]
A = Mat(R, [[a1, a2], [a3, a4]])
print("start:", [x.coords for x in A.flat()], "independent:", independence_invariant(A))

# %%
rng = random.Random(0)
nonzero = [x for x in R.elements() if not x.is_zero()]
M = A
for step in range(12):
    side = rng.choice(("row", "col"))
    i = rng.randrange(2)
    M = apply_transcript(M, Transcript(R, 2, 2, (ElementaryOp(side, i, 1 - i, rng.choice(nonzero)),)))
    print(step, [x.coords for x in M.flat()], independence_invariant(M))

# %%
# The ring is local and artinian, so it has stable rank one and is an
# exchange ring; yet even invertible matrices on both sides fail here.
group = general_linear_group(R, 2)
print("|GL2| =", len(group))
hits = sum((X @ A @ Y).is_diagonal() for X, Y in zip(rng.sample(group, 2000), rng.sample(group, 2000)))
print("diagonal products among 2000 random pairs:", hits)
