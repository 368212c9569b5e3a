"""
Counting projective modules of a small ring
===========================================

Projectives are images of idempotent matrices.  The table groups them up to
isomorphism, adds them by block sums and then tests cancellation laws on the
bounded universe.  Verdicts always state the bound they were checked at.
"""

# %%
from exchange_ge import check_separative, check_stable_rank_one, enumerate_projective_classes, preset

R = preset("Z/6")
table = enumerate_projective_classes(R, bound=1)
for i, cls in enumerate(table.classes):
    print(i, cls.representative.to_lists(), "members:", table.member_counts[i], "signature:", table.signatures[i])
print("3 + 4 is class", table.add(2, 3), "which is the class of R")

# %%
for name in ("Z/6", "M2(F2)", "F2[x1..x4]/m^2"):
    ring = preset(name)
    sep = check_separative(ring, 2)
    print(name, "sr1:", check_stable_rank_one(ring).holds, "separative:", sep.holds,
          "bound:", sep.bound, "exhaustive:", sep.exhaustive)
