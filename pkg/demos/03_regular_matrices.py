"""
Regular but singular matrices
=============================

[[1, 1], [0, 0]] over F2 is not invertible, but it is von Neumann regular.
Row operations alone can never make it diagonal; rows and columns together can.
"""

# %%
from exchange_ge import Mat, diagonalize_regular, preset
from exchange_ge.matrices import elementary_group

F2 = preset("F2")
A = Mat.from_coords(F2, [[1, 1], [0, 0]])
res = diagonalize_regular(A)
print("inner inverse Y:", res.Y.to_lists())
print("left:", [(op.side, op.i + 1, op.j + 1) for op in res.left])
print("right:", [(op.side, op.i + 1, op.j + 1) for op in res.right])
print("D:", res.D.to_lists(), "replay:", res.replay())

# %%
E2 = elementary_group(F2, 2)
print(len(E2), "products of row transvections; any diagonal E A?",
      any((E @ A).is_diagonal() for E in E2.values()))
