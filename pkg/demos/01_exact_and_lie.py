"""Exact linear algebra and small Lie algebras.

Everything is carried as Fraction (or Gaussian) entries inside numpy object
arrays, so ranks and kernels are decided exactly.
"""
from jumploci import exact as ex
from jumploci import lie as L

m = ex.matrix([[1, 2, 3], [2, 4, 6], [1, 0, "1/2"]])
print("matrix:\n", m)
print("rank:", ex.rank(m))
print("kernel basis:", [list(map(ex.format_scalar, v)) for v in ex.kernel_basis(m)])

g = L.preset_lie("sl2")
print("\nsl2 basis:", g.basis)
print("[e, f] =", dict(zip(g.basis, map(ex.format_scalar, g.bracket(g.unit("e"), g.unit("f"))))))
print("Jacobi issues:", g.validate() or "none")

ad = L.adjoint(g)
print("ad(h):\n", ad.of(g.unit("h")))

n = L.lcs_free_lie(2, 3)
print("\nfree 2-step nilpotent Lie algebra on two generators:", n.basis)
