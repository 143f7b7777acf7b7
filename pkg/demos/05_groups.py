"""Twisted cohomology of finitely presented groups via Fox calculus.

For the rank-one local system with monodromy (2, 1), the free group has a
jump in H^1 while Z^2 does not.  Pulling back along Z -> F2 loses the jump.
"""
from jumploci import groups as gr

f2 = gr.GroupPresentation.free(2)
z2 = gr.GroupPresentation.free_abelian(2)
z = gr.GroupPresentation.free(1)

for name, p in (("F2", f2), ("Z2", z2)):
    rho = gr.rank_one_rep(p, [2, 1])
    print(f"{name}: twisted Betti numbers at (2, 1):", gr.twisted_betti(p, rho))

rho = gr.rank_one_rep(f2, [2, 1])
back = gr.pullback_rep(z, {"x1": ["x"]}, rho)
print("pullback to Z along the first factor: H^1 =", gr.twisted_h(z, back, 1))

variables, eqs = gr.rep_variety_system(z2, "SL2")
print("\nSL2 representation variety of Z2:", len(eqs), "equations in", len(variables), "variables")
rank, torsion, _ = gr.abelianization(gr.GroupPresentation.from_words(["x", "y"], [["x", "x", "y", "y", "y"]]))
print("abelianization of <x, y | x^2 y^3>: rank", rank, "torsion", torsion)
