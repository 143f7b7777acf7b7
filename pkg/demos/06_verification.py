"""Sampling verifiers with seeded, reproducible JSON reports.

Both sides of each set equality are sampled with exact arithmetic; every
failure carries its witness.
"""
from jumploci import arrangements as ar
from jumploci import cdga as cd
from jumploci import lie as L
from jumploci.verify import verify_arrangement_decomposition, verify_hirsch

g = L.preset_lie("sl2")
rep = verify_arrangement_decomposition(ar.braid(), g, L.adjoint(g), samples=20, seed=0, ks=(3,))
print(rep.summary())
print("branch:", rep.details["branch"])

base = cd.exterior(["a", "b"])
hirsch = cd.HirschData.from_terms(base, {"p": {"a*b": 1}})
rep = verify_hirsch(base, hirsch, g, samples=20, seed=0)
print()
print(rep.summary())
print("branch:", rep.details["branch"])
