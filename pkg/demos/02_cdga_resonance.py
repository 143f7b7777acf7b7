"""Flat connections and resonance on small CDGAs.

The Heisenberg model has generators a, b, p with dp = ab.  A flat
sl2-valued connection must satisfy [g_a, g_b] = -g_p and g_p central in the
span, which in sl2 forces rank one.
"""
from jumploci import cdga as cd
from jumploci import lie as L

a = cd.heisenberg()
g = L.preset_lie("sl2")
print("Heisenberg model, Betti numbers:", [cd.cohomology_dim(a, i) for i in range(3)])

for label, terms in [
    ("a(x)e + b(x)e", {"a": {"e": 1}, "b": {"e": 1}}),
    ("a(x)e + b(x)f - p(x)h", {"a": {"e": 1}, "b": {"f": 1}, "p": {"h": -1}}),
]:
    omega = cd.FlatConnection.from_terms(a, g, terms)
    print(f"  {label:24s} flat: {cd.is_flat(omega)}")

omega = cd.FlatConnection.from_terms(a, g, {"a": {"e": 1}, "b": {"e": 2}})
for name, theta in (("adjoint", L.adjoint(g)), ("standard", L.standard(g))):
    dims = [cd.aomoto_cohomology(a, theta, omega, i)[0] for i in range(2)]
    print(f"  Aomoto H^0, H^1 with {name} coefficients: {dims}")

surface = cd.surface(2)
eta = surface.vec(1, {"a1": 1})
print("\ngenus-2 surface, scalar resonance dim H^1 at a1:", cd.scalar_resonance_dim(surface, eta, 1))
