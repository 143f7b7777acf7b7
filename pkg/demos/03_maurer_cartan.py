"""Deformations of flat connections over k[t]/(t^n).

A first-order connection on the exterior algebra on a, b either lifts or
meets an obstruction class in H^2 (x) g.  Gauge transformations exp(alpha)
move connections inside their equivalence class.
"""
import numpy as np

from jumploci import cdga as cd
from jumploci import deform as df
from jumploci import lie as L

g = L.preset_lie("sl2")
ring = df.TruncatedCoefficients(["t"], 3)
t = ring.var("t")
zero = ring.zero()


def connection(a, rows):
    coeffs = np.empty((len(rows), 3), dtype=object)
    for i, row in enumerate(rows):
        coeffs[i] = row
    return cd.FlatConnection(a, g, coeffs)


ext = cd.exterior(["a", "b"])
res = df.mc_lift(ext, g, ring, connection(ext, [[zero, t, zero], [zero, zero, t]]))
print("t(a(x)e + b(x)f) on Lambda(a,b) over t^3:", "lifts" if res.ok else f"obstructed at {list(res.obstruction)}")

heis = cd.heisenberg()
res = df.mc_lift(heis, g, ring, connection(heis, [[zero, t, zero], [zero, zero, t], [zero] * 3]))
print("same connection on the Heisenberg model:", "lifts" if res.ok else "obstructed")
print("  correction in the p(x)h slot:", res.lifted.coeffs[2, 0])

ring4 = df.TruncatedCoefficients(["t"], 4)
t4 = ring4.var("t")
omega = connection(ext, [[ring4.zero(), t4, ring4.zero()], [ring4.zero()] * 3])
alpha = np.empty((1, 3), dtype=object)
alpha[0] = [t4, ring4.zero(), ring4.zero()]
moved = df.gauge_act(ext, g, ring4, df.GaugeElement(ring4, alpha), omega)
print("\nexp(t h) acting on t a(x)e gives a(x)e coefficient:", moved.coeffs[0, 1])
back = df.gauge_equivalent(ext, g, ring4, omega, moved)
print("gauge_equivalent recovers a witness:", back is not None)

print("\nholonomy relations of the Heisenberg model:", len(df.holonomy(heis).relations))
