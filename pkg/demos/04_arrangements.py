"""Hyperplane arrangements: Orlik-Solomon algebra, multinets, resonance.

The braid arrangement has four triple points (local components) and one
essential 3-net, giving five two-dimensional resonance components.
"""
from jumploci import arrangements as ar
from jumploci import cdga as cd

braid = ar.braid()
os = ar.os_algebra(braid)
print("braid arrangement: Betti numbers", [os.dim(i) for i in range(3)])
print("rank-2 flats:", [f.members for f in ar.rank2_flats(braid)])

nets = ar.multinet_enumerate(braid, 3)
for net in nets:
    d = net.describe(braid)
    pencil = ar.multinet_to_pencil(net, braid)
    print(f"  {'local' if d['local'] else 'essential':9s} classes {d['classes']}  pencil constants {pencil.constants}")

comps = ar.resonance_components(braid, ks=(3,), samples=20, seed=1)
print("resonance components:", [(c.kind, c.dim) for c in comps])

b3 = ar.b3()
heavy = [n for n in ar.multinet_enumerate(b3, 3, max_mult=2) if max(n.mult) > 1]
print("\nB3 multinets with a multiplicity-2 hyperplane:", len(heavy))
print("Boolean arrangement of 4 planes, components:", ar.resonance_components(ar.boolean(4)))
print("scalar H^1 at a point off every component:",
      cd.scalar_resonance_dim(os, os.vec(1, {os.basis[1][0]: 1, os.basis[1][3]: 2}), 1))
