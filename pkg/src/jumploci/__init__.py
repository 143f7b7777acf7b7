"""Exact computations with flat connections, resonance and characteristic varieties.

Submodules: ``exact`` (fields, linear algebra, polynomials), ``lie``,
``cdga`` (algebras, Aomoto complexes, resonance), ``deform`` (Maurer-Cartan
sets, gauge action, lifting), ``arrangements`` (Orlik-Solomon algebras and
multinets), ``groups`` (presentations and twisted cohomology), ``verify`` and
``cli``.
"""

from . import arrangements, cdga, deform, exact, groups, lie, verify

__version__ = "0.1.0"

__all__ = ["arrangements", "cdga", "deform", "exact", "groups", "lie", "verify", "__version__"]
