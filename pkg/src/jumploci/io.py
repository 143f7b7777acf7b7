"""JSON file formats.

Scalars are strings ``"p/q"`` (or integers); Gaussian scalars are pairs
``["re", "im"]``.  Floats are rejected everywhere.  Every loader raises
:class:`InputError` on malformed data so the command line can map it to a
stable exit code.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import exact as ex
from .arrangements import Arrangement, Multinet
from .cdga import Cdga, CdgaMorphism, FlatConnection, HirschData
from .deform import GaugeElement, TruncatedCoefficients, TruncElem
from .groups import GroupPresentation, Representation
from .lie import LieAlgebra, LieRep, adjoint, preset_lie, standard, trivial_rep


__all__ = [
    "InputError",
    "read_json",
    "file_hash",
    "cdga_from_json",
    "cdga_to_json",
    "morphism_from_json",
    "lie_from_json",
    "lie_rep_from_json",
    "ring_from_json",
    "ring_element_from_json",
    "ring_element_to_json",
    "connection_from_json",
    "connection_to_json",
    "gauge_from_json",
    "arrangement_from_json",
    "arrangement_to_json",
    "multinets_from_json",
    "multinets_to_json",
    "hirsch_from_json",
    "presentation_from_json",
    "group_rep_from_json",
    "obstruction_to_json",
]


class InputError(ValueError):
    pass


def read_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise InputError(f"{path}: {err}") from err


def file_hash(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _scalar(x, fld):
    try:
        return ex.parse_scalar(x, fld)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise InputError(f"bad scalar {x!r}: {err}") from err


def _need(data, key, what):
    if not isinstance(data, dict) or key not in data:
        raise InputError(f"{what}: missing {key!r}")
    return data[key]


# CDGA: {"field", "max_degree", "basis": {"0": ["1"], ...},
#        "product": [[a, b, [[c, s], ...]], ...], "differential": [[a, [[b, s], ...]], ...]}
def cdga_from_json(data: dict, name: str = "") -> Cdga:
    fld = data.get("field", "rational")
    basis_map = _need(data, "basis", "cdga")
    q = int(data.get("max_degree", max(int(k) for k in basis_map)))
    basis = [list(basis_map.get(str(i), [])) for i in range(q + 1)]
    if not basis[0]:
        basis[0] = ["1"]
    products = {}
    for entry in data.get("product", []):
        try:
            a, b, terms = entry
        except ValueError as err:
            raise InputError(f"bad product entry {entry!r}") from err
        products[(a, b)] = {c: _scalar(s, fld) for c, s in terms}
    diff = {}
    for entry in data.get("differential", []):
        try:
            a, terms = entry
        except ValueError as err:
            raise InputError(f"bad differential entry {entry!r}") from err
        diff[a] = {c: _scalar(s, fld) for c, s in terms}
    try:
        return Cdga.build(basis, products, diff, fld, data.get("name", name))
    except (KeyError, ValueError) as err:
        raise InputError(f"cdga: {err}") from err


def cdga_to_json(a: Cdga) -> dict:
    products = []
    for i in range(1, a.max_degree + 1):
        for j in range(i, a.max_degree + 1 - i):
            t = a.mul[(i, j)]
            for p in range(a.dim(i)):
                for r in range(a.dim(j)):
                    if i == j and r < p:
                        continue
                    terms = [[a.basis[i + j][k], ex.format_scalar(t[p, r, k])]
                             for k in range(a.dim(i + j)) if t[p, r, k]]
                    if terms:
                        products.append([a.basis[i][p], a.basis[j][r], terms])
    diff = []
    for i in range(a.max_degree):
        for p in range(a.dim(i)):
            terms = [[a.basis[i + 1][k], ex.format_scalar(a.d[i][k, p])]
                     for k in range(a.dim(i + 1)) if a.d[i][k, p]]
            if terms:
                diff.append([a.basis[i][p], terms])
    return {
        "name": a.name,
        "field": a.field,
        "max_degree": a.max_degree,
        "basis": {str(i): list(b) for i, b in enumerate(a.basis)},
        "product": products,
        "differential": diff,
    }


# Morphism: {"source": cdga, "target": cdga, "maps": {"1": [[src, [[dst, s], ...]], ...], ...}}
def morphism_from_json(data: dict) -> CdgaMorphism:
    src = cdga_from_json(_need(data, "source", "morphism"))
    tgt = cdga_from_json(_need(data, "target", "morphism"))
    maps = []
    entries = data.get("maps", {})
    for i in range(min(src.max_degree, tgt.max_degree) + 1):
        m = ex.zeros(tgt.dim(i), src.dim(i), src.field)
        if i == 0:
            m[0, 0] = ex.to_scalar(1, src.field)
        for a, terms in entries.get(str(i), []):
            for b, s in terms:
                try:
                    m[tgt.basis[i].index(b), src.basis[i].index(a)] = _scalar(s, src.field)
                except ValueError as err:
                    raise InputError(f"morphism degree {i}: {err}") from err
        maps.append(m)
    return CdgaMorphism(src, tgt, tuple(maps), data.get("name", ""))


# Lie algebra: {"preset": "sl2"} or {"basis": [...], "brackets": [[x, y, [[z, s], ...]], ...]}
def lie_from_json(data, fld: str = "rational") -> LieAlgebra:
    if isinstance(data, str):
        data = {"preset": data}
    fld = data.get("field", fld)
    try:
        if "preset" in data:
            return preset_lie(data["preset"], fld)
        basis = list(_need(data, "basis", "lie"))
        if "dim" in data and int(data["dim"]) != len(basis):
            raise InputError(f"lie algebra: dim {data['dim']} but {len(basis)} basis names")

        def name(x):
            return basis[x] if isinstance(x, int) else x

        brackets = {
            (name(x), name(y)): {name(z): _scalar(s, fld) for z, s in terms}
            for x, y, terms in data.get("brackets", [])
        }
        lie = LieAlgebra.from_brackets(basis, brackets, fld, data.get("name", ""))
    except (KeyError, IndexError, ValueError) as err:
        raise InputError(f"lie algebra: {err}") from err
    issues = lie.validate()
    if issues:
        raise InputError("lie algebra: " + "; ".join(issues))
    return lie


# Representation: {"preset": "adjoint" | "standard" | "trivial"} or {"matrices": {x: [[s, ...], ...]}}
def lie_rep_from_json(data, lie: LieAlgebra) -> LieRep:
    if isinstance(data, str):
        data = {"preset": data}
    preset = data.get("preset")
    try:
        if preset == "adjoint":
            return adjoint(lie)
        if preset == "standard":
            return standard(lie)
        if preset == "trivial":
            return trivial_rep(lie, int(data.get("dim", 1)))
        if preset is not None:
            raise InputError(f"unknown representation preset {preset!r}")
        mats = data["matrices"]
        rep = LieRep(lie, tuple(_matrix(mats[x], lie.field) for x in lie.basis), data.get("name", ""))
    except (KeyError, ValueError) as err:
        raise InputError(f"representation: {err}") from err
    issues = rep.validate()
    if issues:
        raise InputError("representation: " + "; ".join(issues))
    return rep


def _matrix(rows, fld):
    return np.array([[_scalar(x, fld) for x in row] for row in rows], dtype=object).reshape(len(rows), -1)


# Truncated ring: {"vars": ["t"], "order": 4}; "variables" is accepted as an alias
def ring_from_json(data: dict, fld: str = "rational") -> TruncatedCoefficients:
    try:
        names = data["vars"] if "vars" in data else data["variables"]
        return TruncatedCoefficients(list(names), int(data["order"]), data.get("field", fld))
    except (KeyError, TypeError, ValueError) as err:
        raise InputError(f"ring: {err}") from err


def _monomial(text: str, ring: TruncatedCoefficients) -> tuple[int, ...]:
    e = [0] * len(ring.variables)
    if text.strip() in ("", "1"):
        return tuple(e)
    for factor in text.split("*"):
        name, _, power = factor.strip().partition("^")
        if name not in ring.variables:
            raise InputError(f"unknown ring variable {name!r}")
        e[ring.variables.index(name)] += int(power) if power else 1
    return tuple(e)


def _format_monomial(e, ring: TruncatedCoefficients) -> str:
    parts = [v if k == 1 else f"{v}^{k}" for v, k in zip(ring.variables, e) if k]
    return "*".join(parts) or "1"


def ring_element_from_json(value, ring: TruncatedCoefficients) -> TruncElem:
    """A scalar, or a list of ``[monomial, scalar]`` pairs such as ``[["t", "1"], ["t^2", "-1/2"]]``."""
    if value == []:
        return ring.zero()
    if isinstance(value, list) and isinstance(value[0], list):
        terms = {}
        for mono, s in value:
            e = _monomial(mono, ring)
            terms[e] = terms.get(e, 0) + _scalar(s, ring.field)
        return ring.element(terms)
    return ring.const(_scalar(value, ring.field))


def ring_element_to_json(x, ring: TruncatedCoefficients):
    if not isinstance(x, TruncElem):
        return ex.format_scalar(x)
    terms = [[_format_monomial(e, ring), ex.format_scalar(c)] for e, c in sorted(x.terms.items()) if c]
    return terms or "0"


# Connection: {"terms": {"a": {"e": s | ring element}}}
def connection_from_json(data: dict, a: Cdga, lie: LieAlgebra, ring: TruncatedCoefficients | None = None):
    terms = data.get("terms", data) if isinstance(data, dict) else None
    if not isinstance(terms, dict):
        raise InputError("connection: expected {'terms': {...}}")
    if ring is None:
        try:
            return FlatConnection.from_terms(a, lie, {x: {y: _scalar(s, a.field) for y, s in gv.items()}
                                                      for x, gv in terms.items()})
        except ValueError as err:
            raise InputError(f"connection: {err}") from err
    coeffs = np.empty((a.dim(1), lie.dim), dtype=object)
    for idx in np.ndindex(*coeffs.shape):
        coeffs[idx] = ring.zero()
    for x, gv in terms.items():
        if x not in a.basis[1]:
            raise InputError(f"connection: {x!r} is not a degree-1 basis element")
        for y, val in gv.items():
            if y not in lie.basis:
                raise InputError(f"connection: {y!r} is not a Lie basis element")
            j, m = a.basis[1].index(x), lie.basis.index(y)
            coeffs[j, m] = coeffs[j, m] + ring_element_from_json(val, ring)
    return FlatConnection(a, lie, coeffs)


def gauge_from_json(data: dict, a: Cdga, lie: LieAlgebra, ring: TruncatedCoefficients):
    conn = {"terms": data.get("terms", data)}
    coeffs = np.empty((a.dim(0), lie.dim), dtype=object)
    for idx in np.ndindex(*coeffs.shape):
        coeffs[idx] = ring.zero()
    for x, gv in conn["terms"].items():
        if x not in a.basis[0]:
            raise InputError(f"gauge: {x!r} is not a degree-0 basis element")
        for y, val in gv.items():
            coeffs[a.basis[0].index(x), lie.basis.index(y)] += ring_element_from_json(val, ring)
    return GaugeElement(ring, coeffs)


def connection_to_json(omega: FlatConnection, ring: TruncatedCoefficients | None = None) -> dict:
    a, lie = omega.cdga, omega.lie
    terms = {}
    for j, x in enumerate(a.basis[1]):
        row = {}
        for m, y in enumerate(lie.basis):
            v = omega.coeffs[j, m]
            if v:
                row[y] = ring_element_to_json(v, ring) if ring is not None else ex.format_scalar(v)
        if row:
            terms[x] = row
    return {"terms": terms}


# Arrangement: {"field", "rank", "hyperplanes": [[s, ...], ...], "labels": [...]}
def arrangement_from_json(data: dict, name: str = "") -> Arrangement:
    fld = data.get("field", "rational")
    rows = [[_scalar(x, fld) for x in row] for row in _need(data, "hyperplanes", "arrangement")]
    if "rank" in data and rows and len(rows[0]) != int(data["rank"]):
        raise InputError("arrangement: covector length differs from 'rank'")
    try:
        return Arrangement.from_rows(rows, data.get("labels"), fld, data.get("name", name))
    except ValueError as err:
        raise InputError(f"arrangement: {err}") from err


def arrangement_to_json(arr: Arrangement) -> dict:
    return {
        "name": arr.name,
        "field": arr.field,
        "rank": arr.ambient_dim,
        "hyperplanes": [[ex.format_scalar(x) for x in row] for row in arr.normals],
        "labels": list(arr.labels),
    }


# Multinets: {"multinets": [{"classes": [["12", "34"], ...], "mult": {"12": 1, ...}}]}
def multinets_from_json(data: dict, arr: Arrangement) -> list[Multinet]:
    out = []
    where = {lbl: i for i, lbl in enumerate(arr.labels)}
    for item in _need(data, "multinets", "multinet file"):
        try:
            classes = tuple(tuple(where[str(h)] for h in c) for c in item["classes"])
        except KeyError as err:
            raise InputError(f"multinet: unknown hyperplane label {err}") from err
        base = tuple(sorted(h for c in classes for h in c))
        if len(set(base)) != len(base):
            raise InputError("multinet: a hyperplane appears in two classes")
        mult_map = item.get("mult", {})
        mult = tuple(int(mult_map.get(arr.labels[h], 1)) for h in base)
        out.append(Multinet(base, classes, mult))
    return out


def multinets_to_json(nets, arr: Arrangement) -> dict:
    return {"multinets": [net.describe(arr) for net in nets]}


# Hirsch data: {"generators": ["p"], "tau": {"p": [["a*b", "1"]]}}
def hirsch_from_json(data: dict, base: Cdga) -> HirschData:
    gens = list(_need(data, "generators", "tau file"))
    tau = data.get("tau", {})
    try:
        terms = {g: {c: _scalar(s, base.field) for c, s in tau.get(g, [])} for g in gens}
        return HirschData.from_terms(base, terms)
    except ValueError as err:
        raise InputError(f"tau: {err}") from err


# Presentation: {"generators": ["x", "y"], "relators": [["x", "y", "X", "Y"]]}
def presentation_from_json(data: dict) -> GroupPresentation:
    try:
        return GroupPresentation.from_words(_need(data, "generators", "presentation"), data.get("relators", []))
    except ValueError as err:
        raise InputError(f"presentation: {err}") from err


# Group representation: {"field": ..., "matrices": {"x": [[s]], ...}} or the bare generator map
def group_rep_from_json(data: dict, p: GroupPresentation) -> Representation:
    fld = data.get("field", "rational") if isinstance(data, dict) else "rational"
    mats = data.get("matrices", data)
    try:
        return Representation(p, tuple(_matrix(mats[g], fld) for g in p.generators), fld)
    except KeyError as err:
        raise InputError(f"representation: no matrix for generator {err}") from err
    except ValueError as err:
        raise InputError(f"representation: {err}") from err


def obstruction_to_json(obstruction: dict, a: Cdga, lie: LieAlgebra, ring: TruncatedCoefficients) -> list:
    out = []
    for mono, arr in sorted(obstruction.items()):
        terms = {}
        for k in range(arr.shape[0]):
            row = {lie.basis[m]: ex.format_scalar(arr[k, m]) for m in range(arr.shape[1]) if arr[k, m]}
            if row:
                terms[a.basis[2][k]] = row
        out.append({"monomial": _format_monomial(mono, ring), "class": terms})
    return out
