"""Command-line front end.

Machine-readable JSON goes to standard output and a short human summary to
standard error.  Exit codes: 0 success, 1 verification failure (or a negative
answer from ``mc check`` / ``mc lift``), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import arrangements as arrmod
from . import cdga as cd
from . import deform as df
from . import groups as gr
from . import io
from .verify import verify_arrangement_decomposition, verify_hirsch

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _threads() -> int:
    raw = os.environ.get("JUMPLOCI_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise io.InputError(f"JUMPLOCI_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise io.InputError("JUMPLOCI_THREADS must be at least 1")
    return n


def _load(path, fld):
    data = io.read_json(path)
    if isinstance(data, dict):
        data.setdefault("field", fld)
    return data


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _say(text: str) -> None:
    sys.stderr.write(text + "\n")


def cmd_os(args) -> int:
    arr = io.arrangement_from_json(_load(args.arr, args.field), args.arr)
    a = arrmod.os_algebra(arr)
    betti = [cd.cohomology_dim(a, i) for i in range(a.max_degree + 1)]
    out = io.cdga_to_json(a)
    out["betti"] = betti
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
        _emit({"betti": betti, "written": args.out})
    else:
        _emit(out)
    _say(f"OS algebra of {len(arr)} hyperplanes: " + ", ".join(f"b{i}={b}" for i, b in enumerate(betti)))
    return EXIT_OK


def cmd_multinets(args) -> int:
    arr = io.arrangement_from_json(_load(args.arr, args.field), args.arr)
    nets = arrmod.multinet_enumerate(arr, args.k, args.max_mult)
    out = io.multinets_to_json(nets, arr)
    out["count"] = len(nets)
    _emit(out)
    local = sum(1 for n in nets if n.is_local(arr))
    _say(f"{len(nets)} multinets with k={args.k} ({local} local, {len(nets) - local} essential)")
    return EXIT_OK


def _lie_and_rep(args):
    lie = io.lie_from_json(_preset_or_file(args.lie), args.field)
    rep = io.lie_rep_from_json(_preset_or_file(args.rep), lie)
    return lie, rep


def cmd_verify_decomposition(args) -> int:
    arr = io.arrangement_from_json(_load(args.arr, args.field), args.arr)
    lie, rep = _lie_and_rep(args)
    inputs = {"arr": io.file_hash(args.arr), "lie": _tag(args.lie), "rep": _tag(args.rep)}
    nets = None
    if args.multinets:
        nets = io.multinets_from_json(io.read_json(args.multinets), arr)
        inputs["multinets"] = io.file_hash(args.multinets)
    report = verify_arrangement_decomposition(
        arr, lie, rep, args.samples, args.seed, multinets=nets,
        ks=tuple(args.k), max_mult=args.max_mult, inputs=inputs,
    )
    sys.stdout.write(report.to_json() + "\n")
    _say(report.summary())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_verify_hirsch(args) -> int:
    base = io.cdga_from_json(_load(args.base, args.field), args.base)
    h = io.hirsch_from_json(io.read_json(args.tau), base)
    lie = io.lie_from_json(_preset_or_file(args.lie), args.field)
    inputs = {"base": io.file_hash(args.base), "tau": io.file_hash(args.tau), "lie": _tag(args.lie)}
    report = verify_hirsch(base, h, lie, args.samples, args.seed, inputs=inputs)
    sys.stdout.write(report.to_json() + "\n")
    _say(report.summary())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_twisted_h(args) -> int:
    p = io.presentation_from_json(io.read_json(args.pres))
    rho = io.group_rep_from_json(_load(args.rep, args.field), p)
    dim = gr.twisted_h(p, rho, args.degree)
    _emit({"degree": args.degree, "dim": dim})
    _say(f"dim H^{args.degree} = {dim}")
    return EXIT_OK


def _preset_or_file(value):
    # a preset name or the path of a JSON file
    return io.read_json(value) if value.endswith(".json") else value


def _tag(value):
    return io.file_hash(value) if value.endswith(".json") else value


def _mc_inputs(args):
    a = io.cdga_from_json(_load(args.cdga, args.field), args.cdga)
    lie = io.lie_from_json(_preset_or_file(args.lie), args.field)
    ring = io.ring_from_json(io.read_json(args.ring), a.field) if getattr(args, "ring", None) else None
    return a, lie, ring


def cmd_mc_check(args) -> int:
    a, lie, ring = _mc_inputs(args)
    omega = io.connection_from_json(io.read_json(args.omega), a, lie, ring)
    if ring is None:
        flat = df.mc_check(a, lie, omega)
    else:
        flat = not any(df._normalize(ring, cd.mc_residual(a, lie, df._normalize(ring, omega.coeffs))).flat)
    _emit({"flat": flat})
    _say("flat" if flat else "not flat")
    return EXIT_OK if flat else EXIT_FAIL


def cmd_mc_lift(args) -> int:
    a, lie, ring = _mc_inputs(args)
    omega = io.connection_from_json(io.read_json(args.omega), a, lie, ring)
    res = df.mc_lift(a, lie, ring, omega)
    if res.ok:
        _emit({"lifted": io.connection_to_json(res.lifted, ring), "obstruction": None})
        _say(f"lifted to order {ring.order}")
        return EXIT_OK
    _emit({"lifted": None, "obstruction": io.obstruction_to_json(res.obstruction, a, lie, ring)})
    _say(f"obstructed at order {ring.order}")
    return EXIT_FAIL


def cmd_mc_gauge(args) -> int:
    a, lie, ring = _mc_inputs(args)
    omega = io.connection_from_json(io.read_json(args.omega), a, lie, ring)
    if args.equivalent_to:
        other = io.connection_from_json(io.read_json(args.equivalent_to), a, lie, ring)
        alpha = df.gauge_equivalent(a, lie, ring, omega, other, augmented=args.augmented)
        if alpha is None:
            _emit({"alpha": None})
            _say("no gauge element found")
            return EXIT_FAIL
        _emit({"alpha": _gauge_to_json(alpha, a, lie, ring)})
        _say("gauge equivalent")
        return EXIT_OK
    alpha = io.gauge_from_json(io.read_json(args.alpha), a, lie, ring)
    moved = df.gauge_act(a, lie, ring, alpha, omega)
    _emit({"omega": io.connection_to_json(moved, ring)})
    _say("gauge action applied")
    return EXIT_OK


def _gauge_to_json(alpha, a, lie, ring) -> dict:
    terms = {}
    for p, x in enumerate(a.basis[0]):
        row = {y: io.ring_element_to_json(alpha.coeffs[p, m], ring)
               for m, y in enumerate(lie.basis) if alpha.coeffs[p, m]}
        if row:
            terms[x] = row
    return {"terms": terms}


def cmd_mc_equations(args) -> int:
    a, lie, _ = _mc_inputs(args)
    eqs = df.mc_equations(a, lie)
    _emit({"variables": df.variable_names(a, lie), "equations": [str(e) for e in eqs if not e.is_zero()]})
    _say(f"{sum(1 for e in eqs if not e.is_zero())} nonzero equations")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jumploci", description=__doc__.splitlines()[0])
    parser.add_argument("--field", choices=("rational", "gaussian"), default="rational",
                        help="coefficient field for inputs that do not name one")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("os", help="Orlik-Solomon algebra of an arrangement")
    p.add_argument("--arr", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_os)

    p = sub.add_parser("multinets", help="enumerate multinets")
    p.add_argument("--arr", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--max-mult", type=int, default=1)
    p.set_defaults(func=cmd_multinets)

    p = sub.add_parser("verify", help="sampling verifiers")
    vsub = p.add_subparsers(dest="target", required=True)
    v = vsub.add_parser("decomposition")
    v.add_argument("--arr", required=True)
    v.add_argument("--lie", default="sl2")
    v.add_argument("--rep", default="adjoint")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--multinets")
    v.add_argument("--k", type=int, nargs="+", default=[3, 4])
    v.add_argument("--max-mult", type=int, default=1)
    v.set_defaults(func=cmd_verify_decomposition)
    v = vsub.add_parser("hirsch")
    v.add_argument("--base", required=True)
    v.add_argument("--tau", required=True)
    v.add_argument("--lie", default="sl2")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify_hirsch)

    p = sub.add_parser("twisted-h", help="twisted cohomology of a presentation complex")
    p.add_argument("--pres", required=True)
    p.add_argument("--rep", required=True)
    p.add_argument("--degree", type=int, choices=(0, 1, 2), required=True)
    p.set_defaults(func=cmd_twisted_h)

    p = sub.add_parser("mc", help="Maurer-Cartan tools")
    msub = p.add_subparsers(dest="action", required=True)
    for name, func in (("check", cmd_mc_check), ("lift", cmd_mc_lift),
                       ("gauge", cmd_mc_gauge), ("equations", cmd_mc_equations)):
        m = msub.add_parser(name)
        m.add_argument("--cdga", required=True)
        m.add_argument("--lie", default="sl2")
        if name != "equations":
            m.add_argument("--omega", required=True)
            m.add_argument("--ring", required=name in ("lift", "gauge"))
        if name == "gauge":
            m.add_argument("--alpha")
            m.add_argument("--equivalent-to")
            m.add_argument("--augmented", action="store_true")
        m.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code else EXIT_OK
    try:
        _threads()
        if getattr(args, "action", None) == "gauge" and not (args.alpha or args.equivalent_to):
            raise io.InputError("mc gauge needs --alpha or --equivalent-to")
        return args.func(args)
    except (io.InputError, ValueError, KeyError) as err:
        _say(f"input error: {err}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
