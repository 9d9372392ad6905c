"""Command-line front end (``elgauge`` / ``python -m elgauge``).

Complexes are given either as a facet file path or as a generator spec
``sphere:N`` / ``torus:N:M``.  Exit codes: 0 ok, 1 validation or domain
failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from . import complex as cx
from . import elgf, gauge, pachner, thooft
from .groups import GroupModel, SU2Model, UnknownModel, model_from_name


class UsageError(Exception):
    pass


def load_complex(spec: str) -> cx.SimplicialComplex:
    if os.path.exists(spec):
        return cx.load_facets(spec)
    parts = spec.split(":")
    try:
        if parts[0] == "sphere" and len(parts) == 2:
            return cx.sphere_complex(int(parts[1]))
        if parts[0] == "torus" and len(parts) == 3:
            return cx.epsilon_torus(int(parts[1]), int(parts[2]))
    except ValueError as e:
        if isinstance(e, cx.PeriodTooSmall):
            raise
        raise UsageError(f"bad generator parameters in {spec!r}") from None
    raise UsageError(f"{spec!r} is neither a file nor a generator spec (sphere:N, torus:N:M)")


def parse_central(model: GroupModel, text: str):
    t = text.strip()
    if isinstance(model, SU2Model):
        if t in ("1", "+1"):
            return model.identity()
        if t == "-1":
            return (-1.0, 0.0, 0.0, 0.0)
        return model.decode(json.loads(t))
    if model.name == "u1":
        return model.decode(Fraction(t))
    return model.decode(t)


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _write(text: str, path: Optional[str]):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit(args, obj: dict, text: str):
    if args.format == "json":
        sys.stdout.write(gauge.dumps(obj))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _load_field(C, path) -> elgf.ExtendedField:
    return elgf.extended_from_dict(_read_json(path), gauge.build_network(C))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.kind == "sphere":
        if len(args.params) != 1:
            raise UsageError("gen sphere N")
        K = cx.sphere_complex(args.params[0])
    else:
        if len(args.params) != 2:
            raise UsageError("gen torus N M")
        K = cx.epsilon_torus(*args.params)
    _write(cx.format_facets(K), args.output)
    return 0


def cmd_validate(args) -> int:
    K = load_complex(args.complex)
    rep = cx.validate_triangulation(K)
    d = rep.as_dict()
    d["f_vector"] = K.f_vector()
    d["euler_characteristic"] = K.euler_characteristic()
    _emit(args, d, f"ok={rep.ok} orientable={rep.orientable} f={K.f_vector()} chi={K.euler_characteristic()}"
          + "".join("\n  " + m for m in rep.messages))
    return 0 if rep.ok else 1


def cmd_field_gen(args) -> int:
    K = load_complex(args.complex)
    C = cx.dualize(K)
    m = model_from_name(args.model)
    net = gauge.build_network(C)
    if args.kind == "trivial":
        E = elgf.zero_field(C, m)
    elif args.kind == "random":
        E = elgf.ExtendedField(gauge.random_field(net, m, args.seed))
    elif args.kind == "valid":
        E = elgf.random_valid_field(C, m, args.seed)
    else:
        E = elgf.canonical_field(C, m, args.winding)
    _write(gauge.dumps(elgf.extended_to_dict(E)), args.output)
    return 0


def cmd_classify(args) -> int:
    K = load_complex(args.complex)
    C = cx.dualize(K)
    E = _load_field(C, args.field)
    b = elgf.classify(E)
    d = b.as_dict()
    text = f"class: {b.summary()}"
    if not args.no_kernel:
        ck = elgf.class_kernel(C, E.model, args.which)
        d["class_kernel"] = ck.summary()
        text += f"\ndeck {ck.summary()['deck']}, kernel {ck.summary()['kernel']}, quotient {ck.summary()['quotient']}"
    _emit(args, d, text)
    return 0


def cmd_deck_group(args) -> int:
    K = load_complex(args.complex)
    C = cx.dualize(K)
    m = model_from_name(args.model)
    deck = elgf.deck_group(C, m, args.which)
    s = deck.summary()
    _emit(args, s, f"{args.which}: subgroup {s['subgroup']} of {s['ambient']}; relations {s['relations']}")
    return 0


def cmd_equiv(args) -> int:
    K = load_complex(args.complex)
    C = cx.dualize(K)
    E1, E2 = _load_field(C, args.field1), _load_field(C, args.field2)
    same = elgf.cellularly_equivalent(E1, E2)
    _emit(args, {"equivalent": same}, "equivalent" if same else "not equivalent")
    return 0 if same else 1


def cmd_pachner_walk(args) -> int:
    K = load_complex(args.complex)
    C = cx.dualize(K)
    E = _load_field(C, args.field)
    if args.script:
        with open(args.script) as fh:
            script = pachner.parse_moves(fh.read())
        E2, reports = pachner.replay(E, script)
    else:
        E2, reports = pachner.random_walk(E, args.steps, args.seed)
    start = elgf.classify(E)
    log = [{"step": i + 1, "move": r.move.script_line(), "facets": len(r.new_complex.facets),
            "class": r.class_after.summary(), "method": r.method} for i, r in enumerate(reports)]
    ok = all(r.certified for r in reports)
    if C.n == 2 or E.model.pi1().is_trivial():
        key = (start.primary_total, start.secondary_total)
        ok = ok and all((r.class_after.primary_total, r.class_after.secondary_total) == key for r in reports)
    if args.output:
        cx.save_facets(E2.C.K, args.output + ".facets")
        _write(gauge.dumps(elgf.extended_to_dict(E2)), args.output + ".field.json")
    d = {"start": start.summary(), "steps": log, "constant": ok,
         "moves": pachner.format_moves(r.move for r in reports)}
    _emit(args, d, "\n".join([f"start {start.summary()}"] +
                             [f"{s['step']:3d} {s['move']:<24} {s['class']}" for s in log] +
                             [f"constant: {ok}"]))
    return 0 if ok else 1


def _defect_setup(args):
    K = load_complex(args.complex)
    C = cx.dualize(K)
    E = _load_field(C, args.field)
    with open(args.defect) as fh:
        L = thooft.parse_defect(fh.read())
    g = parse_central(E.model, args.central)
    S = thooft.find_seifert(C, L, args.side)
    return C, E, L, g, S


def cmd_thooft(args) -> int:
    C, E, L, g, S = _defect_setup(args)
    E2, D = thooft.apply_thooft(E, L, S, g)
    rep = thooft.verify_gerbe(D)
    d = {"seifert": S.as_dict(), "gerbe": D.summary(), "verify": rep.as_dict()}
    if E.model.name == "u1" and C.n >= 2:
        a, b = thooft.off_locus_cochains(E, E2, L)
        d["off_locus_unchanged"] = a == b
    if args.output:
        _write(gauge.dumps(elgf.extended_to_dict(E2)), args.output)
    text = [f"Seifert chain: {len(S.S0)} cell(s)", f"defects: {D.summary()['defect_cells']}",
            f"gerbe conditions: {'ok' if rep.ok else 'VIOLATED'}"]
    if "off_locus_unchanged" in d:
        text.append(f"class off L unchanged: {d['off_locus_unchanged']}")
    _emit(args, d, "\n".join(text))
    return 0 if rep.ok and d.get("off_locus_unchanged", True) else 1


def cmd_verify_gerbe(args) -> int:
    C, E, L, g, S = _defect_setup(args)
    _, D = thooft.apply_thooft(E, L, S, g)
    rep = thooft.verify_gerbe(D)
    _emit(args, rep.as_dict(), f"ok={rep.ok} cond1={rep.checked_cond1} cond2={rep.checked_cond2} "
          f"violations={len(rep.violations)}")
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="elgauge", description="extended lattice gauge fields")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="write a facet file")
    s.add_argument("kind", choices=("sphere", "torus"))
    s.add_argument("params", type=int, nargs="+")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("validate", help="check a triangulation")
    s.add_argument("complex")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("field-gen", help="create an extended field")
    s.add_argument("complex")
    s.add_argument("--model", default="u1")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--kind", choices=("trivial", "random", "valid", "canonical"), default="valid")
    s.add_argument("--winding", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_field_gen)

    s = sub.add_parser("classify", help="bundle class of a field")
    s.add_argument("complex")
    s.add_argument("field")
    s.add_argument("--which", choices=("full", "core"), default="core")
    s.add_argument("--no-kernel", action="store_true", help="skip the class-kernel computation")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("deck-group", help="deck group of label shifts")
    s.add_argument("complex")
    s.add_argument("--model", default="u1")
    s.add_argument("--which", choices=("full", "core"), default="full")
    s.set_defaults(func=cmd_deck_group)

    s = sub.add_parser("equiv", help="cellular equivalence of two fields")
    s.add_argument("complex")
    s.add_argument("field1")
    s.add_argument("field2")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("pachner-walk", help="random or scripted Pachner moves")
    s.add_argument("complex")
    s.add_argument("field")
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--script", help="file of 'move <k> <ids>' lines")
    s.add_argument("-o", "--output", help="prefix for the final .facets and .field.json")
    s.set_defaults(func=cmd_pachner_walk)

    for name, fn, hlp in (("thooft", cmd_thooft, "apply a 't Hooft defect"),
                          ("verify-gerbe", cmd_verify_gerbe, "check the gerbe conditions")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("complex")
        s.add_argument("field")
        s.add_argument("defect", help="lines '<sign> <vertex ids>'")
        s.add_argument("--central", required=True)
        s.add_argument("--side", choices=("+", "-"), default="+")
        if name == "thooft":
            s.add_argument("-o", "--output")
        s.set_defaults(func=fn)
    return p


DOMAIN_ERRORS = (cx.InvalidTriangulation, cx.PeriodTooSmall, cx.NotOriented, cx.FacetFileError,
                 gauge.FieldFormatError, elgf.DimensionUnsupported, elgf.SecondaryUndefined,
                 elgf.InvalidExtendedField, elgf.ComplexMismatch, elgf.NotInDeckGroup,
                 pachner.MoveNotApplicable, pachner.LocalSolveFailed,
                 thooft.NotACycle, thooft.NotNullHomologous, thooft.NotCentral,
                 thooft.SeifertMultiplicity, UnknownModel)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
