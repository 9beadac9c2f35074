"""Command-line front end.

Exit codes: 0 success, 1 parse or validation error, 2 failed check.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ccmod, verify
from .product import case2, cf
from .errors import ConstructionError, GraphError, ParseError, SymbolError, ValidationError
from .exactlin import CoefficientRing
from .fileformat import dump, load, to_dot
from .reeb import CIRCLE, LINE, h1, validate

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


def _emit(args, data: dict, text: str):
    if args.format != "text":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _load_valid(path):
    g, universe = load(path)
    diags = validate(g)
    if diags:
        raise ValidationError(diags)
    return g, universe


def _presentation_dict(p) -> dict:
    return {
        "ring": str(p.ring),
        "module": p.describe(),
        "free_rank": p.free_rank,
        "invariant_factors": list(p.torsion),
        "basis": [str(c) for c in p.basis],
        "generators": [str(x) for x in p.generators],
    }


def _presentation_text(p) -> str:
    lines = [f"module: {p.describe()} over {p.ring}",
             f"free rank: {p.free_rank}",
             f"invariant factors: {list(p.torsion)}"]
    k = 0
    for d in p.torsion:
        lines.append(f"torsion generator: {p.generators[k]} (order {d})")
        k += 1
    for x in p.generators[k:]:
        lines.append(f"free generator: {x}")
    return "\n".join(lines)


def cmd_validate(args) -> int:
    g, _ = load(args.file)
    diags = validate(g)
    _emit(args, {"valid": not diags, "diagnostics": diags},
          "ok" if not diags else "\n".join(diags))
    return EXIT_INPUT if diags else EXIT_OK


def cmd_cc(args) -> int:
    g, universe = _load_valid(args.file)
    d = ccmod.cc(g, universe, oriented=args.oriented)
    q = ccmod.quotient(g, args.coeff)
    data = {
        "variant": "COC" if d.oriented else "CC",
        "fiber_labels": [str(c) for c in sorted(d.fiber_labels)],
        "effective": [{"vertex": v, "relation": str(r)} for v, r in zip(d.sources, d.effective)],
        "outer_generators": ([str(c) for c in sorted(d.outer_generators)]
                             if d.outer_universe is not None else "complement of fiber labels"),
        "direct_sum_ok": d.direct_sum_ok,
        "quotient": _presentation_dict(q),
    }
    lines = [f"{data['variant']} module",
             "fiber labels: " + ", ".join(data["fiber_labels"]),
             "effective part generators:"]
    lines += [f"  {v}: {r}" for v, r in zip(d.sources, d.effective)]
    outer = data["outer_generators"]
    lines.append("outer part: " + (", ".join(outer) if isinstance(outer, list) else outer))
    lines.append(f"direct sum: {d.direct_sum_ok}")
    lines.append(_presentation_text(q))
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if d.direct_sum_ok else EXIT_CHECK


def cmd_quotient(args) -> int:
    g, _ = _load_valid(args.file)
    q = ccmod.quotient(g, args.coeff)
    _emit(args, _presentation_dict(q), _presentation_text(q))
    return EXIT_OK


def cmd_product(args) -> int:
    f, _ = _load_valid(args.f1)
    g, _ = _load_valid(args.f2)
    if args.no_connect and not (f.is_bundle or g.is_bundle):
        result = case2(f, g)
    else:
        result = cf(f, g)
    dump(result, args.output)
    summary = {"output": str(args.output), "vertices": len(result.vertices),
               "edges": len(result.edges), "target": result.target}
    _emit(args, summary, f"wrote {args.output}: {len(result.vertices)} vertices, "
                         f"{len(result.edges)} edges, {result.target} target")
    return EXIT_OK


def _result(args, f, g):
    if args.result:
        r, _ = load(args.result)
        return r
    return cf(f, g)


def cmd_verify_thm2(args) -> int:
    f, _ = _load_valid(args.f1)
    g, _ = _load_valid(args.f2)
    result = _result(args, f, g)
    rep = verify.check_thm2(f, g, result)
    lines = [f"{k}: {v}" for k, v in rep.flags().items()]
    lines.append(f"S generators: {rep.s_size}; witnesses: {len(rep.forward_witnesses)} forward, "
                 f"{len(rep.backward_witnesses)} backward")
    lines += [f"failure: {w}" for w in rep.witnesses]
    lines += list(result.notes)
    lines.append("PASS" if rep.passed else "FAIL")
    _emit(args, {**rep.to_dict(), "gadgets": list(result.notes)}, "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_hom(args) -> int:
    f, _ = _load_valid(args.f1)
    g, _ = _load_valid(args.f2)
    result = _result(args, f, g)
    rep2 = verify.check_thm2(f, g, result)
    if not rep2.passed:
        _emit(args, {"error": "product check failed", **rep2.to_dict()},
              "product check failed:\n" + "\n".join(rep2.witnesses))
        return EXIT_CHECK
    rep = verify.induced_hom(f, g, result, args.coeff)
    lines = [f"{rep.source[0]} x {rep.source[1]} -> {rep.target}",
             f"well defined: {rep.well_defined_ok}",
             f"surjective: {rep.surjective_ok}",
             f"zero map: {rep.zero_map}"]
    for (a, b), v in rep.image_table.items():
        lines.append(f"  ({a}, {b}) -> {v['product']} = {v['coords']}")
    lines += [f"failure: {w}" for w in rep.failures]
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK if rep.well_defined_ok and rep.surjective_ok else EXIT_CHECK


def cmd_homology(args) -> int:
    g, _ = _load_valid(args.file)
    p = h1(g, args.coeff)
    data = {"ring": str(p.ring), "rank": p.free_rank, "cycles": list(p.basis)}
    _emit(args, data, f"H1 over {p.ring}: rank {p.free_rank}")
    return EXIT_OK


def cmd_check_thm1(args) -> int:
    g, _ = _load_valid(args.file)
    rep = verify.check_thm1(g, args.coeff)
    if rep.vacuous:
        text = f"vacuous pass: no fiber class survives in the quotient (H1 rank {rep.h1_rank})"
    else:
        text = (f"{'pass' if rep.passed else 'FAIL'}: nonzero classes "
                f"{', '.join(rep.witnesses)}; H1 rank {rep.h1_rank}")
    _emit(args, rep.to_dict(), text)
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_random(args) -> int:
    g = verify.random_reeb_graph(args.seed, target=args.target, n_vertices=args.vertices,
                                 n_labels=args.labels, max_degree=args.max_degree,
                                 tree=args.tree)
    dump(g, args.output)
    _emit(args, {"output": str(args.output), "seed": args.seed}, f"wrote {args.output}")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    g, _ = load(args.file)
    Path(args.output).write_text(to_dot(g), encoding="utf-8")
    _emit(args, {"output": str(args.output)}, f"wrote {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "json-like"), default="text")
    coeff = argparse.ArgumentParser(add_help=False)
    coeff.add_argument("--coeff", type=CoefficientRing.parse, default=CoefficientRing.parse("Z"),
                       help="Z, Q or Zp for a prime p (default Z)")

    parser = argparse.ArgumentParser(prog="reebcob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common])
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cc", parents=[common, coeff])
    p.add_argument("file")
    p.add_argument("--oriented", action="store_true")
    p.set_defaults(func=cmd_cc)

    p = sub.add_parser("quotient", parents=[common, coeff])
    p.add_argument("file")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("product", parents=[common])
    p.add_argument("f1")
    p.add_argument("f2")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--no-connect", action="store_true")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("verify-thm2", parents=[common])
    p.add_argument("f1")
    p.add_argument("f2")
    p.add_argument("result", nargs="?")
    p.set_defaults(func=cmd_verify_thm2)

    p = sub.add_parser("hom", parents=[common, coeff])
    p.add_argument("f1")
    p.add_argument("f2")
    p.add_argument("result", nargs="?")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("homology", parents=[common, coeff])
    p.add_argument("file")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("check-thm1", parents=[common, coeff])
    p.add_argument("file")
    p.set_defaults(func=cmd_check_thm1)

    p = sub.add_parser("random", parents=[common])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--vertices", type=int, default=4)
    p.add_argument("--labels", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--target", choices=(LINE, CIRCLE), default=LINE)
    p.add_argument("--tree", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("export-dot", parents=[common])
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        for d in exc.diagnostics:
            print(f"invalid: {d}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, SymbolError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
