"""Command line front end. Each verb is a thin adapter over the library.

Exit status: 0 on success, 1 when the mathematical answer is negative
(an identity fails, a check does not pass), 2 on usage or backend errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import bands, lattices, registry
from .algebra import (
    AlgebraError,
    algebra_from_json,
    algebra_to_json,
    derived_algebra,
    evaluate,
    isomorphic,
    satisfies,
)
from .hypersub import HypersubstitutionError, derive_identity, parse_hypersubstitution
from .terms import BANDS, LATTICES, TermSyntaxError, parse_identity, print_term

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _variety(args) -> registry.VarietySpec:
    v = registry.variety(args.variety)
    if args.cap is not None and v.backend == "band":
        v = registry.VarietySpec(v.name, v.axioms, v.signature, v.backend, v.generators, args.cap)
    return v


def _emit(args, text: str, data) -> None:
    print(json.dumps(data, ensure_ascii=False) if args.json else text)


def _word_fmt(x) -> str:
    return bands.word_str(x) if isinstance(x, tuple) else str(x)


def _load_model(spec: str):
    if spec in lattices.MODELS:
        return lattices.model(spec)
    if os.path.exists(spec):
        with open(spec) as fh:
            alg = algebra_from_json(fh.read(), LATTICES)
        return alg
    raise UsageError(f"unknown model {spec!r}: not builtin ({', '.join(lattices.MODELS)}) and no such file")


def cmd_normalize(args) -> int:
    w = bands.word(args.word)
    if args.variety in bands.FAST_PATHS:
        key = bands.format_key(args.variety, bands.fast_normalize(args.variety, w))
    elif args.variety == "B":
        key = "B:" + bands.word_str(bands.band_canonical(w))
    else:
        v = _variety(args)
        fa = v.free_algebra(max(w) + 1)
        elem = evaluate(fa, bands.unflatten(w), {i: g for i, g in enumerate(fa.generators)})
        key = f"{v.name}:{bands.word_str(fa.label(elem))}"
    _emit(args, key, {"variety": args.variety, "word": args.word, "key": key})
    return EXIT_OK


def cmd_check(args) -> int:
    v = _variety(args)
    e = parse_identity(args.identity, v.signature)
    verdict = v.holds(e)
    text = "true" if verdict else f"false\n{verdict.describe(_word_fmt)}"
    _emit(args, text, {"variety": v.name, "identity": args.identity, "holds": verdict.holds,
                       "witness": None if verdict else verdict.describe(_word_fmt)})
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_derive_identity(args) -> int:
    s = parse_hypersubstitution(args.sigma)
    e = derive_identity(s, parse_identity(args.identity, s.signature))
    text = registry.show_identity(e, s.signature)
    _emit(args, text, {"sigma": s.literal(), "identity": args.identity, "derived": text})
    return EXIT_OK


def cmd_derived_variety(args) -> int:
    v = _variety(args)
    s = parse_hypersubstitution(args.sigma, v.signature)
    try:
        w = registry.derived_variety(v, s)
    except registry.OutsideRegistry as exc:
        _emit(args, f"outside registry\n{exc}", {"variety": v.name, "sigma": s.literal(), "target": None,
                                                 "reason": str(exc)})
        return EXIT_FALSE
    _emit(args, w.name, {"variety": v.name, "sigma": s.literal(), "target": w.name})
    return EXIT_OK


def cmd_derived_set(args) -> int:
    names = [w.name for w in registry.derived_set(_variety(args))]
    _emit(args, " ".join(names), names)
    return EXIT_OK


def cmd_dimension(args) -> int:
    rep = registry.dimension(_variety(args))
    text = "\n".join([str(rep.dimension)] + rep.rows())
    _emit(args, text, {"variety": rep.variety.name, "dimension": rep.dimension, "classes": rep.to_json()})
    return EXIT_OK


def cmd_dimension_table(args) -> int:
    rows = registry.dimension_table(args.threads)
    if args.json:
        print(json.dumps(rows, indent=2, ensure_ascii=False))
        return EXIT_OK
    print(f"{'variety':8s} {'dim':>3s}  {'solid':5s} {'fluid':5s} {'prefl':5s}  derived")
    for r in rows:
        yn = lambda b: "yes" if b else "no"
        print(f"{r['variety']:8s} {r['dimension']:>3d}  {yn(r['solid']):5s} {yn(r['fluid']):5s} "
              f"{yn(r['prefluid']):5s}  {{{', '.join(r['derived'])}}}")
    return EXIT_OK


def cmd_classify(args) -> int:
    c = registry.classify(_variety(args))
    text = f"{c.variety}: " + ", ".join(c.flags())
    if c.dimension is not None:
        text += f"; dimension {c.dimension}"
    if c.witness:
        text += f"\nwitness: {c.witness}"
    _emit(args, text, {"variety": c.variety, "solid": c.solid, "fluid": c.fluid, "prefluid": c.prefluid,
                       "minimal": c.minimal, "dimension": c.dimension, "witness": c.witness})
    return EXIT_OK


def cmd_free_algebra(args) -> int:
    fa = _variety(args).free_algebra(args.gens)
    if args.count:
        _emit(args, str(fa.size), {"size": fa.size})
    elif args.json:
        print(algebra_to_json(fa, labels=True))
    else:
        print(" ".join(bands.word_str(w) for w in fa.labels))
    return EXIT_OK


def cmd_hyperassoc(args) -> int:
    check = registry.hyperassociativity_check(_variety(args))
    lines = ["true" if check else "false"]
    for name, e, verdict in check.failures:
        lines.append(f"{name}: {registry.show_identity(e)}  {verdict.describe(_word_fmt)}")
    _emit(args, "\n".join(lines), {"variety": check.variety, "holds": check.holds,
                                   "failures": [name for name, _, _ in check.failures]})
    return EXIT_OK if check else EXIT_FALSE


def _report_lines(report) -> list[str]:
    return [f"{'pass' if c.passed else 'FAIL'}  {c.name}: {print_term(c.identity.lhs, LATTICES)} = "
            f"{print_term(c.identity.rhs, LATTICES)}" + ("" if c.passed else f"  ({c.verdict.describe()})")
            for c in report]


def cmd_lattice_check(args) -> int:
    if args.identity is None:
        if not args.model:
            raise UsageError("lattice-check needs an identity, a --model, or both")
        report = lattices.axiom_report(_load_model(args.model))
        ok = all(c.passed for c in report)
        _emit(args, "\n".join(_report_lines(report)),
              [{"axiom": c.name, "passed": c.passed} for c in report])
        return EXIT_OK if ok else EXIT_FALSE
    e = parse_identity(args.identity, LATTICES)
    if args.model:
        verdict = satisfies(_load_model(args.model), e)
        ok, detail = verdict.holds, verdict.describe()
    else:
        ok, detail = lattices.free_lattice_equal(e.lhs, e.rhs), None
    text = "true" if ok else "false" + (f"\n{detail}" if detail else "")
    _emit(args, text, {"identity": args.identity, "holds": ok, "model": args.model})
    return EXIT_OK if ok else EXIT_FALSE


def cmd_lattice_enumerate(args) -> int:
    classes = lattices.enumerate_binary_lattice_terms(args.depth)
    reps = [print_term(c[0], LATTICES) for c in classes]
    text = "\n".join(f"{r}  ({len(c)} terms)" for r, c in zip(reps, classes))
    _emit(args, f"{len(classes)} classes\n{text}",
          {"depth": args.depth, "classes": [{"representative": r, "terms": len(c)} for r, c in zip(reps, classes)]})
    return EXIT_OK


def cmd_lattice_derive(args) -> int:
    alg = _load_model(args.model)
    s = parse_hypersubstitution(args.sigma, LATTICES)
    derived = derived_algebra(alg, s)
    report = lattices.axiom_report(derived)
    is_dual = isomorphic(derived, lattices.dual(alg)) is not None
    if args.json:
        print(json.dumps({"algebra": json.loads(algebra_to_json(derived)),
                          "axioms": [{"axiom": c.name, "passed": c.passed} for c in report],
                          "isomorphic_to_dual": is_dual}))
    else:
        print(algebra_to_json(derived))
        print("\n".join(_report_lines(report)))
        print(f"isomorphic to dual: {'yes' if is_dual else 'no'}")
    return EXIT_OK if all(c.passed for c in report) else EXIT_FALSE


_AXIOM_SETS = {
    "lattice": lattices.LATTICE_AXIOMS,
    "distributive": lattices.LATTICE_AXIOMS + (("distributivity", lattices.DISTRIBUTIVE),),
    "modular": lattices.LATTICE_AXIOMS + (("modularity", lattices.MODULAR),),
}


def cmd_fluidity_cert(args) -> int:
    gens = [_load_model(m) for m in args.model]
    report = lattices.fluidity_certificate(gens, _AXIOM_SETS[args.axioms])
    if args.json:
        print(json.dumps({"dimension": report.dimension, "fluid": report.fluid, "trivial": report.trivial,
                          "verdicts": [{"sigma": v.sigma.literal(), "kind": v.kind, "proper": v.proper,
                                        "included": v.included, "witness": v.witness}
                                       for v in report.verdicts]}, ensure_ascii=False))
    else:
        print(f"dimension {report.dimension}" + (" (trivial variety)" if report.trivial else ""))
        for v in report.verdicts:
            print("  " + v.row())
    return EXIT_OK if report.fluid else EXIT_FALSE


def cmd_lattice_dot(args) -> int:
    sys.stdout.write(registry.to_dot())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypervar", description="Hypersubstitutions, derived varieties and dimension.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker threads for table sweeps")
    common.add_argument("--cap", type=int, default=None, help="generator cap for free algebras")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("normalize", cmd_normalize, "canonical key of a word in a band variety")
    sp.add_argument("--variety", required=True)
    sp.add_argument("word")
    sp = verb("check", cmd_check, "decide an identity in a variety")
    sp.add_argument("--variety", required=True)
    sp.add_argument("identity")
    sp = verb("derive-identity", cmd_derive_identity, "apply a hypersubstitution to an identity")
    sp.add_argument("--sigma", required=True)
    sp.add_argument("identity")
    sp = verb("derived-variety", cmd_derived_variety, "identify V_sigma in the registry")
    sp.add_argument("--variety", required=True)
    sp.add_argument("--sigma", required=True)
    sp = verb("derived-set", cmd_derived_set, "all derived varieties of V")
    sp.add_argument("--variety", required=True)
    sp = verb("dimension", cmd_dimension, "dimension of V with per-class table")
    sp.add_argument("--variety", required=True)
    verb("dimension-table", cmd_dimension_table, "dimension table of the registry")
    sp = verb("classify", cmd_classify, "solid/fluid/prefluid/minimal flags")
    sp.add_argument("--variety", required=True)
    sp = verb("free-algebra", cmd_free_algebra, "relatively free band on N generators")
    sp.add_argument("--variety", default="B")
    sp.add_argument("--gens", type=int, required=True)
    sp.add_argument("--count", action="store_true")
    sp = verb("hyperassoc", cmd_hyperassoc, "is associativity a hyperidentity of V")
    sp.add_argument("--variety", required=True)
    sp = verb("lattice-check", cmd_lattice_check, "lattice identity in the free lattice or a model")
    sp.add_argument("identity", nargs="?")
    sp.add_argument("--model", help="builtin lattice name or JSON algebra file")
    sp = verb("lattice-enumerate", cmd_lattice_enumerate, "classes of binary lattice terms")
    sp.add_argument("--depth", type=int, default=2)
    sp = verb("lattice-derive", cmd_lattice_derive, "derived algebra of a lattice with axiom report")
    sp.add_argument("--model", required=True)
    sp.add_argument("--sigma", required=True)
    sp = verb("fluidity-cert", cmd_fluidity_cert, "fluidity certificate for HSP(models)")
    sp.add_argument("--model", action="append", required=True)
    sp.add_argument("--axioms", choices=sorted(_AXIOM_SETS), default="lattice")
    verb("lattice-dot", cmd_lattice_dot, "DOT diagram of the registry with derivation arrows")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, TermSyntaxError, HypersubstitutionError, registry.RegistryError,
            bands.BandError, lattices.LatticeError, AlgebraError) as exc:
        print(f"hypervar {args.verb}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
