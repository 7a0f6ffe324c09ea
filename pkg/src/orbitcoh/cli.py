"""Command-line interface.

Inputs are JSON documents validated strictly (unknown keys are rejected so a
typo in a family flag cannot silently change a mathematical claim), or
builtin shorthands.  Every command emits a single JSON document with sorted
keys; identical invocations are byte-identical regardless of thread count.

Exit codes: 0 success, 1 a requested check failed, 2 invalid input,
3 an enumeration exceeded the size cap.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .bredon import (
    DEFAULT_SIZE_CAP,
    bar_cohomology,
    bredon_cohomology,
)
from .checks import available_suites, run_suites
from .coeff import GModule, fixed_point_functor, sign_modules
from .errors import (
    BadParametersError,
    FamilyMissingTrivialError,
    OrbitcohError,
    SchemaError,
    SizeLimitError,
)
from .galoisff import bredon_hilbert90, brauer_intersection, odd_vanishing_check, units_gmodule
from .groups import (
    Family,
    FiniteGroup,
    builtin_group,
    builtin_group_names,
    cyclic_family,
    family_close,
    full_family,
    trivial_family,
)
from .interp import (
    character_group,
    enumerate_f_structures,
    f_derivation_quotient,
    h0_limit,
    splittings_mod_conjugacy,
)
from .intlin import FgAbGroup, IntMatrix

FAMILY_SHORTHANDS = ("trivial-only", "full", "cyclic")


def _fail(kind: str, message: str, code: int):
    doc = {"error": {"type": kind, "message": message}}
    print(json.dumps(doc, sort_keys=True), file=sys.stderr)
    raise SystemExit(code)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


def _check_keys(doc: dict, allowed: set[str], what: str):
    unknown = set(doc) - allowed
    if unknown:
        raise SchemaError(f"unknown keys in {what}: {sorted(unknown)}")


def load_group(source: str) -> FiniteGroup:
    """A builtin name, or a path to a group file."""
    if os.path.exists(source):
        doc = _load_json(source)
        if "table" in doc:
            _check_keys(doc, {"order", "table"}, "group file")
            table = doc["table"]
            if "order" in doc and doc["order"] != len(table):
                raise SchemaError("declared order differs from the table size")
            try:
                return FiniteGroup(table, name=os.path.basename(source))
            except BadParametersError as exc:
                raise SchemaError(f"invalid group table: {exc}") from exc
        if "generators" in doc:
            _check_keys(doc, {"degree", "generators"}, "group file")
            gens = [tuple(p) for p in doc["generators"]]
            if "degree" in doc and any(len(p) != doc["degree"] for p in gens):
                raise SchemaError("permutation length differs from declared degree")
            try:
                return FiniteGroup.from_permutations(gens,
                                                     name=os.path.basename(source))
            except BadParametersError as exc:
                raise SchemaError(f"invalid permutations: {exc}") from exc
        raise SchemaError("group file needs either 'table' or 'generators'")
    try:
        return builtin_group(source)
    except BadParametersError:
        raise SchemaError(
            f"{source!r} is neither a file nor a builtin group "
            f"(builtins: {', '.join(builtin_group_names())})")


def load_family(source: str, group: FiniteGroup) -> Family:
    if source in FAMILY_SHORTHANDS:
        if source == "trivial-only":
            return trivial_family(group)
        if source == "full":
            return full_family(group)
        return cyclic_family(group)
    if not os.path.exists(source):
        raise SchemaError(f"{source!r} is neither a family file nor one of "
                          f"{FAMILY_SHORTHANDS}")
    doc = _load_json(source)
    _check_keys(doc, {"subgroups", "close_conjugation", "close_subgroups"},
                "family file")
    if "subgroups" not in doc:
        raise SchemaError("family file needs 'subgroups'")
    subs = []
    for members in doc["subgroups"]:
        try:
            subs.append(group.subgroup(members))
        except BadParametersError as exc:
            raise SchemaError(f"invalid subgroup {members}: {exc}") from exc
    fam = Family(group, subs)
    return family_close(fam,
                        under_conjugation=bool(doc.get("close_conjugation")),
                        under_subgroups=bool(doc.get("close_subgroups")))


_MODULE_NAME = re.compile(r"^z(\d*)-trivial$")


def load_module(source: str, group: FiniteGroup) -> GModule:
    if os.path.exists(source):
        doc = _load_json(source)
        _check_keys(doc, {"rank", "torsion", "action"}, "module file")
        rank = int(doc.get("rank", 0))
        torsion = [int(d) for d in doc.get("torsion", [])]
        if rank < 0 or any(d < 2 for d in torsion):
            raise SchemaError("rank must be >= 0 and torsion entries >= 2")
        try:
            carrier = FgAbGroup.from_invariants(rank, torsion)
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        action = doc.get("action")
        if action is None:
            return GModule.trivial(group, carrier)
        _check_keys(action, {"generators", "matrices"}, "module action")
        try:
            return GModule.from_generator_action(
                group, carrier, action["generators"],
                [IntMatrix.from_rows(m) for m in action["matrices"]])
        except (BadParametersError, ValueError, KeyError) as exc:
            raise SchemaError(f"invalid module action: {exc}") from exc
    match = _MODULE_NAME.match(source)
    if match:
        if match.group(1):
            n = int(match.group(1))
            if n < 2:
                raise SchemaError("torsion modulus must be >= 2")
            return GModule.trivial(group,
                                   FgAbGroup(1, IntMatrix.from_rows([[n]])))
        return GModule.trivial(group, FgAbGroup.free(1))
    if source == "z-sign":
        signs = sign_modules(group)
        if not signs:
            raise SchemaError("group admits no sign action")
        return signs[0]
    raise SchemaError(
        f"{source!r} is neither a module file nor one of z-trivial, zN-trivial, z-sign")


def parse_degrees(source: str) -> list[int]:
    m = re.fullmatch(r"(\d+)(?:\.\.(\d+))?", source)
    if not m:
        raise SchemaError("degrees must look like '2' or '0..3'")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    return list(range(lo, hi + 1))


def _emit(doc: dict, output: str | None):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _nf_json(normal_form) -> dict:
    rank, torsion = normal_form
    return {"rank": rank, "torsion": list(torsion)}


def _is_trivial_z(module: GModule) -> bool:
    if module.carrier.normal_form != (1, ()):
        return False
    ident = IntMatrix.identity(module.carrier.ngens)
    return all((a - ident).is_zero() for a in module.actions)


def cmd_cohomology(args) -> int:
    group = load_group(args.group)
    family = load_family(args.family, group)
    module = load_module(args.module, group)
    degrees = parse_degrees(args.degrees)
    om = fixed_point_functor(module, family)
    results = []
    checks = []
    failed = False
    for deg in degrees:
        res = bredon_cohomology(family, om, deg, size_cap=args.size_cap,
                                threads=args.threads)
        results.append(res.to_json())
        if args.check:
            if deg == 0:
                direct = h0_limit(om).normal_form
                ok = direct == res.normal_form()
                checks.append({"degree": deg, "method": "limit",
                               "expected": _nf_json(direct), "passed": ok})
                failed |= not ok
            elif deg == 1 and family.contains_trivial():
                direct = f_derivation_quotient(module, family).normal_form
                ok = direct == res.normal_form()
                checks.append({"degree": deg, "method": "derivations",
                               "expected": _nf_json(direct), "passed": ok})
                failed |= not ok
            elif deg == 2 and _is_trivial_z(module) \
                    and family.is_conjugation_closed() and family.is_subgroup_closed():
                direct = character_group(group.full_subgroup(), family).group.normal_form
                ok = direct == res.normal_form()
                checks.append({"degree": deg, "method": "characters",
                               "expected": _nf_json(direct), "passed": ok})
                failed |= not ok
    doc = {"command": "cohomology", "group": group.name,
           "family": [list(s.members) for s in family],
           "results": results}
    if args.check:
        doc["checks"] = checks
    _emit(doc, args.output)
    return 1 if failed else 0


def cmd_oracle(args) -> int:
    group = load_group(args.group)
    module = load_module(args.module, group)
    degrees = parse_degrees(args.degrees)
    results = [bar_cohomology(module, deg, size_cap=args.size_cap).to_json()
               for deg in degrees]
    _emit({"command": "oracle", "group": group.name, "results": results},
          args.output)
    return 0


def cmd_structures(args) -> int:
    group = load_group(args.group)
    family = load_family(args.family, group)
    module = load_module(args.module, group)
    classes = enumerate_f_structures(module, family, cap=args.size_cap)
    split_index = next(i for i, c in enumerate(classes) if c.split)
    witnesses = []
    for c in classes:
        item = {"factor_set_class": [list(v) for v in c.factor_set_class],
                "split": c.split}
        if args.witnesses:
            item["lifts"] = [
                sorted([list(a), x] for (a, x) in c.witness.lifts[s.members])
                for s in family]
        witnesses.append(item)
    doc = {"command": "structures", "group": group.name,
           "family": [list(s.members) for s in family],
           "classes": len(classes), "split_index": split_index,
           "witnesses": witnesses}
    failed = False
    if args.check:
        om = fixed_point_functor(module, family)
        h2 = bredon_cohomology(family, om, 2, size_cap=args.size_cap,
                               threads=args.threads)
        doc["h2_order"] = h2.order()
        failed = h2.order() != len(classes)
        doc["check_passed"] = not failed
    _emit(doc, args.output)
    return 1 if failed else 0


def cmd_derivations(args) -> int:
    group = load_group(args.group)
    family = load_family(args.family, group)
    module = load_module(args.module, group)
    quotient = f_derivation_quotient(module, family)
    doc = {"command": "derivations", "group": group.name,
           "family": [list(s.members) for s in family],
           "derivation_quotient": _nf_json(quotient.normal_form)}
    if module.carrier.is_finite():
        split = splittings_mod_conjugacy(module, family, cap=args.size_cap)
        doc["splitting_classes"] = split.count
    failed = False
    if args.check:
        om = fixed_point_functor(module, family)
        h1 = bredon_cohomology(family, om, 1, size_cap=args.size_cap,
                               threads=args.threads)
        doc["h1"] = h1.to_json()
        failed = h1.normal_form() != quotient.normal_form
        if "splitting_classes" in doc and h1.order() is not None:
            failed |= doc["splitting_classes"] != h1.order()
        doc["check_passed"] = not failed
    _emit(doc, args.output)
    return 1 if failed else 0


def cmd_characters(args) -> int:
    group = load_group(args.group)
    family = load_family(args.family, group)
    if args.subgroup:
        members = [int(x) for x in args.subgroup.split(",")]
        p_sub = group.subgroup(members)
    else:
        p_sub = group.full_subgroup()
    cg = character_group(p_sub, family)
    doc = {"command": "characters", "group": group.name,
           "subgroup": list(p_sub.members),
           "family": [list(s.members) for s in family]}
    doc.update(cg.to_json())
    _emit(doc, args.output)
    return 0


def cmd_galois(args) -> int:
    module = units_gmodule(args.p, args.n, args.d)
    family = load_family(args.family, module.group)
    h1 = bredon_hilbert90(args.p, args.n, args.d, family, size_cap=args.size_cap)
    h2 = brauer_intersection(args.p, args.n, args.d, family, size_cap=args.size_cap)
    doc = {"command": "galois", "p": args.p, "n": args.n, "d": args.d,
           "unit_group_order": args.p ** args.n - 1,
           "family": [list(s.members) for s in family],
           "h1": h1.to_json(), "h2": h2.to_json()}
    all_zero = h1.is_trivial() and h2.is_trivial()
    if family.is_conjugation_closed() and family.is_subgroup_closed():
        h3 = odd_vanishing_check(args.p, args.n, args.d, family,
                                 size_cap=args.size_cap)
        doc["h3"] = h3.to_json()
        all_zero &= h3.is_trivial()
    doc["all_zero"] = all_zero
    _emit(doc, args.output)
    return 0 if all_zero or not args.check else 1


def cmd_family_close(args) -> int:
    group = load_group(args.group)
    family = load_family(args.family, group)
    closed = family_close(family, under_conjugation=args.conjugation,
                          under_subgroups=args.subgroups)
    doc = {"subgroups": [list(s.members) for s in closed],
           "close_conjugation": False, "close_subgroups": False}
    _emit(doc, args.output)
    return 0


def cmd_check(args) -> int:
    try:
        reports = run_suites(args.suite, threads=args.threads)
    except KeyError:
        _fail("validation", f"unknown suite {args.suite!r}; "
              f"choose from {available_suites()}", 2)
    doc = {"command": "check", "suite": args.suite,
           "passed": all(r.passed for r in reports),
           "reports": [r.to_json() for r in reports]}
    _emit(doc, args.output)
    return 0 if doc["passed"] else 1


def _add_common(parser, suppress: bool):
    # the same flags are accepted before or after the subcommand; the
    # subcommand copies suppress their defaults so they never clobber a
    # value given up front
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--size-cap", type=int,
                        **(kw or {"default": DEFAULT_SIZE_CAP}),
                        help="abort enumerations beyond this many items")
    parser.add_argument("--threads", type=int, **(kw or {"default": 1}),
                        help="worker threads for matrix assembly")
    parser.add_argument("--output", **(kw or {"default": None}),
                        help="write the JSON document here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitcoh",
        description="Exact cohomology of finite groups over orbit categories")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(*a, **kw):
        p = sub.add_parser(*a, **kw)
        _add_common(p, suppress=True)
        return p

    p = add_parser("cohomology", help="orbit-category cohomology of a module")
    p.add_argument("--group", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--check", action="store_true",
                   help="cross-validate against the interpretation layers")
    p.set_defaults(fn=cmd_cohomology)

    p = add_parser("oracle", help="ordinary group cohomology (bar complex)")
    p.add_argument("--group", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--degrees", required=True)
    p.set_defaults(fn=cmd_oracle)

    p = add_parser("structures", help="classify subgroup-lift structures")
    p.add_argument("--group", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--check", action="store_true")
    p.add_argument("--witnesses", action="store_true",
                   help="include lift witnesses in the report")
    p.set_defaults(fn=cmd_structures)

    p = add_parser("derivations", help="derivation quotient and splittings")
    p.add_argument("--group", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--module", required=True)
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=cmd_derivations)

    p = add_parser("characters", help="character group of a family")
    p.add_argument("--group", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--subgroup", default=None,
                   help="comma-separated member indices (default: whole group)")
    p.set_defaults(fn=cmd_characters)

    p = add_parser("galois", help="finite-field unit-module cohomology")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--family", default="full")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=cmd_galois)

    p = add_parser("family-close", help="close a family under the given ops")
    p.add_argument("--group", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--conjugation", action="store_true")
    p.add_argument("--subgroups", action="store_true")
    p.set_defaults(fn=cmd_family_close)

    p = add_parser("check", help="run a built-in verification suite")
    p.add_argument("suite", help=f"one of {', '.join(available_suites())}")
    p.set_defaults(fn=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        _fail("validation", str(exc), 2)
    except (FamilyMissingTrivialError, BadParametersError) as exc:
        _fail("validation", str(exc), 2)
    except SizeLimitError as exc:
        _fail("size-limit", str(exc), 3)
    except OrbitcohError as exc:
        _fail("internal", str(exc), 1)


if __name__ == "__main__":
    raise SystemExit(main())
