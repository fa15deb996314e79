"""Command-line surface.

Every subcommand prints either a human-readable table (default) or canonical
JSON (--format json, integers as decimal strings).  Exit codes: 0 on success,
1 when a mathematical counterexample is found, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abgroup import FgAbelianGroup
from .characters import SymmetricPolynomial, character, check_divisibility
from .intlinalg import IntMatrix, smith_normal_form
from .jsonio import dumps, parse_coeff_table, parse_matrix, parse_monoid, parse_vector
from .k0 import (AdditiveCatSpec, K0Group, StableCatSpec, k0_additive,
                 k0_stable, lambda_operation)
from .monoid import group_completion
from .monoid_ring import aug_ideal_power_quotient
from .polymap import (FreeMonoidDomain, PolyMap, extend_over_group_completion,
                      verify_degree)
from .report import write_report
from .rings import INTEGERS, mod_ring
from .simplicial import (ChainComplex, FunctorSpec, apply_functor_levelwise,
                         cech_nerve, dk_gamma, euler_class, is_n_skeletal,
                         normalized_chains, normalized_rank)
from .suites import SUITE_NAMES, SUITES, Config, run_all
from .suites import random_complex as _random_complex
from .suites import _rng


def _ring_of(args):
    if getattr(args, "mod", None):
        return mod_ring(args.mod)
    return INTEGERS


def _emit(args, payload, lines) -> None:
    if args.format == "json":
        print(dumps(payload))
    else:
        for line in lines:
            print(line)


def _invariant_text(grp: FgAbelianGroup) -> str:
    torsion, free = grp.invariants()
    parts = [f"Z/{d}" for d in torsion] + ["Z"] * free
    return " + ".join(parts) if parts else "0"


# --------------------------------------------------------------------------
# subcommand handlers; each returns the process exit code


def _cmd_snf(args, config) -> int:
    a = parse_matrix(args.matrix)
    u, d, v = smith_normal_form(a)
    diag = [d.entries[i][i] for i in range(min(d.rows, d.cols))]
    _emit(args, {"diagonal": diag, "d": d, "u": u, "v": v},
          [f"invariant factors: {' '.join(str(x) for x in diag) or '(none)'}"])
    return 0


def _cmd_group_complete(args, config) -> int:
    m = parse_monoid(args.monoid, cap=config.monoid_cap)
    grp, unit = group_completion(m)
    _emit(args, {"group": grp, "unit_map": unit},
          [f"group completion: {_invariant_text(grp)}",
           f"unit map images: {list(unit.values)}"])
    return 0


def _cmd_monoid_quotient(args, config) -> int:
    m = parse_monoid(args.monoid, cap=config.monoid_cap)
    q = aug_ideal_power_quotient(m, args.degree, _ring_of(args))
    _emit(args, q,
          [f"ring: {q.ring}",
           f"dimension: {q.dim}",
           f"additive group: {_invariant_text(q.as_group)}",
           f"basis: {' '.join(q.basis_labels)}"])
    return 0


def _map_from_args(args) -> PolyMap:
    z1 = FgAbelianGroup.free(1)
    if getattr(args, "binom", None) is not None:
        table = {(args.binom,): (1,)}
        return PolyMap.from_mahler(FreeMonoidDomain(1), z1, table)
    if not getattr(args, "coeffs", None):
        raise ValueError("need --coeffs or --binom to describe the map")
    table = parse_coeff_table(args.coeffs)
    rank = len(next(iter(table)))
    out_rank = len(next(iter(table.values())))
    return PolyMap.from_mahler(FreeMonoidDomain(rank),
                               FgAbelianGroup.free(out_rank), table)


def _cmd_extend(args, config) -> int:
    f = _map_from_args(args)
    ext = extend_over_group_completion(f)
    if args.at is not None:
        pt = parse_vector(args.at)
        val = ext.evaluate(pt)
        shown = val[0] if len(val) == 1 else list(val)
        _emit(args, {"map": f, "extension": ext, "at": pt, "value": val},
              [str(shown)])
        return 0
    lines = [f"degree bound: {ext.degree_bound}"]
    for key in sorted(ext.coeffs):
        lines.append(f"coefficient {list(key)}: {list(ext.coeffs[key])}")
    _emit(args, {"map": f, "extension": ext}, lines)
    return 0


def _cmd_verify_degree(args, config) -> int:
    f = _map_from_args(args)
    ext = extend_over_group_completion(f)
    res = verify_degree(ext, args.degree, box=args.box)
    if res.ok:
        how = ("all iterated differences vanish identically"
               if res.mode == "symbolic" else f"checked on a box of side {res.box}")
        _emit(args, res, [f"polynomial of degree <= {args.degree} ({how})"])
        return 0
    _emit(args, res, [f"not polynomial of degree <= {args.degree}: "
                      f"iterated difference along {res.directions} "
                      f"at {res.point} is {res.value}"])
    return 1


def _parse_rel(text: str, monoid):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raw = [int(x) for x in text.split(",")]
    if len(raw) != 3:
        raise ValueError(f"cofiber relation needs three elements, got {text!r}")
    if monoid.kind == "finite":
        return tuple(int(x) for x in raw)
    return tuple(tuple(int(c) for c in el) for el in raw)


def _cmd_k0(args, config) -> int:
    m = parse_monoid(args.monoid, cap=config.monoid_cap)
    spec = AdditiveCatSpec(m)
    if args.rel:
        rels = tuple(_parse_rel(r, m) for r in args.rel)
        k: K0Group = k0_stable(StableCatSpec(spec, rels))
        kind = "stable"
    else:
        k = k0_additive(spec)
        kind = "additive"
    _emit(args, {"kind": kind, "group": k.group, "classes": k.classes,
                 "relations": k.relation_elements},
          [f"K0 ({kind}): {_invariant_text(k.group)}",
           f"classes: {[list(c) for c in k.classes]}"])
    return 0


def _cmd_lambda(args, config) -> int:
    val = lambda_operation(args.i).evaluate((args.at,))[0]
    _emit(args, {"i": args.i, "at": args.at, "value": val}, [str(val)])
    return 0


def _complex_from_json(text: str, ring) -> ChainComplex:
    data = json.loads(text)
    dims = tuple(int(x) for x in data["dims"])
    diffs = []
    for k, mat in enumerate(data.get("diffs", [])):
        rows = [[int(e) for e in row] for row in mat]
        diffs.append(IntMatrix.from_rows(rows, dims[k + 1]))
    return ChainComplex(ring, dims, tuple(diffs))


def _cmd_dold_kan(args, config) -> int:
    ring = _ring_of(args)
    if args.complex:
        c = _complex_from_json(args.complex, ring)
    else:
        c = _random_complex(_rng(config, "dold-kan"), ring, top=args.top)
    g = dk_gamma(c)
    back = normalized_chains(g).trim()
    ct = c.trim()
    exact = back.dims == ct.dims and back.diffs == ct.diffs
    hom = [list(ct.homology(k).invariants()) for k in range(ct.top + 1)]
    lines = [f"complex dimensions: {list(ct.dims)}",
             f"simplicial levels: {list(g.dims)}",
             f"roundtrip: {'exact' if exact else 'MISMATCH'}"]
    lines += [f"H_{k}: {_invariant_text(ct.homology(k))}" for k in range(ct.top + 1)]
    _emit(args, {"complex": ct, "simplicial_levels": g.dims,
                 "roundtrip": back, "exact": exact, "homology": hom}, lines)
    return 0 if exact else 1


def _cmd_cech(args, config) -> int:
    f = parse_matrix(args.matrix)
    nerve = cech_nerve(f, ring=_ring_of(args), top=args.top)
    ranks = [normalized_rank(nerve, k) for k in range(nerve.top + 1)]
    _emit(args, {"matrix": f, "nerve": nerve, "normalized_ranks": ranks,
                 "one_skeletal": is_n_skeletal(nerve, 1)},
          [f"levels: {list(nerve.dims)}",
           f"normalized ranks: {ranks}",
           f"1-skeletal: {'yes' if is_n_skeletal(nerve, 1) else 'no'}"])
    return 0


def _cmd_derive(args, config) -> int:
    spec = FunctorSpec.parse(args.functor)
    ring = _ring_of(args)
    f = parse_matrix(args.matrix)
    y = apply_functor_levelwise(spec, cech_nerve(f, ring=ring, top=args.top))
    d = spec.polynomial_degree()
    ranks = [normalized_rank(y, k) for k in range(y.top + 1)]
    n = normalized_chains(y)
    upto = min(y.top, max(d, 1))
    hom = [n.homology(k) for k in range(upto + 1)]
    e = euler_class(y, d)
    lines = [f"functor: {spec.label()}",
             f"levels: {list(y.dims)}",
             f"normalized ranks: {ranks}",
             f"skeletal at degree {d}: {'yes' if is_n_skeletal(y, d) else 'no'}"]
    lines += [f"H_{k}: {_invariant_text(h)}" for k, h in enumerate(hom)]
    lines.append(f"euler class: {e}")
    _emit(args, {"functor": spec, "levels": y.dims, "normalized_ranks": ranks,
                 "skeletal_degree": d, "homology": [list(h.invariants()) for h in hom],
                 "euler_class": e}, lines)
    return 0


def _cmd_char(args, config) -> int:
    if not args.mod:
        raise ValueError("char needs --mod (the prime p)")
    p = args.mod
    spec = FunctorSpec.parse(args.functor)
    a = character(spec, args.vars, p)
    if not args.compare:
        _emit(args, a, [str(a)])
        return 0
    if args.compare in ("frobenius", "twist"):
        other = FunctorSpec.frobenius_twist(p)
    else:
        other = FunctorSpec.parse(args.compare)
    b = character(other, args.vars, p)
    r = check_divisibility(a, b, p)
    if isinstance(r, SymmetricPolynomial):
        _emit(args, {"character": a, "compared_to": b, "quotient": r},
              [str(r)])
        return 0
    _emit(args, {"character": a, "compared_to": b, "failure": r}, [str(r)])
    return 1


def _cmd_verify_all(args, config) -> int:
    names = args.suite or None
    results = run_all(config, names)
    lines = []
    payload = []
    for r in results:
        mark = "ok  " if r.passed else "FAIL"
        lines.append(f"{mark} {r.name:24s} {r.cases:5d} cases  "
                     f"{r.elapsed:7.3f}s / {r.budget:.0f}s")
        if not r.passed:
            lines.append(f"     counterexample: {dumps(r.counterexample)}")
        payload.append({"name": r.name, "passed": r.passed, "cases": r.cases,
                        "budget_s": r.budget, "details": r.details,
                        "counterexample": r.counterexample})
    if args.report_dir:
        files = write_report(results, args.report_dir)
        lines.append(f"report written to {args.report_dir}: {', '.join(files)}")
    _emit(args, payload, lines)
    return 0 if all(r.passed for r in results) else 1


# --------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1729,
                        help="random seed (default 1729)")
    common.add_argument("--box", type=int, default=10,
                        help="side of the verification box (default 10)")
    common.add_argument("--format", choices=("table", "json"), default="table",
                        help="output format (default table)")
    common.add_argument("--mod", type=int, default=None, metavar="P",
                        help="work over Z/P instead of Z")
    common.add_argument("--cap", type=int, default=64,
                        help="finite-monoid size cap (default 64)")

    p = argparse.ArgumentParser(
        prog="polyk0",
        description="polynomial maps on monoids, K0, and Dold-Kan at desk scale")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, handler, help_text, **kwargs):
        sp = sub.add_parser(name, parents=[common], help=help_text, **kwargs)
        sp.set_defaults(handler=handler)
        return sp

    sp = add("snf", _cmd_snf, "Smith normal form of an integer matrix")
    sp.add_argument("--matrix", required=True, help="matrix as JSON rows")

    sp = add("group-complete", _cmd_group_complete,
             "group completion of a commutative monoid")
    sp.add_argument("--monoid", required=True,
                    help="free:K | cyclic:N | vector:P:K | JSON addition table")

    sp = add("monoid-quotient", _cmd_monoid_quotient,
             "monoid ring modulo a power of the augmentation ideal")
    sp.add_argument("--monoid", required=True)
    sp.add_argument("--degree", type=int, required=True,
                    help="truncation degree n (quotient by I^{n+1})")

    sp = add("extend", _cmd_extend,
             "extend a polynomial map over the group completion")
    sp.add_argument("--coeffs", help="finite-difference table as JSON pairs")
    sp.add_argument("--binom", type=int, help="shorthand: the map binom(x, I)")
    sp.add_argument("--at", help="evaluate the extension at this point")

    sp = add("verify-degree", _cmd_verify_degree,
             "check a map is polynomial of bounded degree")
    sp.add_argument("--coeffs")
    sp.add_argument("--binom", type=int)
    sp.add_argument("--degree", type=int, required=True)

    sp = add("k0", _cmd_k0, "K0 of an additive or stable category skeleton")
    sp.add_argument("--monoid", required=True,
                    help="pi0 under direct sum")
    sp.add_argument("--rel", action="append", default=[],
                    help="cofiber relation x',x,x'' (repeatable)")

    sp = add("lambda", _cmd_lambda, "evaluate a lambda operation on K0(k)")
    sp.add_argument("--i", type=int, required=True, help="which lambda")
    sp.add_argument("--at", type=int, required=True, help="virtual rank")

    sp = add("dold-kan", _cmd_dold_kan,
             "roundtrip a bounded complex through the simplicial side")
    sp.add_argument("--complex",
                    help='JSON {"dims": [..], "diffs": [[..], ..]}')
    sp.add_argument("--top", type=int, default=3,
                    help="top degree for a random complex (default 3)")

    sp = add("cech", _cmd_cech, "nerve of a module map as a simplicial module")
    sp.add_argument("--matrix", required=True, help="the map X' -> X")
    sp.add_argument("--top", type=int, default=3)

    sp = add("derive", _cmd_derive,
             "apply a polynomial functor to a nerve and read off homology")
    sp.add_argument("--functor", required=True,
                    help="sym:D | ext:D | tensor:D | twist:P | const:N")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--top", type=int, default=3)

    sp = add("char", _cmd_char, "character of a degree-p functor")
    sp.add_argument("--functor", required=True)
    sp.add_argument("--vars", type=int, required=True,
                    help="number of variables (at least p)")
    sp.add_argument("--compare",
                    help="second functor; prints (char A - char B)/p")

    sp = add("verify-all", _cmd_verify_all, "run the bundled verification suites")
    sp.add_argument("--suite", action="append", choices=SUITE_NAMES,
                    help="run only this suite (repeatable)")
    sp.add_argument("--report-dir",
                    help="also write criteria.csv and figures here")
    sp.add_argument("--list", action="store_true",
                    help="list available suites and exit")
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "list", False):
        for name, budget, _, desc in SUITES:
            print(f"{name:24s} {desc} (budget {budget:.0f}s)")
        return 0
    try:
        config = Config(seed=args.seed, box=args.box, monoid_cap=args.cap,
                        fmt=args.format)
        return args.handler(args, config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
