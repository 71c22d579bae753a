"""Command-line entry point: ``critideals <subcommand> ...``.

Exit codes: 0 success, 1 a checked statement failed, 2 usage or parse error,
3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import comb

from . import ideals, intalg, matching
from .polyring import (
    CompletionBudgetExhausted,
    format_poly,
    groebner_complete,
    is_groebner_basis,
    is_reduced_groebner_basis,
    strong_reduce,
)
from .treegraph import (
    GraphError,
    MultiGraph,
    TreeParseError,
    enumerate_labeled_trees,
    parse_family,
    parse_graph,
    serialize_graph,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class CapExceeded(Exception):
    pass


def _apply_memory_cap() -> None:
    cap = os.environ.get("CRITIDEALS_CAP_MB")
    if not cap:
        return
    import resource

    limit = int(cap) * 1024 * 1024
    resource.setrlimit(resource.RLIMIT_AS, (limit, limit))


def _tree_json(g) -> dict:
    if isinstance(g, MultiGraph):
        return {"n": g.n, "edges": [[u, v, m] for (u, v), m in sorted(g.mult.items())]}
    return {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}


def _load(args, multigraph: bool = False):
    if bool(args.family) == bool(args.input):
        raise UsageError("give exactly one of --family or --input")
    try:
        if args.family:
            g = parse_family(args.family)
        else:
            with open(args.input, encoding="utf-8") as fh:
                g = parse_graph(fh.read(), multigraph=multigraph)
    except (TreeParseError, GraphError, ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    if not multigraph:
        if isinstance(g, MultiGraph):
            if not g.is_tree():
                raise UsageError("this subcommand needs a tree")
            g = g.to_tree()
    if args.max_n is not None and g.n > args.max_n:
        raise CapExceeded(f"input has {g.n} vertices, above --max-n {args.max_n}")
    return g


def _j_values(args, n: int) -> list[int]:
    if args.j in (None, "all"):
        return list(range(1, n + 1))
    try:
        if "-" in args.j:
            a, b = (int(x) for x in args.j.split("-"))
            js = list(range(a, b + 1))
        else:
            js = [int(args.j)]
    except ValueError as exc:
        raise UsageError(f"bad --j value {args.j!r}") from exc
    for j in js:
        if not 1 <= j <= n:
            raise UsageError(f"j must lie in 1..{n}, got {j}")
    return js


def _emit(args, text_lines: list[str], payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands


def cmd_ideal(args) -> int:
    t = _load(args)
    js = _j_values(args, t.n)
    lines, records = [], []
    for j in js:
        ci = ideals.critical_ideal(t, j)
        if len(js) > 1:
            lines.append(f"# j={j}")
        lines.extend(ci.lines(args.provenance))
        rec = {"j": j, "generators": [format_poly(p) for p in ci.generators]}
        if args.provenance:
            rec["provenance"] = [str(ci.provenance[p]) for p in ci.generators]
        records.append(rec)
    _emit(args, lines, {"tree": _tree_json(t), "ideals": records})
    return EXIT_OK


def cmd_gamma(args) -> int:
    t = _load(args)
    k = matching.nu2(t)
    g = ideals.gamma(t, verify=args.verify, max_pairs=args.max_pairs)
    payload = {"nu2": k, "gamma": g}
    if args.verify:
        payload["verified"] = True
    _emit(args, [f"nu2={k} gamma={g}" + (" verified" if args.verify else "")], payload)
    return EXIT_OK


def cmd_matchings(args) -> int:
    t = _load(args)
    if args.j is None or args.j == "all" or "-" in args.j:
        raise UsageError("matchings needs a single --j")
    (j,) = _j_values(args, t.n)
    if args.minimal:
        ms = list(matching.enumerate_minimal(t, j))
    else:
        ms = list(matching.enumerate_two_matchings(t, not args.loopless, j))
    _emit(args, [str(M) for M in ms], {"j": j, "minimal": args.minimal, "matchings": [str(M) for M in ms]})
    return EXIT_OK


def cmd_groebner(args) -> int:
    t = _load(args)
    js = _j_values(args, t.n) if args.j is not None else [t.n - 1]
    lines, records, status = [], [], EXIT_OK
    for j in js:
        if j == t.n - 1:
            B = ideals.leaf_pair_basis(t)
            expected = comb(len(t.leaves()), 2)
        else:
            B = list(ideals.critical_ideal(t, j).generators)
            expected = None
        gb = is_groebner_basis(B)
        red = gb and is_reduced_groebner_basis(B)
        rec = {"j": j, "size": len(B), "groebner": gb, "reduced": red}
        if expected is not None:
            rec["expected_size"] = expected
            if len(B) != expected or not red:
                status = EXIT_FAIL
        records.append(rec)
        lines.append(f"j={j} size={len(B)} groebner={str(gb).lower()} reduced={str(red).lower()}")
    _emit(args, lines, {"tree": _tree_json(t), "results": records})
    return status


def _parse_vector(text: str, n: int, name: str) -> tuple:
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --{name}") from exc
    if len(v) != n:
        raise UsageError(f"--{name} needs {n} entries")
    return v


def cmd_critgroup(args) -> int:
    g = _load(args, multigraph=True)
    G = g if isinstance(g, MultiGraph) else MultiGraph.from_tree(g)
    if args.arithmetical:
        if args.d and args.r:
            d = _parse_vector(args.d, G.n, "d")
            r = _parse_vector(args.r, G.n, "r")
        elif args.family and args.family.startswith("c5:"):
            a = intalg.c5_arithmetical(g.n - 5)
            d, r = a.d, a.r
        else:
            raise UsageError("--arithmetical needs --d and --r (or a c5 family)")
        if not intalg.validate_arithmetical(G, d, r):
            print("(Diag(d) - A) r is not zero", file=sys.stderr)
            return EXIT_FAIL
        group = intalg.critical_group(intalg.ArithmeticalGraph(G, d, r))
    else:
        group = intalg.critical_group(G)
    _emit(
        args,
        [str(group.torsion_part()), f"free_rank={group.free_rank}"],
        group.to_json(),
    )
    return EXIT_OK


def cmd_family(args) -> int:
    try:
        g = parse_family(args.spec)
    except (GraphError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    text = serialize_graph(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "json":
        print(json.dumps(_tree_json(g), sort_keys=True))
    elif not args.out:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify suites


def _trees_up_to(max_n: int):
    for n in range(2, max_n + 1):
        for i, t in enumerate(enumerate_labeled_trees(n)):
            yield f"{n}:{i}", t


def _suite_identities(args):
    for tid, t in _trees_up_to(args.max_n):
        for rec in ideals.verify_identities(t):
            rec["tree_id"] = tid
            yield rec


def _suite_structure(args):
    for tid, t in _trees_up_to(args.max_n):
        rep = matching.structural_checks(t)
        for name, c in sorted(rep["checks"].items()):
            ok = c["violations"] == 0
            rec = {"tree": _tree_json(t), "tree_id": tid, "j": None, "check": name,
                   "status": "pass" if ok else "fail", "instances": c["instances"]}
            if not ok:
                rec["witness"] = [v["witness"] for v in rep["violations"] if v["check"] == name][:3]
            yield rec


def _suite_oracle(args):
    for tid, t in _trees_up_to(args.max_n):
        memo: dict = {}
        for j in range(1, t.n + 1):
            C = ideals.critical_ideal(t, j).generators
            A = ideals.all_minor_ideal(t, j, memo)
            As = set(A)
            contained = all(c in As for c in C)
            G = groebner_complete(C, args.max_pairs)
            left = [a for a in A if not strong_reduce(a, G)[1]]
            ok = contained and not left
            rec = {"tree": _tree_json(t), "tree_id": tid, "j": j, "check": "oracle",
                   "status": "pass" if ok else "fail"}
            if not ok:
                rec["witness"] = {"contained": contained, "unreduced": [format_poly(p) for p in left[:3]]}
            yield rec


def _suite_conjecture(args):
    for tid, t in _trees_up_to(args.max_n):
        for rec in ideals.conjecture_scan(t):
            rec["tree_id"] = tid
            if rec["status"] == "fail":
                rec["status"] = "finding"
            yield rec


def _suite_wired(args):
    for d in (4, 5):
        for levine in (False, True):
            rep = intalg.wired_tree_report(d, 3, levine=levine)
            ok = rep["rank"] == rep["predicted_rank_n_minus_nu2"] and rep["first_nontrivial_factor"] == d
            yield {"tree": None, "j": None, "check": "wired", "status": "pass" if ok else "fail", "report": rep}


def _suite_arithmetical(args):
    for m in range(2, 11):
        a = intalg.c5_arithmetical(m)
        group = intalg.critical_group(a)
        expect = (2, 2) if m % 2 == 0 else (4,)
        ok = group.torsion == expect
        yield {"tree": _tree_json(a.graph), "j": None, "check": "c5_arithmetical",
               "status": "pass" if ok else "fail", "m": m, "group": group.to_json(),
               "m_at_least_5": m >= 5}


SUITES = {
    "identities": _suite_identities,
    "structure": _suite_structure,
    "oracle": _suite_oracle,
    "conjecture": _suite_conjecture,
    "wired": _suite_wired,
    "arithmetical": _suite_arithmetical,
}


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    if args.max_n is None:
        args.max_n = 6
    if args.max_n > 8:
        raise CapExceeded("verify suites enumerate all trees; --max-n is limited to 8")
    counts = {"pass": 0, "fail": 0, "finding": 0}
    for rec in SUITES[args.suite](args):
        counts[rec["status"]] = counts.get(rec["status"], 0) + 1
        if args.format == "json":
            print(json.dumps(rec, sort_keys=True, ensure_ascii=False))
        elif rec["status"] != "pass":
            print(f"{rec['status'].upper()} {rec['check']} {json.dumps(rec.get('witness', rec.get('report')))}")
    summary = f"suite={args.suite} pass={counts['pass']} fail={counts['fail']} finding={counts['finding']}"
    print(summary, file=sys.stderr if args.format == "json" else sys.stdout)
    return EXIT_FAIL if counts["fail"] else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-n", type=int, default=None)
    common.add_argument("--max-pairs", type=int, default=200_000)

    src = argparse.ArgumentParser(add_help=False)
    src.add_argument("--family", help="family spec such as J:5,4,3 or c5:6")
    src.add_argument("--input", help="graph file: n, then 'u v [mult]' per line")

    p = argparse.ArgumentParser(prog="critideals", description="Critical ideals of trees.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ideal", parents=[common, src], help="generators of I_j")
    s.add_argument("--j", default=None, help="size, range a-b, or all")
    s.add_argument("--provenance", action="store_true")
    s.set_defaults(func=cmd_ideal)

    s = sub.add_parser("gamma", parents=[common, src], help="nu2 and the algebraic corank")
    s.add_argument("--verify", action="store_true", help="certify by Groebner completion")
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("matchings", parents=[common, src], help="2-matchings of the looped tree")
    s.add_argument("--j", required=True)
    s.add_argument("--minimal", action="store_true")
    s.add_argument("--loopless", action="store_true")
    s.set_defaults(func=cmd_matchings)

    s = sub.add_parser("groebner", parents=[common, src], help="Buchberger check of B_j (default j=n-1)")
    s.add_argument("--j", default=None)
    s.set_defaults(func=cmd_groebner)

    s = sub.add_parser("critgroup", parents=[common, src], help="critical group via Smith normal form")
    s.add_argument("--arithmetical", action="store_true")
    s.add_argument("--d", help="comma-separated d vector")
    s.add_argument("--r", help="comma-separated r vector")
    s.set_defaults(func=cmd_critgroup)

    s = sub.add_parser("verify", parents=[common], help="run a check suite, JSON lines")
    s.add_argument("--suite", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("family", parents=[common], help="print a family member as a graph file")
    s.add_argument("spec")
    s.add_argument("--out")
    s.set_defaults(func=cmd_family)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    _apply_memory_cap()
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, CompletionBudgetExhausted, MemoryError) as exc:
        print(f"error: {exc or 'memory cap reached'}", file=sys.stderr)
        return EXIT_CAP
    except (ideals.GammaMismatch, AssertionError) as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
