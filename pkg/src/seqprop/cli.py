"""Command-line front end.

Exit codes: 0 success / true verdict, 1 false verdict or failed check,
2 usage or parse error, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources

from . import counting, numeration, oracle, report, sequences, toolkit
from .automata import (from_json as automaton_from_json, from_text as
                       automaton_from_text, is_empty, to_dot, to_json,
                       to_text, trim_state_count)
from .logic import (CompileError, LibraryError, ParseError, make_compiler,
                    parse_library, stdlib)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _load_library(path):
    if path is None:
        return stdlib()
    with open(path) as fh:
        return parse_library(fh.read())


def _emit(args, obj, text_lines):
    if args.json:
        json.dump(obj, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            print(line)


def _timing(args, t0):
    if args.timing:
        print(f"elapsed: {time.time() - t0:.2f}s", file=sys.stderr)


def cmd_decide(args) -> int:
    t0 = time.time()
    compiler = make_compiler(args.sequence, library=_load_library(args.predicates),
                             msd_first=not args.lsd)
    result = compiler.decide(args.sentence)
    obj = {"sentence": args.sentence, "sequence": args.sequence,
           "verdict": result.truth}
    lines = [f"{'TRUE' if result.truth else 'FALSE'}"]
    if result.witness is not None:
        obj["witness"] = result.witness
        lines.append("witness: " + ", ".join(
            f"{k}={v}" for k, v in sorted(result.witness.items())))
    if result.counterexample is not None:
        obj["counterexample"] = result.counterexample
        lines.append("counterexample: " + ", ".join(
            f"{k}={v}" for k, v in sorted(result.counterexample.items())))
    _emit(args, obj, lines)
    _timing(args, t0)
    return EXIT_TRUE if result.truth else EXIT_FALSE


def cmd_accept_set(args) -> int:
    t0 = time.time()
    acc = toolkit.accept_set(args.sequence, args.formula, args.bound,
                             msd_first=not args.lsd)
    obj = {
        "sequence": args.sequence,
        "formula": args.formula,
        "variable": acc.compiled.variables[0],
        "states": acc.state_count,
        "states_with_sink": acc.total_states,
        "bound": args.bound,
        "values": list(acc.values),
    }
    lines = [
        f"automaton: {acc.state_count} states "
        f"({acc.total_states} including any dead sink)",
        f"accepted values <= {args.bound}: "
        + (", ".join(str(v) for v in acc.values) if acc.values else "none"),
    ]
    _emit(args, obj, lines)
    if args.csv:
        report.write_csv(args.csv, ["value"], [[v] for v in acc.values])
        print(f"wrote {args.csv}", file=sys.stderr)
    if args.plot:
        report.plot_accept_set(
            args.plot, list(acc.values), args.bound,
            f"{args.sequence}: {args.formula}")
        print(f"wrote {args.plot}", file=sys.stderr)
    _timing(args, t0)
    return EXIT_TRUE


def cmd_count(args) -> int:
    t0 = time.time()
    rep = toolkit.counting_rep(args.sequence, args.property,
                               minimized=args.minimized)
    values = [int(x) for x in counting.eval_range(rep, args.upto)]
    obj = {"sequence": args.sequence, "property": args.property,
           "upto": args.upto, "dimension": rep.dim, "values": values}
    lines = [f"linear representation dimension: {rep.dim}",
             "n:      " + " ".join(f"{n}" for n in range(args.upto + 1)),
             "count:  " + " ".join(str(v) for v in values)]
    _emit(args, obj, lines)
    rows = list(enumerate(values))
    if args.csv:
        report.write_csv(args.csv, ["n", "count"], rows)
        print(f"wrote {args.csv}", file=sys.stderr)
    if args.plot:
        report.plot_counts(args.plot, [r[0] for r in rows],
                           [r[1] for r in rows],
                           f"{args.sequence}: {args.property} factors per length")
        print(f"wrote {args.plot}", file=sys.stderr)
    _timing(args, t0)
    return EXIT_TRUE


def cmd_export(args) -> int:
    t0 = time.time()
    if args.formula:
        compiler = make_compiler(args.sequence,
                                 library=_load_library(args.predicates),
                                 msd_first=not args.lsd)
        automaton = compiler.compile(args.formula).dfa
        name = "formula"
    else:
        automaton = sequences.dfao(args.sequence, msd_first=not args.lsd)
        name = args.sequence.replace("-", "_")
    if args.format == "dot":
        payload = to_dot(automaton, name)
    elif args.format == "text":
        payload = to_text(automaton)
    else:
        payload = to_json(automaton) + "\n"
    if args.output == "-":
        sys.stdout.write(payload)
    else:
        with open(args.output, "w") as fh:
            fh.write(payload)
        print(f"wrote {args.output}", file=sys.stderr)
    _timing(args, t0)
    return EXIT_TRUE


def cmd_crosscheck(args) -> int:
    t0 = time.time()
    result = toolkit.crosscheck(args.sequence, args.predicate, args.bound,
                                msd_first=not args.lsd)
    obj = {"sequence": result.sequence, "predicate": result.predicate,
           "bound": result.bound, "checked": result.checked,
           "mismatches": [list(map(list, (m[0],))) + [m[1], m[2]]
                          for m in result.mismatches]}
    lines = [f"checked {result.checked} argument tuples up to {result.bound}"]
    if result.ok:
        lines.append("engine and oracle agree")
    else:
        for argsv, engine, truth in result.mismatches[:10]:
            lines.append(f"MISMATCH at {argsv}: engine={engine} oracle={truth}")
    _emit(args, obj, lines)
    _timing(args, t0)
    return EXIT_TRUE if result.ok else EXIT_FALSE


def cmd_oracle(args) -> int:
    t0 = time.time()
    if args.property == "maximal-palindrome":
        pals = sorted(oracle.stable_maximal_palindromes(
            args.sequence, args.max_len), key=lambda p: (len(p), p))
        obj = {"sequence": args.sequence, "property": args.property,
               "max_len": args.max_len, "count": len(pals),
               "lengths": sorted({len(p) for p in pals}),
               "factors": pals if args.list_factors else None}
        lines = [f"maximal palindromes of length <= {args.max_len}: {len(pals)}",
                 "lengths: " + ", ".join(str(x) for x in obj["lengths"])]
        if args.list_factors:
            lines += ["  " + p for p in pals]
        _emit(args, obj, lines)
        _timing(args, t0)
        return EXIT_TRUE
    counts = oracle.distinct_property_factors(args.sequence, args.property,
                                              args.max_len)
    obj = {"sequence": args.sequence, "property": args.property,
           "max_len": args.max_len, "per_length": list(counts.per_length),
           "total": counts.total, "longest": counts.longest}
    lines = [
        f"distinct {args.property} factors of length <= {args.max_len}: "
        f"{counts.total} (longest {counts.longest})",
        "n:      " + " ".join(str(n) for n in range(args.max_len + 1)),
        "count:  " + " ".join(str(c) for c in counts.per_length),
    ]
    if args.list_factors:
        sets = oracle.factor_length_sets(args.sequence, args.max_len)
        check = oracle.PROPERTY_CHECKERS[args.property]
        factors = sorted(f for ell in sets for f in sets[ell] if check(f))
        obj["factors"] = factors
        lines += ["  " + f for f in factors]
    _emit(args, obj, lines)
    rows = list(enumerate(counts.per_length))
    if args.csv:
        report.write_csv(args.csv, ["n", "count"], rows)
        print(f"wrote {args.csv}", file=sys.stderr)
    if args.plot:
        report.plot_counts(args.plot, [r[0] for r in rows],
                           [r[1] for r in rows],
                           f"{args.sequence}: distinct {args.property} factors")
        print(f"wrote {args.plot}", file=sys.stderr)
    _timing(args, t0)
    return EXIT_TRUE


def cmd_rep(args) -> int:
    t0 = time.time()
    if args.from_file:
        with open(args.from_file) as fh:
            text = fh.read()
        rep = (counting.rep_from_json(text) if text.lstrip().startswith("{")
               else counting.rep_from_text(text))
    else:
        rep = toolkit.counting_rep(args.sequence, args.property)
    lines = [f"dimension: {rep.dim}"]
    obj = {"dimension": rep.dim}
    if args.minimize:
        rep = counting.minimize_rep(rep)
        lines.append(f"minimized dimension: {rep.dim}")
        obj["minimized_dimension"] = rep.dim
    status = EXIT_TRUE
    if args.table is not None:
        values = [int(x) for x in counting.eval_range(rep, args.table)]
        obj["values"] = values
        lines.append("values 0..{}: {}".format(
            args.table, " ".join(str(v) for v in values)))
    if args.verify_relations:
        if args.verify_relations == "builtin":
            prop = {"closed": "tm_closed_relations.txt",
                    "privileged": "tm_priv_relations.txt",
                    "privileged-palindrome": "tm_privpal_relations.txt"}
            text = resources.files("seqprop.data").joinpath(
                prop[args.property]).read_text()
        else:
            with open(args.verify_relations) as fh:
                text = fh.read()
        rel_report = []
        for rel in counting.load_relations(text):
            ok, fail = counting.verify_relation(rel, rep, args.bound)
            rel_report.append({"relation": str(rel), "ok": ok,
                               "first_failure": fail and list(map(str, fail))})
            lines.append(f"{'ok  ' if ok else 'FAIL'} {rel}"
                         + ("" if ok else f"  first failure {fail}"))
            if not ok:
                status = EXIT_FALSE
        obj["relations"] = rel_report
    if args.verify_piecewise is not None:
        pw = counting.verify_piecewise_formula(rep, args.verify_piecewise)
        obj["piecewise_ok"] = pw.ok
        lines.append(f"piecewise closed form 8..{args.verify_piecewise}: "
                     + ("ok" if pw.ok else
                        f"mismatches {pw.mismatches[:5]} coverage {pw.coverage_errors[:5]}"))
        if not pw.ok:
            status = EXIT_FALSE
    if args.export:
        payload = (counting.rep_to_json(rep) + "\n" if args.format == "json"
                   else counting.rep_to_text(rep))
        with open(args.export, "w") as fh:
            fh.write(payload)
        print(f"wrote {args.export}", file=sys.stderr)
    _emit(args, obj, lines)
    _timing(args, t0)
    return status


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="seqprop",
        description="Decide first-order properties of automatic sequences, "
                    "enumerate factor properties, and count them exactly.")
    sub = top.add_subparsers(dest="command", required=True)
    seqs = sorted(sequences.builtin_names())

    def common(p, lsd=True):
        p.add_argument("-s", "--sequence", required=True, choices=seqs)
        p.add_argument("--json", action="store_true",
                       help="machine-readable output")
        p.add_argument("--timing", action="store_true",
                       help="print elapsed time to stderr")
        if lsd:
            p.add_argument("--lsd", action="store_true",
                           help="least-significant-digit-first representations")

    p = sub.add_parser("decide", help="decide a closed sentence")
    common(p)
    p.add_argument("-P", "--predicates", help="predicate definition file")
    p.add_argument("sentence")
    p.set_defaults(fn=cmd_decide)

    p = sub.add_parser("accept-set",
                       help="automaton and values for a one-variable formula")
    common(p)
    p.add_argument("-P", "--predicates")
    p.add_argument("formula")
    p.add_argument("--bound", type=int, default=64)
    p.add_argument("--csv", help="write accepted values as CSV")
    p.add_argument("--plot", help="write a figure of the accepted set")
    p.set_defaults(fn=cmd_accept_set)

    p = sub.add_parser("count", help="exact counts of distinct factors")
    common(p, lsd=False)
    p.add_argument("property", choices=sorted(toolkit.COUNT_PREDICATES))
    p.add_argument("--upto", type=int, default=16)
    p.add_argument("--minimized", action="store_true",
                   help="use the minimized representation")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("export", help="export an automaton")
    common(p)
    p.add_argument("-P", "--predicates")
    p.add_argument("--formula", help="compile this formula (default: the "
                                     "sequence's output automaton)")
    p.add_argument("--format", choices=["dot", "text", "json"], default="dot")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("crosscheck",
                       help="compare compiled predicates against brute force")
    common(p)
    p.add_argument("-p", "--predicate", required=True,
                   choices=sorted(toolkit.CROSSCHECK_PREDICATES))
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(fn=cmd_crosscheck)

    p = sub.add_parser("oracle", help="brute-force factor enumeration")
    common(p, lsd=False)
    p.add_argument("property",
                   choices=sorted(oracle.PROPERTY_CHECKERS)
                   + ["maximal-palindrome"])
    p.add_argument("--max-len", type=int, default=16)
    p.add_argument("--list-factors", action="store_true")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("rep", help="linear counting representations")
    common(p, lsd=False)
    p.add_argument("property", nargs="?",
                   choices=sorted(toolkit.COUNT_PREDICATES))
    p.add_argument("--from-file", help="load a representation instead")
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--table", type=int, help="print values 0..N")
    p.add_argument("--verify-relations",
                   help="relations file, or 'builtin' for the shipped system")
    p.add_argument("--verify-piecewise", type=int, metavar="BOUND")
    p.add_argument("--bound", type=int, default=512,
                   help="bound for relation verification")
    p.add_argument("--export", help="write the representation to a file")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(fn=cmd_rep)
    return top


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "rep" and not args.from_file and not args.property:
        parser.error("rep needs a property or --from-file")
    try:
        return args.fn(args)
    except oracle.StabilizationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ParseError, LibraryError, CompileError, counting.CountingError,
            ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, RuntimeError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
