"""Command-line front end.

Subcommands: validate, info, reduce, class, iso, oracle. Exit codes: 0 on
success (for iso: unconditionally isomorphic), 1 = unconditionally not
isomorphic, 2 = conditional or inconclusive verdict, 64 = parse error,
65 = truncated class listing, 66 = missing input, 70 = internal error.
"""

import argparse
import json
import sys

from . import classify
from .automorphisms import FiniteContinuationUnavailable, finite_continuation, graph_factors
from .canonical import canonical_form
from .cyclotomic import DEFAULT_RING_CAP, RingCapError
from .diagram import INFINITY, DiagramParseError, parse_diagram, serialize_diagram
from .explorer import (
    DEFAULT_CLASS_CAP,
    decide_isomorphism,
    export_class_dot,
    twist_class,
    verdict_to_json_text,
)
from .geometry import (
    UNKNOWN,
    OracleError,
    build_rep,
    enumerate_group,
    longest_element,
    order_of_product,
)
from .moves import (
    MoveError,
    admissible_pairs,
    pseudo_transpositions,
    reduced_reduction,
    validate_admissible_pair,
    verify_twist_soundness,
)

EXIT_OK = 0
EXIT_PARSE = 64
EXIT_TRUNCATED = 65
EXIT_NOINPUT = 66
EXIT_INTERNAL = 70


def _load(path):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_NOINPUT)
    try:
        return parse_diagram(text)
    except DiagramParseError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _fmt_label(m):
    return "inf" if m == INFINITY else str(int(m))


def _rep_options(args):
    return {
        "ring_cap": args.ring_cap,
        "allow_large_ring": args.allow_large_ring,
    }


def _parse_vertex_list(text):
    return [v for v in text.split(",") if v]


def cmd_validate(args):
    matrix = _load(args.file)
    _emit(serialize_diagram(matrix), args.output)
    return EXIT_OK


def cmd_info(args):
    matrix = _load(args.file)
    lines = []
    lines.append(f"rank: {matrix.rank}")
    comps = matrix.components()
    lines.append("components: " + "; ".join("{" + ",".join(sorted(c)) + "}" for c in comps))
    types = []
    for comp in comps:
        t = classify.recognize_irreducible(matrix.subdiagram(comp))
        types.append(f"{{{','.join(sorted(comp))}}}: {t if t else 'not spherical'}")
    lines.append("spherical types: " + "; ".join(types))
    lines.append(
        "graph factors: "
        + ("; ".join("{" + ",".join(sorted(J)) + "}" for J in graph_factors(matrix)) or "none")
    )
    pts = pseudo_transpositions(matrix)
    lines.append(
        "pseudo-transpositions: "
        + ("; ".join(f"tau={p.tau} t={p.t} n={p.n}" for p in pts) or "none")
    )
    try:
        pairs = admissible_pairs(matrix, rank_cap=args.rank_cap)
        lines.append(f"admissible pairs (nontrivial): {len(pairs)}")
    except MoveError as exc:
        lines.append(f"admissible pairs (nontrivial): unavailable ({exc})")
    if classify.has_subdiagram_c3_or_d4(matrix):
        lines.append("finite continuations: unavailable: C3/D4 present")
    else:
        for v in matrix.vertices:
            fc = finite_continuation(matrix, v)
            flag = " [reflection-rigid witness]" if fc.reflection_rigid else ""
            lines.append(f"FC({v}) = <{{{','.join(sorted(fc.generators))}}}>{flag}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_reduce(args):
    matrix = _load(args.file)
    reduced, trace = reduced_reduction(matrix, _rep_options(args))
    lines = [m.to_line() for m in trace]
    body = serialize_diagram(reduced)
    if lines:
        body += "# trace\n" + "\n".join("# " + l for l in lines) + "\n"
    _emit(body, args.output)
    return EXIT_OK


def cmd_class(args):
    matrix = _load(args.file)
    tc = twist_class(matrix, cap=args.cap, rank_cap=args.rank_cap, hybrid=args.hybrid_twist)
    if args.format == "dot":
        _emit(export_class_dot(tc), args.output)
    elif args.format == "json":
        payload = {
            "size": len(tc),
            "truncated": tc.truncated,
            "members": sorted(serialize_diagram(m.canonical) for m in tc.members.values()),
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        blocks = [f"# twist class: {len(tc)} member(s), truncated: {tc.truncated}"]
        for text in sorted(serialize_diagram(m.canonical) for m in tc.members.values()):
            blocks.append(text.rstrip("\n"))
        _emit("\n\n".join(blocks) + "\n", args.output)
    return EXIT_TRUNCATED if tc.truncated else EXIT_OK


def cmd_iso(args):
    matrix_a = _load(args.file_a)
    matrix_b = _load(args.file_b)
    verdict = decide_isomorphism(
        matrix_a, matrix_b, cap=args.cap, rank_cap=args.rank_cap,
        hybrid=args.hybrid_twist, rep_opts=_rep_options(args),
    )
    if args.format == "json":
        _emit(verdict_to_json_text(verdict), args.output)
    else:
        lines = [f"verdict: {verdict.answer}", f"unconditional: {verdict.unconditional}"]
        if verdict.reason:
            lines.append(f"reason: {verdict.reason}")
        if verdict.source_reduction:
            lines.append("source reduction:")
            lines.extend("  " + m.to_line() for m in verdict.source_reduction)
        if verdict.target_reduction:
            lines.append("target reduction (metadata):")
            lines.extend("  " + m.to_line() for m in verdict.target_reduction)
        if verdict.certificate:
            lines.append("certificate moves:")
            lines.extend("  " + l for l in verdict.certificate.to_lines())
            iso = ", ".join(f"{k}->{v}" for k, v in sorted(verdict.certificate.final_iso.items()))
            lines.append(f"final iso: {iso}")
        _emit("\n".join(lines) + "\n", args.output)
    return verdict.exit_code


def _parse_words(tokens):
    """Split oracle word arguments on '/'; '-' denotes the empty word."""
    words = [[]]
    for tok in tokens:
        if tok == "/":
            words.append([])
        elif tok == "-":
            continue
        else:
            words[-1].append(tok)
    return words


def cmd_oracle(args):
    matrix = _load(args.file)
    rep = build_rep(matrix, **_rep_options(args))
    sub = args.oracle_command
    if sub == "order":
        words = _parse_words(args.words)
        if len(words) != 2:
            print("error: order needs two words separated by '/'", file=sys.stderr)
            return EXIT_INTERNAL
        r = rep.element(words[0])
        r2 = rep.element(words[1])
        order = order_of_product(rep, r, r2, bound=args.bound)
        _emit(f"order: {'unknown' if order is UNKNOWN else _fmt_label(order)}\n", args.output)
    elif sub == "longest":
        J = _parse_vertex_list(args.subset)
        rho = longest_element(rep, J)
        _emit("longest: " + (" ".join(rho.word) or "-") + "\n", args.output)
    elif sub == "fc":
        fc = finite_continuation(matrix, args.vertex)
        flag = " [reflection-rigid witness]" if fc.reflection_rigid else ""
        _emit(f"FC({args.vertex}) = <{{{','.join(sorted(fc.generators))}}}>{flag}\n", args.output)
    elif sub == "verify-twist":
        pair = validate_admissible_pair(
            matrix, _parse_vertex_list(args.J), _parse_vertex_list(args.K)
        )
        mismatches = verify_twist_soundness(matrix, pair, rep=rep, bound=args.bound)
        if mismatches:
            detail = "; ".join(
                f"({u},{v}): diagram {_fmt_label(want)} vs oracle "
                f"{'unknown' if got is UNKNOWN else _fmt_label(got)}"
                for u, v, want, got in mismatches
            )
            _emit(f"combinatorial type = oracle type: MISMATCH ({detail})\n", args.output)
            return 1
        _emit("combinatorial type = oracle type: OK\n", args.output)
    elif sub == "enumerate":
        result = enumerate_group(rep, element_cap=args.cap)
        if result.truncated:
            _emit(f"enumerate: truncated at {len(result.elements)} elements\n", args.output)
            return EXIT_TRUNCATED
        _emit(f"enumerate: {len(result.elements)} elements\n", args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="coxiso",
        description="Decide isomorphism of finitely generated Coxeter groups "
        "given by diagrams, via reduced reductions and twist-equivalence.",
    )
    parser.add_argument("--cap", type=int, default=DEFAULT_CLASS_CAP,
                        help="member cap for class searches and enumeration")
    parser.add_argument("--bound", type=int, default=10000,
                        help="iteration bound for order computations")
    parser.add_argument("--format", choices=["text", "json", "dot"], default="text")
    parser.add_argument("--hybrid-twist", action="store_true",
                        help="recompute K-L labels with the oracle at twist time")
    parser.add_argument("--output", default=None, help="write output to file")
    parser.add_argument("--rank-cap", type=int, default=16,
                        help="rank cap for admissible-pair enumeration")
    parser.add_argument("--ring-cap", type=int, default=DEFAULT_RING_CAP,
                        help="cap on the cyclotomic modulus 2*lcm(labels)")
    parser.add_argument("--allow-large-ring", action="store_true",
                        help="permit moduli beyond the ring cap")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", help="parse and echo the normalized diagram")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = commands.add_parser("info", help="components, types, factors, moves, FC")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = commands.add_parser("reduce", help="print the reduced reduction and trace")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    p = commands.add_parser("class", help="twist-equivalence class of the diagram")
    p.add_argument("file")
    p.set_defaults(func=cmd_class)

    p = commands.add_parser("iso", help="decide isomorphism of two diagrams")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_iso)

    p = commands.add_parser("oracle", help="exact geometric-representation queries")
    oracle_sub = p.add_subparsers(dest="oracle_command", required=True)
    q = oracle_sub.add_parser("order", help="order of the product of two words")
    q.add_argument("file")
    q.add_argument("words", nargs="+", help="word1 / word2 ('-' = empty word)")
    q.set_defaults(func=cmd_oracle)
    q = oracle_sub.add_parser("longest", help="longest element of a spherical subset")
    q.add_argument("file")
    q.add_argument("subset", help="comma-separated vertices")
    q.set_defaults(func=cmd_oracle)
    q = oracle_sub.add_parser("fc", help="finite continuation of a generator")
    q.add_argument("file")
    q.add_argument("vertex")
    q.set_defaults(func=cmd_oracle)
    q = oracle_sub.add_parser("verify-twist", help="Lemma-6 soundness check for one pair")
    q.add_argument("file")
    q.add_argument("J", help="comma-separated vertices")
    q.add_argument("K", help="comma-separated vertices")
    q.set_defaults(func=cmd_oracle)
    q = oracle_sub.add_parser("enumerate", help="BFS enumeration of the group")
    q.add_argument("file")
    q.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except SystemExit:
        raise
    except (MoveError, OracleError, RingCapError, FiniteContinuationUnavailable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INTERNAL
    raise SystemExit(code)


if __name__ == "__main__":
    main()
