"""The ``blockade`` command line.

Exit codes: 0 pass, 1 verification failure, 2 parse or input error,
3 precondition violation.
"""

import argparse
import sys

from . import builder, exhaustive, generate, matroids
from .committee import parse_ctree, format_ctree, vote_outcome
from .engine import find_certificate, format_certificate, parse_certificate, verify_parsed
from .errors import (
    ContractViolated,
    FeasibilityViolated,
    IllegalInput,
    InputError,
    PreconditionViolated,
)
from .truncation import MODES, format_pgen, format_stability, parse_pgen, stability_study

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _set(items):
    return " ".join(matroids.ordered(items))


# --- committee trees --------------------------------------------------------

def cmd_vote(args, out):
    tree = parse_ctree(_read(args.tree))
    vote = vote_outcome(tree)
    margin = vote.margin[tree.root]
    if args.format == "records":
        out.write(f"result {vote.result.value}\n")
        for v in sorted(range(tree.n), key=lambda u: tree.labels[u]):
            if v not in tree.blue and v not in tree.red and tree.children[v]:
                out.write(f"margin {tree.labels[v]} {vote.margin[v]}\n")
    elif margin:
        out.write(f"{vote.result.value} margin {abs(margin)}\n")
    else:
        out.write(f"{vote.result.value}\n")
    return EXIT_OK


def cmd_certify(args, out):
    tree = parse_ctree(_read(args.tree))
    out.write(format_certificate(tree, find_certificate(tree)))
    return EXIT_OK


def cmd_verify(args, out):
    tree = parse_ctree(_read(args.tree))
    cert = parse_certificate(_read(args.cert), tree)
    report = verify_parsed(tree, cert)
    out.write("\n".join(report.lines()) + "\n")
    out.write(("verified" if report.passed else "rejected") + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_stability(args, out):
    spec = parse_pgen(_read(args.pgen))
    modes = MODES if args.mode is None else (args.mode,)
    report = stability_study(spec.generator(), args.depth_min, args.depth_max, modes)
    out.write(format_stability(report))
    return EXIT_OK


def cmd_enumerate(args, out):
    summary = exhaustive.enumerate_all(args.max_n)
    out.write(exhaustive.format_summary(summary))
    return EXIT_OK if summary.passed else EXIT_VERIFY


# --- matroids ---------------------------------------------------------------

def _side(pair, side):
    return pair.m if side == "M" else pair.n


def _elements(tm, names):
    unknown = [e for e in names if e not in tm.owner]
    if unknown:
        raise InputError(f"unknown elements: {' '.join(unknown)}")
    return frozenset(names)


def cmd_mat(args, out):
    pair = matroids.parse_tmat(_read(args.tmat))
    sub = args.mat_command
    if sub in ("independent", "rank"):
        tm = _side(pair, args.side)
        s = _elements(tm, args.elements)
        if sub == "independent":
            out.write(("true" if matroids.is_independent(tm, s) else "false") + "\n")
        else:
            out.write(f"{matroids.rank(tm, s)}\n")
        return EXIT_OK
    if sub == "circuits":
        for c in matroids.enumerate_circuits(_side(pair, args.side)):
            if args.format == "records":
                out.write(f"circuit {_set(c)}\n")
            else:
                out.write("{" + ",".join(matroids.ordered(c)) + "}\n")
        return EXIT_OK
    if sub == "intersect":
        triple = matroids.classical_intersection(pair.m, pair.n)
        report = matroids.verify_triple(pair.m, pair.n, triple)
        if args.format == "records":
            out.write(f"size {len(triple.common_independent)}\n")
            out.write(f"I {_set(triple.common_independent)}".rstrip() + "\n")
            out.write(f"JM {_set(triple.j_m)}".rstrip() + "\n")
            out.write(f"JN {_set(triple.j_n)}".rstrip() + "\n")
        else:
            out.write(f"|I|={len(triple.common_independent)}\n")
            out.write(f"I: {_set(triple.common_independent)}".rstrip() + "\n")
            out.write(f"JM: {_set(triple.j_m)}".rstrip() + "\n")
            out.write(f"JN: {_set(triple.j_n)}".rstrip() + "\n")
        out.write(("verified" if report.passed else "rejected") + "\n")
        return EXIT_OK if report.passed else EXIT_VERIFY
    # partition
    cert = builder.intersection_certificate(pair)
    out.write(builder.format_partition(cert))
    return EXIT_OK if cert.report.passed else EXIT_VERIFY


# --- generators -------------------------------------------------------------

def cmd_gen(args, out):
    if args.gen_command == "tree":
        out.write(format_ctree(generate.gen_tree(args.seed, args.n)))
    elif args.gen_command == "pgen":
        out.write(format_pgen(generate.gen_pgen(args.seed, args.states, args.max_children)))
    else:
        pair = generate.gen_tmat(args.seed, args.max_nodes, args.max_reals, args.max_rank,
                                 args.min_nodes)
        out.write(matroids.format_tmat(pair))
    return EXIT_OK


def _u64(text):
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "records"), default="human")
    common.add_argument("--seed", type=_u64, default=0)

    parser = _Parser(prog="blockade", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("vote", parents=[common], help="deterministic vote on a finite tree")
    p.add_argument("tree")
    p.set_defaults(func=cmd_vote)

    p = subs.add_parser("certify", parents=[common], help="print a blockage certificate")
    p.add_argument("tree")
    p.set_defaults(func=cmd_certify)

    p = subs.add_parser("verify", parents=[common], help="check a certificate against a tree")
    p.add_argument("tree")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("stability", parents=[common], help="truncation study of a .pgen file")
    p.add_argument("pgen")
    p.add_argument("--depth-min", type=int, default=1)
    p.add_argument("--depth-max", type=int, default=6)
    p.add_argument("--mode", choices=MODES, default=None,
                   help="frontier treatment; all three when omitted")
    p.set_defaults(func=cmd_stability)

    p = subs.add_parser("enumerate", parents=[common], help="exhaustive check on small trees")
    p.add_argument("max_n", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = subs.add_parser("mat", help="trees of uniform matroids")
    msubs = p.add_subparsers(dest="mat_command", required=True, parser_class=_Parser)
    for name in ("independent", "rank"):
        q = msubs.add_parser(name, parents=[common])
        q.add_argument("tmat")
        q.add_argument("elements", nargs="*")
        q.add_argument("--side", choices=("M", "N"), default="M")
    q = msubs.add_parser("circuits", parents=[common])
    q.add_argument("tmat")
    q.add_argument("--side", choices=("M", "N"), default="M")
    for name in ("intersect", "partition"):
        q = msubs.add_parser(name, parents=[common])
        q.add_argument("tmat")
    p.set_defaults(func=cmd_mat)

    p = subs.add_parser("gen", help="seeded random instances")
    gsubs = p.add_subparsers(dest="gen_command", required=True, parser_class=_Parser)
    q = gsubs.add_parser("tree", parents=[common])
    q.add_argument("--n", type=int, default=10)
    q = gsubs.add_parser("pgen", parents=[common])
    q.add_argument("--states", type=int, default=3)
    q.add_argument("--max-children", type=int, default=3)
    q = gsubs.add_parser("tmat", parents=[common])
    q.add_argument("--min-nodes", type=int, default=1)
    q.add_argument("--max-nodes", type=int, default=6)
    q.add_argument("--max-reals", type=int, default=14)
    q.add_argument("--max-rank", type=int, default=4)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        err.write(f"blockade: input error: {exc}\n")
        return EXIT_PARSE
    except (PreconditionViolated, FeasibilityViolated) as exc:
        err.write(f"blockade: precondition violated: {exc}\n")
        return EXIT_PRECONDITION
    except (ContractViolated, IllegalInput) as exc:
        err.write(f"blockade: verification failed: {exc}\n")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
