"""Command line interface.

Every subcommand reads a graph, complex or certificate, writes the module's
serialized output to stdout (or --out) and keeps diagnostics on stderr.
Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import formats
from .classify import batch_classify
from .collapse import pop_everything, seq_collapse
from .digraph import automorphisms, degree_signature_partition, describe_group, random_digraph
from .flag import (
    WEIGHTS,
    WeightUnavailableError,
    directed_flag_complex,
    filtration_stage,
    flag_tournaplex,
    undirected_flag_complex,
)
from .homology import format_profile, integral_homology
from .wedge import Certificate, CertificateParseError, cone_and_collapse, replay_certificate

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_output(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph(path, fmt, mode):
    text = _read_input(path)
    if fmt == "auto":
        first = next((ln for ln in text.splitlines() if ln.strip()), "")
        fmt = "csv" if ("," in first or str(path).lower().endswith(".csv")) else "edges"
    if fmt == "csv":
        return formats.load_connectome(text, mode)
    return formats.read_edge_list(text)


def _load_chain_complex(path):
    text = _read_input(path)
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    if first.startswith("TOURNAPLEX"):
        return formats.read_tournaplex(text)
    return formats.read_complex(text)


def cmd_build(args):
    G = _load_graph(args.graph, args.format, args.mode)
    if args.kind == "dfl":
        if args.preprocess:
            records = formats.read_connectome_records(_read_input(args.graph))
            G = formats.preprocess_celegans(G, records)
        out = formats.write_complex(directed_flag_complex(G), G.n)
    elif args.kind == "uflag":
        out = formats.write_complex(undirected_flag_complex(G), G.n)
    else:
        out = formats.write_tournaplex(flag_tournaplex(G), G.n)
    _write_output(out, args.out)
    return EXIT_OK


def cmd_homology(args):
    X = _load_chain_complex(args.input)
    if not X.is_closed():
        X = X.closure()
    profile = integral_homology(X)
    _write_output(format_profile(profile), args.out)
    return EXIT_OK


def cmd_collapse(args):
    X = formats.read_complex(_read_input(args.input))
    M, steps = seq_collapse(X)
    print(f"collapsed in {len(steps)} elementary collapses", file=sys.stderr)
    _write_output(formats.write_complex(M), args.out)
    return EXIT_OK


def cmd_pop_everything(args):
    X = formats.read_complex(_read_input(args.input))
    ok, witness = pop_everything(X)
    if ok:
        dims = ",".join(str(len(w) - 1) for w in witness)
        _write_output(f"TRUE dims=[{dims}]\n", args.out)
    else:
        _write_output("FALSE\n", args.out)
    return EXIT_OK


def cmd_cone_and_collapse(args):
    X = formats.read_complex(_read_input(args.input))
    result = cone_and_collapse(X, max_iterations=args.max_iterations)
    print(
        f"terminal: {len(result.final)} maximal faces, "
        f"{'single vertex' if result.reached_vertex else 'remainder'} "
        f"after {result.iterations} iterations",
        file=sys.stderr,
    )
    _write_output(result.certificate.to_text(), args.out)
    return EXIT_OK


def cmd_verify(args):
    cert = Certificate.from_text(_read_input(args.certificate))
    report = replay_certificate(cert)
    if report.ok:
        _write_output("VALID\n", args.out)
        return EXIT_OK
    where = "footer" if report.failed_step is None else f"step {report.failed_step}"
    _write_output(f"INVALID {where}: {report.reason}\n", args.out)
    return EXIT_VERIFY_FAILED


def cmd_classify(args):
    tournaments = formats.read_tournaments(_read_input(args.collection), args.n)
    result = batch_classify(tournaments)
    _write_output(result.table(), args.out)
    return EXIT_OK


def cmd_filtration(args):
    T = formats.read_tournaplex(_read_input(args.input))
    if args.weight not in WEIGHTS:
        raise formats.InputFormatError(f"unknown weight plug-in {args.weight!r}")
    stage = filtration_stage(T, args.weight, args.d)
    _write_output(formats.write_tournaplex(stage, T.graph.n), args.out)
    return EXIT_OK


def cmd_autgroup(args):
    G = _load_graph(args.graph, args.format, args.mode)
    partition = degree_signature_partition(G)
    sizes = {}
    for cls in partition:
        sizes[len(cls)] = sizes.get(len(cls), 0) + 1
    perms = automorphisms(G)
    size_text = " ".join(f"classes_of_size_{k}={v}" for k, v in sorted(sizes.items()))
    _write_output(
        f"{size_text}\naut_order={len(perms)} group={describe_group(perms)}\n",
        args.out,
    )
    return EXIT_OK


def cmd_gen_random(args):
    G = random_digraph(args.n, args.p, args.seed)
    _write_output(formats.write_edge_list(G), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="flagwedge",
        description=(
            "Directed flag complexes, flag tournaplexes, exact integral "
            "homology, and collapse/cone homotopy certificates."
        ),
    )
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a complex from a directed graph")
    p.add_argument("kind", choices=["dfl", "tflag", "uflag"])
    p.add_argument("graph", help="graph file (connectome CSV or edge list), - for stdin")
    p.add_argument("--format", choices=["auto", "csv", "edges"], default="auto")
    p.add_argument("--mode", default="S", help="connectome side: S or R")
    p.add_argument(
        "--preprocess",
        action="store_true",
        help="apply the first-occurrence vertex order and edge reversal (dfl from CSV)",
    )
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("homology", help="integral homology of a complex")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--out")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("collapse", help="greedy sequential collapse")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--out")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("pop-everything", help="wedge-of-spheres detector")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pop_everything)

    p = sub.add_parser("cone-and-collapse", help="iterative cone/collapse, emits a certificate")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cone_and_collapse)

    p = sub.add_parser("verify", help="replay and validate a certificate")
    p.add_argument("certificate")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="homotopy types of a tournament collection")
    p.add_argument("--collection", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("filtration", help="filtration stage of a tournaplex")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--weight", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("autgroup", help="degree-signature partition and automorphism group")
    p.add_argument("graph")
    p.add_argument("--format", choices=["auto", "csv", "edges"], default="auto")
    p.add_argument("--mode", default="S")
    p.add_argument("--out")
    p.set_defaults(func=cmd_autgroup)

    p = sub.add_parser("gen-random", help="random digraph as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_random)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    try:
        return args.func(args)
    except (formats.InputFormatError, CertificateParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (ValueError, WeightUnavailableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
