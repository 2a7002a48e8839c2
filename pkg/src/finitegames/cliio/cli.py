"""Command-line entry point.

Exit status: 0 success, 1 usage error, 2 invalid input or failed
validation, 3 solver cap exceeded or undecided.
"""
from __future__ import annotations

import argparse
import sys

from .commands import (COMMANDS, EXIT_INVALID, EXIT_USAGE, Options, option_parser, options_from,
                       run_document)
from .fixtures import run_corpus
from .textformat import ParseError, parse

HELP = {
    "validate": "check a document (extensive forms: structure and perfect recall)",
    "nash": "pure-strategy Nash equilibria",
    "mixed-nash": "all Nash equilibria of a two-player game",
    "dominate": "iterated deletion of dominated strategies",
    "bi": "backward induction on a perfect-information tree",
    "spe": "subgame-perfect equilibria",
    "zermelo": "classify a win/lose/draw tree",
    "wse": "is the assessment a weak sequential equilibrium?",
    "pbe": "is the assessment a perfect Bayesian equilibrium?",
    "seqeq": "is the assessment a sequential equilibrium?",
    "know": "the event that an agent knows an event",
    "ck": "common-knowledge partition and common-knowledge events",
    "prior": "a common prior (or Harsanyi-consistent prior of a type space)",
    "agree": "check the agreement property for an event",
    "revise": "belief revision by a plausibility order",
    "ckr": "rationality and common knowledge of rationality",
    "harsanyi": "Harsanyi transformation and Bayesian Nash equilibria",
    "totypes": "convert a scenario to a type space",
    "tostates": "convert a type space to a scenario",
    "fixtures": "run the bundled corpus",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="finitegames", description="Exact solvers for finite games.")
    p.add_argument("--cap", dest="g_cap", type=int, default=None, help="enumeration bound")
    p.add_argument("--format", dest="g_format", choices=("text", "dot"), default=None)
    p.add_argument("--fixture-dir", dest="g_fixture_dir", default=None)
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    common = option_parser()
    for name in COMMANDS:
        if name == "fixtures":
            sp = sub.add_parser(name, help=HELP[name])
            sp.add_argument("--fixture-dir", default=None)
            sp.add_argument("--jobs", type=int, default=1)
            sp.add_argument("--cap", type=int, default=None)
            continue
        sp = sub.add_parser(name, parents=[common], help=HELP[name])
        sp.add_argument("file", help="document path, or - for standard input")
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "fixtures":
        rep = run_corpus(ns.fixture_dir or ns.g_fixture_dir, max(1, ns.jobs))
        sys.stdout.write(rep.text)
        return rep.status
    opts = options_from(ns)
    if opts.cap is None:
        opts.cap = ns.g_cap
    if ns.g_format is not None and ns.format == "text":
        opts.format = ns.g_format
    try:
        if ns.file == "-":
            text, source = sys.stdin.read(), "<stdin>"
        else:
            with open(ns.file, encoding="utf-8") as fh:
                text, source = fh.read(), ns.file
    except OSError as e:
        sys.stderr.write(f"finitegames: {e}\n")
        return EXIT_USAGE
    try:
        doc = parse(text, source)
    except ParseError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_INVALID
    rep = run_document(ns.command, doc, opts)
    (sys.stderr if rep.status == EXIT_USAGE else sys.stdout).write(rep.text)
    return rep.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
