"""Runner for the bundled corpus of solved examples.

Every ``*.game`` file is a document with ``[expect]`` sections; each
expectation re-runs a subcommand on the document and compares the report
line by line.  A parse/print round trip is checked per file as well.
"""
from __future__ import annotations

import os
import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .commands import EXIT_INVALID, EXIT_OK, Report, option_parser, options_from, run_document
from .textformat import ParseError, format_document, parse, parse_file

ENV_DIR = "FINITEGAMES_FIXTURE_DIR"


def default_dir() -> Path:
    env = os.environ.get(ENV_DIR)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent.parent / "fixtures"


def fixture_files(directory=None) -> list:
    d = Path(directory) if directory is not None else default_dir()
    return sorted(p for p in d.glob("*.game") if p.is_file())


@dataclass
class CaseResult:
    file: str
    check: str
    ok: bool
    detail: list

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.file} {self.check}"


def run_file(path) -> list:
    name = Path(path).stem
    try:
        doc = parse_file(path)
    except ParseError as e:
        return [CaseResult(name, "parse", False, [str(e)])]
    results = []
    try:
        again = parse(format_document(doc), str(path))
        ok = again == doc
        results.append(CaseResult(name, "roundtrip", ok, [] if ok else ["reprinted document differs"]))
    except ParseError as e:
        results.append(CaseResult(name, "roundtrip", False, [str(e)]))
    for ex in doc.expects:
        label = ex.command + (" " + " ".join(shlex.quote(a) for a in ex.args) if ex.args else "")
        tag = ", ".join(x for x in (ex.cite, ex.provenance) if x)
        check = f"{label} [{tag}]" if tag else label
        try:
            ns = option_parser().parse_args(list(ex.args))
        except SystemExit:
            results.append(CaseResult(name, check, False, ["bad expectation arguments"]))
            continue
        rep = run_document(ex.command, doc, options_from(ns))
        ok = rep.status == ex.exit and tuple(rep.lines) == tuple(ex.lines)
        detail = []
        if not ok:
            detail.append(f"exit {rep.status}, expected {ex.exit}")
            detail.extend(f"  got:      {x}" for x in rep.lines)
            detail.extend(f"  expected: {x}" for x in ex.lines)
        results.append(CaseResult(name, check, ok, detail))
    return results


def run_corpus(directory=None, jobs: int = 1) -> Report:
    files = fixture_files(directory)
    if not files:
        return Report(EXIT_INVALID, [f"no fixtures found in {directory or default_dir()}"])
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_file = list(pool.map(run_file, files))  # map keeps corpus order
    else:
        per_file = [run_file(f) for f in files]
    lines, failed, total = [], 0, 0
    for results in per_file:
        for r in results:
            total += 1
            lines.append(r.line())
            if not r.ok:
                failed += 1
                lines.extend("    " + d for d in r.detail)
    lines.append(f"{total - failed}/{total} checks passed")
    return Report(EXIT_OK if failed == 0 else EXIT_INVALID, lines)
