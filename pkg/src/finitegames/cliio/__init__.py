"""Text format, DOT emission, subcommands and the fixture runner."""
from .commands import (COMMANDS, EXIT_INVALID, EXIT_OK, EXIT_UNDECIDED, EXIT_USAGE, Options, Report,
                       run_document)
from .dot import emit_dot
from .fixtures import run_corpus, run_file
from .textformat import Document, ParseError, canonical, document_of, format_document, parse, parse_file


def run(command: str, args=()) -> Report:
    """Run a subcommand as the command line would, capturing the report."""
    import contextlib
    import io

    from .cli import main
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            status = main([command, *args])
        except SystemExit as e:  # argparse usage errors
            status = e.code if isinstance(e.code, int) else 1
    text = out.getvalue() + err.getvalue()
    return Report(status, text.splitlines())


__all__ = ["COMMANDS", "Document", "EXIT_INVALID", "EXIT_OK", "EXIT_UNDECIDED", "EXIT_USAGE", "Options",
           "ParseError", "Report", "canonical", "document_of", "emit_dot", "format_document", "parse",
           "parse_file", "run", "run_corpus", "run_document", "run_file"]
