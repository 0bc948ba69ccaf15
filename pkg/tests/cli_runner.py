"""Run the CLI in-process, capturing its exit code and output streams."""

from __future__ import annotations

import contextlib
import io

from dtnvicinity.cli import main


def run_cli(argv: list[str]) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()
