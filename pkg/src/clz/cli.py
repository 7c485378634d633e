"""Command line: REPL by default, or run a file, or evaluate one string.

Deep lazy structures force recursively, so evaluation runs on a worker
thread with a large stack; the host recursion ceiling is scaled to the
configured recursion limit. Exit codes: 0 success, 1 evaluation or read
error, 2 I/O error, 3 step limit.
"""

from __future__ import annotations

import argparse
import sys
import threading
import traceback

from .core import Interpreter
from .errors import (
    DivergenceError,
    EvalError,
    LispError,
    ReadError,
    StepLimitExceeded,
)
from .reader import read_source
from .values import print_value

# Host frames consumed per unit of interpreter recursion depth, with
# margin, and a per-frame stack allowance. Both were sized by measuring
# deep stream forcing; see the recursion tests.
_FRAMES_PER_DEPTH = 24
_BYTES_PER_FRAME = 2048
_MIN_STACK = 512 * 1024 * 1024
_MAX_STACK = 2 * 1024 * 1024 * 1024


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clz",
        description="A small Lisp whose functions can take their arguments lazily.",
    )
    parser.add_argument("file", nargs="?",
                        help="script to run; omit (and no --eval) for a REPL")
    parser.add_argument("--eval", metavar="FORM", dest="eval_text",
                        help="evaluate the given form(s) and print each value")
    parser.add_argument("--memoize", action="store_true",
                        help="memoize thunks: call-by-need instead of call-by-name")
    parser.add_argument("--step-limit", type=_positive_int, default=10_000_000,
                        metavar="N",
                        help="evaluator steps + loop iterations allowed per "
                             "top-level form (default 10000000)")
    parser.add_argument("--recursion-limit", type=_positive_int, default=10_000,
                        metavar="N",
                        help="maximum nested evaluation depth (default 10000)")
    return parser


def _kind_label(err: LispError) -> str:
    if isinstance(err, EvalError):
        return err.kind
    if isinstance(err, ReadError):
        return "read-error"
    if isinstance(err, DivergenceError):
        return "divergence"
    if isinstance(err, StepLimitExceeded):
        return "step-limit"
    return "error"


def _repl(interp: Interpreter) -> int:
    out = sys.stdout
    while True:
        out.write("clz> ")
        out.flush()
        line = sys.stdin.readline()
        if line == "":
            out.write("\n")
            return 0
        if not line.strip():
            continue
        try:
            forms = read_source(line)
        except ReadError as err:
            out.write(f"read-error at {err.where()}: {err.message}\n")
            continue
        for form in forms:
            try:
                value = interp.eval_top(form)
            except LispError as err:
                out.write(f"{_kind_label(err)} at {err.where()}: {err.message}\n")
                break
            out.write(print_value(value) + "\n")


def _run_text(interp: Interpreter, text: str, origin: str, echo: bool) -> int:
    try:
        forms = read_source(text)
    except ReadError as err:
        print(f"{origin}:{err.where()}: read-error: {err.message}",
              file=sys.stderr)
        return 1
    for form in forms:
        try:
            value = interp.eval_top(form)
        except StepLimitExceeded as err:
            print(f"{origin}:{err.where()}: step-limit: {err.message}",
                  file=sys.stderr)
            return 3
        except LispError as err:
            print(f"{origin}:{err.where()}: {_kind_label(err)}: {err.message}",
                  file=sys.stderr)
            return 1
        if echo:
            print(print_value(value))
    return 0


def _dispatch(args: argparse.Namespace) -> int:
    interp = Interpreter(
        memoize=args.memoize,
        step_limit=args.step_limit,
        recursion_limit=args.recursion_limit,
    )
    if args.file is not None:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            print(f"clz: cannot read {args.file}: {err.strerror}",
                  file=sys.stderr)
            return 2
        return _run_text(interp, text, args.file, echo=False)
    if args.eval_text is not None:
        return _run_text(interp, args.eval_text, "<eval>", echo=True)
    return _repl(interp)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.file is not None and args.eval_text is not None:
        parser.error("give a FILE or --eval, not both")

    outcome: dict = {}

    def work():
        try:
            needed = args.recursion_limit * _FRAMES_PER_DEPTH + 5000
            if sys.getrecursionlimit() < needed:
                sys.setrecursionlimit(needed)
            outcome["code"] = _dispatch(args)
        except BaseException:
            traceback.print_exc()
            outcome["code"] = 1

    stack = min(max(_MIN_STACK,
                    args.recursion_limit * _FRAMES_PER_DEPTH * _BYTES_PER_FRAME),
                _MAX_STACK)
    old_stack = threading.stack_size(stack)
    try:
        worker = threading.Thread(target=work, name="clz-eval")
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_stack)
    return outcome.get("code", 1)
