"""Command-line interface: ``isocalc {check,eval,iso,synth,fuzz,fmt}``."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import threading
from typing import Optional, Sequence

from .core import Context, Var
from .evaluation import DEFAULT_FUEL, FuelExhausted, NotAValue, evaluate, format_trace
from .iso import synth_chain, synth_path, wrap_path
from .metatheory import GenConfig, run_suite
from .rewrite import Done, IllFormedRedex, StuckTerm, progress
from .syntax import ParseError, elaborate, parse_context, parse_term, parse_type, print_chain, print_term, print_type
from .typecheck import TypeCheckError, infer

EXIT_OK, EXIT_ERROR, EXIT_SUITE, EXIT_FUEL = 0, 1, 2, 3

_PRAGMA = re.compile(r"^\s*#\s*context\s*:(.*)$", re.MULTILINE)


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _default_fuel() -> int:
    raw = os.environ.get("ISOCALC_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        value = int(raw)
    except ValueError:
        raise CliError("BadArgument", f"ISOCALC_FUEL must be a natural number, got {raw!r}") from None
    if value < 0:
        raise CliError("BadArgument", "ISOCALC_FUEL must not be negative")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must not be negative")
    return value


def _load(path: str, context_flag: Optional[str]):
    """Read a source file; returns (context text, names, context, core term)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise CliError("IOError", f"cannot read {path}: {e}") from None
    ctx_text = context_flag
    if ctx_text is None:
        m = _PRAGMA.search(text)
        ctx_text = m.group(1).strip() if m else ""
    names, g = parse_context(ctx_text)
    term = elaborate(parse_term(text), names, g)
    infer(g, term)
    return ctx_text, names, g, term


def _cmd_check(args) -> int:
    _, _, g, term = _load(args.file, args.context)
    print(print_type(infer(g, term)))
    return EXIT_OK


def _cmd_eval(args) -> int:
    _, names, g, term = _load(args.file, args.context)
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    if fuel == 0:
        r = progress(g, term)
        if isinstance(r, Done):
            status = {"normal": True, "value": len(g) == 0, "term": print_term(term, names)}
            line = f"normal form: {print_term(term, names)}"
        else:
            path = [p.value for p in r.path]
            status = {"normal": False, "next": {"kind": r.kind.value, "rule": r.rule, "path": path}}
            line = f"reducible: next step {r.rule} @ {'.'.join(path) or 'root'}"
        print(json.dumps(status, ensure_ascii=False) if args.json else line)
        return EXIT_OK
    try:
        tr = evaluate(g, term, fuel)
    except FuelExhausted as e:
        print(format_trace(e.trace, "json" if args.json else "text", names))
        raise CliError(e.code, str(e)) from None
    print(format_trace(tr, "json" if args.json else "text", names))
    return EXIT_OK


def _cmd_iso(args) -> int:
    a, b = parse_type(args.a), parse_type(args.b)
    chain = synth_chain(a, b)
    if args.json:
        print(json.dumps({"isomorphic": True, "chain": [print_chain([w]) for w in chain]}))
    else:
        print("isomorphic: yes")
        print(f"chain: {print_chain(chain) if chain else '(empty)'}")
    return EXIT_OK


def _cmd_synth(args) -> int:
    a, b = parse_type(args.a), parse_type(args.b)
    name = args.var
    term = wrap_path(synth_path(a, b), Var(0))
    infer(Context.of([a]), term)
    print(print_term(term, [name]))
    return EXIT_OK


def _cmd_fuzz(args) -> int:
    try:
        config = GenConfig(seed=args.seed, type_depth=args.depth, term_fuel=args.term_fuel,
                           iso_rate=args.iso_rate, count=args.count,
                           fuel=args.fuel if args.fuel is not None else _default_fuel(), jobs=args.jobs)
    except ValueError as e:
        raise CliError("BadArgument", str(e)) from None
    report = run_suite(config)
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.ok else EXIT_SUITE


def _cmd_fmt(args) -> int:
    ctx_text, names, _, term = _load(args.file, args.context)
    if ctx_text:
        print(f"# context: {ctx_text}")
    print(print_term(term, names))
    return EXIT_OK


class _ArgParser(argparse.ArgumentParser):
    # usage errors share exit code 1 with other input errors; 2 means suite failures
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error[Usage]: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="isocalc", description="Lambda calculus with type isomorphisms and ⊤.")
    sub = p.add_subparsers(dest="command", required=True)

    def source(cmd):
        cmd.add_argument("file")
        cmd.add_argument("--context", help='free variables, e.g. "x:T, f:T->T" (overrides a "# context:" line)')

    c = sub.add_parser("check", help="print the type of a term")
    source(c)
    c.set_defaults(run=_cmd_check)

    c = sub.add_parser("eval", help="evaluate a term and print its trace")
    source(c)
    c.add_argument("--fuel", type=_natural, help=f"step budget (default $ISOCALC_FUEL or {DEFAULT_FUEL}); 0 only classifies")
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=_cmd_eval)

    c = sub.add_parser("iso", help="show a witness chain between two types")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=_cmd_iso)

    c = sub.add_parser("synth", help="print a coercion from a variable of type A to type B")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--var", default="x", help="name of the coerced variable")
    c.set_defaults(run=_cmd_synth)

    c = sub.add_parser("fuzz", help="run the metatheory suite on random terms")
    c.add_argument("--count", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--depth", type=int, default=4, help="type depth")
    c.add_argument("--term-fuel", type=int, default=6, help="term generation depth")
    c.add_argument("--iso-rate", type=float, default=0.3)
    c.add_argument("--fuel", type=_natural)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=_cmd_fuzz)

    c = sub.add_parser("fmt", help="print a file in canonical form")
    source(c)
    c.set_defaults(run=_cmd_fmt)
    return p


def _report(code: str, message: str, as_json: bool) -> None:
    if as_json:
        print(json.dumps({"error": {"code": code, "message": message}}, ensure_ascii=False), file=sys.stderr)
    else:
        print(f"error[{code}]: {message}", file=sys.stderr)


# Terms are processed recursively; commands run on a thread with a large stack
# so that deep input ends in a RecursionError rather than a C stack overflow.
_STACK_BYTES = 512 * 2**20
_RECURSION_LIMIT = 100_000


def main(argv: Optional[Sequence[str]] = None) -> int:
    outcome: list = []

    def work():
        try:
            outcome.append((True, _main(argv)))
        except BaseException as e:  # re-raised on the calling thread
            outcome.append((False, e))

    old_limit = sys.getrecursionlimit()
    old_stack = threading.stack_size(_STACK_BYTES)
    try:
        sys.setrecursionlimit(max(old_limit, _RECURSION_LIMIT))
        worker = threading.Thread(target=work, name="isocalc")
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_stack)
        sys.setrecursionlimit(old_limit)
    ok, value = outcome[0]
    if not ok:
        raise value
    return value


def _main(argv: Optional[Sequence[str]]) -> int:
    args = build_parser().parse_args(argv)
    as_json = getattr(args, "json", False)
    try:
        return args.run(args)
    except CliError as e:
        _report(e.code, e.message, as_json)
        return EXIT_FUEL if e.code == FuelExhausted.code else EXIT_ERROR
    except ParseError as e:
        _report(e.code, str(e), as_json)
    except TypeCheckError as e:
        _report(e.code, e.message, as_json)
    except (StuckTerm, IllFormedRedex, NotAValue) as e:
        _report(e.code, str(e), as_json)
    except RecursionError:
        _report("TooDeep", "input is nested too deeply", as_json)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
