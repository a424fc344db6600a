"""Command-line front end.

Exit status: 0 when the queried property holds (or the command simply
succeeded), 2 when it does not hold, 1 on any error. Errors are reported as
one ``error: ...`` line on stdout.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import re
import sys

from .constructions import paper_example, reed_muller_lsss, shamir_msp
from .diamond import multiplicativity_witness, strong_multiplicativity_check
from .errors import MspToolsError
from .fileformat import parse_msp, serialize_msp, serialize_witness
from .mpcsim import FULL_FANIN, LAMBDA2, LAMBDA3, SHARE_ONLY, privacy_audit, simulate_fanin_product
from .msp import format_subset, is_q_lambda, maximal_adversary_structure, minimal_access_structure
from .transform import lift_multiplicativity

OK, ERROR, FAILS = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


_SHAMIR = re.compile(r"shamir-(\d+)-(\d+)-(\d+)$")
_RM = re.compile(r"rm-(\d+)-(\d+)$")


def load_scheme(source: str):
    """Resolve a file argument: a path, ``-`` for stdin, or a built-in alias."""
    if source == "fixture-M":
        return paper_example("M")
    if source in ("fixture-Mprime", "fixture-M_prime"):
        return paper_example("M_prime")
    if m := _SHAMIR.match(source):
        t, n, q = map(int, m.groups())
        return shamir_msp(t, n, q)
    if m := _RM.match(source):
        return reed_muller_lsss(*map(int, m.groups()))
    if source == "-":
        return parse_msp(sys.stdin.read())
    with open(source, encoding="utf-8") as fh:
        return parse_msp(fh.read())


def _parser() -> _Parser:
    p = _Parser(prog="msptools", description="Multiplicative monotone span programs and fan-in MPC.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="emit a built-in scheme as an MSP file")
    kinds = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    sh = kinds.add_parser("shamir")
    sh.add_argument("--t", type=int, required=True)
    sh.add_argument("--n", type=int, required=True)
    sh.add_argument("--q", type=int, required=True)
    sh.add_argument("--points", type=_int_list)
    rm = kinds.add_parser("rm")
    rm.add_argument("--r", type=int, required=True)
    rm.add_argument("--m", type=int, required=True)
    fx = kinds.add_parser("fixture")
    fx.add_argument("--name", choices=["M", "Mprime"], required=True)

    acc = sub.add_parser("access", help="list minimal access and maximal adversary sets")
    acc.add_argument("file")

    for name, text in (("check", "look for a lambda-fold recombination vector"),
                       ("strong", "test strong lambda-multiplicativity"),
                       ("transform", "lift a strongly lambda-multiplicative scheme")):
        c = sub.add_parser(name, help=text)
        c.add_argument("file")
        c.add_argument("--lambda", dest="lam", type=int, default=2)
        if name == "check":
            c.add_argument("--emit-witness", action="store_true")

    sim = sub.add_parser("simulate", help="run the fan-in multiplication protocol")
    sim.add_argument("file")
    sim.add_argument("--inputs", type=_int_list, required=True)
    sim.add_argument("--mode", choices=[LAMBDA2, LAMBDA3], default=LAMBDA3)
    sim.add_argument("--seed", type=int, default=0)

    au = sub.add_parser("audit", help="check that a coalition learns nothing")
    au.add_argument("file")
    au.add_argument("--set", dest="coalition", type=_int_list, required=True)
    au.add_argument("--seed", type=int)
    au.add_argument("--protocol", choices=[SHARE_ONLY, FULL_FANIN], default=SHARE_ONLY)
    au.add_argument("--fan-in", type=int, default=2)
    return p


def _gen(args, out):
    if args.kind == "shamir":
        scheme = shamir_msp(args.t, args.n, args.q, args.points)
    elif args.kind == "rm":
        scheme = reed_muller_lsss(args.r, args.m)
    else:
        scheme = paper_example(args.name)
    out.write(serialize_msp(scheme))
    return OK


def _access(args, out):
    scheme = load_scheme(args.file)
    minimal = minimal_access_structure(scheme)
    maximal = maximal_adversary_structure(scheme)
    out.write(f"minimal access sets ({len(minimal)}):\n")
    for m in minimal:
        out.write(format_subset(m) + "\n")
    out.write(f"maximal adversary sets ({len(maximal)}):\n")
    for m in maximal:
        out.write(format_subset(m) + "\n")
    for lam in (2, 3, 4):
        out.write(f"Q^{lam}: {'yes' if is_q_lambda(maximal, lam) else 'no'}\n")
    return OK


def _check(args, out):
    scheme = load_scheme(args.file)
    rv = multiplicativity_witness(scheme, args.lam)
    if rv is None:
        out.write("none\n")
        return FAILS
    out.write(serialize_witness(rv) if args.emit_witness else "witness\n")
    return OK


def _strong(args, out):
    scheme = load_scheme(args.file)
    report = strong_multiplicativity_check(scheme, args.lam)
    for mask, rv in report.results.items():
        out.write(f"{format_subset(mask)}: {'pass' if rv is not None else 'fail'}\n")
    out.write(f"strongly {args.lam}-multiplicative: {'yes' if report.verdict else 'no'}\n")
    return OK if report.verdict else FAILS


def _transform(args, out):
    scheme = load_scheme(args.file)
    out.write(serialize_msp(lift_multiplicativity(scheme, args.lam)))
    return OK


def _simulate(args, out):
    scheme = load_scheme(args.file)
    value, log = simulate_fanin_product(scheme, args.inputs, args.mode, args.seed)
    out.write(f"product {int(value)}\nrounds {log.total}\n")
    out.write(log.serialize())
    return OK


def _audit(args, out):
    scheme = load_scheme(args.file)
    report = privacy_audit(scheme, args.coalition, args.protocol, fan_in=args.fan_in, seed=args.seed)
    out.write(str(report) + "\n")
    return OK if report.private else FAILS


_COMMANDS = {
    "gen": _gen, "access": _access, "check": _check, "strong": _strong,
    "transform": _transform, "simulate": _simulate, "audit": _audit,
}


def _one_line(exc: BaseException) -> str:
    text = " ".join(str(exc).split()) or type(exc).__name__
    return f"error: {type(exc).__name__}: {text}"


def run_cli(argv) -> tuple[int, str]:
    """Run one invocation and return ``(exit_status, stdout_text)``."""
    out = io.StringIO()
    try:
        with contextlib.redirect_stdout(out):
            args = _parser().parse_args(list(argv))
        status = _COMMANDS[args.command](args, out)
    except SystemExit as exc:  # --help
        status = OK if not exc.code else ERROR
    except _UsageError as exc:
        status = ERROR
        out = io.StringIO(f"error: usage: {' '.join(str(exc).split())}\n")
        out.seek(0, io.SEEK_END)
    except (MspToolsError, ValueError, KeyError, ArithmeticError, OSError, RecursionError, MemoryError) as exc:
        status = ERROR
        out = io.StringIO(_one_line(exc) + "\n")
        out.seek(0, io.SEEK_END)
    text = out.getvalue()
    if not text.strip():
        text = "ok\n" if status == OK else "error: no output\n"
    elif not text.rstrip("\n").splitlines()[-1].strip():
        text = text.rstrip() + "\n"
    return status, text


def main(argv=None) -> int:
    status, text = run_cli(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
