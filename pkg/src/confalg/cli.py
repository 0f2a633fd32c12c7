"""Command-line front end: ``confalg <subcommand> ...``.

Exit status is 0 on success, 1 when a check fails and 2 on usage or parse
errors.  Output is deterministic for fixed inputs and seeds.
"""

from __future__ import annotations

import argparse
import random
import sys
from importlib import resources
from pathlib import Path

from .builders import BUILTINS, builtin
from .conformal import StructureTable, check_axioms, lambda_bracket
from .diffring import RingSpec
from .dsl import DslError, parse_algebra, parse_element, parse_matrix
from .escape import bounded_escape_search
from .morphisms import (ExtensionRequired, InKernel, NotAnAutomorphismError, SL2Pair, compose, factorize,
                        is_conf_automorphism, is_identity, is_V_stable, k2_phi, kernel_witness, random_pair,
                        theta, theta_unchecked)
from .render import format_element, format_lambda_poly


class UsageError(Exception):
    pass


def load_algebra(spec: str) -> StructureTable:
    """A built-in name, a shipped ``.alg`` file name, or a path to an algebra file."""
    if spec in BUILTINS:
        return builtin(spec)
    path = Path(spec)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
    else:
        shipped = resources.files("confalg") / "algebras" / f"{spec}.alg"
        if not shipped.is_file():
            raise UsageError(f"unknown algebra {spec!r}: not a built-in ({', '.join(BUILTINS)}) or a file")
        text = shipped.read_text(encoding="utf-8")
    try:
        return parse_algebra(text)
    except DslError as err:
        raise UsageError(f"{spec}: {err}") from None


def _ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _pair(args, spec: RingSpec, checked: bool = True):
    try:
        A = parse_matrix(args.A, spec)
        B = parse_matrix(args.B, spec)
    except DslError as err:
        raise UsageError(f"matrix: {err}") from None
    if not checked:
        return A, B
    try:
        return SL2Pair(A, B)
    except ValueError as err:
        raise UsageError(str(err)) from None


def _images(phi, ascii_mode: bool) -> list[str]:
    names = phi.table.basis.names
    width = max(len(n) for n in names)
    return [f"  {n:<{width}} -> {format_element(e, ascii_mode)}" for n, e in zip(names, phi.images)]


def _yes(flag) -> str:
    return "yes" if flag else "no"


# -- subcommands ---------------------------------------------------------------

def cmd_check(args, out) -> int:
    table = load_algebra(args.algebra)
    report = check_axioms(table, n_max=args.max_n, m_max=args.max_m, dpow_max=args.max_dpow)
    out.append(report.summary())
    return 0 if report.passed else 1


def cmd_bracket(args, out) -> int:
    table = load_algebra(args.algebra)
    spec = _ring(args.ring)
    try:
        a = parse_element(args.a, table.basis, spec)
        b = parse_element(args.b, table.basis, spec)
    except DslError as err:
        raise UsageError(f"element: {err}") from None
    out.append(format_lambda_poly(lambda_bracket(table, a, b), args.ascii))
    return 0


def cmd_theta(args, out) -> int:
    spec = _ring(args.ring)
    phi = theta(_pair(args, spec))
    out.append(f"theta_(A,B) over {spec}:")
    out.extend(_images(phi, args.ascii))
    report = is_conf_automorphism(phi)
    out.append(f"automorphism: {_yes(report.verdict)}")
    return 0 if report.verdict else 1


def cmd_verify_theta(args, out) -> int:
    spec = _ring(args.ring)
    if args.A is not None:
        pairs = [_pair(args, spec)]
    else:
        rng = random.Random(args.seed)
        pairs = [random_pair(spec, rng) for _ in range(args.count)]
    auto_ok = hom_ok = 0
    failures = []
    for k, p in enumerate(pairs):
        phi = theta(p)
        if is_conf_automorphism(phi).verdict:
            auto_ok += 1
        else:
            failures.append(f"  sample {k}: theta is not an automorphism")
        q = pairs[(k + 1) % len(pairs)]
        if theta(p * q) == compose(phi, theta(q)):
            hom_ok += 1
        else:
            failures.append(f"  sample {k}: theta(p q) != theta(p) theta(q)")
    source = "given pair" if args.A is not None else f"seed {args.seed}"
    out.append(f"verify-theta over {spec} ({len(pairs)} pairs, {source})")
    out.append(f"  automorphism: {auto_ok}/{len(pairs)}")
    out.append(f"  homomorphism: {hom_ok}/{len(pairs)}")
    out.extend(failures)
    ok = not failures
    out.append("result: " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


def cmd_factorize(args, out) -> int:
    spec = _ring(args.ring)
    if spec != RingSpec.const():
        raise UsageError("factorize is implemented over the constant ring only")
    A, B = _pair(args, spec, checked=False)
    try:
        phi = theta_unchecked(A, B)
    except ValueError as err:
        raise UsageError(str(err)) from None
    try:
        p = factorize(phi)
    except ExtensionRequired as err:
        out.append(str(err))
        return 1
    except NotAnAutomorphismError as err:
        out.append(f"not factorizable: {err}")
        return 1
    out.append(f"A = {p.A}")
    out.append(f"B = {p.B}")
    out.append(f"round trip theta(A, B) = input: {_yes(theta(p) == phi)}")
    return 0


def cmd_kernel(args, out) -> int:
    spec = _ring(args.ring)
    w = kernel_witness(_pair(args, spec))
    if isinstance(w, InKernel):
        out.append(f"in kernel: A = B = {w.a} I")
    else:
        out.append(f"not in kernel: theta moves {w.witness}")
    return 0


def cmd_escape(args, out) -> int:
    table = load_algebra(args.algebra)
    spec = _ring(args.ring)
    if not spec.is_domain():
        raise UsageError("escape-search needs an integral domain (const, laurent or puiseux:D)")
    report = bounded_escape_search(table, spec, dmax=args.dmax)
    out.append(report.summary(args.ascii))
    return 0


def cmd_demo(args, out) -> int:
    if args.name != "k2-phi":
        raise UsageError(f"unknown demo {args.name!r}; available: k2-phi")
    phi = k2_phi()
    out.append("phi on the alternate K2 realization (over const):")
    out.extend(_images(phi, args.ascii))
    report = is_conf_automorphism(phi, inverse_witness=phi)
    square = is_identity(compose(phi, phi))
    stable = is_V_stable(phi)
    out.append(f"conformal automorphism (inverse witness phi): {_yes(report.verdict)}")
    out.append(f"phi o phi = id: {_yes(square)}")
    out.append(f"V-stable: {_yes(stable)}")
    ok = report.verdict is True and square and not stable
    out.append("result: " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ascii", action="store_true", help="write (x) instead of the tensor sign")
    common.add_argument("--ring", default="const", help="const, laurent, puiseux:D or trunc:N")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="confalg",
                                     description="Exact computations with Lie conformal superalgebras.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("check", parents=[common], help="check the axioms CS0-CS3")
    p.add_argument("algebra")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--max-dpow", type=int, default=2)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bracket", parents=[common], help="lambda-bracket of two elements")
    p.add_argument("algebra")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_bracket)

    for name, func, help_text in (("theta", cmd_theta, "print theta_(A,B)"),
                                  ("kernel", cmd_kernel, "decide whether theta_(A,B) is the identity"),
                                  ("factorize", cmd_factorize, "recover (A, B) from theta_(A,B)")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("A", help="matrix [[a,b],[c,d]]")
        p.add_argument("B", help="matrix [[a,b],[c,d]]")
        p.set_defaults(func=func)

    p = sub.add_parser("verify-theta", parents=[common],
                       help="check that theta gives automorphisms and a homomorphism")
    p.add_argument("A", nargs="?")
    p.add_argument("B", nargs="?")
    p.add_argument("--count", type=int, default=20)
    p.set_defaults(func=cmd_verify_theta)

    p = sub.add_parser("escape-search", parents=[common],
                       help="bounded search for automorphisms that are not V-stable")
    p.add_argument("algebra")
    p.add_argument("--dmax", type=int, default=1)
    p.set_defaults(func=cmd_escape)

    p = sub.add_parser("demo", parents=[common], help="demonstration scenarios")
    p.add_argument("name", help="k2-phi")
    p.set_defaults(func=cmd_demo)
    return parser


def run(argv: list[str]) -> tuple[int, str, str]:
    """Run one command; returns ``(exit status, stdout text, stderr text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    if args.command == "verify-theta" and (args.A is None) != (args.B is None):
        return 2, "", "error: give both A and B or neither\n"
    out: list[str] = []
    try:
        code = args.func(args, out)
    except UsageError as err:
        return 2, "", f"error: {err}\n"
    text = "\n".join(out) + "\n" if out else ""
    return code, text, ""


def main(argv: list[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        try:
            stream.reconfigure(encoding="utf-8")
        except (AttributeError, ValueError):
            pass
    code, text, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
