"""Command-line front end.

Exit codes: 0 success, 1 mathematical negative (not Keller, no inverse
within the bound, invalid certificate), 2 input or usage error, 3 a
theorem contradiction.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from kellermap.druzkowski import GENERATORS, DruzkowskiSpec, corpus, expand, gen_triangular_druzkowski
from kellermap.errors import InputError, MathNegative, TheoremContradiction
from kellermap.poly import format_polynomial, parse_rational
from kellermap.polymap import (
    PolyMap,
    conjugate_normalize,
    invert_fixed_point,
    invert_theorem3,
    is_keller,
    line_injectivity_certificate,
)
from kellermap.suite import run_suite

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CONTRADICTION = 0, 1, 2, 3


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_map(path: str) -> PolyMap:
    """Read a map file, or a Druzkowski spec file (expanded on the fly)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    first = next((ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")), "")
    if first.startswith("d:"):
        return expand(DruzkowskiSpec.from_text(text))
    return PolyMap.from_text(text)


def parse_point(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(tok) for tok in text.split(","))


def cmd_check_keller(args) -> int:
    keller, det = is_keller(read_map(args.map))
    print(f"keller: {str(keller).lower()}")
    print(f"det: {format_polynomial(det)}")
    return EXIT_OK if keller else EXIT_NEGATIVE


def cmd_invert(args) -> int:
    f = read_map(args.map)
    max_degree = args.max_degree
    if max_degree is None:
        max_degree = max(f.degree(), 1) ** (f.nvars - 1)
    result = invert_fixed_point(f, max_degree)
    _emit(args, result.inverse_map.to_text())
    return EXIT_OK


def cmd_invert_t3(args) -> int:
    result, report = invert_theorem3(read_map(args.map))
    _emit(args, result.inverse_map.to_text())
    if args.out is None:
        print()
    print(report.to_text(), end="")
    return EXIT_OK


def cmd_bound(args) -> int:
    _, report = invert_theorem3(read_map(args.map))
    print(report.to_text(), end="")
    return EXIT_OK


def cmd_conjugate(args) -> int:
    conj = conjugate_normalize(read_map(args.map))
    _emit(args, conj.to_text())
    return EXIT_OK


def cmd_line_cert(args) -> int:
    f = read_map(args.map)
    cert = line_injectivity_certificate(f, parse_point(args.point))
    print(cert.to_text(), end="")
    return EXIT_OK if cert.valid else EXIT_NEGATIVE


def cmd_expand(args) -> int:
    try:
        text = Path(args.spec).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.spec}: {exc.strerror}") from None
    _emit(args, expand(DruzkowskiSpec.from_text(text)).to_text())
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind not in GENERATORS:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {', '.join(GENERATORS)}")
    if args.n < 1 or args.d < 2 or args.count < 0:
        raise UsageError("need -n >= 1, -d >= 2 and --count >= 0")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, entry in enumerate(corpus(args.kind, args.n, args.d, args.seed, args.count)):
        if args.kind == "triangular-druzkowski":
            text = gen_triangular_druzkowski(args.n, args.d, entry.seed).to_text()
        else:
            text = entry.map.to_text()
        path = out / f"{args.kind}-n{args.n}-d{args.d}-s{args.seed}-{i}.map"
        path.write_text(text)
        print(path)
    return EXIT_OK


def cmd_verify_suite(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be positive")
    results = run_suite(args.seed, args.count)
    for r in sorted(results, key=lambda r: r.name):
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"suite: {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CONTRADICTION


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        print(text, end="")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kellermap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("check-keller", help="is det JF a nonzero constant")
    p.add_argument("map")
    p.set_defaults(func=cmd_check_keller)

    p = sub.add_parser("invert", help="fixed-point inversion with degree truncation")
    p.add_argument("map")
    p.add_argument("--max-degree", type=int, default=None,
                   help="truncation degree (default deg(F)^(n-1))")
    p.add_argument("--out", default=None, help="write the inverse map here")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("invert-t3", help="reduced r-variable inversion with a bound report")
    p.add_argument("map")
    p.add_argument("--out", default=None, help="write the inverse map here")
    p.set_defaults(func=cmd_invert_t3)

    p = sub.add_parser("bound", help="inverse-degree bound report")
    p.add_argument("map")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("conjugate", help="kernel-normalizing linear conjugation")
    p.add_argument("map")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("line-cert", help="line-injectivity certificate at a point")
    p.add_argument("map")
    p.add_argument("--point", required=True, help="comma-separated rationals, e.g. 1,-2/3")
    p.set_defaults(func=cmd_line_cert)

    p = sub.add_parser("expand-druzkowski", help="spec file -> map file")
    p.add_argument("spec")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("gen", help="write a deterministic corpus")
    p.add_argument("kind", help=" or ".join(GENERATORS))
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify-suite", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50, help="maps per family")
    p.set_defaults(func=cmd_verify_suite)
    return parser


def _attach_point(argv: list[str]) -> list[str]:
    # argparse would read a leading "-2/3" as a flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--point":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--point={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_point(argv))
    try:
        return args.func(args)
    except TheoremContradiction as exc:
        print(f"THEOREM CONTRADICTION: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except MathNegative as exc:
        print(f"negative: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
