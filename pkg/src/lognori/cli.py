"""``verify <suite> [--p LIST] [--max-n N] [--q LIST] [--seed S] [--json PATH] [--caps FILE]``

Exit codes: 0 all pass, 1 some case failed, 2 bad configuration,
3 some case hit a resource cap and ``--unknown-fatal`` was given.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .suites import SUITES, Caps, ConfigError, SuiteConfig, load_caps, run_suite

EXIT_CONFIG = 2


def _int_list(text: str) -> frozenset[int]:
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="verify", description="Run a verification suite over a (p, n, q) grid.")
    ap.add_argument("suite", choices=sorted(SUITES))
    ap.add_argument("--p", type=_int_list, default=frozenset({2, 3}), metavar="LIST", help="primes, e.g. 2,3")
    ap.add_argument("--max-n", type=int, default=2, metavar="N")
    ap.add_argument("--q", type=_int_list, default=None, metavar="LIST", help="field sizes (default p and p^2)")
    ap.add_argument("--seed", type=int, default=0, metavar="S")
    ap.add_argument("--json", type=Path, default=None, metavar="PATH", help="write the JSON report here ('-' for stdout)")
    ap.add_argument("--caps", type=Path, default=None, metavar="FILE", help="JSON object overriding resource caps")
    ap.add_argument("--unknown-fatal", action="store_true", help="exit 3 when a case is unknown")
    ap.add_argument("--quiet", action="store_true", help="suppress the text report")
    return ap


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    caps = load_caps(args.caps) if args.caps else Caps()
    return SuiteConfig(
        primes=args.p,
        max_n=args.max_n,
        field_sizes=args.q,
        caps=caps,
        seed=args.seed,
        output="json" if args.json else "text",
        unknown_fatal=args.unknown_fatal,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as e:
        print(f"verify: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    report = run_suite(cfg, args.suite)
    if args.json is not None:
        if str(args.json) == "-":
            sys.stdout.write(report.to_json())
        else:
            args.json.write_text(report.to_json())
    if not args.quiet and str(args.json) != "-":
        sys.stdout.write(report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
