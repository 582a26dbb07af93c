"""Command-line front end: run the family verification pipelines and print
eigenspace decompositions.

Two subcommands:

* ``verify`` runs the full report for the selected families over the
  selected primes and writes a deterministic JSON document;
* ``decompose`` prints the character/dimension table of a section space
  and, in degree 3, the invariant basis.

Exit status: 0 when every check passes, 1 when a check fails, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .campedelli import (FAMILY_LABELS, SCHEMA_VERSION, decompose_sections,
                         family_report, get_family)

DEFAULT_PRIMES = (19, 37, 73)


@dataclass
class RunConfig:
    """Validated settings for a verification run."""

    families: tuple = FAMILY_LABELS
    primes: tuple = DEFAULT_PRIMES
    seed: int = 0
    out: str | None = None
    quiet: bool = False

    def validate(self):
        if not self.families:
            raise ConfigError("no family selected")
        for lab in self.families:
            if lab not in FAMILY_LABELS:
                raise ConfigError(f"unknown family {lab!r}")
        if not self.primes:
            raise ConfigError("no prime selected")
        for p in self.primes:
            if not _is_prime(p):
                raise ConfigError(f"{p} is not prime")
            if p % 9 != 1:
                raise ConfigError(f"{p} is not congruent to 1 mod 9")


class ConfigError(ValueError):
    """A command-line setting violates the run preconditions."""


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def render_report(config: RunConfig):
    """Aggregate document for the selected families; deterministic for a
    fixed configuration."""
    reports = [family_report(lab, primes=config.primes, seed=config.seed)
               for lab in FAMILY_LABELS if lab in config.families]
    return {
        "schema_version": SCHEMA_VERSION,
        "primes": list(config.primes),
        "seed": config.seed,
        "families": reports,
        "all_passed": all(r["all_passed"] for r in reports),
    }


def report_bytes(doc) -> bytes:
    """Canonical JSON serialization (sorted keys, fixed separators)."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True).encode("ascii") + b"\n"


def cmd_verify(config: RunConfig) -> int:
    try:
        config.validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = render_report(config)
    if config.out:
        with open(config.out, "wb") as fh:
            fh.write(report_bytes(doc))
    if not config.quiet:
        for rep in doc["families"]:
            head = "PASS" if rep["all_passed"] else "FAIL"
            print(f"{head} family {rep['family']}")
            for chk in rep["checks"]:
                print(f"  {chk['status']:>4}  {chk['name']}: {chk['claim']}")
        print("all checks passed" if doc["all_passed"]
              else "failures present")
    return 0 if doc["all_passed"] else 1


def cmd_decompose(label: str, degree: int) -> int:
    fam = get_family(label)
    eig = decompose_sections(fam, degree)
    print(f"family {label}, degree {degree} sections")
    for chi in sorted(eig, key=lambda c: c.label()):
        print(f"  {chi.label():>12}  dim {eig[chi].dimension}")
    if degree == 3:
        triv = eig[fam.group.trivial_character()]
        print("invariant basis:")
        for b in triv.basis:
            print(f"  {b}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="campedelli",
        description="Exact verification of the three order-9 torsion "
                    "Campedelli families.")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run the family verification reports")
    pv.add_argument("--family", action="append", choices=FAMILY_LABELS,
                    help="family to verify (repeatable; default: all)")
    pv.add_argument("--prime", action="append", type=int, metavar="N",
                    help="reduction prime, must be 1 mod 9 "
                         "(repeatable; default: 19 37 73)")
    pv.add_argument("--seed", type=int, default=0,
                    help="seed for the sample member draw")
    pv.add_argument("--out", metavar="PATH",
                    help="write the JSON report to this path")
    pv.add_argument("--quiet", action="store_true",
                    help="suppress the summary table")

    pd = sub.add_parser("decompose",
                        help="print a character/dimension table")
    pd.add_argument("--family", choices=FAMILY_LABELS, required=True)
    pd.add_argument("--degree", type=int, choices=(1, 2, 3), required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        config = RunConfig(
            families=tuple(args.family) if args.family else FAMILY_LABELS,
            primes=tuple(args.prime) if args.prime else DEFAULT_PRIMES,
            seed=args.seed, out=args.out, quiet=args.quiet)
        return cmd_verify(config)
    return cmd_decompose(args.family, args.degree)


if __name__ == "__main__":
    sys.exit(main())
