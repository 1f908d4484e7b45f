"""Command-line entry point for the report suites.

``conecorr SUITE --spec FILE [--seed N] [--steps K] [--tol X] [--out FILE]
[--figures DIR]`` runs one suite against a JSON run spec and writes a CSV
report (stdout by default).  Exit codes: 0 success, 1 a checked property
failed, 2 input problems, 3 a resource cap was hit.  Reports are
deterministic: the same spec and seed produce byte-identical CSV.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .cone import ConeError
from .geometry import GeometryError
from ._minnorm import ConvergenceError
from .harness import (
    EXIT_INPUT,
    EXIT_RESOURCE,
    SpecFileError,
    SuiteResult,
    apply_overrides,
    load_spec,
    run_check,
    run_lemma1,
    run_probe,
    run_radstrom,
    run_selections,
)
from .selection import SelectionCapError, SelectionError

RUNNERS = {
    "check": run_check,
    "probe": run_probe,
    "selections": run_selections,
    "radstrom": run_radstrom,
    "lemma1": run_lemma1,
}

SUITE_HELP = {
    "check": "superadditivity, homogeneity, and envelope checks on samples",
    "probe": "continuity probes along configured directions",
    "selections": "enumerate and certify extreme linear selections",
    "radstrom": "difference-pair space axioms and norms",
    "lemma1": "uniform boundedness of the reciprocal-scaled family",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conecorr",
        description="exact property reports for polytope-valued maps on cones",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, runner in RUNNERS.items():
        p = sub.add_parser(name, help=SUITE_HELP[name])
        p.add_argument("--spec", required=True, help="JSON run-spec file")
        p.add_argument("--seed", type=int, default=None, help="override the sample seed")
        p.add_argument(
            "--steps", type=int, default=None, help="override probe step counts"
        )
        p.add_argument(
            "--tol", type=float, default=None, help="override the float tolerance"
        )
        p.add_argument("--out", default=None, help="write the CSV report here")
        p.add_argument(
            "--figures",
            default=None,
            metavar="DIR",
            help="also render figures (PNG) into this directory",
        )
    return parser


def _write_csv(result: SuiteResult, out_path: str | None) -> None:
    if out_path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(result.columns)
        writer.writerows(result.rows)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(result.columns)
        writer.writerows(result.rows)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        spec = load_spec(args.spec)
        spec = apply_overrides(spec, seed=args.seed, steps=args.steps, tol=args.tol)
        result = RUNNERS[args.command](spec)
    except SpecFileError as exc:
        print(f"conecorr: spec error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SelectionCapError as exc:
        print(f"conecorr: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConvergenceError as exc:
        print(f"conecorr: solver cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConeError, GeometryError, SelectionError) as exc:
        print(f"conecorr: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        _write_csv(result, args.out)
        if args.figures:
            from .figures import render_suite

            stem = None
            if args.out:
                import os

                stem = os.path.splitext(os.path.basename(args.out))[0]
            for path in render_suite(result, args.figures, stem=stem):
                print(f"conecorr: wrote {path}", file=sys.stderr)
    except OSError as exc:
        print(f"conecorr: output error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if result.summary:
        print(f"conecorr: {result.suite}: {result.summary}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
