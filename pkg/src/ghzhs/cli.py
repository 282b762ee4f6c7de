"""Command line interface.

Exit codes: 0 success/pass, 1 verification failed, 2 usage or parse error,
3 invariant violated, 4 I/O error.  Tables are comma separated with a header
row and LF line endings; nothing time-dependent is printed.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import fileformats as ff
from .errors import AddressingError, GhzError, ParameterError, ValidationError
from .hsdecomp import decompose, reconstruct
from .interferometer import (
    OUTCOME_LABELS,
    PhaseSettings,
    correlation,
    correlation_closed_form,
    empirical_correlation,
    evolve_ghz,
    ghsz_contradiction_report,
    sample_outcomes,
)
from .locality import locality_sweep

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_IO = 4


class UsageError(GhzError):
    pass


class _OutputError(GhzError):
    pass


def _read(path: str) -> str:
    try:
        return ff.read_text(path)
    except OSError as exc:
        raise _OutputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(path: str | None, text: str, stdout) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [",".join(header)] + [",".join(r) for r in rows]
    return "\n".join(lines) + "\n"


def _block_summary(coeffs) -> str:
    lines = []
    for name, block in coeffs.blocks().items():
        if name == "unit":
            lines.append(f"unit = {ff.fmt(coeffs.unit)}")
            continue
        nz = [
            f"{name}[{','.join(str(i + 1) for i in idx)}]={ff.fmt(v)}"
            for idx, v in np.ndenumerate(block)
            if abs(v) > 1e-12
        ]
        lines.append(f"{name}: " + (" ".join(nz) if nz else "0"))
    return "\n".join(lines) + "\n"


def cmd_decompose(args, out, err) -> int:
    rho = ff.parse_density(_read(args.input))
    coeffs = decompose(rho)
    _write(args.output, ff.format_coefficients(coeffs), out)
    if coeffs.n_parties == 3:
        # keep stdout parseable when the records go there
        (err if args.output in (None, "-") else out).write(_block_summary(coeffs))
    return EXIT_OK


def cmd_reconstruct(args, out, err) -> int:
    coeffs = ff.parse_coefficients(_read(args.input))
    rho = reconstruct(coeffs, check_psd=True)
    _write(args.output, ff.format_density(rho), out)
    return EXIT_OK


def cmd_validate(args, out, err) -> int:
    rho = ff.parse_density(_read(args.input))
    out.write(f"valid density matrix, n_parties={rho.n_parties}, purity={ff.fmt(rho.purity())}\n")
    return EXIT_OK


def scan_rows(points: int) -> list[tuple[float, float, float, float, float, float]]:
    if points < 2:
        raise UsageError(f"--points must be >= 2, got {points}")
    grid = np.linspace(0.0, 2 * math.pi, points)
    triples = [(g, 0.0, 0.0) for g in grid] + [(g / 3, g / 3, g / 3) for g in grid]
    rows = []
    for t in triples:
        s = PhaseSettings(*t)
        e = correlation(s)
        cf = correlation_closed_form(s)
        rows.append((*t, e, cf, abs(e - cf)))
    return rows


def cmd_scan(args, out, err) -> int:
    rows = scan_rows(args.points)
    text = _table(
        ("phi1", "phi2", "phi3", "E", "closed_form", "abs_error"),
        [tuple(ff.fmt(x) for x in r) for r in rows],
    )
    _write(args.output, text, out)
    return EXIT_OK


def cmd_ghsz(args, out, err) -> int:
    rep = ghsz_contradiction_report()
    rows = [
        (str(i + 1), *(f"{phi:.6f}" for phi in s.as_tuple()), f"{e + 0.0:.6f}")
        for i, (s, e) in enumerate(zip(rep.settings, rep.correlations))
    ]
    text = _table(("setting", "phi1", "phi2", "phi3", "E"), rows)
    text += "\n" + _table(
        ("quantity", "value"),
        [
            ("product", f"{rep.product + 0.0:.6f}"),
            ("local_realist_fourth", f"{rep.local_realist_fourth:+d}"),
            ("max_lhv_constraints_satisfied", f"{rep.max_constraints_satisfied}/4"),
            ("flag", rep.flag),
        ],
    )
    out.write(text)
    return EXIT_OK


def cmd_verify_locality(args, out, err) -> int:
    rho = ff.parse_density(_read(args.input))
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    if not args.tol > 0:
        raise UsageError(f"--tol must be positive, got {args.tol}")
    trials = 1 if args.identity else args.trials
    rep = locality_sweep(rho, args.party, trials, seed=args.seed, tol=args.tol, identity=args.identity)
    text = _table(
        ("quantity", "value"),
        [
            ("party", args.party),
            ("trials", str(rep.n_trials)),
            ("seed", str(rep.seed)),
            ("tol", f"{rep.tol:g}"),
            ("worst_unchanged_deviation", f"{rep.worst_unchanged:.3e}"),
            ("worst_marginal_deviation", f"{rep.worst_marginal:.3e}"),
            ("worst_changed_deviation", f"{rep.worst_changed:.3e}"),
            ("failed_trials", str(rep.failures)),
            ("verdict", rep.verdict),
        ],
    )
    out.write(text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_sample(args, out, err) -> int:
    if args.count < 1:
        raise UsageError(f"--count must be >= 1, got {args.count}")
    settings = PhaseSettings(args.phi1, args.phi2, args.phi3)
    counts = sample_outcomes(settings, args.count, args.seed)
    probs = evolve_ghz(settings).probabilities
    e_emp = empirical_correlation(counts)
    e_exact = correlation(settings)
    se = math.sqrt(max(1.0 - e_exact**2, 0.0) / args.count)
    if se > 0:
        z = (e_emp - e_exact) / se
    else:
        z = 0.0 if abs(e_emp - e_exact) < 1e-12 else math.inf
    text = _table(
        ("outcome", "detectors", "count", "probability"),
        [(str(i), OUTCOME_LABELS[i], str(int(c)), ff.fmt(p)) for i, (c, p) in enumerate(zip(counts, probs))],
    )
    text += "\n" + _table(
        ("quantity", "value"),
        [
            ("count", str(args.count)),
            ("seed", str(args.seed)),
            ("empirical_E", ff.fmt(e_emp)),
            ("exact_E", ff.fmt(e_exact)),
            ("z_score", ff.fmt(z)),
        ],
    )
    out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghzhs",
        description="Pauli-basis analysis of GHZ states and the three-arm interferometer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    inp_help = "input file, or fixture:<name> for a shipped fixture (ghz.dm, mixed.dm, product000.dm)"

    p = sub.add_parser("decompose", help="density matrix file -> all 4^n Pauli coefficients")
    p.add_argument("--input", required=True, help=inp_help)
    p.add_argument("--output", help="coefficient file (default: stdout)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="coefficient file -> density matrix file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="density matrix file (default: stdout)")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("validate", help="check a density matrix file against its invariants")
    p.add_argument("--input", required=True, help=inp_help)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("scan", help="tabulate E against sin(phi1+phi2+phi3)")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--output", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("ghsz", help="four-setting local-realism contradiction")
    p.set_defaults(func=cmd_ghsz)

    p = sub.add_parser("verify-locality", help="random local unitaries on one party")
    p.add_argument("--input", default="fixture:ghz.dm", help=inp_help)
    p.add_argument("--party", choices=("a", "b", "c"), default="a")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--identity", action="store_true", help="single trial with the identity unitary")
    p.set_defaults(func=cmd_verify_locality)

    p = sub.add_parser("sample", help="Monte Carlo detector counts")
    p.add_argument("--phi1", type=float, default=0.0)
    p.add_argument("--phi2", type=float, default=0.0)
    p.add_argument("--phi3", type=float, default=0.0)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except (UsageError, ParameterError) as exc:
        err.write(f"usage error: {exc}\n")
        parser.print_usage(err)
        return EXIT_USAGE
    except ff.ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except (ValidationError, AddressingError) as exc:
        name = getattr(exc, "invariant", "addressing")
        err.write(f"validation error [{name}]: {exc}\n")
        return EXIT_INVALID
    except _OutputError as exc:
        err.write(f"I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
