"""Command-line front end.

Exit codes are a contract: 0 success, 2 usage error, 3 numerical failure
(blow-up or Newton non-convergence), 4 verification failure.  CSV output is
locale-independent ('.' decimal separator, LF line endings, 17 significant
digits); verification output is a JSON array of report objects.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, integrators, model, poisson, symmetry, verify
from .integrators import BlowUpError, IntegratorId, NewtonError
from .model import InvariantId, SystemId

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4

_CSV_COLUMNS = {
    SystemId.MB5: (
        ("t", "x1", "y1", "x2", "y2", "z"),
        (InvariantId.H, InvariantId.C, InvariantId.J),
    ),
    SystemId.HAM6: (
        ("t", "q1", "q2", "q3", "p1", "p2", "p3"),
        (InvariantId.HTILDE, InvariantId.CTILDE, InvariantId.JTILDE),
    ),
    SystemId.EL6: (
        ("t", "q1", "q2", "q3", "qd1", "qd2", "qd3"),
        (InvariantId.L,),
    ),
}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbrwa",
        description="Simulate and symbolically certify the 5D Maxwell-Bloch (RWA) system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--system", required=True, choices=[s.value for s in SystemId])
        p.add_argument("--method", required=True, choices=[m.value for m in IntegratorId])
        p.add_argument("--init", required=True, help="comma-separated initial state")
        p.add_argument("--t-end", required=True, type=float)
        p.add_argument("--h", required=True, type=float)

    sim = sub.add_parser("simulate", help="integrate and emit a CSV trajectory")
    add_run_flags(sim)
    sim.add_argument("--out", help="write CSV here instead of stdout")
    sim.add_argument("--every", type=int, default=1, help="output decimation (default 1)")

    inv = sub.add_parser("invariants", help="integrate and report invariant drift as JSON")
    add_run_flags(inv)

    ver = sub.add_parser("verify", help="run symbolic verification suites")
    ver.add_argument(
        "--suite",
        default="all",
        choices=list(verify.SUITE_NAMES) + ["all"],
    )
    ver.add_argument(
        "--mutate-pi",
        metavar="I,J[,both]",
        help="testing aid: flip the sign of one Poisson tensor entry (1-based); "
        "append ',both' to flip the antisymmetric partner too",
    )
    ver.add_argument(
        "--mutate-family",
        metavar="SLOT:VAR",
        help="testing aid: flip one coefficient of the symmetry family, "
        "e.g. eta1:q2",
    )

    sub.add_parser("bracket-table", help="print the commutator tables as JSON")

    sol = sub.add_parser("solve-symmetries", help="solve the determining equations")
    sol.add_argument("--max-degree", type=int, default=2)

    sub.add_parser("version", help="print the version")
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _parse_init(parser: argparse.ArgumentParser, system: SystemId, text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        parser.error(f"--init must be a comma-separated list of numbers, got {text!r}")
    want = model.system_dim(system)
    if len(values) != want:
        parser.error(f"--init for {system.value} needs {want} components, got {len(values)}")
    return values


def _run_trajectory(args, parser) -> integrators.Trajectory:
    system = SystemId(args.system)
    method = IntegratorId(args.method)
    init = _parse_init(parser, system, args.init)
    if args.h <= 0:
        parser.error("--h must be positive")
    if args.t_end <= 0:
        parser.error("--t-end must be positive")
    return integrators.integrate(method, system, init, 0.0, args.t_end, args.h)


def cmd_simulate(args, parser) -> int:
    try:
        traj = _run_trajectory(args, parser)
    except (BlowUpError, NewtonError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.every < 1:
        parser.error("--every must be >= 1")
    state_cols, invariants = _CSV_COLUMNS[traj.system]
    inv_fns = [model.invariant_compiled(i) for i in invariants]
    header = ",".join(state_cols + tuple(i.value for i in invariants))
    lines = [header]
    n = len(traj)
    for k in range(n):
        if k % args.every and k != n - 1:
            continue
        row = [traj.times[k], *traj.states[k]] + [fn(traj.states[k]) for fn in inv_fns]
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_invariants(args, parser) -> int:
    try:
        traj = _run_trajectory(args, parser)
    except (BlowUpError, NewtonError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    report = integrators.drift_report(traj, integrators.system_invariants(traj.system))
    payload = {
        "system": traj.system.value,
        "steps": len(traj) - 1,
        "h": traj.h,
        "invariants": {
            inv.value: {
                "initial": d.initial,
                "max_abs_deviation": d.max_abs_deviation,
                "final_deviation": d.final_deviation,
            }
            for inv, d in report.drifts.items()
        },
    }
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    pi = None
    family = None
    if args.mutate_pi:
        parts = args.mutate_pi.split(",")
        if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "both"):
            parser.error("--mutate-pi expects I,J or I,J,both")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            parser.error("--mutate-pi indices must be integers")
        if not (1 <= i <= 5 and 1 <= j <= 5):
            parser.error("--mutate-pi indices must be in 1..5")
        pi = poisson.flip_entry_sign(
            poisson.mb_poisson_tensor(), i, j, antisymmetric=len(parts) == 3
        )
    if args.mutate_family:
        try:
            slot, var = args.mutate_family.split(":")
            family = symmetry.flip_family_coefficient(
                symmetry.symbolic_family_field(), slot, var
            )
        except (ValueError, KeyError):
            parser.error("--mutate-family expects SLOT:VAR, e.g. eta1:q2")
    reports = verify.run_suite(args.suite, pi=pi, family=family)
    json.dump([r.to_dict() for r in reports], sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


def cmd_bracket_table(args, parser) -> int:
    def table_json(table):
        return {f"{i},{j}": [str(c) for c in coeffs] for (i, j), coeffs in table.items()}

    payload = {
        "phase-space-algebra": table_json(poisson.matrix_commutator_table(poisson.E_BASIS)),
        "symmetry-matrix-algebra": table_json(poisson.matrix_commutator_table(poisson.A_BASIS)),
        "symmetry-point-fields": table_json(
            verify.point_field_commutator_table(list(symmetry.symmetry_basis()))
        ),
    }
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_solve_symmetries(args, parser) -> int:
    if args.max_degree < 1:
        parser.error("--max-degree must be >= 1")
    basis = symmetry.solve_determining(args.max_degree)
    reference = symmetry.symmetry_basis()
    matches = len(basis) == 4 and symmetry.spans_match(
        basis, reference, args.max_degree
    )
    payload = {
        "max_degree": args.max_degree,
        "dimension": len(basis),
        "basis": [
            {
                "xi": str(u.xi),
                "eta1": str(u.eta[0]),
                "eta2": str(u.eta[1]),
                "eta3": str(u.eta[2]),
            }
            for u in basis
        ],
        "matches_reference_family": matches,
    }
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK if matches else EXIT_VERIFY


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "invariants": cmd_invariants,
        "verify": cmd_verify,
        "bracket-table": cmd_bracket_table,
        "solve-symmetries": cmd_solve_symmetries,
    }
    if args.command == "version":
        print(__version__)
        return EXIT_OK
    return handlers[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
