"""Command-line front end.

Every subcommand builds a :class:`RunReport` (parameters, a list of named
checks with expected/actual/residual, and wall time) and exits 0 only when
every check passed.  Failing check names go to stderr.  Randomized checks
take ``--seed`` (falling back to the SPINDEQ_SEED environment variable) and
are deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__, cpi, orbit, quantum, suite, superfield
from .errors import SpindeqError
from .suite import CheckResult
from .symbols import format_poly

SCHEMA_VERSION = "spindeq.report/1"


@dataclass
class RunReport:
    subcommand: str
    parameters: dict
    checks: list[dict]
    timing_seconds: float
    extras: dict = field(default_factory=dict)
    schema: str = SCHEMA_VERSION

    @property
    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def failures(self) -> list[str]:
        return [c["name"] for c in self.checks if not c["passed"]]

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "checks": self.checks,
            "timing_seconds": self.timing_seconds,
            "extras": self.extras,
            "all_passed": self.all_passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_json_default)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        data = json.loads(text)
        return cls(
            subcommand=data["subcommand"],
            parameters=data["parameters"],
            checks=data["checks"],
            timing_seconds=data["timing_seconds"],
            extras=data.get("extras", {}),
            schema=data["schema"],
        )

    def write(self, path: str) -> None:
        with open(path, "w") as handle:
            handle.write(self.to_json() + "\n")


def _json_default(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return str(value)


def _check_dicts(results: list[CheckResult]) -> list[dict]:
    return [r.to_dict() for r in results]


def _seed_from(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("SPINDEQ_SEED")
    return int(env) if env else 0


# -- subcommands --------------------------------------------------------------------


def _cmd_verify_dequantization(args) -> RunReport:
    start = time.perf_counter()
    case = superfield.get_case(args.case)
    ctx = case.context
    results: list[CheckResult] = []
    extras: dict = {}
    if args.lagrangian:
        lagrangian = ctx.parse(args.lagrangian)
        hamiltonian = None
    else:
        if args.hamiltonian:
            hamiltonian = ctx.parse(args.hamiltonian)
        else:
            builtin = args.builtin or next(iter(superfield.builtin_hamiltonians(case)))
            hamiltonian = superfield.builtin_hamiltonian(case, builtin)
        lagrangian = superfield.quantum_lagrangian(case, hamiltonian, gamma=args.gamma)
    cpi_l, surface = superfield.dequantize(lagrangian, case)
    raw = cpi_l + surface
    extras["raw_expansion"] = format_poly(raw)
    extras["cpi_lagrangian"] = format_poly(cpi_l)
    extras["surface_term"] = format_poly(surface)
    decomposition = raw - cpi_l - surface
    results.append(
        CheckResult(
            "decomposition-exact",
            "0",
            format_poly(decomposition),
            0 if decomposition.is_zero() else format_poly(decomposition),
            decomposition.is_zero(),
        )
    )
    if hamiltonian is not None:
        expected = cpi.cpi_lagrangian(case, hamiltonian)
        diff = cpi_l - expected
        results.append(
            CheckResult(
                "matches-cpi-lagrangian",
                format_poly(expected),
                format_poly(cpi_l),
                0 if diff.is_zero() else format_poly(diff),
                diff.is_zero(),
            )
        )
        extras["residual"] = "0" if diff.is_zero() else format_poly(diff)
    return RunReport(
        "verify-dequantization",
        {
            "case": case.name,
            "hamiltonian": args.hamiltonian,
            "builtin": args.builtin,
            "lagrangian": args.lagrangian,
            "gamma": args.gamma,
        },
        _check_dicts(results),
        time.perf_counter() - start,
        extras,
    )


def _cmd_propagate_quantum(args) -> RunReport:
    start = time.perf_counter()
    b = quantum.MagneticField.from_text(args.b, mu_b=args.mu_b)
    slices = [int(x) for x in args.slices.split(",") if x.strip()]
    if not slices:
        raise ValueError("need at least one slice count")
    oracle = quantum.magnetic_evolution(b, args.t)
    rows = []
    for n in slices:
        t0 = time.perf_counter()
        approx = quantum.sliced_propagator(b, args.t, n)
        wall = time.perf_counter() - t0
        err = float(abs(approx - oracle).max())
        rows.append((n, err, wall))
    if args.out:
        with open(args.out, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["n", "max_error_vs_oracle", "wall_time"])
            writer.writerows(rows)
    results = []
    ordered = sorted(rows)
    for n, err, _ in ordered:
        results.append(
            CheckResult(f"slice-error-n={n}", 0.0, err, err, err < 1.0, tolerance=1.0)
        )
    decreasing = all(a[1] >= b_[1] for a, b_ in zip(ordered, ordered[1:]))
    results.append(
        CheckResult(
            "error-decreases-with-slices",
            "monotone",
            [e for _, e, _ in ordered],
            0 if decreasing else 1,
            decreasing,
        )
    )
    return RunReport(
        "propagate-quantum",
        {"b": args.b, "mu_b": args.mu_b, "t": args.t, "slices": slices, "out": args.out},
        _check_dicts(results),
        time.perf_counter() - start,
        {"rows": rows},
    )


def _cmd_propagate_classical(args) -> RunReport:
    start = time.perf_counter()
    case = superfield.get_case(args.case)
    supplied = {"muB": args.mu_b, "w": args.omega, "alpha": 1}
    coefficients = {
        name: value for name, value in supplied.items() if case.context.declared(name)
    }
    hamiltonian = None
    if args.hamiltonian:
        hamiltonian = case.context.parse(args.hamiltonian)
    spec = cpi.CpiSpec(
        case.name,
        hamiltonian=hamiltonian,
        coefficients=coefficients,
        truncation=args.truncation,
    )
    report = cpi.characteristics_check(spec, t=args.t, seed=_seed_from(args))
    extras = {}
    if case.name != "coadjoint":
        operator = cpi.build_cpi_hamiltonian(spec)
        extras["operator"] = operator.description
        extras["spectrum_real"] = operator.spectrum_is_real()
    results = [
        CheckResult(
            c["name"], c["expected"], c["actual"], c["residual"], c["passed"], 1e-9
        )
        for c in report["checks"]
    ]
    out = RunReport(
        "propagate-classical",
        {
            "case": case.name,
            "omega": args.omega,
            "muB": args.mu_b,
            "t": args.t,
            "truncation": args.truncation,
            "hamiltonian": args.hamiltonian,
        },
        _check_dicts(results),
        time.perf_counter() - start,
        extras,
    )
    if args.out:
        out.write(args.out)
    return out


def _cmd_precession(args) -> RunReport:
    start = time.perf_counter()
    state = orbit.OrbitState.on_constraint(args.theta0, args.phi0, args.lam)
    h_fun = orbit.total_hamiltonian(args.mu_b, args.b)
    rows = []
    steps = max(args.steps, 1)
    for k in range(steps + 1):
        t = args.t * k / steps
        s = orbit.classical_trajectory(state, args.mu_b, args.b, t)
        rows.append((t, s.theta, s.phi, s.height, h_fun(s)))
    if args.out:
        with open(args.out, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["t", "theta", "phi", "eta", "H"])
            writer.writerows(rows)
    r1, r2 = orbit.equation_residuals(state, args.mu_b, args.b)
    height_drift = max(abs(r[3] - rows[0][3]) for r in rows)
    energy_drift = max(abs(r[4] - rows[0][4]) for r in rows)
    results = [
        CheckResult("height-equation", 0.0, r1, abs(r1), abs(r1) == 0.0, 0.0),
        CheckResult("angle-equation", 0.0, r2, abs(r2), abs(r2) == 0.0, 0.0),
        CheckResult("height-conserved", 0.0, height_drift, height_drift, height_drift == 0.0, 0.0),
        CheckResult("energy-conserved", 0.0, energy_drift, energy_drift, energy_drift == 0.0, 0.0),
    ]
    return RunReport(
        "precession",
        {
            "theta0": args.theta0,
            "phi0": args.phi0,
            "muB": args.mu_b,
            "b": args.b,
            "t": args.t,
            "lam": args.lam,
            "steps": args.steps,
            "out": args.out,
        },
        _check_dicts(results),
        time.perf_counter() - start,
    )


def _cmd_check_dirac(args) -> RunReport:
    start = time.perf_counter()
    results = suite.check_dirac_brackets(samples=args.samples, seed=_seed_from(args))
    report = RunReport(
        "check-dirac",
        {"samples": args.samples, "seed": _seed_from(args)},
        _check_dicts(results),
        time.perf_counter() - start,
    )
    if args.out:
        report.write(args.out)
    return report


def _cmd_all(args) -> RunReport:
    start = time.perf_counter()
    results, timings = suite.run_all(seed=_seed_from(args))
    report = RunReport(
        "all",
        {"seed": _seed_from(args)},
        _check_dicts(results),
        time.perf_counter() - start,
        {"group_timings": timings},
    )
    if args.out:
        report.write(args.out)
    return report


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spindeq",
        description="Exact and numeric checks relating quantum and classical spin path integrals.",
    )
    parser.add_argument("--version", action="version", version=f"spindeq {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "verify-dequantization",
        help="map a Lagrangian through superfields and verify the split",
    )
    p.add_argument("--case", required=True, choices=superfield.CASES)
    p.add_argument("--hamiltonian", help="expression over the case's base fields")
    p.add_argument("--builtin", help="name of a stock Hamiltonian")
    p.add_argument("--lagrangian", help="full Lagrangian expression (overrides the rest)")
    p.add_argument("--gamma", action="store_true", help="include the symbolic one-form shift")
    p.add_argument("--report", dest="report_path", help="write the JSON report here")
    p.set_defaults(handler=_cmd_verify_dequantization)

    p = sub.add_parser("propagate-quantum", help="time-sliced spin propagator vs closed form")
    p.add_argument("--b", required=True, help="field components BX,BY,BZ")
    p.add_argument("--mu-b", type=float, default=1.0, dest="mu_b")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--slices", required=True, help="comma-separated slice counts")
    p.add_argument("--out", help="write a CSV of (n, max_error_vs_oracle, wall_time)")
    p.set_defaults(handler=_cmd_propagate_quantum)

    p = sub.add_parser("propagate-classical", help="CPI transport against classical flow")
    p.add_argument("--case", required=True, choices=superfield.CASES)
    p.add_argument("--omega", type=float, default=1.0, help="precession rate (odd case)")
    p.add_argument("--muB", type=float, default=1.0, dest="mu_b")
    p.add_argument("--t", type=float, default=0.7)
    p.add_argument("--truncation", type=int, default=4)
    p.add_argument("--hamiltonian", help="expression over the base fields (even case)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(handler=_cmd_propagate_classical)

    p = sub.add_parser("precession", help="closed-form precession table and conservation checks")
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--phi0", type=float, required=True)
    p.add_argument("--muB", type=float, required=True, dest="mu_b")
    p.add_argument("--b", type=float, default=1.0, help="field magnitude")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--lam", type=float, default=1.0, help="sphere radius")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--out", help="write a CSV of (t, theta, phi, eta, H)")
    p.set_defaults(handler=_cmd_precession)

    p = sub.add_parser("check-dirac", help="bracket identities at random states")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(handler=_cmd_check_dirac)

    p = sub.add_parser("all", help="run the complete check suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(handler=_cmd_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.handler(args)
    except SpindeqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report_path = getattr(args, "report_path", None)
    if report_path:
        report.write(report_path)
    for check in report.checks:
        status = "ok" if check["passed"] else "FAIL"
        residual = check["residual"]
        print(f"{status:4s} {check['name']} (residual {residual})")
    print(
        f"{report.subcommand}: {len(report.checks)} checks, "
        f"{len(report.failures())} failures, {report.timing_seconds:.2f}s"
    )
    failures = report.failures()
    if failures:
        print("failed checks: " + ", ".join(failures), file=sys.stderr)
        return 1
    return 0
