"""Command-line interface: certify, analyze, simulate, selftest.

System files are JSON with schema_version "1":

    {"schema_version": "1",
     "systems": {"plant": {"A": [[...]], "B": [[...]], "C": [[...]],
                           "D": [[...]], "label": "optional"}}}

Reports are JSON written to stdout (or --out) with fixed field order and
17-significant-digit floats, so identical inputs produce byte-identical
output; NaN/inf are emitted as null.  Exit codes partition outcomes:
0 success, 1 property or hypothesis failure, 2 input parse failure,
3 usage or dimension failure.
"""

from __future__ import annotations

import argparse
import enum
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .exceptions import DimensionError, FeedthroughError, NIStabError
from .interconnect import Stability, analyze, closed_loop
from .linalg import DEFAULT_TOL
from .lyapunov import block_gram, dissipation_integral_check, lyapunov_derivative, make_state
from .nicert import (
    FrequencyGrid,
    FrequencyReport,
    NICertificate,
    PositiveRealReport,
    freq_ni_test,
    freq_sni_test,
    lmi_ni_certificate,
    positive_real_check,
    sni_rank_condition,
    w_transfer_zero_check,
)
from .selftest import run_all
from .sim import simulate, trace_to_csv, v_monotone
from .statespace import TOL_AXIS, TOL_POLE, StateSpace

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_USAGE = 3

NOTATION_WARNINGS = [
    {
        "code": "factor_sign_convention",
        "message": "certificates use A@Y + Y@A.T == -L.T@L (negative-semidefinite "
                   "reading); formulations with the opposite sign for L.T@L are "
                   "normalized to this convention",
    },
    {
        "code": "controller_feedthrough_hypothesis",
        "message": "the feedthrough positivity hypothesis is implemented as "
                   "H(inf) = D2 >= 0; statements written in terms of an "
                   "undefined N(inf) are read the same way",
    },
]


# ---------------------------------------------------------------------------
# deterministic JSON


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        return "null"
    return f"{x:.17g}"


def dumps_canonical(obj, indent: int = 0) -> str:
    """JSON with insertion-ordered keys and fixed float formatting."""
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, enum.Enum):
        return dumps_canonical(obj.value, indent)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps_canonical({"re": float(obj.real), "im": float(obj.imag)}, indent)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, np.ndarray):
        return dumps_canonical(obj.tolist(), indent)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad_in}{json.dumps(str(k))}: {dumps_canonical(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rendered = [dumps_canonical(v, indent + 1) for v in obj]
        if all(len(r) < 24 and "\n" not in r for r in rendered):
            return "[" + ", ".join(rendered) + "]"
        return "[\n" + ",\n".join(pad_in + r for r in rendered) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


# ---------------------------------------------------------------------------
# system files


def load_system_file(path: str) -> tuple[dict[str, StateSpace], str]:
    """Parse a schema-version-1 system file; returns systems and the file digest."""
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    data = json.loads(raw.decode("utf-8"))
    if not isinstance(data, dict) or str(data.get("schema_version")) != "1":
        raise ValueError("unrecognized schema_version (expected \"1\")")
    systems = {}
    for name, entry in data.get("systems", {}).items():
        systems[name] = StateSpace(
            np.array(entry["A"], dtype=float),
            np.array(entry["B"], dtype=float),
            np.array(entry["C"], dtype=float),
            np.array(entry["D"], dtype=float),
            label=str(entry.get("label", name)),
        )
    if not systems:
        raise ValueError("system file contains no systems")
    return systems, digest


# ---------------------------------------------------------------------------
# report fragments


def _grid_dict(grid: FrequencyGrid) -> dict:
    return {
        "omega_min": grid.omega_min,
        "omega_max": grid.omega_max,
        "points": grid.points,
        "spacing": grid.spacing,
        "exclusion_radius": grid.exclusion_radius,
    }


def _system_dict(sys: StateSpace) -> dict:
    return {"A": sys.A, "B": sys.B, "C": sys.C, "D": sys.D, "label": sys.label}


def _cert_dict(cert: NICertificate | None) -> dict | None:
    if cert is None:
        return None
    return {
        "verdict": cert.verdict,
        "P": cert.P,
        "Y": cert.Y,
        "L": cert.L,
        "lyap_residual": cert.lyap_residual,
        "coupling_residual": cert.coupling_residual,
        "factor_residual": cert.factor_residual,
        "strict": cert.strict,
        "rank_condition_min_sv": cert.rank_condition_min_sv,
        "iterations": cert.iterations,
        "convention": cert.convention,
        "infeasibility_witness": cert.infeasibility_witness,
    }


def _freq_dict(report: FrequencyReport | PositiveRealReport) -> dict:
    worst = None
    pts = [p for p in report.per_point if p.status == "ok"]
    if pts:
        w = min(pts, key=lambda p: p.min_eig)
        worst = {"omega": w.omega, "min_eig": w.min_eig}
    out = {
        "verdict": report.verdict,
        "worst_point": worst,
        "points_ok": len(pts),
        "points_excluded": sum(p.status == "excluded" for p in report.per_point),
        "points_ill_conditioned": sum(p.status == "near-pole" for p in report.per_point),
        "pole_findings": [
            {
                "omega0": f.omega0,
                "is_simple": f.is_simple,
                "hermitian_residual": f.hermitian_residual,
                "min_eig": f.min_eig,
            }
            for f in report.pole_findings
        ],
        "warnings": list(report.warnings),
    }
    if isinstance(report, FrequencyReport):
        out["origin_pole"] = report.origin_pole
        out["rhp_pole"] = report.rhp_pole
    else:
        out["rhp_pole"] = report.rhp_pole
    return out


def _freq_csv(report: FrequencyReport | PositiveRealReport) -> str:
    lines = ["omega,min_eig,status"]
    for p in report.per_point:
        val = "" if p.min_eig is None else f"{p.min_eig:.12g}"
        lines.append(f"{p.omega:.12g},{val},{p.status}")
    return "\n".join(lines) + "\n"


def _tol_dict(args) -> dict:
    return {
        "tol": args.tol,
        "tol_axis": args.tol_axis,
        "tol_pole": args.tol_pole,
        "tol_hurwitz": args.tol_hurwitz,
        "tol_int": args.tol_int,
    }


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_report(command: str, path: str, digest: str, args) -> dict:
    report = {
        "schema": "nistab-report/1",
        "tool": {"name": "nistab", "version": __version__},
        "command": command,
        "input": {"path": path, "sha256": digest},
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        if args.timestamps else None,
        "tolerances": _tol_dict(args),
        "grid": _grid_dict(_grid_from_args(args)),
        "notation_warnings": NOTATION_WARNINGS,
    }
    return report


def _grid_from_args(args) -> FrequencyGrid:
    return FrequencyGrid(
        omega_min=args.wmin,
        omega_max=args.wmax,
        points=args.points,
        spacing="linear" if args.linear else "logarithmic",
        exclusion_radius=args.exclusion_radius,
    )


# ---------------------------------------------------------------------------
# commands


def cmd_certify(args) -> int:
    systems, digest = load_system_file(args.file)
    if args.system not in systems:
        print(f"error: system {args.system!r} not found in {args.file}", file=sys.stderr)
        return EXIT_USAGE
    sys_ = systems[args.system]
    grid = _grid_from_args(args)
    tol = args.tol

    freq = freq_ni_test(sys_, grid, tol, args.tol_axis, args.tol_pole)
    results = {"frequency_ni": _freq_dict(freq)}
    try:
        pr = positive_real_check(sys_, grid, tol, args.tol_axis, args.tol_pole)
        results["positive_real"] = _freq_dict(pr)
    except NIStabError as exc:
        results["positive_real"] = {"verdict": "NotNI", "error": str(exc)}
    cert = None
    try:
        cert = lmi_ni_certificate(sys_)
        results["lmi"] = _cert_dict(cert)
    except NIStabError as exc:
        results["lmi"] = {"verdict": "Infeasible", "error": str(exc)}
    if args.prop == "sni":
        results["frequency_sni"] = _freq_dict(
            freq_sni_test(sys_, grid, tol, args.tol_axis, args.tol_pole))
        if cert is not None and cert.certified:
            sni_rank_condition(sys_, cert, grid, tol)
            wz = w_transfer_zero_check(sys_, cert, grid, tol)
            results["lmi"] = _cert_dict(cert)
            results["w_transfer_zeros"] = {
                "passed": wz.passed,
                "origin_value": wz.origin_value,
                "flagged_omegas": wz.flagged[:20],
            }
    certified = (cert is not None and cert.certified
                 and (args.prop == "ni" or cert.strict))

    report = _base_report("certify", args.file, digest, args)
    report.update({
        "system": args.system,
        "systems": {args.system: _system_dict(sys_)},
        "property": args.prop,
        "certified": certified,
        "results": results,
    })
    _write(dumps_canonical(report) + "\n", args.out)
    if args.freq_csv:
        with open(args.freq_csv, "w", encoding="utf-8") as fh:
            fh.write(_freq_csv(freq))
    return EXIT_OK if certified else EXIT_PROPERTY


def cmd_analyze(args) -> int:
    systems, digest = load_system_file(args.file)
    for name in (args.plant, args.controller):
        if name not in systems:
            print(f"error: system {name!r} not found in {args.file}", file=sys.stderr)
            return EXIT_USAGE
    plant, controller = systems[args.plant], systems[args.controller]
    grid = _grid_from_args(args)
    outcome = analyze(plant, controller, grid=grid, tol=args.tol,
                      tol_axis=args.tol_axis, hurwitz_tol=args.tol_hurwitz)

    lyap_entry = None
    pc, cc = outcome.plant_certificate, outcome.controller_certificate
    if pc is not None and cc is not None and pc.certified and cc.certified:
        lyap = block_gram(pc.P, cc.P, plant, controller)
        residual = float("nan")
        if outcome.closed_loop is not None:
            rng = np.random.default_rng(args.seed)
            worst = 0.0
            for _ in range(10):
                state = make_state(plant, controller,
                                   rng.standard_normal(plant.n),
                                   rng.standard_normal(controller.n))
                chk = lyapunov_derivative(state, plant, controller, (pc, cc), lyap)
                scale = max(1.0, float(state.x @ state.x)
                            * max(1.0, float(np.linalg.norm(lyap.Q, 2))))
                worst = max(worst, chk.residual / scale)
            residual = worst
        lyap_entry = {
            "Q": lyap.Q,
            "min_eig_Q": lyap.min_eig_Q,
            "derivative_identity_residual": residual,
        }

    cl = outcome.closed_loop
    report = _base_report("analyze", args.file, digest, args)
    report.update({
        "plant": args.plant,
        "controller": args.controller,
        "systems": {
            args.plant: _system_dict(plant),
            args.controller: _system_dict(controller),
        },
        "hypotheses": outcome.hypotheses,
        "dc_gain": {"lambda_max": outcome.lambda_max},
        "closed_loop": None if cl is None else {
            "A_cl": cl.A_cl,
            "eigenvalues": list(cl.eigenvalues),
            "max_real_part": float(cl.eigenvalues.real.max()),
            "dd_product_norm": cl.dd_product_norm,
            "well_posed": cl.well_posed,
        },
        "certificates": {
            "plant": _cert_dict(pc),
            "controller": _cert_dict(cc),
        },
        "frequency": {
            "plant_ni": _freq_dict(outcome.plant_freq),
            "controller_sni": _freq_dict(outcome.controller_freq),
        },
        "lyapunov": lyap_entry,
        "verdict": outcome.verdict.verdict,
        "violated_hypotheses": outcome.verdict.violated_hypotheses,
        "margin": outcome.verdict.margin,
        "warnings": outcome.warnings,
    })
    _write(dumps_canonical(report) + "\n", args.out)
    return EXIT_OK if outcome.verdict.verdict is Stability.INTERNALLY_STABLE else EXIT_PROPERTY


def cmd_simulate(args) -> int:
    systems, digest = load_system_file(args.file)
    for name in (args.plant, args.controller):
        if name not in systems:
            print(f"error: system {name!r} not found in {args.file}", file=sys.stderr)
            return EXIT_USAGE
    plant, controller = systems[args.plant], systems[args.controller]
    if args.t_final <= 0 or args.dt <= 0 or args.t_final < args.dt:
        print("error: need t_final >= dt > 0", file=sys.stderr)
        return EXIT_USAGE

    outcome = analyze(plant, controller, tol=args.tol, tol_axis=args.tol_axis,
                      hurwitz_tol=args.tol_hurwitz)
    for name in outcome.verdict.violated_hypotheses:
        print(f"warning: hypothesis {name} violated: "
              f"{outcome.hypotheses[name]['detail']}", file=sys.stderr)
    if outcome.closed_loop is None:
        print("error: closed loop is not well posed; cannot simulate", file=sys.stderr)
        return EXIT_PROPERTY

    x0 = np.array([float(v) for v in args.x0.split(",")]) if args.x0 else \
        np.zeros(outcome.closed_loop.n)
    if x0.shape != (outcome.closed_loop.n,):
        print(f"error: --x0 must have {outcome.closed_loop.n} entries, got {len(x0)}",
              file=sys.stderr)
        return EXIT_USAGE

    pc, cc = outcome.plant_certificate, outcome.controller_certificate
    certs = (pc, cc) if (pc is not None and cc is not None
                         and pc.certified and cc.certified) else None
    if certs is None:
        print("warning: no certificates; V and ytilde2 columns will be empty",
              file=sys.stderr)
    trace = simulate(outcome.closed_loop, x0, args.t_final, args.dt,
                     method=args.method, certs=certs)
    _write(trace_to_csv(trace), args.out)
    if certs is not None:
        mono_ok, worst = v_monotone(trace, tol=1e-8)
        diss = dissipation_integral_check(trace, tol_int=args.tol_int)
        print(f"lyapunov monotone: {'pass' if mono_ok else 'FAIL'} "
              f"(max step increase {worst:.3e})", file=sys.stderr)
        print(f"dissipation bound: {'pass' if diss.passed else 'FAIL'} "
              f"(integral {diss.integral:.9g} vs V(0) {diss.v0:.9g})", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.cases == 0:
        print("warning: --cases 0 runs nothing; vacuous pass", file=sys.stderr)
        return EXIT_OK
    if args.cases < 0:
        print("error: --cases must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    results = run_all(args.seed, args.cases)
    all_ok = True
    for res in results:
        print(f"{res.name}: passed {res.passed} failed {res.failed} "
              f"inconclusive {res.inconclusive}")
        for failure in res.failures:
            print(f"  FAIL {failure}")
        all_ok = all_ok and res.ok
    return EXIT_OK if all_ok else EXIT_PROPERTY


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write the report/CSV here instead of stdout")
    parser.add_argument("--timestamps", action="store_true",
                        help="include a timestamp in the report (breaks determinism)")
    grid = parser.add_argument_group("frequency grid")
    grid.add_argument("--wmin", type=float, default=1e-3, help="lowest frequency, rad/s")
    grid.add_argument("--wmax", type=float, default=1e3, help="highest frequency, rad/s")
    grid.add_argument("--points", type=int, default=400, help="number of grid points")
    grid.add_argument("--linear", action="store_true",
                      help="linear spacing instead of logarithmic")
    grid.add_argument("--exclusion-radius", type=float, default=1e-2,
                      help="relative radius skipped around imaginary-axis poles")
    tols = parser.add_argument_group("tolerances")
    tols.add_argument("--tol", type=float, default=DEFAULT_TOL,
                      help="general numerical tolerance (default 1e-8)")
    tols.add_argument("--tol-axis", type=float, default=TOL_AXIS,
                      help="imaginary-axis pole band (default 1e-7)")
    tols.add_argument("--tol-pole", type=float, default=TOL_POLE,
                      help="resolvent evaluation guard (default 1e-12)")
    tols.add_argument("--tol-hurwitz", type=float, default=1e-8,
                      help="closed-loop stability band (default 1e-8)")
    tols.add_argument("--tol-int", type=float, default=1e-6,
                      help="dissipation integral slack (default 1e-6)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nistab",
        description="Certify negative-imaginary LTI systems and prove "
                    "positive-feedback interconnection stability.",
    )
    parser.add_argument("--version", action="version", version=f"nistab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    cert = sub.add_parser("certify", help="certify one system as NI or SNI")
    cert.add_argument("file", help="system file (JSON, schema_version 1)")
    cert.add_argument("system", help="name of the system to certify")
    cert.add_argument("--property", dest="prop", choices=("ni", "sni"), default="ni")
    cert.add_argument("--freq-csv", help="write the sweep curve as CSV here")
    _add_common(cert)
    cert.set_defaults(func=cmd_certify)

    ana = sub.add_parser("analyze", help="analyze a plant/controller feedback loop")
    ana.add_argument("file")
    ana.add_argument("plant")
    ana.add_argument("controller")
    ana.add_argument("--seed", type=int, default=0,
                     help="seed for the derivative-identity probe states")
    _add_common(ana)
    ana.set_defaults(func=cmd_analyze)

    simp = sub.add_parser("simulate", help="simulate the autonomous closed loop")
    simp.add_argument("file")
    simp.add_argument("plant")
    simp.add_argument("controller")
    simp.add_argument("--x0", help="comma-separated initial state (default zeros)")
    simp.add_argument("--t-final", type=float, default=50.0)
    simp.add_argument("--dt", type=float, default=1e-2)
    simp.add_argument("--method", choices=("expm_exact", "rk4"), default="expm_exact")
    _add_common(simp)
    simp.set_defaults(func=cmd_simulate)

    selft = sub.add_parser("selftest", help="run the seeded property suites")
    selft.add_argument("--seed", type=int, default=1)
    selft.add_argument("--cases", type=int, default=50)
    selft.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the usage code unless --version/-h
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at byte offset {exc.pos}: {exc.msg}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, KeyError) as exc:
        print(f"error: invalid system file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DimensionError, FeedthroughError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NIStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY


if __name__ == "__main__":
    raise SystemExit(main())
