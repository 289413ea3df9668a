"""Command-line interface: ``heun-appell {eval,oracle,classify,radius,terminate,selftest}``.

Complex flags are written ``re,im`` (``--a=-0.5,0.8660254``) or as a plain
real number; ``--a=cbrt-minus-one`` selects cos(pi/3) + i sin(pi/3).  With
``--output json`` every result is one JSON object per line with the fields
params, command, result, error_estimate, tags and branch_choices; complex
numbers are encoded as [re, im].

Exit codes: 0 success, 1 computation error, 2 bad flags or parameters.
"""
from __future__ import annotations

import argparse
import cmath
import json
import logging
import sys
import warnings

import numpy as np

from .errors import HeunError, ParameterError
from .expansions import Center, ExpansionSpec, allowed_mu, build_solution, center_radius
from .heun_model import CBRT_MINUS_ONE, classify, derivative_singularity_table, make_params
from .ode_oracle import integrate_from, make_path
from .recurrences import Pin, origin_coeffs, radius_origin, run, solve_termination

log = logging.getLogger("heun_appell")

DEFAULT_TOL = 1e-10
DEFAULT_N_MAX = 2000
PARAM_NAMES = ("a", "q", "alpha", "beta", "gamma", "delta")
CENTERS = {"origin": Center.Origin, "one": Center.One, "a": Center.A, "infinity": Center.Infinity,
           "z0": Center.Z0}


class FlagError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``re,im``, a real number, a Python complex literal or ``cbrt-minus-one``."""
    t = text.strip().lower()
    if t == "cbrt-minus-one":
        return CBRT_MINUS_ONE
    if t == "cbrt-minus-one-conj":
        return CBRT_MINUS_ONE.conjugate()
    try:
        if "," in t:
            re_, im_ = t.split(",")
            return complex(float(re_), float(im_))
        return complex(t.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r} as a complex number (use re,im)") from None


def encode(x):
    """JSON-friendly form: complex -> [re, im], recursively."""
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (int, np.integer, bool, str)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset, np.ndarray)):
        return [encode(v) for v in x]
    if hasattr(x, "value"):
        return x.value
    return str(x)


def _add_params(sp: argparse.ArgumentParser, optional=()) -> None:
    g = sp.add_argument_group("Heun parameters (epsilon follows from the Fuchsian relation)")
    for name in PARAM_NAMES:
        g.add_argument(f"--{name}", type=parse_complex, required=name not in optional, default=None,
                       metavar="RE,IM")


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--output", choices=("human", "json"), default="human")
    sp.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heun-appell",
                                     description="Heun functions from Appell F1 expansions of the derivative.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("eval", "sum an expansion at z"),
                           ("oracle", "compare an expansion with direct ODE integration")):
        sp = sub.add_parser(name, help=helptext)
        _add_params(sp)
        sp.add_argument("--z", type=parse_complex, required=True, metavar="RE,IM")
        sp.add_argument("--center", choices=sorted(CENTERS), default="origin")
        sp.add_argument("--mu", type=parse_complex, default=None, metavar="RE,IM",
                        help="Frobenius exponent of the derivative (default: first admissible)")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
        sp.add_argument("--probe", type=parse_complex, default=None, metavar="RE,IM",
                        help="point where the integration constant is fitted")
        _add_common(sp)

    sp = sub.add_parser("classify", help="reduction tags and singularity table")
    _add_params(sp)
    _add_common(sp)

    sp = sub.add_parser("radius", help="convergence radii of the expansions")
    _add_params(sp, optional=("gamma", "delta"))
    _add_common(sp)

    sp = sub.add_parser("terminate", help="accessory parameters giving a finite origin series")
    _add_params(sp, optional=("q",))
    sp.add_argument("--N", type=int, required=True, help="degree of the finite sum")
    sp.add_argument("--mu", type=parse_complex, default=0j, metavar="RE,IM")
    sp.add_argument("--pin", choices=("alpha", "beta"), default="alpha",
                    help="which of alpha, beta equals N + mu")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_common(sp)

    sp = sub.add_parser("selftest", help="run the acceptance checks")
    sp.add_argument("--only", type=int, nargs="*", default=None, help="check numbers to run")
    _add_common(sp)
    return parser


def _params(ns, fill=None):
    values = {k: getattr(ns, k) for k in PARAM_NAMES}
    for k, v in (fill or {}).items():
        if values[k] is None:
            values[k] = v
    try:
        return make_params(**values)
    except ParameterError as exc:
        raise FlagError(str(exc)) from None


def _spec(p, ns) -> ExpansionSpec:
    center = CENTERS[ns.center]
    mu = ns.mu if ns.mu is not None else allowed_mu(p, center)[0]
    if ns.n_max < 1 or ns.tol <= 0:
        raise FlagError("--n-max must be positive and --tol must be > 0")
    return ExpansionSpec(center, mu, ns.n_max, ns.tol)


def _record(command, p, result, error_estimate=None, tags=(), branch_choices=None) -> dict:
    return {
        "params": p.as_dict() if p is not None else None,
        "command": command,
        "result": result,
        "error_estimate": error_estimate,
        "tags": sorted(t.value if hasattr(t, "value") else str(t) for t in tags),
        "branch_choices": branch_choices or {},
    }


def cmd_eval(ns) -> list[dict]:
    p = _params(ns)
    spec = _spec(p, ns)
    sol = build_solution(p, spec, ns.probe)
    u, n_used, est = sol.evaluate(ns.z)
    result = {"z": ns.z, "center": spec.center.value, "mu": spec.mu, "u": u, "terms_used": n_used,
              "c0": sol.c0, "radius": sol.radius, "terminated": sol.coeffs.terminated}
    return [_record("eval", p, result, est, sol.reduction, sol.branch_choices)]


def oracle_start(sol, z: complex) -> complex:
    """Point inside the expansion domain, on the way from the centre to z."""
    c = sol.family.center
    if isinstance(c, str):
        return z / abs(z) * sol.radius / 0.95 * 1.4 if abs(z) < sol.radius / 0.95 * 1.4 else z * 0.9
    d = z - c
    if d == 0:
        raise FlagError("z coincides with the expansion centre")
    return c + d / abs(d) * min(0.3 * sol.radius, 0.5 * abs(d))


def cmd_oracle(ns) -> list[dict]:
    """Series value at z against the ODE integrated from the series' own data at a nearby point."""
    p = _params(ns)
    spec = _spec(p, ns)
    sol = build_solution(p, spec, ns.probe)
    z = complex(ns.z)
    u, n_used, est = sol.evaluate(z)
    s = oracle_start(sol, z)
    u0, du0 = sol(s), sol.derivative(s)
    _, ref, _ = integrate_from(p, u0, du0, make_path(p, z, start=s)).final
    delta = abs(u - ref)
    result = {"z": z, "center": spec.center.value, "mu": spec.mu, "u": u, "oracle": ref,
              "abs_diff": delta, "rel_diff": delta / max(abs(ref), 1e-300), "start": s, "terms_used": n_used}
    return [_record("oracle", p, result, est, sol.reduction, sol.branch_choices)]


def cmd_classify(ns) -> list[dict]:
    p = _params(ns)
    table = derivative_singularity_table(p)
    rows = [{"location": r.location, "exponents": r.exponents, "label": r.label} for r in table.points]
    result = {"epsilon": p.epsilon, "singularities": rows, "merged": table.merged, "note": table.note}
    return [_record("classify", p, result, None, classify(p))]


def cmd_radius(ns) -> list[dict]:
    p = _params(ns, fill={"gamma": 0.5, "delta": 0.5})
    info = radius_origin(p)
    radii = {}
    for c in Center:
        try:
            radii[c.value] = center_radius(p, c)
        except HeunError as exc:
            radii[c.value] = None
            log.info("no radius for %s: %s", c.value, exc)
    result = {"radius_origin": info.radius, "characteristic_roots": list(info.roots), "radii": radii}
    return [_record("radius", p, result, None, classify(p))]


def cmd_terminate(ns) -> list[dict]:
    p = _params(ns, fill={"q": 0j})
    which = Pin.AlphaPins if ns.pin == "alpha" else Pin.BetaPins
    roots = solve_termination(p, ns.N, ns.mu, which, ns.tol)
    found = []
    for q in roots:
        seq = run(origin_coeffs(p.with_(q=q), ns.mu), ns.N + 20)
        found.append({"q": q, "verified": bool(seq.terminated and len(seq.values) == ns.N + 1),
                      "terms": len(seq.values)})
    result = {"N": ns.N, "mu": ns.mu, "pin": which.value, "solutions": found}
    return [_record("terminate", p, result)]


def cmd_selftest(ns) -> list[dict]:
    from .acceptance import run_all

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        results = run_all(ns.only)
    rows = [{"number": r.number, "title": r.title, "passed": r.passed, "value": r.value,
             "threshold": r.threshold, "seconds": r.seconds, "detail": r.detail} for r in results]
    passed = sum(r.passed for r in results)
    summary = {"passed": passed, "failed": len(results) - passed, "checks": rows}
    return [_record("selftest", None, summary)]


COMMANDS = {"eval": cmd_eval, "oracle": cmd_oracle, "classify": cmd_classify, "radius": cmd_radius,
            "terminate": cmd_terminate, "selftest": cmd_selftest}


def _fmt(x) -> str:
    if isinstance(x, complex):
        if x.imag == 0:
            return f"{x.real:.15g}"
        return f"{x.real:.15g}{x.imag:+.15g}j"
    if isinstance(x, float):
        return f"{x:.15g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def print_human(rec: dict, out) -> None:
    if rec["command"] == "selftest":
        for row in rec["result"]["checks"]:
            status = "PASS" if row["passed"] else "FAIL"
            print(f"[{status}] {row['number']:2d}. {row['title']}: {row['value']:.3e} "
                  f"(limit {row['threshold']:.0e}) {row['detail']}", file=out)
        print(f"{rec['result']['passed']} passed, {rec['result']['failed']} failed", file=out)
        return
    for key, val in rec["result"].items():
        if isinstance(val, list) and val and isinstance(val[0], dict):
            print(f"{key}:", file=out)
            for row in val:
                print("  " + ", ".join(f"{k}={_fmt(v)}" for k, v in row.items()), file=out)
        elif isinstance(val, dict):
            print(f"{key}: " + ", ".join(f"{k}={_fmt(v)}" for k, v in val.items()), file=out)
        else:
            print(f"{key}: {_fmt(val)}", file=out)
    if rec["error_estimate"] is not None:
        print(f"error_estimate: {rec['error_estimate']:.3e}", file=out)
    if rec["tags"]:
        print("tags: " + ", ".join(rec["tags"]), file=out)
    if rec["branch_choices"]:
        print("branch_choices: " + ", ".join(f"{k}={v}" for k, v in rec["branch_choices"].items()), file=out)


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        records = COMMANDS[ns.command](ns)
    except FlagError as exc:
        print(f"heun-appell: error: {exc}", file=err)
        return 2
    except HeunError as exc:
        print(f"heun-appell: {type(exc).__name__}: {exc}", file=err)
        return 1
    for rec in records:
        if ns.output == "json":
            print(json.dumps(encode(rec)), file=out)
        else:
            print_human(rec, out)
    if ns.command == "selftest" and records[0]["result"]["failed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run_cli())
