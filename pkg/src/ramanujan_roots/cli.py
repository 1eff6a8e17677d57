"""Command-line front end.

Every command prints to standard output and exits 0 on success, 1 on a numeric or
verification failure and 2 on a usage error.  JSON output carries ``"schema": 1``
and all floats are rounded to 15 significant digits so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .gammac import Singular, build_cfunctions
from .hyper1 import (HypergeometricError, Rank1Params, F_lambda_rank1, series_lhs, series_rhs,
                     sinh_power_integral_closed)
from .jacobi import JacobiError, JacobiFamily
from .master import (DomainError, NotAvailable, classical_dwight, classical_m1, classical_m2,
                     rank_one_case, ramanujan_formula_m2)
from .quad import QuadratureError, a_integral
from .rootsys import PRESETS, RootSystemError, Weight, build_root_system
from .specfun import (TUBE_KINDS, BFunction, DFunction, TubeDomain, classify_singularities,
                      tube_contains, tube_intersection_over_W)

SCHEMA = 1
SIG_DIGITS = 15
FORMATS = ("json", "csv", "pretty")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

_IMAG_ONLY = re.compile(r"^([+-]?)([ij])$")


def parse_complex(text: str) -> complex:
    """Accept ``1.5+0.2i``, ``-0.3j``, ``2``, ``i`` and the like."""
    s = str(text).strip().replace(" ", "")
    if not s:
        raise argparse.ArgumentTypeError("empty complex number")
    m = _IMAG_ONLY.match(s)
    if m:
        return complex(0.0, -1.0 if m.group(1) == "-" else 1.0)
    s = s.replace("i", "j")
    s = re.sub(r"(^|[+-])j", r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def parse_complex_vector(text: str) -> list[complex]:
    return [parse_complex(p) for p in str(text).split(",")]


def parse_float_vector(text: str) -> list[float]:
    try:
        return [float(p) for p in str(text).split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from exc


def parse_int_vector(text: str) -> list[int]:
    try:
        vals = [int(p) for p in str(text).split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from exc
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("weights need non-negative coordinates")
    return vals


def positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.{SIG_DIGITS}g}"
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def round_sig(x: float) -> float | str:
    if not math.isfinite(x):
        return fmt_float(x)
    return float(f"{x:.{SIG_DIGITS}g}")


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": round_sig(float(obj.real)), "im": round_sig(float(obj.imag))}
    return obj


def pretty_value(v: Any) -> str:
    if isinstance(v, (complex, np.complexfloating)):
        sign = "+" if v.imag >= 0 else "-"
        return f"{fmt_float(v.real)}{sign}{fmt_float(abs(v.imag))}i"
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(pretty_value(x) for x in list(v)) + "]"
    return str(v)


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(to_jsonable({"schema": SCHEMA, **payload}), indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        rows = payload.get("rows")
        header = payload.get("header")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if rows is None:
            w.writerow(["key", "value"])
            for k, v in payload.items():
                w.writerow([k, pretty_value(v)])
        else:
            w.writerow(header)
            for r in rows:
                w.writerow([pretty_value(x) if not isinstance(x, int) else x for x in r])
        return buf.getvalue()
    lines = []
    for k, v in payload.items():
        if isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{k}:")
            for item in v:
                lines.append("  " + ", ".join(f"{a}={pretty_value(b)}" for a, b in item.items()))
        elif isinstance(v, dict):
            lines.append(f"{k}:")
            for a, b in v.items():
                lines.append(f"  {a}: {pretty_value(b)}")
        else:
            lines.append(f"{k}: {pretty_value(v)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    system: str = "A1"
    m: tuple[float, ...] = (2.0,)
    tol: float = 1e-8
    max_refine: int = 10
    seed: int = 0
    fmt: str = "pretty"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol > 0:
            raise UsageError("tolerances must be positive")
        if self.fmt not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")

    def root_system(self):
        return build_root_system(self.system, list(self.m))


def load_config(path: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in doc.items()}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _coords(rs, vals: Sequence[complex]) -> np.ndarray:
    if len(vals) != rs.rank:
        raise UsageError(f"{rs.name} needs {rs.rank} coordinates, got {len(vals)}")
    return np.asarray(vals, dtype=complex)


def cmd_rootinfo(args, cfg: RunConfig) -> tuple[dict, int]:
    rs = cfg.root_system()
    out = rs.summary()
    out["rho_1"] = float(rs.rho_j[0])
    return out, 0


def cmd_cfun(args, cfg: RunConfig) -> tuple[dict, int]:
    rs = cfg.root_system()
    cf = build_cfunctions(rs)
    lam = _coords(rs, args.lam)
    out: dict = {"system": rs.name, "lambda": list(lam)}
    for name, fn in (("c", cf.c), ("c_star", cf.c_star), ("c_tilde", cf.c_tilde),
                     ("c_tilde_star", cf.c_tilde_star), ("plancherel_density", cf.plancherel_density)):
        out[name] = _guarded(fn, lam)
    out["c_HC"] = cf.c_HC
    return out, 0


def cmd_dfun(args, cfg: RunConfig) -> tuple[dict, int]:
    rs = cfg.root_system()
    dfun = DFunction(build_cfunctions(rs))
    lam = _coords(rs, args.lam)
    out: dict = {"system": rs.name, "lambda": list(lam), "d": _guarded(dfun.d, lam),
                 "d_via_shift": _guarded(dfun.d_via_shift, lam), "C_d": dfun.C_d}
    if dfun.has_polynomial_form:
        out["d_polynomial"] = _guarded(dfun.d_polynomial, lam)
    return out, 0


def cmd_bfun(args, cfg: RunConfig) -> tuple[dict, int]:
    rs = cfg.root_system()
    bfun = BFunction(build_cfunctions(rs))
    out: dict = {"system": rs.name, "C_b": bfun.C_b}
    if args.lam is not None:
        lam = _coords(rs, args.lam)
        out["lambda"] = list(lam)
        out["b"] = _guarded(bfun.b, lam)
        out["b_explicit"] = _guarded(bfun.b_explicit, lam)
        out["b_over_cc"] = _guarded(bfun.b_over_cc, lam)
    if args.singularities or args.lam is None:
        out["singularities"] = classify_singularities(rs).as_dict()
    return out, 0


def cmd_tube(args, cfg: RunConfig) -> tuple[dict, int]:
    rs = cfg.root_system()
    lam = _coords(rs, args.lam)
    tube = TubeDomain(args.kind, args.param)
    out = {"system": rs.name, "kind": args.kind, "param": args.param, "lambda": list(lam),
           "contains": bool(tube_contains(rs, tube, lam))}
    if args.kind in ("T_delta", "T_prime", "T_doubleprime"):
        out["in_all_weyl_images"] = bool(tube_intersection_over_W(rs, args.kind, args.param, lam))
    return out, 0


def cmd_jacobi(args, cfg: RunConfig) -> tuple[dict, int]:
    rs = cfg.root_system()
    jac = JacobiFamily(rs)
    mu = Weight(tuple(args.mu))
    if len(mu.coords) != rs.rank:
        raise UsageError(f"{rs.name} weights need {rs.rank} coordinates")
    exp = jac.coeffs(mu, args.method)
    items = sorted(exp.coeffs.items(), key=lambda kv: (-rs.height(kv[0]), kv[0]))
    if args.dump_coeffs:
        header = [f"nu_{j + 1}" for j in range(rs.rank)] + ["c"]
        rows = [[int(x) for x in nu] + [float(c)] for nu, c in items]
        if cfg.fmt == "json":
            return {"system": rs.name, "mu": list(mu.coords), "header": header, "rows": rows}, 0
        return {"header": header, "rows": rows, "_force_csv": True}, 0
    out: dict = {"system": rs.name, "mu": list(mu.coords), "method": args.method,
                 "n_terms": len(items), "c_mu_rho": jac.c_at(mu), "d": jac.d(mu),
                 "norm_squared": jac.norm_P_squared(mu)}
    if args.theta is not None:
        theta = np.asarray(args.theta, dtype=float)
        if theta.size != rs.rank:
            raise UsageError(f"--theta needs {rs.rank} angles")
        out["theta"] = list(theta)
        out["P_mu"] = jac.eval_P(mu, 1j * theta)
        out["F_mu_rho"] = jac.eval_F_discrete(mu, 1j * theta)
    return out, 0


def cmd_eval_f(args, cfg: RunConfig) -> tuple[dict, int]:
    m = float(args.m[0]) if args.m else cfg.m[0]
    p = Rank1Params(float(args.m_half), m)
    lam = args.lam[0] if isinstance(args.lam, list) else args.lam
    val = complex(F_lambda_rank1(p, complex(lam), float(args.H)))
    return {"m_half": p.m_half, "m": p.m, "lambda": complex(lam), "H": float(args.H), "F": val}, 0


def _check(name: str, lhs, rhs, tol: float) -> dict:
    gap = abs(complex(lhs) - complex(rhs))
    return {"name": name, "lhs": lhs, "rhs": rhs, "gap": gap, "pass": bool(gap < tol)}


def _rank1_report(m: float, P: float, A: float, m_half: float, tol: float) -> list[dict]:
    case = rank_one_case(m, P, A, m_half=m_half)
    checks: list[dict] = []
    u = 0.3 * P
    if m_half == 0.0:
        closed = complex(case.closed_form(u))
        s = case.master_series(np.array([u + 0j]), tol=tol * 1e-2)
        checks.append(_check("series_vs_closed_form", s, closed, tol))
        c0 = case.master_contour(u, 0.0, tol * 1e-2).value
        checks.append(_check("contour_vs_closed_form", c0, closed, tol))
        theta = 1.1
        st = case.master_series(np.array([1j * theta]), tol=tol * 1e-2)
        checks.append(_check("torus_series_vs_closed_form", st, complex(case.closed_form(1j * theta)), tol))
    else:
        s = case.master_series(np.array([u + 0j]), tol=tol * 1e-2)
        c0 = case.master_contour(u, 0.0, tol * 1e-2).value
        checks.append(_check("series_vs_contour", s, c0, tol))
    sigma = 0.4 * float(case.rs.derived.L[0])
    c1 = case.master_contour(u, sigma, tol * 1e-2).value
    checks.append(_check("sigma_independence", c0, c1, tol))
    for lam in (0.2j, 0.1 + 0.5j):
        if case.in_transform_tube(lam):
            r = case.master_transform_check(lam, tol)
            checks.append(_check(f"transform_at_{pretty_value(complex(lam))}", r["lhs"], r["rhs"], tol))
    if m_half == 0.0:
        r = case.master_plancherel_check(tol)
        checks.append(_check("plancherel", r["lhs"], r["rhs"], tol))
        if A == 0.0:
            # f(e) = 2^{-m} sech^m(P/2) tanh(P/2) at the identity
            fe = case.master_contour(0.0, 0.0, tol * 1e-2).value
            checks.append(_check("identity_value", fe,
                                 2.0 ** (-m) * math.cosh(P / 2) ** (-m) * math.tanh(P / 2), tol))
        if m == 2.0 and A == 0.0:
            num, rhs = classical_m2(P)
            checks.append(_check("sin_over_sinh_lambda_squared", num, rhs, tol))
            lhs, rhs = ramanujan_formula_m2(P, 0.3 + 0.2j)
            checks.append(_check("sinh_kernel_transform_m2", lhs, rhs, tol))
        if m == 1.0 and A == 0.0:
            num, rhs = classical_m1(P)
            checks.append(_check("sin_over_sinh_lambda_tanh", num, 0.5 * rhs, tol))
    return checks


def _identity_battery(cfg: RunConfig, max_refine: int) -> list[dict]:
    tol = cfg.tol
    rng = np.random.default_rng(cfg.seed)
    checks: list[dict] = []
    num, rhs = classical_dwight(1.0)
    checks.append(_check("dwight_P1", num, rhs, tol))
    for P in (0.5, 1.0, 2.0):
        num, rhs = classical_m2(P)
        checks.append(_check(f"sin_over_sinh_lambda_squared_P{P:g}", num, rhs, tol))
    num, rhs = classical_m1(1.0)
    checks.append(_check("sin_over_sinh_lambda_tanh_P1", num, 0.5 * rhs, tol))
    checks.append(_check("generating_function_m2", series_lhs(2.0, 0.3, 0.4, 60), series_rhs(2.0, 0.3, 0.4),
                         tol))
    for m in (1.0, 2.0):
        val = a_integral(lambda u: (math.cosh(1.0) + np.cosh(u)) ** (-(m + 2.0)), m, tol * 1e-2,
                         max_refine=max_refine).value * 2.0 ** (-m)
        checks.append(_check(f"sinh_power_integral_m{m:g}", val, sinh_power_integral_closed(m, 1.0), tol))
    lhs, rhs = ramanujan_formula_m2(1.0, 0.3 + 0.2j)
    checks.append(_check("sinh_kernel_transform_m2", lhs, rhs, tol))
    for name in ("A1", "A2", "B2"):
        n_orb = len(PRESETS[name]["orbits"])
        rs = build_root_system(name, list(rng.uniform(0.2, 4.0, n_orb)))
        checks.append(_check(f"cardW_{name}", JacobiFamily(rs).cardW_check(), rs.order_W, 1e-10))
    rs = build_root_system("A2", [1.0])
    jac = JacobiFamily(rs)
    mu = Weight((1, 1))
    rec, gs = jac.coeffs(mu, "recursion"), jac.coeffs(mu, "gram_schmidt")
    gap = max(abs(rec.coeffs[k] - gs.coeffs.get(k, 0.0)) for k in rec.coeffs)
    checks.append({"name": "jacobi_dual_route_A2", "lhs": 0.0, "rhs": gap, "gap": gap, "pass": gap < tol})
    rs = build_root_system("A1", [2.0])
    jac = JacobiFamily(rs)
    mu = Weight((2,))
    q = jac.norm_P_squared_quadrature(mu)
    checks.append(_check("norm_formula_A1", q, jac.norm_P_squared(mu), tol * abs(q)))
    rs = build_root_system("B2", list(rng.uniform(0.5, 3.0, 2)))
    cf = build_cfunctions(rs)
    dfun, bfun = DFunction(cf), BFunction(cf)
    lam = rng.uniform(-0.4, 0.4, 2) + 1j * rng.uniform(-2.0, 2.0, 2)
    d1, d2 = dfun.d(lam), dfun.d_via_shift(lam)
    checks.append(_check("d_two_routes_B2", d1, d2, tol * max(1.0, abs(d1))))
    b1, b2 = bfun.b(lam), bfun.b_explicit(lam)
    checks.append(_check("b_two_routes_B2", b1, b2, tol * max(1.0, abs(b1))))
    return checks


def cmd_verify(args, cfg: RunConfig) -> tuple[dict, int]:
    if args.suite == "rank1":
        m = float(args.m[0]) if args.m else cfg.m[0]
        checks = _rank1_report(m, args.P, args.A, args.m_half, cfg.tol)
        head = {"suite": "rank1", "m": m, "m_half": args.m_half, "P": args.P, "A": args.A, "tol": cfg.tol}
    else:
        checks = _identity_battery(cfg, cfg.max_refine)
        head = {"suite": "identities", "tol": cfg.tol, "seed": cfg.seed}
    ok = all(c["pass"] for c in checks)
    return {**head, "all_pass": ok, "checks": checks}, 0 if ok else 1


def _guarded(fn: Callable, lam):
    try:
        return fn(lam)
    except Singular as exc:
        return f"singular ({exc})"


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, system: bool = True) -> None:
    if system:
        p.add_argument("--system", choices=sorted(PRESETS), help="root-system preset")
    p.add_argument("--m", type=parse_float_vector, help="multiplicities, one per root orbit, comma-separated")
    p.add_argument("--config", help="JSON file with defaults; explicit flags take precedence")
    p.add_argument("--tol", type=positive_float)
    p.add_argument("--max-refine", type=int, dest="max_refine")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=FORMATS, dest="fmt")
    p.add_argument("--json", action="store_const", const="json", dest="fmt", help="shorthand for --format json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ramanujan-roots", description="Jacobi polynomials, hypergeometric functions and "
                     "the Ramanujan master theorem on root systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rootinfo", help="root data and derived constants")
    _common(p)
    p.set_defaults(func=cmd_rootinfo)

    for name, fn, helptext in (("cfun", cmd_cfun, "c-functions and Plancherel density"),
                               ("dfun", cmd_dfun, "d-function by every available route")):
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.add_argument("--lambda", dest="lam", type=parse_complex_vector, required=True,
                       help="spectral parameter coordinates, e.g. 1.5+0.2i,0.3")
        p.set_defaults(func=fn)

    p = sub.add_parser("bfun", help="b-function values and singularity classification")
    _common(p)
    p.add_argument("--lambda", dest="lam", type=parse_complex_vector)
    p.add_argument("--singularities", action="store_true")
    p.set_defaults(func=cmd_bfun)

    p = sub.add_parser("tube", help="tube-domain membership")
    _common(p)
    p.add_argument("--kind", choices=TUBE_KINDS, default="T_delta")
    p.add_argument("--param", type=float, default=1.0, help="delta or eta of the tube")
    p.add_argument("--lambda", dest="lam", type=parse_complex_vector, required=True)
    p.set_defaults(func=cmd_tube)

    p = sub.add_parser("jacobi", help="Jacobi polynomial coefficients and values")
    _common(p)
    p.add_argument("--mu", type=parse_int_vector, required=True)
    p.add_argument("--method", choices=("recursion", "gram_schmidt"), default="recursion")
    p.add_argument("--dump-coeffs", action="store_true", dest="dump_coeffs")
    p.add_argument("--theta", type=parse_float_vector, help="torus angles theta_j for evaluation")
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("eval-f", help="rank-one hypergeometric function F_lambda(exp H)")
    _common(p, system=False)
    p.add_argument("--m-half", type=float, default=0.0, dest="m_half")
    p.add_argument("--lambda", dest="lam", type=parse_complex, required=True)
    p.add_argument("--H", type=float, required=True, help="u = beta(H)")
    p.set_defaults(func=cmd_eval_f)

    p = sub.add_parser("verify", help="verification suites")
    p.add_argument("suite", choices=("rank1", "identities"))
    _common(p, system=False)
    p.add_argument("--m-half", type=float, default=0.0, dest="m_half")
    p.add_argument("--P", type=positive_float, default=1.0)
    p.add_argument("--A", type=float, default=0.0)
    p.set_defaults(func=cmd_verify)
    return parser


_CONFIG_KEYS = {"system", "m", "tol", "max_refine", "seed", "fmt", "format", "P", "A", "m_half", "lam",
                "mu", "method", "kind", "param", "H", "theta"}


def _merge_config(args: argparse.Namespace, explicit: set[str]) -> RunConfig:
    conf = load_config(args.config) if args.config else {}
    unknown = set(conf) - _CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if "format" in conf:
        conf["fmt"] = conf.pop("format")
    for key, val in conf.items():
        if key in explicit or not hasattr(args, key):
            continue
        if key == "m":
            val = [float(v) for v in np.atleast_1d(val)]
        elif key == "lam":
            val = parse_complex_vector(val) if isinstance(val, str) else [parse_complex(str(v)) for v in val]
        setattr(args, key, val)
    defaults = RunConfig()
    m = getattr(args, "m", None)
    return RunConfig(system=getattr(args, "system", None) or defaults.system,
                     m=tuple(m) if m else defaults.m,
                     tol=args.tol if args.tol is not None else defaults.tol,
                     max_refine=args.max_refine if args.max_refine is not None else defaults.max_refine,
                     seed=args.seed if args.seed is not None else defaults.seed,
                     fmt=args.fmt or defaults.fmt)


def _explicit_dests(parser: argparse.ArgumentParser, argv: Sequence[str]) -> set[str]:
    """Destinations set on the command line (used to give flags precedence over the config)."""
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    cmd = next((a for a in argv if a in sub.choices), None)
    out: set[str] = set()
    if cmd is None:
        return out
    flags = {}
    for action in sub.choices[cmd]._actions:
        for opt in action.option_strings:
            flags[opt] = action.dest
    for tok in argv:
        key = tok.split("=", 1)[0]
        if key in flags:
            out.add(flags[key])
    return out


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _merge_config(args, _explicit_dests(parser, argv))
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:        # --help
        return int(exc.code or 0)
    try:
        payload, code = args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (DomainError, NotAvailable, Singular, RootSystemError, JacobiError, HypergeometricError,
            QuadratureError, ValueError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    fmt = "csv" if payload.pop("_force_csv", False) else cfg.fmt
    stdout.write(render({"command": args.command, **payload} if fmt != "csv" or "rows" not in payload
                        else payload, fmt))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
