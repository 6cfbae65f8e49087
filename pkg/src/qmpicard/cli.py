"""Command-line front end: ``algebra``, ``construct``, ``fibers`` and ``leray``.

Exit codes: 0 ok, 2 split algebra, 3 definite algebra, 4 order failure,
5 polarization failure, 6 numeric check failure, 7 ledger input error,
1 anything else (bad arguments included).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import exact
from .errors import QMError
from .leray import FibrationData, leray_ranks, picard_verdict
from .orders import (
    find_mu,
    polarization_gram,
    saturate_order,
    standard_order,
    unit_invariance_check,
    verify_order,
)
from .periods import (
    RIEMANN_TOL,
    SiegelPoint,
    build_splitting,
    kodaira_spencer_rank,
    period_matrix,
    qm_period_map,
)
from .quaternion import compute_invariants, format_element, parse_element
from .symplectic import embed_unit, enumerate_units, is_in_Gn, is_symplectic, symplectic_basis
from .theta import classify_fiber

CSV_COLUMNS = ("re_tau", "im_tau", "class", "min_even_null", "ks_norm", "riemann_residual")
DEFAULT_GRID = "-0.5:0.5:10,0.5:2.0:10"


@dataclass
class RunConfig:
    """Every knob of a run; flat scalar values so it fits a key-value file."""

    a: str = "-1"
    b: str = "3"
    order: str | None = None
    saturate: bool = True
    mu: str | None = None
    mu_radius: int = 10
    units_height: int = 2
    g_levels: str = "2,3,4"
    taus: str | None = None
    grid: str | None = None
    omega_direct: str | None = None
    theta_eps: float = 1e-14
    null_threshold: float = 1e-8
    riemann_tol: float = RIEMANN_TOL
    ks_step: float = 1e-6
    format: str = "json"

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> RunConfig:
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]
        names = {f.name: f for f in fields(cls)}
        unknown = set(data) - set(names)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls()
        for key, value in data.items():
            setattr(cfg, key, value)
        cfg.validate()
        return cfg

    def validate(self):
        self.a, self.b = str(Fraction(str(self.a))), str(Fraction(str(self.b)))
        if self.format not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, not {self.format!r}")

    def to_mapping(self) -> dict[str, Any]:
        return asdict(self)


def _load_config(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    out: dict[str, Any] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = _coerce(value.strip())
    return out


def _coerce(value: str):
    low = value.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null", ""):
        return None
    for kind in (int, float):
        try:
            return kind(value)
        except ValueError:
            pass
    return value


def _build_config(args, keys) -> RunConfig:
    base = _load_config(getattr(args, "config", None))
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    return RunConfig.from_mapping(base)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _parse_tau(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def _complex_pair(z) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_strings(m):
    return [[str(x) for x in row] for row in m]


def _ints(m):
    return [[int(x) for x in row] for row in m]


# --------------------------------------------------------------------- algebra

def cmd_algebra(cfg: RunConfig) -> tuple[dict, int]:
    alg = compute_invariants(Fraction(cfg.a), Fraction(cfg.b))
    return _algebra_doc(alg), 0


def _algebra_doc(alg):
    return {
        "a": str(alg.a),
        "b": str(alg.b),
        "ramified_primes": list(alg.ramified_primes),
        "discriminant": alg.discriminant,
        "indefinite": alg.indefinite,
    }


# ------------------------------------------------------------------- construct

def _order_and_mu(cfg: RunConfig):
    alg = compute_invariants(Fraction(cfg.a), Fraction(cfg.b))
    if cfg.order:
        basis = [parse_element(s) for s in cfg.order.split(";")]
    else:
        basis = standard_order(alg)
    order = saturate_order(basis, alg) if cfg.saturate else verify_order(basis, alg)
    mu = parse_element(cfg.mu) if cfg.mu else find_mu(order, alg, cfg.mu_radius)
    return alg, order, mu


def cmd_construct(cfg: RunConfig) -> tuple[dict, int]:
    alg, order, mu = _order_and_mu(cfg)
    warnings = []
    if not order.maximal:
        warnings.append(f"order is not maximal: reduced discriminant {order.reduced_discriminant} "
                        f"!= {alg.discriminant}")
    pol = polarization_gram(order, mu, alg)
    sb = symplectic_basis(pol.gram)
    units = enumerate_units(order, alg, cfg.units_height)
    levels = [int(x) for x in str(cfg.g_levels).split(",") if str(x).strip()]
    unit_docs = []
    mats = {}
    for u in units:
        m = embed_unit(u, order, sb, alg)
        mats[u] = m.matrix
        unit_docs.append({
            "unit": format_element(u),
            "matrix": _ints(m.matrix),
            "in_G": {str(n): is_in_Gn(u, order, sb, alg, n) for n in levels},
        })
    homomorphic = all(
        [list(r) for r in embed_unit(alg.mul(u, v), order, sb, alg).matrix]
        == exact.matmul(mats[u], mats[v])
        for u in units for v in units
    )
    checks = {
        "maximal": order.maximal,
        "principal_polarization": list(pol.elementary_divisors) == [1, 1, 1, 1],
        "unit_invariance": unit_invariance_check(order, pol.gram, units, alg),
        "symplectic": all(is_symplectic(m) for m in mats.values()),
        "homomorphism": homomorphic,
        "polarization_expressions_agree": pol.expressions_agree,
    }
    doc = {
        "config": cfg.to_mapping(),
        "algebra": _algebra_doc(alg),
        "order": {
            "basis": [format_element(e) for e in order.elements],
            "reduced_discriminant": order.reduced_discriminant,
            "maximal": order.maximal,
            "saturation_rounds": order.saturation_rounds,
        },
        "mu": format_element(mu),
        "gram": _ints(pol.gram),
        "pfaffian": pol.pfaffian,
        "elementary_divisors": list(pol.elementary_divisors),
        "symplectic_basis": {
            "change_of_basis": _ints(sb.change_of_basis),
            "elements": [format_element(f) for f in sb.elements(order)],
        },
        "units": unit_docs,
        "checks": checks,
        "warnings": warnings,
    }
    failed = [k for k, v in checks.items() if not v and k != "polarization_expressions_agree"]
    return doc, (6 if failed else 0)


# ---------------------------------------------------------------------- fibers

def _grid(text: str) -> list[complex]:
    re_part, im_part = text.split(",")
    r0, r1, nr = re_part.split(":")
    i0, i1, ni = im_part.split(":")
    res = np.linspace(float(r0), float(r1), int(nr))
    ims = np.linspace(float(i0), float(i1), int(ni))
    return [complex(x, y) for y in ims for x in res]


def _parse_omega_direct(text: str) -> np.ndarray:
    kind, _, body = text.partition(":")
    vals = [_parse_tau(v) for v in body.split(",")]
    if kind == "diag" and len(vals) == 2:
        return np.diag(vals)
    if kind == "full" and len(vals) == 3:
        return np.array([[vals[0], vals[1]], [vals[1], vals[2]]])
    raise ValueError(f"cannot parse omega text {text!r}; use diag:t1,t2 or full:w11,w12,w22")


def _fiber_row(job) -> dict:
    cfg_map, tau, context = job
    cfg = RunConfig.from_mapping(cfg_map)
    row = {"re_tau": float(tau.real), "im_tau": float(tau.imag)}
    try:
        order, sb, sp = context
        point = period_matrix(tau, order, sb, sp, cfg.riemann_tol)
        ks = kodaira_spencer_rank(tau, qm_period_map(order, sb, sp, cfg.riemann_tol), cfg.ks_step)
        fc = classify_fiber(point, cfg.null_threshold, cfg.theta_eps)
        row.update({
            "class": fc.label,
            "min_even_null": fc.min_even_null,
            "ks_norm": ks,
            "riemann_residual": point.riemann_residual,
            "omega": [[_complex_pair(z) for z in r] for r in point.omega],
            "swapped": point.swapped,
            "witness": str(fc.witness) if fc.witness else None,
        })
    except (QMError, ValueError, np.linalg.LinAlgError) as err:
        row.update({"class": f"Error:{type(err).__name__}", "error": str(err),
                    "min_even_null": None, "ks_norm": None, "riemann_residual": None})
    return row


def _direct_row(cfg: RunConfig, omega: np.ndarray) -> dict:
    row = {"re_tau": None, "im_tau": None, "ks_norm": None}
    try:
        point = SiegelPoint.from_matrix(omega, cfg.riemann_tol)
        fc = classify_fiber(point, cfg.null_threshold, cfg.theta_eps)
        row.update({
            "class": fc.label,
            "min_even_null": fc.min_even_null,
            "riemann_residual": point.riemann_residual,
            "omega": [[_complex_pair(z) for z in r] for r in point.omega],
            "witness": str(fc.witness) if fc.witness else None,
        })
    except (QMError, ValueError) as err:
        row.update({"class": f"Error:{type(err).__name__}", "error": str(err),
                    "min_even_null": None, "riemann_residual": None})
    return row


def cmd_fibers(cfg: RunConfig, jobs: int = 1) -> tuple[list[dict], int]:
    if cfg.omega_direct:
        rows = [_direct_row(cfg, _parse_omega_direct(s)) for s in cfg.omega_direct.split(";")]
    else:
        alg, order, mu = _order_and_mu(cfg)
        pol = polarization_gram(order, mu, alg)
        context = (order, symplectic_basis(pol.gram), build_splitting(alg))
        if cfg.taus:
            taus = [_parse_tau(t) for t in cfg.taus.split(";")]
        else:
            taus = _grid(cfg.grid or DEFAULT_GRID)
        work = [(cfg.to_mapping(), t, context) for t in taus]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_fiber_row, work))
        else:
            rows = [_fiber_row(w) for w in work]
    status = 6 if any(str(r["class"]).startswith("Error:") for r in rows) else 0
    return rows, status


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(["" if row.get(c) is None else _fmt(row.get(c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


# ----------------------------------------------------------------------- leray

def cmd_leray(ms: str, h11: int | None, extremal: bool, genus_base: int, fiber_genus: int,
              pg_zero: bool = False) -> tuple[dict, int]:
    counts = tuple(int(x) for x in ms.split(",") if x.strip()) if ms else ()
    data = FibrationData(genus_base, fiber_genus, counts, h11)
    ranks = leray_ranks(data)
    doc = {"input": {"ms": list(counts), "h11": h11, "extremal": extremal,
                     "genus_base": genus_base, "fiber_genus": fiber_genus},
           "ranks": asdict(ranks)}
    if h11 is not None:
        verdict = picard_verdict(data, extremal, pg_zero)
        doc["verdict"] = {"rho": verdict.rho, "maximal": verdict.maximal,
                          "rho_is_exact": verdict.exact}
    return doc, 0


# ------------------------------------------------------------------------ main

_CONSTRUCT_KEYS = ("a", "b", "order", "saturate", "mu", "mu_radius", "units_height", "g_levels")
_FIBER_KEYS = _CONSTRUCT_KEYS + ("taus", "grid", "omega_direct", "theta_eps", "null_threshold",
                                 "riemann_tol", "ks_step", "format")


def _add_algebra_flags(p):
    p.add_argument("-a", type=str, default=None, help="i^2 = a (rational, e.g. -1 or 3/2)")
    p.add_argument("-b", type=str, default=None, help="j^2 = b")


def _add_order_flags(p):
    _add_algebra_flags(p)
    p.add_argument("--config", type=str, default=None, help="JSON or key=value config file")
    p.add_argument("--order", type=str, default=None,
                   help="order basis as ';'-separated quaternions, e.g. '1;i;j;1/2+1/2*i+1/2*j+1/2*ij'")
    p.add_argument("--no-saturate", dest="saturate", action="store_const", const=False, default=None)
    p.add_argument("--mu", type=str, default=None)
    p.add_argument("--mu-radius", type=int, default=None)
    p.add_argument("--units-height", type=int, default=None)
    p.add_argument("--g-levels", type=str, default=None, help="levels n for G_n membership, e.g. 2,3")
    p.add_argument("--output", "-o", type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmpicard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", help="ramification, discriminant and the division/indefinite gate")
    _add_algebra_flags(p)
    p.add_argument("--config", type=str, default=None)

    p = sub.add_parser("construct", help="order, mu, polarization Gram, symplectic basis, units")
    _add_order_flags(p)

    p = sub.add_parser("fibers", help="period matrices and theta-divisor classification over tau")
    _add_order_flags(p)
    p.add_argument("--tau", dest="tau_list", action="append", default=None,
                   help="sample point, e.g. 0.3+1.2i (repeatable)")
    p.add_argument("--grid", type=str, default=None, help=f"re0:re1:n,im0:im1:m (default {DEFAULT_GRID})")
    p.add_argument("--omega-direct", type=str, default=None,
                   help="bypass the QM family: diag:t1,t2 or full:w11,w12,w22")
    p.add_argument("--theta-eps", type=float, default=None)
    p.add_argument("--null-threshold", type=float, default=None)
    p.add_argument("--riemann-tol", type=float, default=None)
    p.add_argument("--ks-step", type=float, default=None)
    p.add_argument("--format", type=str, choices=("json", "csv"), default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("leray", help="Leray rank ledger and Picard verdict")
    p.add_argument("--ms", type=str, default="", help="component counts of singular fibers, e.g. 3,2")
    p.add_argument("--h11", type=int, default=None)
    p.add_argument("--extremal", action="store_true")
    p.add_argument("--pg-zero", action="store_true", help="geometric genus zero")
    p.add_argument("--genus-base", type=int, default=0)
    p.add_argument("--fiber-genus", type=int, default=2)
    return parser


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# flags whose values may legitimately start with "-" (e.g. -a -4/9, --grid -0.5:0.5:10,...)
_SIGNED_VALUE_FLAGS = {"-a", "-b", "--mu", "--order", "--tau", "--grid", "--omega-direct"}


def _glue_signed_values(argv: list[str]) -> list[str]:
    out, k = [], 0
    while k < len(argv):
        tok = argv[k]
        if tok in _SIGNED_VALUE_FLAGS and k + 1 < len(argv) and argv[k + 1].startswith("-"):
            sep = "=" if tok.startswith("--") else ""
            out.append(f"{tok}{sep}{argv[k + 1]}")
            k += 2
        else:
            out.append(tok)
            k += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_signed_values(argv))
    try:
        if args.command == "algebra":
            cfg = _build_config(args, ("a", "b"))
            doc, code = cmd_algebra(cfg)
            _emit(_dump(doc), None)
        elif args.command == "construct":
            cfg = _build_config(args, _CONSTRUCT_KEYS)
            doc, code = cmd_construct(cfg)
            _emit(_dump(doc), args.output)
        elif args.command == "fibers":
            if args.tau_list:
                args.taus = ";".join(args.tau_list)
            cfg = _build_config(args, _FIBER_KEYS)
            rows, code = cmd_fibers(cfg, args.jobs)
            if cfg.format == "csv":
                _emit(_csv_text(rows), args.output)
            else:
                _emit(_dump({"config": cfg.to_mapping(), "rows": rows}), args.output)
        else:
            doc, code = cmd_leray(args.ms, args.h11, args.extremal, args.genus_base,
                                  args.fiber_genus, args.pg_zero)
            _emit(_dump(doc), None)
    except QMError as err:
        sys.stdout.write(_dump({"error": type(err).__name__, "message": str(err)}))
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return err.exit_code
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
