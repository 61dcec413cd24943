"""Command-line front end.

    entropic-particles catalog
    entropic-particles spectrum --profile lorentzian --params S_max=0.01 --format csv
    entropic-particles totals --profile black_hole_analog --params M=0.1
    entropic-particles diagnose --profile beta_decay --params s=0.05
    entropic-particles validate [--criteria 1,3,9]
    entropic-particles series-check --params p=0.3,q=0.2,s=0.1,order=6

Exit codes: 0 success, 2 usage error, 3 divergence without a cutoff,
4 numerical non-convergence, 5 validation failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import (ConvergenceError, DiscontinuityError, DivergenceError, ProfileError,
                     RegularizationRequired)

EXIT_OK, EXIT_USAGE, EXIT_DIVERGENT, EXIT_NONCONVERGED, EXIT_VALIDATION = 0, 2, 3, 4, 5


@dataclass
class RunConfig:
    profile: str | None
    params: dict
    pmin: float
    pmax: float
    count: int
    spacing: str
    tol: float
    reg: str | None
    eps: float | None
    uv_cutoff: float | None
    format: str
    precision: int
    force_numeric: bool
    workers: int

    def __post_init__(self):
        if not self.pmin > 0:
            raise ValueError("--pmin must be positive")
        if not self.pmax > self.pmin:
            raise ValueError("--pmax must exceed --pmin")
        if self.count < 2:
            raise ValueError("--count must be at least 2")
        if not 0 < self.tol <= 1e-2:
            raise ValueError("--tol must lie in (0, 1e-2]")
        if self.eps is not None and not self.eps > 0:
            raise ValueError("--eps must be positive")
        if self.uv_cutoff is not None and not self.uv_cutoff > 0:
            raise ValueError("--uv-cutoff must be positive")
        if not 1 <= self.precision <= 17:
            raise ValueError("--precision must lie in [1, 17]")

    def pgrid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.pmin, self.pmax, self.count)
        return np.linspace(self.pmin, self.pmax, self.count)


class UsageError(Exception):
    pass


def parse_params(text: str | None) -> dict:
    """'a=1,b=2.5' -> {'a': 1.0, 'b': 2.5}."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, val = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"bad parameter '{item}' (expected key=value)")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"parameter '{key.strip()}' is not a number: '{val}'") from None
    return out


# ---------------------------------------------------------------------------
# output


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _round(x: float, precision: int) -> float:
    return float(f"{x:.{precision}g}")


def _jsonable(obj, precision):
    if isinstance(obj, (bool, type(None), str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return _round(x, precision)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real, precision), "im": _jsonable(obj.imag, precision)}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v, precision) for v in obj]
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict(), precision)
    return str(obj)


def dump_json(doc, precision: int = 12) -> str:
    return json.dumps(_jsonable(doc, precision), indent=2, sort_keys=True) + "\n"


def _fmt(x, precision):
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{precision}g}"
    return "" if x is None else str(x)


def dump_csv(header, rows, precision: int = 12) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x, precision) for x in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands; each returns (results, csv header, csv rows, errors, exit code)


def _profile(cfg):
    from .profiles import make_profile

    if not cfg.profile:
        raise UsageError("--profile is required")
    return make_profile(cfg.profile, cfg.params)


def _cmd_catalog(cfg, args):
    from .profiles import CATALOG

    results = [{"name": k, "required": list(v[1]), "optional": dict(v[2])} for k, v in CATALOG.items()]
    rows = [(r["name"], " ".join(r["required"]),
             " ".join(f"{k}={v:g}" for k, v in r["optional"].items())) for r in results]
    return results, ("name", "required", "optional"), rows, [], EXIT_OK


def _cmd_spectrum(cfg, args):
    from .spectra import (RadiationSpectrum, _regularized_n_of_p, particle_spectrum,
                          regularized_particle_spectrum)

    p = _profile(cfg)
    grid = cfg.pgrid()
    if cfg.reg and not p.integrable:
        if cfg.eps is not None:
            # fixed regulator, no limit taken
            vals = [_regularized_n_of_p(p, float(pv), cfg.reg_kind, cfg.eps, cfg.tol) for pv in grid]
            spec = RadiationSpectrum(grid, vals, np.zeros(len(grid)), p.name,
                                     notes=[f"regulator {cfg.reg_kind} at eps={cfg.eps:g}"])
        else:
            spec, _ = regularized_particle_spectrum(p, grid, cfg.reg_kind, tol=cfg.tol)
    else:
        spec = particle_spectrum(p, grid, cfg.tol, cfg.uv_cutoff, cfg.force_numeric, cfg.workers)
    results = {"p": spec.p, "N_p": spec.N_p, "err": spec.err, "notes": spec.notes}
    return results, ("p", "N_p", "err"), spec.rows(), [], EXIT_OK


def _cmd_totals(cfg, args):
    from .spectra import compute_totals, regularized_totals

    p = _profile(cfg)
    if cfg.reg and not p.integrable:
        if cfg.eps is not None:
            raise UsageError("totals with --reg remove the regulator; --eps is not used")
        n, e, _ = regularized_totals(p, cfg.reg_kind, tol=max(cfg.tol * 1e-2, 1e-12))
        results = {"N_total": n, "E_spectral": e, "E_stress": None,
                   "energy_per_quantum": (e / n) if n else None, "errors": {},
                   "divergences": {}, "notes": [f"regulator {cfg.reg_kind} removed"]}
        code = EXIT_OK
    else:
        t = compute_totals(p, cfg.tol, cfg.uv_cutoff, None, cfg.force_numeric)
        results = t.to_dict()
        # the stress route has no cutoff to offer, so only spectral verdicts set the exit code
        spectral_div = set(t.divergences) - {"E_stress"}
        code = EXIT_OK
        if spectral_div or (t.divergences and cfg.uv_cutoff is None):
            code = EXIT_DIVERGENT
    errors = list(results.get("divergences", {}).values())
    rows = [(k, results[k], results.get("errors", {}).get(k))
            for k in ("N_total", "E_spectral", "E_stress", "energy_per_quantum")]
    return results, ("quantity", "value", "err"), rows, errors, code


def _cmd_diagnose(cfg, args):
    from .diagnostics import classify

    p = _profile(cfg)
    rep = classify(p, tol=cfg.tol, force_numeric=cfg.force_numeric).to_dict()
    rows = [(k, v if not isinstance(v, list) else "; ".join(map(str, v))) for k, v in rep.items()]
    return rep, ("key", "value"), rows, [], EXIT_OK


def _cmd_validate(cfg, args):
    from .acceptance import CRITERIA, format_line, run_criterion
    from .profiles import validate_profile

    ids = sorted(CRITERIA)
    if args.criteria:
        try:
            ids = [int(x) for x in args.criteria.split(",") if x.strip()]
        except ValueError:
            raise UsageError("--criteria takes comma-separated integers") from None
        bad = [i for i in ids if i not in CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria: {bad}")
    out = []
    for i in ids:
        r = run_criterion(i)
        out.append(r)
        if cfg.format == "csv":
            print(format_line(r), file=sys.stderr, flush=True)
    results = {"criteria": [r.to_dict() for r in out],
               "failed": [r.id for r in out if not r.passed]}
    if cfg.profile:
        results["profile_report"] = validate_profile(_profile(cfg)).to_dict()
    rows = [(r.id, "PASS" if r.passed else "FAIL", r.runtime, r.title) for r in out]
    errors = [{"type": "ValidationFailure", "criterion": r.id, "message": "; ".join(r.notes)}
              for r in out if not r.passed]
    return results, ("criterion", "status", "runtime_s", "title"), rows, errors, \
        EXIT_VALIDATION if errors else EXIT_OK


def _cmd_series_check(cfg, args):
    from .expansion import (beta_exact, beta_series, fourier_power_closed,
                            fourier_power_quadrature, series_residual_scaling)

    prm = {"p": 0.3, "q": 0.2, "s": 0.1, "order": 6, "kappa": 1.0}
    extra = set(cfg.params) - set(prm)
    if extra:
        raise UsageError(f"unknown series-check parameter(s): {sorted(extra)}")
    prm.update(cfg.params)
    p, q, s, kappa = prm["p"], prm["q"], prm["s"], prm["kappa"]
    order = int(prm["order"])
    exact = beta_exact(p, q, s, kappa)
    series = beta_series(p, q, s, order, kappa)
    rel = abs(series.value - exact.value) / abs(exact.value)
    fits = series_residual_scaling(p, q, kappa=kappa)
    d5 = []
    for n in (1, 2, 3):
        for w in (0.3, 1.0, 3.0):
            a, b = fourier_power_closed(n, w, s), fourier_power_quadrature(n, w, s)
            d5.append({"n": n, "omega": w, "closed": a, "quadrature": b,
                       "rel_diff": abs(a - b) / abs(b)})
    results = {"p": p, "q": q, "s": s, "kappa": kappa, "order": order, "beta_exact": exact.value,
               "beta_series": series.value, "rel_diff": rel,
               "residual_fits": [f.to_dict() for f in fits], "fourier_terms": d5}
    rows = [("beta_exact_abs", abs(exact.value)), ("beta_series_abs", abs(series.value)),
            ("rel_diff", rel)]
    rows += [(f"residual_slope_m{f.order}", f.slope) for f in fits]
    rows += [(f"F[z^{d['n']}]({d['omega']:g})_rel_diff", d["rel_diff"]) for d in d5]
    return results, ("quantity", "value"), rows, [], EXIT_OK


COMMANDS = {
    "catalog": _cmd_catalog,
    "spectrum": _cmd_spectrum,
    "totals": _cmd_totals,
    "diagnose": _cmd_diagnose,
    "validate": _cmd_validate,
    "series-check": _cmd_series_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--profile", help="catalog profile name (see 'catalog')")
    common.add_argument("--params", default="", help="comma-separated key=value list")
    common.add_argument("--pmin", type=float, default=0.01)
    common.add_argument("--pmax", type=float, default=5.0)
    common.add_argument("--count", type=int, default=50)
    common.add_argument("--spacing", choices=("linear", "log"), default="log")
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--reg", choices=("exp", "energy"), help="regularization scheme")
    common.add_argument("--eps", type=float, help="fixed regulator strength (spectrum only)")
    common.add_argument("--uv-cutoff", type=float, dest="uv_cutoff", help="UV cutoff on w")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--precision", type=int, default=12, help="significant digits")
    common.add_argument("--force-numeric", action="store_true", dest="force_numeric",
                        help="bypass closed-form transforms")
    common.add_argument("--workers", type=int, default=1, help="threads across grid points")
    parser = _ArgumentParser(prog="entropic-particles",
                             description="Particle creation from time-dependent entropy.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "validate":
            sp.add_argument("--criteria", help="comma-separated criterion ids (default: all)")
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(profile=args.profile, params=parse_params(args.params), pmin=args.pmin,
                    pmax=args.pmax, count=args.count, spacing=args.spacing, tol=args.tol,
                    reg=args.reg, eps=args.eps, uv_cutoff=args.uv_cutoff, format=args.format,
                    precision=args.precision, force_numeric=args.force_numeric,
                    workers=max(1, args.workers))
    cfg.reg_kind = {"exp": "exponential_time", "energy": "energy_dependent"}.get(cfg.reg)
    return cfg


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, (DivergenceError, RegularizationRequired, DiscontinuityError)):
        return EXIT_DIVERGENT
    if isinstance(exc, ConvergenceError):
        return EXIT_NONCONVERGED
    return EXIT_USAGE


def _error_dict(exc: Exception) -> dict:
    if hasattr(exc, "to_dict"):
        return exc.to_dict()
    return {"type": type(exc).__name__, "message": str(exc)}


def run(argv=None, out=None) -> int:
    """Run one CLI invocation; returns the exit code."""
    out = sys.stdout if out is None else out
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    fmt, precision = args.format, args.precision
    doc = {"profile": args.profile, "params": {}, "results": None, "errors": [],
           "meta": {"tolerances": {"tol": args.tol}, "cutoffs": {"uv": args.uv_cutoff},
                    "version": __version__, "command": args.command}}
    try:
        cfg = _config(args)
        doc["params"] = cfg.params
        if cfg.reg:
            doc["meta"]["regularization"] = {"scheme": cfg.reg_kind, "eps": cfg.eps}
        results, header, rows, errors, code = COMMANDS[args.command](cfg, args)
        doc["results"], doc["errors"] = results, errors
    except (UsageError, ProfileError, ValueError, ArithmeticError, RuntimeError) as exc:
        code = EXIT_USAGE if isinstance(exc, UsageError) else _exit_code(exc)
        doc["errors"] = [_error_dict(exc)]
        if fmt == "json":
            out.write(dump_json(doc, precision))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return code
    if fmt == "json":
        out.write(dump_json(doc, precision))
    else:
        out.write(dump_csv(header, rows, precision))
        for e in errors:
            print(f"error: {e.get('message', e)}", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
