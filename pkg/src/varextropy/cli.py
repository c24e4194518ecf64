"""Command-line front end.

Verbs::

    varextropy measures    --x exp:5 [--y exp:4] [--data FILE]
    varextropy compare     --data bearings --families weibull,gamma [--fixed lognormal:4.43,0.45]
    varextropy bounds      --x exp:5 --y exp:4 --series-n 5 --cheb-eps 0.02
    varextropy genfun      --x exp:1 [--y exp:2] [--t 0,1,2]
    varextropy order-stats --x exp:1 --i 2 --n 3
    varextropy repro       --example locomotive|bearings

Distributions are written ``family:p1,p2``. Output goes to stdout (or
``--output``) as json, aligned text or csv. Failures print a json object with
an error category to stderr and exit non-zero (2 for usage errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import bounds as _bounds
from . import genfun as _genfun
from . import measures as _measures
from . import order_stats as _order
from .datasets import FIXTURES, load_dataset
from .distributions import Distribution, Family, from_spec
from .errors import VarJError
from .estimation import empirical_measures, kde
from .gof import compare_models
from .quadrature import DEFAULT_TOL

__all__ = ["RunConfig", "UsageError", "parse_args", "parse_dist", "run", "render", "main"]

VERBS = ("measures", "compare", "bounds", "genfun", "order-stats", "repro")
FORMATS = ("json", "text", "csv")
SIG_DIGITS = 10

REPRO = {
    "locomotive": {
        "dataset": "locomotive",
        "candidates": ["lognormal", "lognormal:4.427955,0.4516975"],
        "names": ["Y1", "Y2"],
    },
    "bearings": {
        "dataset": "bearings",
        "candidates": ["weibull", "gamma"],
        "names": ["Y1", "Y2"],
    },
}


class UsageError(VarJError):
    category = "usage-error"


@dataclass
class RunConfig:
    command: str
    dataset: Optional[str] = None
    x: Optional[Distribution] = None
    y: Optional[Distribution] = None
    families: list = field(default_factory=list)
    fixed: list = field(default_factory=list)
    tol: float = DEFAULT_TOL
    bandwidth: Optional[float] = None
    gridpoints: int = 512
    seed: int = 0
    output: Optional[str] = None
    format: str = "json"
    plot: Optional[str] = None
    series_n: int = 5
    cheb_eps: float = 0.02
    t: tuple = (0.0, 0.5, 1.0, 2.0)
    rank: Optional[int] = None
    size: Optional[int] = None
    example: Optional[str] = None
    weighted: bool = True


def parse_dist(text: str) -> Distribution:
    """``"gamma:4.0255,0.0557"`` -> Distribution."""
    fam, sep, rest = text.partition(":")
    if not sep or not rest.strip():
        raise UsageError(f"distribution spec {text!r} must look like family:p1[,p2]")
    try:
        params = [float(p) for p in rest.split(",")]
    except ValueError:
        raise UsageError(f"bad parameter list in {text!r}") from None
    try:
        return from_spec(fam.strip(), params)
    except VarJError as exc:
        raise UsageError(f"{text!r}: {exc}") from None


def _floats(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--output", "-o")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int, default=0)

    data = _Parser(add_help=False)
    data.add_argument("--bandwidth", type=float)
    data.add_argument("--gridpoints", type=int, default=512)
    data.add_argument("--plot", metavar="SVG")

    p = _Parser(prog="varextropy", description="Extropy, varextropy and related measures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measures", parents=[common, data], help="measure catalogue")
    m.add_argument("--x")
    m.add_argument("--y")
    m.add_argument("--data", help="fixture name or file; estimated density replaces --x")
    m.add_argument("--no-weighted", dest="weighted", action="store_false")

    c = sub.add_parser("compare", parents=[common, data], help="fit and compare models")
    c.add_argument("--data", required=True)
    c.add_argument("--families", default="")
    c.add_argument("--fixed", action="append", default=[], help="fixed candidate, repeatable")

    b = sub.add_parser("bounds", parents=[common], help="lower bounds for VarJ(X,Y)")
    b.add_argument("--x", required=True)
    b.add_argument("--y", required=True)
    b.add_argument("--series-n", type=int, default=5)
    b.add_argument("--cheb-eps", type=float, default=0.02)

    g = sub.add_parser("genfun", parents=[common], help="generating functions")
    g.add_argument("--x", required=True)
    g.add_argument("--y")
    g.add_argument("--t", default="0,0.5,1,2")

    o = sub.add_parser("order-stats", parents=[common], help="order-statistic measures")
    o.add_argument("--x", required=True)
    o.add_argument("--i", type=int, required=True)
    o.add_argument("--n", type=int, required=True)

    r = sub.add_parser("repro", parents=[common, data], help="bundled example reproductions")
    r.add_argument("--example", choices=sorted(REPRO), required=True)
    return p


def _default_tol() -> float:
    env = os.environ.get("VARJ_TOL")
    if env is None or not env.strip():
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError:
        raise UsageError(f"VARJ_TOL must be a decimal number, got {env!r}") from None


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = _build_parser().parse_args(list(argv))
    cfg = RunConfig(command=ns.command, format=ns.format, output=ns.output, seed=ns.seed)
    cfg.tol = ns.tol if ns.tol is not None else _default_tol()
    if not (math.isfinite(cfg.tol) and cfg.tol > 0):
        raise UsageError("tolerance must be positive")
    if hasattr(ns, "gridpoints"):
        cfg.bandwidth, cfg.gridpoints, cfg.plot = ns.bandwidth, ns.gridpoints, ns.plot
        if cfg.gridpoints < 16:
            raise UsageError("--gridpoints must be at least 16")
        if cfg.bandwidth is not None and not cfg.bandwidth > 0:
            raise UsageError("--bandwidth must be positive")
    if getattr(ns, "x", None):
        cfg.x = parse_dist(ns.x)
    if getattr(ns, "y", None):
        cfg.y = parse_dist(ns.y)
    if ns.command == "measures":
        cfg.dataset, cfg.weighted = ns.data, ns.weighted
        if cfg.x is None and cfg.dataset is None:
            raise UsageError("measures needs --x or --data")
        if cfg.dataset is not None and cfg.y is None:
            raise UsageError("measures --data needs a reference --y")
    elif ns.command == "compare":
        cfg.dataset = ns.data
        try:
            cfg.families = [Family.parse(f.strip()).value for f in ns.families.split(",") if f.strip()]
        except VarJError as exc:
            raise UsageError(str(exc)) from None
        cfg.fixed = [parse_dist(f) for f in ns.fixed]
        if len(cfg.families) + len(cfg.fixed) < 2:
            raise UsageError("compare needs at least two candidates")
    elif ns.command == "bounds":
        cfg.series_n, cfg.cheb_eps = ns.series_n, ns.cheb_eps
    elif ns.command == "genfun":
        cfg.t = _floats(ns.t)
        if not cfg.t:
            raise UsageError("--t needs at least one value")
    elif ns.command == "order-stats":
        cfg.rank, cfg.size = ns.i, ns.n
    elif ns.command == "repro":
        cfg.example = ns.example
    return cfg


# -- computations -------------------------------------------------------------

def _dist_doc(d: Distribution) -> dict:
    return {"family": d.family.value, "params": d.param_dict}


def _measure_values(reports) -> dict:
    return {name: r.value for name, r in reports.items()}


def _measures_doc(cfg: RunConfig) -> dict:
    doc = {"command": "measures", "tol": cfg.tol}
    if cfg.dataset is not None:
        sample = load_dataset(cfg.dataset)
        est = kde(sample, cfg.bandwidth, cfg.gridpoints)
        reps = {r.name: r for r in empirical_measures(est, cfg.y)}
        reps["extropy"] = _measures.extropy(est)
        reps["varextropy"] = _measures.varextropy(est)
        doc.update(dataset=cfg.dataset, n=sample.n, bandwidth=est.bandwidth, y=_dist_doc(cfg.y))
        doc["_plot"] = (est, {"y": cfg.y})
    else:
        doc["x"] = _dist_doc(cfg.x)
        if cfg.y is not None:
            doc["y"] = _dist_doc(cfg.y)
            reps = _measures.pair_catalogue(cfg.x, cfg.y, cfg.tol, weighted=cfg.weighted)
        else:
            reps = {
                "extropy": _measures.extropy(cfg.x, tol=cfg.tol),
                "varextropy": _measures.varextropy(cfg.x, tol=cfg.tol),
                "entropy": _measures.entropy(cfg.x, tol=cfg.tol),
                "varentropy": _measures.varentropy(cfg.x, tol=cfg.tol),
            }
            lo = cfg.x.support[0]
            if cfg.weighted and lo >= 0:
                reps["weighted_extropy"] = _measures.extropy(cfg.x, True, cfg.tol)
                reps["weighted_varextropy"] = _measures.varextropy(cfg.x, True, cfg.tol)
    order = [k for k in _measures.CATALOGUE if k in reps] + sorted(
        k for k in reps if k not in _measures.CATALOGUE
    )
    doc["measures"] = {k: reps[k].value for k in order}
    doc["abs_error"] = {k: reps[k].abs_error for k in order}
    return doc


def _comparison_doc(sample_name, sample, report, command) -> dict:
    cands = {}
    for c in report.candidates:
        if not c.ok:
            cands[c.name] = {"family": c.family, "fitted": c.fitted,
                             "error": c.error, "error_category": c.error_category}
            continue
        row = {"family": c.family, "fitted": c.fitted}
        row.update(c.distribution.param_dict)
        row.update(
            loglik=c.criteria.loglik,
            ks_statistic=c.ks.statistic,
            ks_pvalue=c.ks.pvalue,
            ad_statistic=c.ad,
            aic=c.criteria.aic,
            caic=c.criteria.caic,
            bic=c.criteria.bic,
            hqic=c.criteria.hqic,
        )
        row.update(_measure_values(c.measures))
        cands[c.name] = row
    decisions = {}
    for key, dec in (("j", report.j_decision), ("k", report.k_decision)):
        if dec is None:
            continue
        decisions[key] = {
            "label": dec.preferred,
            "preferred": report.preferred(key),
            "residual": dec.residual,
            "note": dec.note,
        }
    return {
        "command": command,
        "dataset": sample_name,
        "n": sample.n,
        "bandwidth": report.estimate.bandwidth,
        "gridpoints": int(report.estimate.grid.size),
        "candidates": cands,
        "ranking": list(report.ranking),
        "decisions": decisions,
        "_plot": (report.estimate, {c.name: c.distribution for c in report.candidates if c.ok}),
        "_failed": [c.name for c in report.candidates if not c.ok],
    }


def _compare_doc(cfg: RunConfig) -> dict:
    sample = load_dataset(cfg.dataset)
    cands = list(cfg.families) + list(cfg.fixed)
    report = compare_models(sample, cands, bandwidth=cfg.bandwidth, gridpoints=cfg.gridpoints)
    return _comparison_doc(cfg.dataset, sample, report, "compare")


def _repro_doc(cfg: RunConfig) -> dict:
    spec = REPRO[cfg.example]
    sample = load_dataset(spec["dataset"])
    cands = [parse_dist(c) if ":" in c else c for c in spec["candidates"]]
    report = compare_models(sample, cands, names=spec["names"],
                            bandwidth=cfg.bandwidth, gridpoints=cfg.gridpoints)
    doc = _comparison_doc(spec["dataset"], sample, report, "repro")
    doc["example"] = cfg.example
    summary = {}
    for c in report.candidates:
        if c.ok:
            m = c.measures
            summary[f"J(X|{c.name})"] = m["discrimination"].value
            summary[f"VarJ(X|{c.name})"] = m["varj_divergence"].value
            summary[f"K(X,{c.name})"] = m["kl_divergence"].value
            summary[f"VarK(X,{c.name})"] = m["var_kl"].value
    doc["summary"] = summary
    return doc


def _series_for(x: Distribution, y: Distribution, n: int):
    fx, fy = x.family, y.family
    if fx is Family.EXPONENTIAL and fy is Family.EXPONENTIAL:
        return _bounds.series_bound_exponential(x.params[0], y.params[0], n)

    def power_shape(d):
        if d.family is Family.POWER:
            return d.params[0]
        if d.family is Family.UNIFORM and d.params == (0.0, 1.0):
            return 1.0
        return None

    a, b = power_shape(x), power_shape(y)
    if a is not None and b is not None:
        return _bounds.series_bound_power(a, b, n)
    return None


def _bound_doc(res) -> dict:
    out = {"value": res.value, "valid": res.valid, "method": res.method}
    if res.order_n is not None:
        out["order_n"] = res.order_n
        out["terms"] = list(res.terms)
    if res.epsilon is not None:
        out["epsilon"] = res.epsilon
    return out


def _bounds_doc(cfg: RunConfig) -> dict:
    exact = _measures.varj_inaccuracy(cfg.x, cfg.y, tol=cfg.tol)
    doc = {"command": "bounds", "x": _dist_doc(cfg.x), "y": _dist_doc(cfg.y),
           "varj_inaccuracy": exact.value}
    series = _series_for(cfg.x, cfg.y, cfg.series_n)
    doc["series"] = None if series is None else _bound_doc(series)
    doc["chebyshev"] = _bound_doc(_bounds.chebyshev_bound(cfg.x, cfg.y, cfg.cheb_eps, tol=cfg.tol))
    if cfg.x.family is Family.EXPONENTIAL and cfg.y.family is Family.EXPONENTIAL:
        doc["chebyshev_closed_form"] = _bound_doc(
            _bounds.chebyshev_bound_exponential(cfg.x.params[0], cfg.y.params[0], cfg.cheb_eps)
        )
    return doc


def _genfun_doc(cfg: RunConfig) -> dict:
    t = np.asarray(cfg.t, dtype=float)
    mom = _genfun.extropy_moments(cfg.x, cfg.tol)
    doc = {
        "command": "genfun",
        "x": _dist_doc(cfg.x),
        "t": list(cfg.t),
        "G": [float(v) for v in np.atleast_1d(_genfun.extropy_genfun(cfg.x, t, cfg.tol))],
        "moments": {
            "j": mom.j, "varj": mom.varj, "skewj": mom.skewj, "kurtj": mom.kurtj,
            **{f"m{k}": v for k, v in enumerate(mom.raw, start=1)},
        },
        "log_G_derivatives": {
            f"d{k}": _genfun.genfun_derivative_check(cfg.x, k, cfg.tol) for k in (1, 2)
        },
    }
    if cfg.y is not None:
        doc["y"] = _dist_doc(cfg.y)
        doc["divergence_G"] = [
            float(v) for v in np.atleast_1d(_genfun.divergence_genfun(cfg.x, cfg.y, t, cfg.tol))
        ]
    return doc


def _order_doc(cfg: RunConfig) -> dict:
    try:
        spec = _order.OrderStatSpec(cfg.x, cfg.rank, cfg.size)
    except VarJError as exc:
        raise UsageError(str(exc)) from None
    dens = _order.order_stat_density(spec)
    return {
        "command": "order-stats",
        "parent": _dist_doc(cfg.x),
        "i": spec.i,
        "n": spec.n,
        "varj_inaccuracy_order": _order.varj_inaccuracy_order(spec, cfg.tol).value,
        "varj_divergence_order": _order.varj_divergence_order(spec, cfg.tol).value,
        "direct": {
            "varj_inaccuracy_order": _measures.varj_inaccuracy(cfg.x, dens, tol=cfg.tol).value,
            "varj_divergence_order": _measures.varj_divergence(dens, cfg.x, tol=cfg.tol).value,
        },
    }


_DISPATCH = {
    "measures": _measures_doc,
    "compare": _compare_doc,
    "bounds": _bounds_doc,
    "genfun": _genfun_doc,
    "order-stats": _order_doc,
    "repro": _repro_doc,
}


def run(cfg: RunConfig) -> dict:
    """Carry out the computation described by ``cfg``; returns the report document."""
    return _DISPATCH[cfg.command](cfg)


# -- rendering ----------------------------------------------------------------

def _round(v):
    if isinstance(v, (bool, np.bool_)) or v is None or isinstance(v, str):
        return bool(v) if isinstance(v, np.bool_) else v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(f"{v:.{SIG_DIGITS}g}") if math.isfinite(v) else None
    if isinstance(v, dict):
        return {str(k): _round(x) for k, x in v.items() if not str(k).startswith("_")}
    if isinstance(v, (list, tuple)):
        return [_round(x) for x in v]
    raise TypeError(f"cannot serialise {type(v).__name__}")


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    if isinstance(v, list):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


def _text(doc: dict) -> str:
    lines = []
    scalars = {k: v for k, v in doc.items() if not isinstance(v, (dict, list)) or isinstance(v, list)
               and all(not isinstance(x, (dict, list)) for x in v)}
    width = max((len(k) for k in scalars), default=0)
    for k, v in scalars.items():
        lines.append(f"{k.ljust(width)}  {_fmt(v)}")
    for k, v in doc.items():
        if k in scalars or v is None:
            continue
        lines.append("")
        lines.append(f"[{k}]")
        if v and all(isinstance(x, dict) for x in v.values()):
            lines.extend(_table(v))
        else:
            sub = {a: b for a, b in v.items()}
            w = max((len(a) for a in sub), default=0)
            for a, b in sub.items():
                if isinstance(b, dict):
                    b = ", ".join(f"{p}={_fmt(q)}" for p, q in b.items())
                lines.append(f"  {a.ljust(w)}  {_fmt(b)}")
    return "\n".join(lines) + "\n"


def _table(rows: dict) -> list:
    cols = list(rows)
    keys = []
    for r in rows.values():
        for k in r:
            if k not in keys:
                keys.append(k)
    cells = [[k] + [_fmt(rows[c].get(k)) if not isinstance(rows[c].get(k), dict)
                    else ", ".join(f"{p}={_fmt(q)}" for p, q in rows[c][k].items())
                    for c in cols] for k in keys]
    header = [""] + cols
    widths = [max(len(str(r[i])) for r in cells + [header]) for i in range(len(header))]
    out = ["  " + "  ".join(h.rjust(w) if i else h.ljust(w) for i, (h, w) in enumerate(zip(header, widths)))]
    for r in cells:
        out.append("  " + "  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return out


def _flatten(v, prefix=""):
    if isinstance(v, dict):
        for k, x in v.items():
            yield from _flatten(x, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
        for i, x in enumerate(v):
            yield from _flatten(x, f"{prefix}.{i}")
    elif isinstance(v, list):
        for i, x in enumerate(v):
            yield f"{prefix}.{i}", x
    else:
        yield prefix, v


def render(doc: dict, fmt: str = "json") -> str:
    """Serialise a report document; numbers carry 10 significant digits."""
    clean = _round(doc)
    if fmt == "json":
        return json.dumps(clean, indent=2) + "\n"
    if fmt == "text":
        return _text(clean)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in _flatten(clean):
            w.writerow([k, "" if v is None else (repr(v) if isinstance(v, float) else v)])
        return buf.getvalue()
    raise UsageError(f"unknown format {fmt!r}")


def write_plot(path: str, est, candidates: dict) -> None:
    """Density overlay: the kernel estimate and each candidate on the estimate's grid."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "varextropy"
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(est.grid, est.values, color="black", lw=1.8, label="KDE")
    for name, d in candidates.items():
        if d is not None:
            ax.plot(est.grid, d.pdf(est.grid), lw=1.2, ls="--", label=f"{name}: {d}")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _fail(exc: VarJError, code: int) -> int:
    sys.stderr.write(json.dumps({"error": exc.category, "message": str(exc)}) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv and argv[0] in ("-h", "--help"):
        _build_parser().print_help()
        return 0
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        return _fail(exc, 2)
    except SystemExit as exc:  # --help inside a subcommand
        return int(exc.code or 0)
    try:
        doc = run(cfg)
        text = render(doc, cfg.format)
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if cfg.plot:
            if "_plot" not in doc:
                raise UsageError("--plot needs a data-backed command")
            write_plot(cfg.plot, *doc["_plot"])
    except UsageError as exc:
        return _fail(exc, 2)
    except VarJError as exc:
        return _fail(exc, 1)
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "io-error", "message": str(exc)}) + "\n")
        return 1
    failed = doc.get("_failed")
    if failed:
        sys.stderr.write(json.dumps({"error": "candidate-failed", "candidates": failed}) + "\n")
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
