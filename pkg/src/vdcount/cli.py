"""Batch command line: parse a system file, run one analysis, emit CSV + JSON.

Every command writes <out>.csv and a <out>.json sidecar echoing the full
configuration, the system hash, the package version and the gate constants,
so a report is reproducible from its files alone.  Output is deterministic:
fixed column orders, fixed float repr, no timestamps.

Exit codes: 0 success, 2 a mathematical hypothesis failed, 3 a resource
budget was exceeded, 1 anything else (bad file, bad flags).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .counting import DEFAULT_ENUM_CAP, count_congruence, count_points
from .differencing import (
    SLICE_RECIPROCAL_THRESHOLD,
    XI_FLOOR,
    PrimeTuple,
    asymptotic_residual,
    difference_system,
    find_slice,
    modulus_plan,
    regularize,
    select_primes,
    variance_report,
)
from .errors import HypothesisError, ResourceBudgetError
from .exponents import birch_threshold, mixed_degree_report, uniform_degree_report
from .ffgeom import build_T_sets, variety_profile
from .poly import NEG_INF, Polynomial, PolySystem, difference, directional_form

GATES = {
    "window_tolerance": 2.0,
    "xi_floor": XI_FLOOR,
    "slice_reciprocal_threshold": SLICE_RECIPROCAL_THRESHOLD,
}


# ---------------------------------------------------------------------------
# System files
# ---------------------------------------------------------------------------


def parse_system(path):
    """Read a JSON term-list system file -> (PolySystem, metadata).

    The format is {"n": int, "polynomials": [[[coeff, [e1..en]], ...], ...]}
    with optional "name".  Rejects empty systems, dimension mismatches and
    members of degree <= 1, reporting the offending polynomial/term index.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if not isinstance(data, dict) or "n" not in data or "polynomials" not in data:
        raise ValueError(f"{path}: expected an object with 'n' and 'polynomials'")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"{path}: bad variable count {n!r}")
    raw = data["polynomials"]
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"{path}: 'polynomials' must be a non-empty list")
    polys = []
    for pi, terms in enumerate(raw):
        if not isinstance(terms, list) or not terms:
            raise ValueError(f"{path}: polynomial {pi}: empty term list")
        pairs = []
        for ti, term in enumerate(terms):
            try:
                coeff, mono = term
                coeff = int(coeff)
                mono = [int(e) for e in mono]
            except (TypeError, ValueError):
                raise ValueError(
                    f"{path}: polynomial {pi} term {ti}: expected [coeff, [exponents]]"
                ) from None
            if len(mono) != n:
                raise ValueError(
                    f"{path}: polynomial {pi} term {ti}: {len(mono)} exponents, expected {n}"
                )
            if any(e < 0 for e in mono):
                raise ValueError(f"{path}: polynomial {pi} term {ti}: negative exponent")
            pairs.append((coeff, tuple(mono)))
        f = Polynomial.from_terms(n, pairs)
        if f.degree() is NEG_INF or f.degree() < 2:
            raise ValueError(
                f"{path}: polynomial {pi} has degree "
                f"{'-inf' if f.degree() is NEG_INF else f.degree()}; members must "
                "have degree >= 2"
            )
        polys.append(f)
    meta = {"name": data.get("name"), "source": str(path)}
    return PolySystem(n, polys), meta


def system_to_json(system, name=None):
    """Canonical JSON form of a system (round-trips through parse_system)."""
    from .poly import grevlex_key

    polys = []
    for f in system.polys:
        terms = [
            [f.terms[m], list(m)]
            for m in sorted(f.terms, key=grevlex_key, reverse=True)
        ]
        polys.append(terms)
    data = {"n": system.n, "polynomials": polys}
    if name:
        data["name"] = name
    return data


def system_hash(system):
    return hashlib.sha256(
        f"{system.n}|{system.canonical_text()}".encode()
    ).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Report writing
# ---------------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list)):
        return ";".join(_fmt(x) for x in v)
    if v is None:
        return ""
    return str(v)


def write_report(out, columns, rows, sidecar):
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    csv_path = out.with_suffix(".csv")
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    with open(out.with_suffix(".json"), "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True, default=_fmt)
        fh.write("\n")
    return csv_path


def _sidecar(args, system=None, extra=None):
    side = {
        "version": __version__,
        "command": args.command,
        "gates": GATES,
        "config": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in {"command", "func"} and v is not None
        },
    }
    if system is not None:
        side["system_hash"] = system_hash(system)
        side["system"] = system.canonical_text()
    if extra:
        side.update(extra)
    return side


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def _int_list(text):
    return [int(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _degree_map(text):
    out = {}
    for chunk in text.split(","):
        d, c = chunk.split(":")
        out[int(d)] = int(c)
    return out


def _b_values(args):
    if args.B_sweep:
        return _int_list(args.B_sweep)
    if args.B is None:
        raise ValueError("need --B or --B-sweep")
    return [args.B]


def _bump(n):
    from .weights import paper_bump

    return paper_bump(n)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_analyze(args):
    system, meta = parse_system(args.system)
    rows = []
    for p in _int_list(args.primes):
        prof = variety_profile(system, p, with_counts=not args.no_counts)
        rows.append(
            (p, prof.codim, prof.sing_dim, prof.proj_count, prof.sing_count,
             prof.certifies(system.r))
        )
    cols = ["prime", "codim", "sing_dim", "proj_count", "sing_count", "certified"]
    return write_report(args.out, cols, rows, _sidecar(args, system, {"meta": meta}))


def cmd_count(args):
    system, meta = parse_system(args.system)
    rows = []
    for B in _b_values(args):
        res = count_points(system, B, enum_cap=args.budget or DEFAULT_ENUM_CAP)
        rows.append((B, res.value, res.points_visited, res.mode))
    cols = ["B", "count", "points_visited", "mode"]
    return write_report(args.out, cols, rows, _sidecar(args, system, {"meta": meta}))


def cmd_count_mod(args):
    system, meta = parse_system(args.system)
    q = _degree_map(args.q_by_degree) if args.q_by_degree else args.q
    if q is None:
        raise ValueError("need --q or --q-by-degree")
    rows = []
    for B in _b_values(args):
        res = count_congruence(system, B, q, enum_cap=args.budget or DEFAULT_ENUM_CAP)
        rows.append((B, _fmt(q) if isinstance(q, int) else args.q_by_degree,
                     res.value, res.points_visited, res.mode))
    cols = ["B", "q", "count", "points_visited", "mode"]
    return write_report(args.out, cols, rows, _sidecar(args, system, {"meta": meta}))


def cmd_bounds(args):
    rows = []
    if args.r_by_degree:
        rep = mixed_degree_report(args.n, _degree_map(args.r_by_degree))
        r = sum(rep.inputs["r_by_degree"].values())
        d_for_birch = rep.aux["D"]
    else:
        if args.r is None or args.d is None:
            raise ValueError("need --r and --d (or --r-by-degree)")
        rep = uniform_degree_report(args.n, args.r, args.d)
        r = args.r
        d_for_birch = args.d
    birch = birch_threshold(d_for_birch, r, args.s_star)
    rows.append(
        (args.n, args.r_by_degree or f"{r}x{d_for_birch}", rep.eta, rep.exponent,
         rep.admissible, rep.violation, rep.aux.get("threshold"), birch)
    )
    cols = ["n", "degrees", "eta", "exponent", "admissible", "violation",
            "threshold", "birch_min_n"]
    return write_report(args.out, cols, rows, _sidecar(args))


def cmd_primes(args):
    system, meta = parse_system(args.system)
    sel = select_primes(system, args.xi, args.m, tol=args.tol_window)
    rows = []
    for j, p in enumerate(sel.primes.primes):
        target = args.xi**2 if j == 0 else args.xi
        rows.append((j, p, target, p / target))
    cols = ["index", "prime", "target", "ratio"]
    extra = {
        "meta": meta,
        "windows": {"small": sel.window_small, "large": sel.window_large},
        "rejected": sel.rejected,
        "xi_gate": sel.xi_gate,
        "gate_margin": sel.gate_margin,
    }
    return write_report(args.out, cols, rows, _sidecar(args, system, extra))


def _prime_tuple(args, system):
    primes = _int_list(args.primes)
    xi = args.xi if args.xi else float(primes[-1])
    return PrimeTuple(
        primes=tuple(primes), xi=xi, tol=args.tol_window,
        max_degree=system.max_degree,
    )


def cmd_plan(args):
    system, meta = parse_system(args.system)
    t = _prime_tuple(args, system)
    plan = modulus_plan(t, system)
    rows = [
        (d, plan.q_by_degree[d], plan.tilde_q_by_degree.get(d))
        for d in sorted(plan.q_by_degree)
    ]
    cols = ["degree", "q", "tilde_q"]
    extra = {"meta": meta, "Q": plan.Q, "Q_tilde": plan.Q_tilde,
             "member_moduli": list(plan.member_moduli)}
    return write_report(args.out, cols, rows, _sidecar(args, system, extra))


def cmd_difference(args):
    system, meta = parse_system(args.system)
    y = tuple(_int_list(args.y))
    diffed, transform = difference_system(system, y, args.pm)
    rows = []
    idx = 0
    for f in system.polys:
        if f.degree() < 3:
            continue
        g = difference(f, y, args.pm)
        expected = directional_form(f, y, args.pm)
        got = g.leading_form().to_text() if not g.is_zero() else "0"
        ok = (not expected.is_zero()) and g.leading_form() == expected
        rows.append((idx, f.degree(), g.degree() if not g.is_zero() else "-inf",
                     got, expected.to_text(), ok))
        idx += 1
    cols = ["member", "orig_degree", "new_degree", "leading_form",
            "gradient_form", "identity_ok"]
    extra = {"meta": meta, "weight_shift": list(transform.shift),
             "differenced": diffed.canonical_text()}
    return write_report(args.out, cols, rows, _sidecar(args, system, extra))


def cmd_regularize(args):
    system, meta = parse_system(args.system)
    reg = regularize(system, _int_list(args.primes), entry_cap=args.budget or 4)
    rows = []
    for key in sorted(reg.table):
        i, j, *k = key
        rows.append((i, j, k[0] if k else None, reg.table[key]))
    if not rows:
        rows.append((None, None, None, "identity"))
    cols = ["i", "j", "k", "value"]
    extra = {
        "meta": meta,
        "witness_prime": reg.witness_prime,
        "entry_bound": reg.entry_bound,
        "height_before": reg.height_before,
        "height_after": reg.height_after,
        "system_after": reg.system.canonical_text(),
    }
    return write_report(args.out, cols, rows, _sidecar(args, system, extra))


def cmd_slice(args):
    system, meta = parse_system(args.system)
    primes = _int_list(args.primes) if args.primes else []
    res = find_slice(system, primes)
    rows = []
    if res.records:
        for p in sorted(res.records):
            rec = res.records[p]
            rows.append(
                (";".join(map(str, res.a)), p,
                 rec["before"].codim, rec["before"].sing_dim,
                 rec["after"].codim, rec["after"].sing_dim)
            )
    else:
        rows.append((";".join(map(str, res.a)), None, None, None, None, None))
    cols = ["a", "prime", "codim_before", "sing_before", "codim_after", "sing_after"]
    return write_report(args.out, cols, rows, _sidecar(args, system, {"meta": meta}))


def cmd_variance(args):
    system, meta = parse_system(args.system)
    t = _prime_tuple(args, system)
    plan = modulus_plan(t, system)
    W = _bump(system.n)
    rep = variance_report(system, args.B, plan, W, enum_cap=args.budget or DEFAULT_ENUM_CAP)
    rows = [(
        t.differencing_prime, args.B, rep.mass, rep.expected, rep.zero_classes,
        rep.deviation_sum, rep.variance, rep.cross_residual,
        rep.cauchy_consistent(), rep.empty,
    )]
    cols = ["p_m", "B", "mass", "expected", "zero_classes", "deviation_sum",
            "variance", "cross_residual", "cauchy_ok", "empty"]
    return write_report(args.out, cols, rows, _sidecar(args, system, {"meta": meta}))


def cmd_prop_check(args):
    system, meta = parse_system(args.system)
    W = _bump(system.n)
    primes = None
    if args.primes:
        primes = _prime_tuple(args, system)
    rows = []
    for B in _b_values(args):
        res = asymptotic_residual(
            system, B, args.xi, args.m, W, primes=primes,
            enum_cap=args.budget or DEFAULT_ENUM_CAP
        )
        rows.append((
            B, res.xi, res.m, res.primes.primes, res.s, res.lhs,
            res.envelope_main, res.envelope_secondary, res.ratio_main,
            res.weighted, res.mass, res.Q,
        ))
    cols = ["B", "xi", "m", "primes", "s", "lhs", "envelope_main",
            "envelope_secondary", "ratio_main", "weighted", "mass", "Q"]
    return write_report(args.out, cols, rows, _sidecar(args, system, {"meta": meta}))


def cmd_tsets(args):
    system, meta = parse_system(args.system)
    rep = build_T_sets(system, args.prime)
    rows = [(s, rep.occupancy[s]) for s in sorted(rep.occupancy)]
    cols = ["s", "count_dim_at_least_s"]
    extra = {
        "meta": meta,
        "per_y": {";".join(map(str, y)): d for y, d in sorted(rep.per_y.items())},
    }
    return write_report(args.out, cols, rows, _sidecar(args, system, extra))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="vdcount",
        description="Exact counting experiments on polynomial systems.",
    )
    ap.add_argument("--seed", type=int, default=0,
                    help="echoed into reports; commands are deterministic")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, needs_system=True, **flags):
        p = sub.add_parser(name)
        if needs_system:
            p.add_argument("--system", required=True, help="system JSON file")
        p.add_argument("--out", required=True, help="output path prefix")
        p.add_argument("--budget", type=int, default=None,
                       help="enumeration / search budget override")
        for flag, kw in flags.items():
            p.add_argument(flag, **kw)
        p.set_defaults(func=fn)
        return p

    add("analyze", cmd_analyze,
        **{"--primes": dict(required=True, help="comma-separated primes"),
           "--no-counts": dict(action="store_true")})
    add("count", cmd_count,
        **{"--B": dict(type=int), "--B-sweep": dict(dest="B_sweep")})
    add("count-mod", cmd_count_mod,
        **{"--B": dict(type=int), "--B-sweep": dict(dest="B_sweep"),
           "--q": dict(type=int), "--q-by-degree": dict(dest="q_by_degree")})
    add("bounds", cmd_bounds, needs_system=False,
        **{"--n": dict(type=int, required=True), "--r": dict(type=int),
           "--d": dict(type=int), "--r-by-degree": dict(dest="r_by_degree"),
           "--s-star": dict(dest="s_star", type=int, default=0)})
    add("primes", cmd_primes,
        **{"--xi": dict(type=float, required=True),
           "--m": dict(type=int, required=True),
           "--tol-window": dict(dest="tol_window", type=float, default=2.0)})
    add("plan", cmd_plan,
        **{"--primes": dict(required=True, help="p_0,p_1,...,p_m"),
           "--xi": dict(type=float),
           "--tol-window": dict(dest="tol_window", type=float, default=2.0)})
    add("difference", cmd_difference,
        **{"--y": dict(required=True, help="integer direction, comma-separated"),
           "--pm": dict(type=int, required=True)})
    add("regularize", cmd_regularize,
        **{"--primes": dict(required=True, help="witness prime pool")})
    add("slice", cmd_slice,
        **{"--primes": dict(default="", help="primes to verify at")})
    add("variance", cmd_variance,
        **{"--B": dict(type=int, required=True),
           "--primes": dict(required=True), "--xi": dict(type=float),
           "--tol-window": dict(dest="tol_window", type=float, default=2.0)})
    add("prop-check", cmd_prop_check,
        **{"--B": dict(type=int), "--B-sweep": dict(dest="B_sweep"),
           "--xi": dict(type=float, required=True),
           "--m": dict(type=int, required=True),
           "--primes": dict(default=None),
           "--tol-window": dict(dest="tol_window", type=float, default=2.0)})
    add("tsets", cmd_tsets, **{"--prime": dict(type=int, required=True)})
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        csv_path = args.func(args)
    except HypothesisError as e:
        print(f"hypothesis failure: {e}", file=sys.stderr)
        return 2
    except ResourceBudgetError as e:
        print(f"resource cap: {e}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(csv_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
