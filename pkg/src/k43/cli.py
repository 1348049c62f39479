"""Batch command-line interface.

    k43 cosets                      dump the 32 coset representatives
    k43 label p11                   label of one representative
    k43 classify p0 p3 n12          Hamming type of a triple
    k43 sample --points 5           emit generic parameter points
    k43 verify two-term             G_K invariance sweep
    k43 verify three-term --all     all 4960 relations (or --triple/--sample)
    k43 verify barnes               Barnes lemma + gamma-kernel suites
    k43 verify terminating          exact rational terminating identities

Global flags (--precision, --tol, --points, --seed, --path, --format,
--out) may also be set through K43_* environment variables.  Exit codes:
0 pass, 1 numeric failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

import mpmath
from mpmath import mp

from . import barnes, coxeter, relations, sampling, series
from .cosets import build_tables
from .errors import K43Error
from .exactlin import AffineLinearForm
from .relations import KEvaluator
from .sf import to_mpc

SCHEMA_VERSION = 1


# -- number and certificate serialization -----------------------------------


def digits_for(prec: int) -> int:
    return int(prec * 0.30103) + 8


def fmt_real(x, prec: int) -> str:
    return mpmath.nstr(mpmath.mpf(x), digits_for(prec), strip_zeros=False)


def fmt_complex(z, prec: int) -> list[str]:
    z = to_mpc(z)
    return [fmt_real(z.real, prec), fmt_real(z.imag, prec)]


def parse_complex(pair) -> mpmath.mpc:
    return mpmath.mpc(mpmath.mpf(pair[0]), mpmath.mpf(pair[1]))


def form_to_json(f: AffineLinearForm) -> dict:
    return {
        "const": str(f.const),
        "coeffs": [str(c) for c in f.coeffs],
        "text": str(f),
    }


def form_from_json(d) -> AffineLinearForm:
    return AffineLinearForm(Fraction(d["const"]), tuple(Fraction(c) for c in d["coeffs"]))


def monomial_to_json(m: relations.CoeffMonomial) -> dict:
    return {
        "const": str(m.const),
        "pi_power": m.pi_pow,
        "sin_num": [form_to_json(f) for f in m.sin_num],
        "sin_den": [form_to_json(f) for f in m.sin_den],
        "recip_gamma": [form_to_json(f) for f in m.rgamma],
    }


def monomial_from_json(d) -> relations.CoeffMonomial:
    return relations.CoeffMonomial(
        Fraction(d["const"]), int(d["pi_power"]),
        tuple(form_from_json(f) for f in d["sin_num"]),
        tuple(form_from_json(f) for f in d["sin_den"]),
        tuple(form_from_json(f) for f in d["recip_gamma"]),
    )


def certificate_to_json(cert: relations.RelationCertificate, prec: int) -> dict:
    rho = None
    if cert.rho is not None:
        rho = [[str(cert.rho.entry(i, j)) for j in range(7)] for i in range(7)]
    return {
        "schema": SCHEMA_VERSION,
        "precision": prec,
        "triple": list(cert.triple_names),
        "labels": [r.label_bits for r in cert.triple],
        "type": cert.type_string,
        "rho": rho,
        "coefficients": [
            [monomial_to_json(m) for m in c.monomials] for c in cert.coefficients
        ],
        "residuals": [
            {"point": [fmt_complex(v, prec) for v in point],
             "residual": fmt_real(r, prec)}
            for point, r in cert.residuals
        ],
        "verified": cert.verified,
    }


def certificate_from_json(d, tables) -> relations.RelationCertificate:
    reps = tuple(tables.rep_by_name[n] for n in d["triple"])
    coeffs = tuple(
        relations.CoefficientExpr(tuple(monomial_from_json(m) for m in mono_list))
        for mono_list in d["coefficients"]
    )
    cert = relations.RelationCertificate(
        reps, tuple(sorted(int(ch) for ch in d["type"])), None, coeffs
    )
    cert.residuals = [
        (tuple(parse_complex(p) for p in row["point"]), mpmath.mpf(row["residual"]))
        for row in d["residuals"]
    ]
    cert.verified = bool(d["verified"])
    return cert


# -- output plumbing ---------------------------------------------------------


def emit(text: str, cfg: sampling.RunConfig):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def rows_to_output(rows: list[dict], cfg: sampling.RunConfig, meta: dict) -> str:
    if cfg.fmt == "json":
        return json.dumps({"schema": SCHEMA_VERSION, **meta, "rows": rows}, indent=2)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        return buf.getvalue()
    width = {k: max(len(k), *(len(str(r[k])) for r in rows)) if rows else len(k)
             for k in (rows[0].keys() if rows else [])}
    lines = []
    if rows:
        keys = list(rows[0].keys())
        lines.append("  ".join(k.ljust(width[k]) for k in keys))
        for r in rows:
            lines.append("  ".join(str(r[k]).ljust(width[k]) for k in keys))
    for k, v in meta.items():
        lines.append(f"# {k}: {v}")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------


def cmd_cosets(cfg: sampling.RunConfig, args) -> int:
    tables = build_tables()
    rows = []
    for rep in tables.reps:
        image = ", ".join(str(f.canonical()) for f in
                          (rep.matrix.row_form(i) for i in range(7)))
        rows.append({"name": rep.name, "label": rep.label_bits, "image": f"({image})"})
    emit(rows_to_output(rows, cfg, {"count": len(rows)}), cfg)
    return 0


def cmd_label(cfg: sampling.RunConfig, args) -> int:
    tables = build_tables()
    if args.rep not in tables.rep_by_name:
        raise K43Error(f"unknown representative {args.rep!r} (use p0..p15, n0..n15)")
    emit(tables.rep_by_name[args.rep].label_bits, cfg)
    return 0


def cmd_classify(cfg: sampling.RunConfig, args) -> int:
    tables = build_tables()
    for name in args.reps:
        if name not in tables.rep_by_name:
            raise K43Error(f"unknown representative {name!r}")
    t = relations.classify_reps([tables.rep_by_name[n] for n in args.reps])
    emit(coxeter.type_string(t), cfg)
    return 0


def cmd_sample(cfg: sampling.RunConfig, args) -> int:
    tables = build_tables()
    points = sampling.sample_points(
        tables, cfg.points, seed=cfg.seed,
        require_integral_path=(cfg.path == "integral"),
    )
    rows = [
        {"index": i, **{name: json.dumps(fmt_complex(v, cfg.precision))
                        for name, v in zip("abcdefg", point)}}
        for i, point in enumerate(points)
    ]
    emit(rows_to_output(rows, cfg, {"seed": cfg.seed, "precision": cfg.precision}), cfg)
    return 0


def _eval_tol(cfg: sampling.RunConfig, suite_tol) -> mpmath.mpf:
    # evaluate K three orders tighter than the pass/fail threshold
    floor = mpmath.mpf(2) ** (10 - cfg.precision)
    return max(mpmath.mpf(suite_tol) * mpmath.mpf("1e-3"), floor)


def cmd_verify_two_term(cfg: sampling.RunConfig, args) -> int:
    tables = build_tables()
    tol = mpmath.mpf(cfg.tol) if cfg.tol is not None else mpmath.mpf("1e-8")
    points = sampling.sample_points(tables, cfg.points, seed=cfg.seed)
    evaluator = KEvaluator(path=cfg.path, tol=_eval_tol(cfg, tol))
    t0 = time.time()
    report = relations.two_term_suite(tables, points, evaluator=evaluator)
    ok = report.max_residual <= tol
    rows = [{
        "elements": report.n_elements, "points": report.n_points,
        "max_residual": fmt_real(report.max_residual, cfg.precision),
        "tolerance": mpmath.nstr(tol, 8), "pass": ok,
    }]
    emit(rows_to_output(rows, cfg, {"suite": "two-term", "seconds": f"{time.time()-t0:.1f}"}), cfg)
    return 0 if ok else 1


def cmd_verify_three_term(cfg: sampling.RunConfig, args) -> int:
    tables = build_tables()
    tol = mpmath.mpf(cfg.tol) if cfg.tol is not None else mpmath.mpf("1e-8")
    if args.triple:
        triples = [tuple(args.triple)]
    elif args.all:
        triples = relations.all_triples(tables)
    else:
        triples = relations.stratified_sample(tables, args.sample, seed=cfg.seed)
    points = sampling.sample_points(tables, cfg.points, seed=cfg.seed,
                                    require_integral_path=(cfg.path == "integral"))
    evaluator = KEvaluator(path=cfg.path, tol=_eval_tol(cfg, tol))
    t0 = time.time()
    report, certs = relations.verify_sweep(
        tables, triples, points, tol=tol, evaluator=evaluator,
        progress=(500 if len(triples) > 600 else None),
    )
    elapsed = time.time() - t0
    if args.certificates:
        payload = {
            "schema": SCHEMA_VERSION,
            "precision": cfg.precision,
            "seed": cfg.seed,
            "tolerance": mpmath.nstr(tol, 8),
            "certificates": [certificate_to_json(c, cfg.precision) for c in certs],
        }
        with open(args.certificates, "w") as fh:
            json.dump(payload, fh, indent=1)
    rows = [
        {"type": coxeter.type_string(t),
         "relations": sum(1 for c in certs if c.hamming_type == t),
         "max_residual": fmt_real(report.per_type_max[coxeter.type_string(t)], cfg.precision)}
        for t in coxeter.LEGAL_TYPES
    ]
    meta = {
        "suite": "three-term", "relations": report.n_relations,
        "points": report.n_points,
        "max_residual": fmt_real(report.max_residual, cfg.precision),
        "tolerance": mpmath.nstr(tol, 8),
        "failures": len(report.failures), "seconds": f"{elapsed:.1f}",
    }
    emit(rows_to_output(rows, cfg, meta), cfg)
    return 0 if report.ok else 1


def cmd_verify_barnes(cfg: sampling.RunConfig, args) -> int:
    import random as _random

    tol_lemma = mpmath.mpf("1e-12")
    tol_kernel = mpmath.mpf("1e-10")
    rng = _random.Random(cfg.seed)
    t0 = time.time()
    worst_lemma = mpmath.mpf(0)
    for _ in range(args.cases):
        a, b, c, d = (
            mpmath.mpc(mpmath.mpf(0.2 + 0.8 * rng.random()),
                       mpmath.mpf(rng.uniform(-0.4, 0.4)))
            for _ in range(4)
        )
        ig = barnes.barnes_lemma_integrand(a, b, c, d)
        if not barnes.is_admissible(ig):
            continue
        lhs = barnes.barnes_integral(ig, tol=tol_lemma * mpmath.mpf("1e-2"))
        rhs = barnes.barnes_lemma_rhs(a, b, c, d)
        worst_lemma = max(worst_lemma, abs(lhs - rhs) / abs(rhs))
    worst_kernel = mpmath.mpf(0)
    rows = [{"check": "barnes-lemma", "cases": args.cases,
             "max_rel_err": fmt_real(worst_lemma, cfg.precision),
             "pass": worst_lemma <= tol_lemma}]
    for z in ("0.3", "0.8", "1.25", "3.0"):
        a, b = mpmath.mpc("0.4", "0.1"), mpmath.mpc("0.7", "-0.2")
        c, d = mpmath.mpc("0.55", "0.05"), mpmath.mpc("0.8", "0.15")
        ig = barnes.BarnesIntegrand(((a, 1), (b, 1)), ((c, 1), (d, 1)), mpmath.mpf(z))
        got = barnes.barnes_integral(ig, tol=tol_kernel * mpmath.mpf("1e-2"))
        want = barnes.gamma_kernel_value(a, b, c, d, mpmath.mpf(z))
        err = abs(got - want) / abs(want)
        worst_kernel = max(worst_kernel, err)
        rows.append({"check": f"gamma-kernel z={z}", "cases": 1,
                     "max_rel_err": fmt_real(err, cfg.precision),
                     "pass": err <= tol_kernel})
    ok = worst_lemma <= tol_lemma and worst_kernel <= tol_kernel
    emit(rows_to_output(rows, cfg, {"suite": "barnes", "seconds": f"{time.time()-t0:.1f}"}), cfg)
    return 0 if ok else 1


def cmd_verify_terminating(cfg: sampling.RunConfig, args) -> int:
    import random as _random

    rng = _random.Random(cfg.seed)
    t0 = time.time()
    failures = 0
    cases = 0
    for n in range(args.max_n + 1):
        for _ in range(args.cases):
            a, b, c, e, f = (Fraction(rng.randrange(1, 60), q)
                             for q in (7, 11, 13, 9, 8))
            g = 1 + a + b + c - n - e - f
            params = (a, b, c, e, f, g)
            if any(v - Fraction(k) == 0 for v in (e, f, g) for k in range(-n, 1)):
                continue
            if any((1 + a - f - n + k == 0) or (1 + a - g - n + k == 0)
                   for k in range(n)) or any(v == 0 for v in (f, g)):
                continue
            cases += 1
            if series.terminating_identity_residual(a, b, c, e, f, g, n) != 0:
                failures += 1
            lhs = series.invariant_terminating_product(a, b, c, e, f, g, n)
            a2, b2, c2, e2, f2, g2 = series.bls_transform(a, b, c, e, f, g, n)
            rhs = series.invariant_terminating_product(a2, b2, c2, e2, f2, g2, n)
            if lhs != rhs:
                failures += 1
    rows = [{"check": "terminating-identities", "cases": cases,
             "failures": failures, "pass": failures == 0}]
    emit(rows_to_output(rows, cfg, {"suite": "terminating",
                                    "seconds": f"{time.time()-t0:.1f}"}), cfg)
    return 0 if failures == 0 else 1


# -- argument parsing --------------------------------------------------------


def _env(name, default, cast):
    raw = os.environ.get(f"K43_{name.upper()}")
    if raw is None:
        return default
    return cast(raw)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k43", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--precision", type=int, default=_env("precision", 128, int),
                   help="working precision in bits (default 128)")
    p.add_argument("--tol", type=str, default=_env("tol", None, str),
                   help="pass/fail tolerance (default per suite)")
    p.add_argument("--points", type=int, default=_env("points", 3, int),
                   help="number of sample points")
    p.add_argument("--seed", type=int, default=_env("seed", 0, int))
    p.add_argument("--path", choices=("series", "integral"),
                   default=_env("path", "series", str))
    p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"),
                   default=_env("format", "text", str))
    p.add_argument("--out", type=str, default=_env("out", None, str))
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("cosets", help="dump the 32 coset representatives")
    sp = sub.add_parser("label", help="label of one representative")
    sp.add_argument("rep")
    sp = sub.add_parser("classify", help="Hamming type of a coset triple")
    sp.add_argument("reps", nargs=3)
    sub.add_parser("sample", help="emit generic parameter points")

    sp = sub.add_parser("verify", help="run a verification suite")
    vsub = sp.add_subparsers(dest="scope", required=True)
    vsub.add_parser("two-term")
    tt = vsub.add_parser("three-term")
    group = tt.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="all 4960 triples")
    group.add_argument("--triple", nargs=3, metavar="REP",
                       help="one specific triple, e.g. p0 p3 n12")
    group.add_argument("--sample", type=int, default=200,
                       help="stratified sample size (default 200)")
    tt.add_argument("--certificates", type=str, default=None,
                    help="write all certificates to this JSON file")
    ba = vsub.add_parser("barnes")
    ba.add_argument("--cases", type=int, default=50)
    te = vsub.add_parser("terminating")
    te.add_argument("--max-n", type=int, default=5)
    te.add_argument("--cases", type=int, default=4)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = sampling.RunConfig(
            precision=args.precision,
            tol=mpmath.mpf(args.tol) if args.tol is not None else None,
            points=args.points, seed=args.seed, path=args.path,
            fmt=args.fmt, out=args.out,
        )
    except ValueError as exc:
        print(f"k43: configuration error: {exc}", file=sys.stderr)
        return 2
    handlers = {
        "cosets": cmd_cosets,
        "label": cmd_label,
        "classify": cmd_classify,
        "sample": cmd_sample,
    }
    with mp.workprec(cfg.precision):
        try:
            if args.command == "verify":
                handler = {
                    "two-term": cmd_verify_two_term,
                    "three-term": cmd_verify_three_term,
                    "barnes": cmd_verify_barnes,
                    "terminating": cmd_verify_terminating,
                }[args.scope]
                return handler(cfg, args)
            return handlers[args.command](cfg, args)
        except K43Error as exc:
            print(f"k43: {exc}", file=sys.stderr)
            return 2


if __name__ == "__main__":
    sys.exit(main())
