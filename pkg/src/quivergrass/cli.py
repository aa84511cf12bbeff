# Command-line entry point: batch verification runs over instance files,
# with JSON/CSV/DOT/PNG artifacts, optional hom-table caching, and
# prime-parallel counting.

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import a2
from .ar import InvariantError, indec_table
from .desing import desing_report, iso_name
from .fields import NotPrimeError, PrimeField
from .grassmannian import BudgetExceededError, count_points, count_polynomial, stratify
from .hqbq import QHat, check_lambda_image, mhat_explicit
from .quiver import QuiverError
from .report import (canonical_json, load_instance, to_desing_instance,
                     warm_hom_cache, write_desing_outputs, write_json_report,
                     write_text)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _parse_primes(text: str) -> list:
    try:
        primes = [int(x) for x in text.split(",") if x.strip()]
        for p in primes:
            PrimeField(p)
    except (ValueError, NotPrimeError) as exc:
        raise QuiverError(f"bad primes {text!r}: {exc}")
    if len(set(primes)) != len(primes):
        raise QuiverError("primes must be distinct")
    return primes


def _parse_vec(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise QuiverError(f"bad dimension vector {text!r}: {exc}")


def _count_one(args):
    """Worker for prime-parallel counting; must stay module-level for pickling."""
    path, e, p, budget = args
    inst = load_instance(path)
    q = inst["quiver"]
    f = PrimeField(p)
    from .reps import Representation
    m = Representation(q, f, inst["dims"], tuple(f.reduce(x) for x in inst["mats"]))
    if len(e) == q.n:
        target, rep = e, m
    else:
        qh = QHat(q, f)
        if len(e) != qh.hat.n:
            raise QuiverError(
                f"target vector length {len(e)} matches neither the quiver "
                f"({q.n}) nor its extension ({qh.hat.n})")
        rep = mhat_explicit(qh, m).rep
        target = e
    return count_points(rep, target, budget=budget)[0]


def _map_primes(fn, jobs, arglist):
    if jobs <= 1:
        return [fn(a) for a in arglist]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, arglist))


def cmd_indec_table(args) -> int:
    inst = load_instance(args.instance)
    f = PrimeField(args.primes[0])
    table = indec_table(inst["quiver"], f)
    warm_hom_cache(table, args.cache)
    lines = []
    for u in table.indecs:
        tags = []
        if u.is_projective:
            tags.append(f"P_{inst['quiver'].vertices[u.proj_vertex]}")
        if u.is_injective:
            tags.append(f"I_{inst['quiver'].vertices[u.inj_vertex]}")
        tau = "" if u.tau is None else f" tau->{u.tau}"
        lines.append(f"{u.id:3d}  {u.dim_vector}  {' '.join(tags)}{tau}")
    print("\n".join(lines))
    if args.out:
        write_text(os.path.join(args.out, "ar.dot"), table.ar_dot())
        write_json_report(os.path.join(args.out, "indec_table.json"), {
            "prime": f.p,
            "indecomposables": [{
                "id": u.id, "dim_vector": list(u.dim_vector),
                "projective": u.is_projective, "injective": u.is_injective,
                "tau": u.tau, "tau_inv": u.tau_inv,
            } for u in table.indecs],
            "ar_arrows": [list(a) for a in table.ar_arrows],
            "hom_table": table.hom_table().tolist(),
        }, inst)
    return EXIT_OK


def cmd_qhat(args) -> int:
    inst = load_instance(args.instance)
    qh = QHat(inst["quiver"], PrimeField(args.primes[0]))
    rels = {f"{a}->{b}": n for (a, b), n in sorted(qh.relation_counts().items())}
    print(f"vertices ({qh.hat.n}):", " ".join(qh.hat.vertices))
    print(f"arrows ({len(qh.hat.arrows)}):",
          " ".join(f"{s}->{t}" for s, t in qh.hat.arrows))
    print("relations:", rels or "none")
    if args.out:
        write_text(os.path.join(args.out, "qhat.dot"), qh.hat.dot("extended"))
        write_json_report(os.path.join(args.out, "qhat.json"), {
            "vertices": list(qh.hat.vertices),
            "arrows": [list(a) for a in qh.hat.arrows],
            "relations": rels,
            "cartan": qh.cartan_matrix().tolist(),
            "euler": qh.euler_matrix().tolist(),
        }, inst)
    return EXIT_OK


def cmd_mhat(args) -> int:
    inst = load_instance(args.instance)
    payload = {"primes": args.primes, "per_prime": {}}
    for p in args.primes:
        f = PrimeField(p)
        from .reps import Representation
        m = Representation(inst["quiver"], f, inst["dims"],
                           tuple(f.reduce(x) for x in inst["mats"]))
        qh = QHat(inst["quiver"], f)
        mh = mhat_explicit(qh, m, lift_seed=args.seed)
        bad = check_lambda_image(qh, mh.rep)
        payload["per_prime"][str(p)] = {
            "dims": dict(zip(qh.hat.vertices, map(int, mh.rep.dims))),
            "exactness_ok": not bad,
        }
        print(f"p={p}: dims", payload["per_prime"][str(p)]["dims"],
              "exact" if not bad else f"EXACTNESS FAILS at {bad}")
    if args.out:
        write_json_report(os.path.join(args.out, "mhat.json"), payload, inst)
    return EXIT_OK


def cmd_count(args) -> int:
    inst = load_instance(args.instance)
    e = _parse_vec(args.e) if args.e else inst.get("e")
    if e is None:
        raise QuiverError("no target dimension vector: pass --e")
    counts = _map_primes(_count_one, args.jobs,
                         [(args.instance, e, p, args.budget)
                          for p in args.primes])
    by_prime = dict(zip(args.primes, counts))
    for p in args.primes:
        print(f"p={p}: {by_prime[p]}")
    payload = {"e": list(e), "counts": {str(p): c for p, c in by_prime.items()}}
    if len(args.primes) >= 3:
        cp = count_polynomial(by_prime)
        payload["polynomial"] = {"coeffs": list(cp.coeffs),
                                 "pretty": cp.pretty(),
                                 "verified": cp.verified}
        print("polynomial:", cp.pretty(),
              "(verified)" if cp.verified else "(NOT verified on held-out prime)")
    if args.out:
        write_json_report(os.path.join(args.out, "count.json"), payload, inst)
    return EXIT_OK


def cmd_stratify(args) -> int:
    inst = load_instance(args.instance)
    e = _parse_vec(args.e) if args.e else inst.get("e")
    if e is None:
        raise QuiverError("no target dimension vector: pass --e")
    payload = {"e": list(e), "per_prime": {}}
    for p in args.primes:
        f = PrimeField(p)
        from .reps import Representation
        m = Representation(inst["quiver"], f, inst["dims"],
                           tuple(f.reduce(x) for x in inst["mats"]))
        table = indec_table(inst["quiver"], f)
        warm_hom_cache(table, args.cache)
        strata = stratify(m, e, table, budget=args.budget)
        rows = [{"iso": iso_name(table, s.iso), "size": len(s.points),
                 "dim": s.dim, "tangent": s.tangent} for s in strata]
        payload["per_prime"][str(p)] = rows
        print(f"p={p}:")
        for row in rows:
            print(f"  {row['iso']}: {row['size']} points, dim {row['dim']}, "
                  f"tangent {row['tangent']}")
    if args.out:
        write_json_report(os.path.join(args.out, "stratify.json"), payload, inst)
    return EXIT_OK


def cmd_desing(args) -> int:
    inst = load_instance(args.instance)
    e = _parse_vec(args.e) if args.e else inst.get("e")
    if e is None:
        raise QuiverError("no target dimension vector: pass --e")
    deep = _parse_primes(args.deep_primes) if args.deep_primes else None
    report = desing_report(to_desing_instance(inst, e), args.primes,
                           deep_primes=deep, budget=args.budget)
    print("base:", report["base_polynomial"]["pretty"])
    print("total:", report["total_polynomial"]["pretty"])
    for name, v in report["verdicts"].items():
        print(f"candidate {name}: one-to-one over smooth: "
              f"{v['one_to_one_over_smooth']}, small: {v['small']}")
    if args.out:
        write_desing_outputs(report, inst, args.out, "desing")
    return EXIT_OK


def cmd_a2(args) -> int:
    if args.action != "sweep":
        raise QuiverError(f"unknown a2 action {args.action!r}")
    import random
    summary = a2.sweep(dmax=args.dmax, primes=tuple(args.primes),
                       rng=random.Random(args.seed), budget=args.budget)
    print(f"{summary['instances']} instances, {summary['checks']} checks, "
          f"{len(summary['failures'])} failures")
    for fl in summary["failures"][:20]:
        print("FAIL", fl)
    if args.out:
        write_json_report(os.path.join(args.out, "a2_sweep.json"), summary)
    return EXIT_OK if not summary["failures"] else EXIT_INVARIANT


def _fixture_dir(args) -> str:
    if args.dir:
        return args.dir
    here = os.path.join(os.getcwd(), "fixtures")
    return here


def cmd_fixtures(args) -> int:
    fdir = _fixture_dir(args)
    paths = sorted(p for p in os.listdir(fdir) if p.endswith(".json"))
    if not paths:
        raise QuiverError(f"no fixtures found in {fdir}")
    failures = 0
    results = {}
    for name in paths:
        path = os.path.join(fdir, name)
        inst = load_instance(path)
        with open(path) as fh:
            raw = json.load(fh)
        expect = raw.get("expected", {})
        e = inst.get("e")
        ok = True
        detail = {}
        counts = _map_primes(_count_one, args.jobs,
                             [(path, e, p, args.budget) for p in args.primes])
        detail["base_counts"] = dict(zip(map(str, args.primes), counts))
        if "base_polynomial" in expect:
            for p, c in zip(args.primes, counts):
                want = sum(cf * p ** i
                           for i, cf in enumerate(expect["base_polynomial"]))
                if c != want:
                    ok = False
                    detail.setdefault("mismatches", []).append(
                        {"prime": p, "kind": "base", "got": c, "want": want})
        if "y_polynomial" in expect and "nhat" in raw:
            ycounts = _map_primes(
                _count_one, args.jobs,
                [(path, tuple(raw["nhat"]), p, args.budget)
                 for p in args.primes])
            detail["y_counts"] = dict(zip(map(str, args.primes), ycounts))
            for p, c in zip(args.primes, ycounts):
                want = sum(cf * p ** i
                           for i, cf in enumerate(expect["y_polynomial"]))
                if c != want:
                    ok = False
                    detail.setdefault("mismatches", []).append(
                        {"prime": p, "kind": "y", "got": c, "want": want})
        status = "ok" if ok else "FAIL"
        print(f"{name}: {status}")
        results[name] = {"ok": ok} | detail
        failures += 0 if ok else 1
    if args.out:
        write_json_report(os.path.join(args.out, "fixtures.json"),
                          {"primes": args.primes, "results": results})
    return EXIT_OK if failures == 0 else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quivergrass",
        description="Exact quiver Grassmannian toolkit over prime fields.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("instance", help="instance JSON file")
        p.add_argument("--primes", default="2,3,5", type=_parse_primes)
        p.add_argument("--budget", type=int, default=None,
                       help="enumeration node budget")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--cache", default=None, help="hom table cache directory")

    common(sub.add_parser("indec-table", help="indecomposables and AR data"))
    common(sub.add_parser("qhat", help="extended quiver and its algebra"))
    common(sub.add_parser("mhat", help="extended representation of an instance"))
    p = sub.add_parser("count", help="point counts and counting polynomial")
    common(p)
    p.add_argument("--e", default=None,
                   help="target dimension vector (base or extended length)")
    p = sub.add_parser("stratify", help="iso-type stratification")
    common(p)
    p.add_argument("--e", default=None)
    p = sub.add_parser("desing", help="full desingularization report")
    common(p)
    p.add_argument("--e", default=None)
    p.add_argument("--deep-primes", default=None,
                   help="primes for stratification and fibres")
    p = sub.add_parser("a2", help="two-vertex closed-form utilities")
    p.add_argument("action", choices=["sweep"])
    p.add_argument("--dmax", type=int, default=3)
    common(p, instance=False)
    p = sub.add_parser("fixtures", help="run all shipped instance checks")
    p.add_argument("--dir", default=None, help="fixture directory")
    common(p, instance=False)
    return ap


HANDLERS = {
    "indec-table": cmd_indec_table,
    "qhat": cmd_qhat,
    "mhat": cmd_mhat,
    "count": cmd_count,
    "stratify": cmd_stratify,
    "desing": cmd_desing,
    "a2": cmd_a2,
    "fixtures": cmd_fixtures,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    if args.budget is not None and args.budget <= 0:
        print("error: budget must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return HANDLERS[args.cmd](args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        if getattr(args, "out", None):
            write_text(os.path.join(args.out, "partial.json"),
                       canonical_json({"schema_version": 1, "partial": True,
                                       "reason": str(exc)}))
        return EXIT_BUDGET
    except (QuiverError, NotPrimeError, OSError, KeyError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
