# Result persistence: JSON reports with a schema version and instance hash,
# delimited summaries, DOT graphs, matplotlib figures, and the on-disk hom
# table cache.  Everything written here is byte-stable for identical inputs.

from __future__ import annotations

import csv
import hashlib
import io
import json
import os

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .ar import IndecTable
from .desing import DesingInstance
from .quiver import Quiver, QuiverError, load_quiver

SCHEMA_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def instance_hash(data: dict) -> str:
    return hashlib.sha256(
        json.dumps(data, sort_keys=True).encode()).hexdigest()[:16]


def load_instance(path: str) -> dict:
    """Read an instance file: quiver (explicit or shorthand), dims, integer
    matrices keyed by arrow index, and optionally a target dimension vector."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise QuiverError(f"cannot read instance file {path}: {exc}")
    if "quiver" in data:
        quiver = load_quiver(data["quiver"])
    else:
        quiver = load_quiver(data)
    dims = tuple(int(d) for d in data["dims"])
    mats = []
    raw = data.get("matrices", {})
    for k, (s, t) in enumerate(quiver.arrows_idx):
        entry = raw.get(str(k), [])
        mat = np.array(entry, dtype=np.int64).reshape(dims[t], dims[s])
        mats.append(mat)
    out = {"quiver": quiver, "dims": dims, "mats": tuple(mats),
           "name": data.get("name", os.path.basename(path))}
    if "e" in data:
        out["e"] = tuple(int(x) for x in data["e"])
    return out


def to_desing_instance(inst: dict, e=None) -> DesingInstance:
    e = tuple(e) if e is not None else inst.get("e")
    if e is None:
        raise QuiverError("no target dimension vector given")
    return DesingInstance(inst["quiver"], inst["dims"], inst["mats"], e)


def instance_key(inst: dict, extra=None) -> str:
    data = {"quiver": inst["quiver"].content_key(),
            "dims": list(inst["dims"]),
            "mats": [m.tolist() for m in inst["mats"]]}
    if extra:
        data["extra"] = extra
    return instance_hash(data)


def write_text(path: str, text: str):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def write_json_report(path: str, payload: dict, inst: dict | None = None):
    doc = {"schema_version": SCHEMA_VERSION}
    if inst is not None:
        doc["instance"] = inst["name"]
        doc["instance_hash"] = instance_key(inst)
    doc.update(payload)
    write_text(path, canonical_json(doc))


def counts_csv(report: dict) -> str:
    """Flat delimited view of a desingularization report."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["prime", "kind", "name", "value"])
    for p in report["primes"]:
        pp = report["per_prime"][p]
        w.writerow([p, "base_count", "", pp["base_count"]])
        for name, cd in sorted(pp["candidates"].items()):
            w.writerow([p, "candidate_count", name, cd["count"]])
        for s in pp.get("strata", []):
            w.writerow([p, "stratum_size", s["iso"], s["size"]])
            w.writerow([p, "stratum_dim", s["iso"], s["dim"]])
    return buf.getvalue()


def polynomial_figure(report: dict, path: str):
    """Render the counting polynomials with their sampled values."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=100)
    qs = np.linspace(1.0, max(report["primes"]) + 1.0, 200)
    series = [("base", report["base_polynomial"]),
              ("total", report["total_polynomial"])]
    for name, entry in sorted(report["per_candidate"].items()):
        series.append((f"Y {name}", entry["count_polynomial"]))
    for label, poly in series:
        coeffs = poly["coeffs"]
        vals = sum(c * qs ** i for i, c in enumerate(coeffs))
        ax.plot(qs, vals, label=f"{label}: {poly['pretty']}")
    for p in report["primes"]:
        ax.plot([p], [report["per_prime"][p]["base_count"]], "ko", ms=4)
    ax.set_xlabel("q")
    ax.set_ylabel("points")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def strata_figure(report: dict, path: str):
    """Bar chart of stratum sizes at the smallest deep prime."""
    p = report["deep_primes"][0]
    strata = report["per_prime"][p]["strata"]
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=100)
    names = [s["iso"] for s in strata]
    sizes = [s["size"] for s in strata]
    dims = [s["dim"] for s in strata]
    ax.bar(range(len(names)), sizes, color="steelblue")
    for i, (sz, d) in enumerate(zip(sizes, dims)):
        ax.text(i, sz, f"dim {d}", ha="center", va="bottom", fontsize=8)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=7)
    ax.set_ylabel(f"points over F_{p}")
    fig.tight_layout()
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def write_desing_outputs(report: dict, inst: dict, outdir: str, stem: str):
    """Write the full artifact set for one desingularization run: JSON, CSV,
    DOT for the base and extended quivers, and the figures."""
    serializable = json.loads(json.dumps(report, default=str))
    write_json_report(os.path.join(outdir, f"{stem}.json"), serializable, inst)
    write_text(os.path.join(outdir, f"{stem}.csv"), counts_csv(report))
    write_text(os.path.join(outdir, f"{stem}_quiver.dot"), inst["quiver"].dot())
    hat_lines = ['digraph "extended" {']
    for v in report["hat_vertices"]:
        hat_lines.append(f'  "{v}";')
    for s, t in report["hat_arrows"]:
        hat_lines.append(f'  "{s}" -> "{t}";')
    hat_lines.append("}")
    write_text(os.path.join(outdir, f"{stem}_qhat.dot"),
               "\n".join(hat_lines) + "\n")
    polynomial_figure(report, os.path.join(outdir, f"{stem}_counts.png"))
    strata_figure(report, os.path.join(outdir, f"{stem}_strata.png"))


# -- hom table cache ------------------------------------------------------


def warm_hom_cache(table: IndecTable, cache_dir: str | None):
    """Load (or compute and store) the full hom table for an AR table.

    Cached values are only trusted if the stored dimension vectors match the
    freshly built table, so a hit can never change results.
    """
    if not cache_dir:
        return
    key = instance_hash({"quiver": table.quiver.content_key(),
                         "p": table.field.p})
    path = os.path.join(cache_dir, f"homtable_{key}.json")
    dimvecs = [list(u.dim_vector) for u in table.indecs]
    if os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        if data.get("dim_vectors") == dimvecs:
            t = np.array(data["hom_table"], dtype=np.int64)
            for x in range(table.n_indecs):
                for y in range(table.n_indecs):
                    table._hom_cache[(x, y)] = int(t[x, y])
            return
    t = table.hom_table()
    os.makedirs(cache_dir, exist_ok=True)
    write_text(path, canonical_json(
        {"dim_vectors": dimvecs, "hom_table": t.tolist()}))
