# Desingularization of quiver Grassmannians: generic subrepresentation
# candidates, fibres of the collapsing map, and the full per-instance report.

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ar import InvariantError, IsoType, indec_table
from .fields import PrimeField
from .grassmannian import (count_points, count_polynomial, stratify,
                           tangent_dim)
from .hqbq import Mhat, QHat, check_lambda_image, mhat_explicit
from .quiver import Quiver
from .reps import Representation, subrep_from_bases


def iso_name(table, iso: IsoType) -> str:
    parts = []
    for i, m in iso:
        d = "".join(str(c) for c in table.indecs[i].dim_vector)
        parts.append(f"[{d}]" if m == 1 else f"[{d}]^{m}")
    return "+".join(parts) if parts else "0"


def generic_candidates(qhat: QHat, strata) -> list:
    """Iso types of subrepresentations whose strata can be open in an
    irreducible component.

    A stratum is discarded when another stratum has strictly larger dimension
    and a componentwise-larger extended dimension vector; for two-vertex base
    quivers and for single-stratum instances this is exact, otherwise it is an
    upper bound for the set of generic types.
    """
    nh = {s.iso: qhat.mhat_dim_iso(s.iso) for s in strata}
    keep = []
    for s in strata:
        dominated = any(
            s2.dim > s.dim
            and all(a <= b for a, b in zip(nh[s.iso], nh[s2.iso]))
            for s2 in strata)
        if not dominated:
            keep.append(s.iso)
    return keep


def fibre_count(mhat: Mhat, point, nhat, *, budget=None) -> int:
    """Number of points in the fibre of the collapsing map over the given
    subrepresentation point, for the extended target dimension vector nhat.

    The fibre is the set of subrepresentations of M^ of dimension vector nhat
    containing the image U^ of the point; equivalently a Grassmannian of the
    quotient M^ / U^.
    """
    from .reps import quotient_rep
    f = mhat.qhat.field
    sub, incl = subrep_from_bases(mhat.m, point)
    ubars = mhat.sub_image(sub, incl)
    # validity check: the image must itself be a subrepresentation
    subrep_from_bases(mhat.rep, ubars)
    udims = tuple(b.shape[1] for b in ubars)
    if any(u > n for u, n in zip(udims, nhat)):
        return 0
    quot, _ = quotient_rep(mhat.rep, ubars)
    target = tuple(n - u for n, u in zip(nhat, udims))
    c, _ = count_points(quot, target, budget=budget)
    return c


@dataclass
class DesingInstance:
    """An integer-matrix instance: the same matrices are reduced mod p to give
    a representation over each requested prime."""

    quiver: Quiver
    dims: tuple
    int_mats: tuple            # integer numpy matrices, one per arrow
    e: tuple

    def rep(self, p: int) -> Representation:
        f = PrimeField(p)
        return Representation(self.quiver, f, self.dims,
                              tuple(f.reduce(m) for m in self.int_mats))


def _exact_poly(counts: dict):
    """Exact Lagrange interpolation through all given (prime, count) points,
    trimmed; returns an integer coefficient tuple, or None if the result is
    not integral or takes a negative value just past the largest prime.

    Unlike the held-out fit used for counting polynomials this spends every
    point on the fit, so the degree is only trustworthy when the true degree
    is below the number of points; it is used for fibre jump loci, where the
    sample is limited to the deep primes.
    """
    from fractions import Fraction
    pts = sorted(counts)
    coeffs = [Fraction(0)] * len(pts)
    for i, pi in enumerate(pts):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, pj in enumerate(pts):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k] -= c * pj
                nxt[k + 1] += c
            basis = nxt
            denom *= pi - pj
        scale = Fraction(counts[pi]) / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * scale
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if any(c.denominator != 1 for c in coeffs):
        return None
    ints = tuple(int(c) for c in coeffs)
    probe = pts[-1] + 1
    if sum(c * probe ** i for i, c in enumerate(ints)) < 0:
        return None
    return ints


def desing_report(inst: DesingInstance, primes, *, deep_primes=None,
                  budget=None) -> dict:
    """Complete desingularization analysis of one instance over several primes.

    Point counts of the base and of the candidate desingularizations run over
    every prime.  Stratification and pointwise fibres run only over the deep
    primes (default: the two smallest), since they require collecting every
    point.  Fibres and tangent dimensions are Aut(M)-orbit invariants and can
    genuinely vary inside an iso-type stratum, so both are reported as value
    distributions per stratum, the fibre decomposition identity is checked
    pointwise, and smoothness of a point means its tangent dimension equals
    the top stratum dimension.
    """
    primes = sorted(set(int(p) for p in primes))
    if len(primes) < 3:
        raise ValueError("need at least three primes")
    if deep_primes is None:
        deep_primes = primes[:2]
    deep_primes = sorted(set(int(p) for p in deep_primes))
    if any(p not in primes for p in deep_primes) or not deep_primes:
        raise ValueError("deep primes must be a nonempty subset of primes")

    per_prime = {}
    cand_names = None
    cands_by_name = {}
    for p in primes:
        deep = p in deep_primes
        m = inst.rep(p)
        table = indec_table(inst.quiver, m.field)
        qhat = QHat(inst.quiver, m.field)
        mhat = mhat_explicit(qhat, m)
        bad = check_lambda_image(qhat, mhat.rep)
        if bad:
            raise InvariantError(f"exactness fails at {bad} over F_{p}")
        entry = {"mhat_dims": list(mhat.rep.dims)}
        tangents = {}
        if deep:
            strata = stratify(m, inst.e, table, budget=budget)
            if not strata:
                raise ValueError(
                    "the base Grassmannian is empty for this target vector")
            entry["base_count"] = sum(len(s.points) for s in strata)
            for s in strata:
                tangents[s.iso] = [tangent_dim(m, pt) for pt in s.points]
            cands = generic_candidates(qhat, strata)
            names = [iso_name(table, c) for c in cands]
            if cand_names is None:
                cand_names = names
                cands_by_name = dict(zip(names, cands))
            elif cand_names != names:
                raise InvariantError("generic candidates differ across primes")
        else:
            entry["base_count"] = count_points(m, inst.e, budget=budget)[0]
            strata = None
        cand_data = {}
        for name in (cand_names or []):
            iso = cands_by_name[name]
            nhat = qhat.mhat_dim_iso(iso)
            y_count, _ = count_points(mhat.rep, nhat, budget=budget)
            cd = {
                "nhat": list(nhat),
                "count": y_count,
                "component_dim": qhat.euler_form(
                    nhat, np.array(mhat.rep.dims) - np.array(nhat)),
            }
            if deep:
                fibres = {}
                pointwise = []     # (fibre, tangent) over all points
                identity_sum = 0
                for s in strata:
                    dist = {}
                    for pt, tg in zip(s.points, tangents[s.iso]):
                        fc = fibre_count(mhat, pt, nhat, budget=budget)
                        dist[fc] = dist.get(fc, 0) + 1
                        pointwise.append((fc, tg))
                        identity_sum += fc
                    fibres[iso_name(table, s.iso)] = dict(sorted(dist.items()))
                cd["fibre_distributions"] = fibres
                cd["identity_ok"] = identity_sum == y_count
                cd["pointwise"] = pointwise
            cand_data[name] = cd
        entry["candidates"] = cand_data
        if deep:
            entry["strata"] = [{
                "iso": iso_name(table, s.iso),
                "size": len(s.points),
                "dim": s.dim,
                "tangent_values": dict(sorted(
                    (t, tangents[s.iso].count(t)) for t in set(tangents[s.iso]))),
            } for s in strata]
        per_prime[p] = entry

    if cand_names is None:
        raise InvariantError("no deep prime produced candidates")

    report = {
        "vertices": list(map(str, inst.quiver.vertices)),
        "arrows": [[str(s), str(t)] for s, t in inst.quiver.arrows],
        "dims": list(inst.dims),
        "e": list(inst.e),
        "primes": primes,
        "deep_primes": deep_primes,
        "per_prime": per_prime,
        "candidates": cand_names,
    }
    qhat0 = QHat(inst.quiver, PrimeField(primes[0]))
    report["hat_vertices"] = [o.label for o in qhat0.objects]
    report["hat_arrows"] = [list(a) for a in qhat0.hat.arrows]

    def poly_of(counts):
        cp = count_polynomial(counts)
        return {"coeffs": list(cp.coeffs), "pretty": cp.pretty(),
                "verified": cp.verified}

    report["base_polynomial"] = poly_of(
        {p: per_prime[p]["base_count"] for p in primes})
    report["total_polynomial"] = poly_of(
        {p: sum(per_prime[p]["candidates"][n]["count"] for n in cand_names)
         for p in primes})

    dim_x = max(s["dim"] for s in per_prime[deep_primes[0]]["strata"])
    per_cand = {}
    verdicts = {}
    for name in cand_names:
        cd = {p: per_prime[p]["candidates"][name] for p in primes}
        entry = {
            "count_polynomial": poly_of({p: cd[p]["count"] for p in primes}),
            "identity_ok": all(cd[p]["identity_ok"] for p in deep_primes),
            "component_dim": cd[primes[0]]["component_dim"],
            "nhat": cd[primes[0]]["nhat"],
        }
        # a point is smooth when its tangent dimension equals the top
        # stratum dimension (the instance dimension for irreducible cases)
        one_to_one = all(
            fc <= 1
            for p in deep_primes
            for fc, tg in cd[p]["pointwise"] if tg == dim_x)
        # smallness: match the jump loci of the fibre across deep primes by
        # rank of the fibre value, interpolate both the locus size and the
        # fibre count exactly through all deep primes, and compare twice the
        # fibre dimension with the codimension of the locus
        small = None
        if len(deep_primes) >= 3:
            per_p = {}
            for p in deep_primes:
                vals = sorted({fc for fc, _ in cd[p]["pointwise"] if fc > 1},
                              reverse=True)
                cum = []
                for v in vals:
                    cum.append(sum(1 for fc, _ in cd[p]["pointwise"] if fc >= v))
                per_p[p] = (vals, cum)
            nlevels = {len(per_p[p][0]) for p in deep_primes}
            if len(nlevels) == 1:
                small = True
                jumps = []
                for k in range(nlevels.pop()):
                    vp = _exact_poly({p: per_p[p][0][k] for p in deep_primes})
                    lp = _exact_poly({p: per_p[p][1][k] for p in deep_primes})
                    if vp is None or lp is None:
                        small = None
                        jumps = None
                        break
                    fdim = len(vp) - 1
                    ldim = len(lp) - 1
                    jumps.append({"fibre_poly_coeffs": list(vp),
                                  "locus_poly_coeffs": list(lp),
                                  "fibre_dim": fdim,
                                  "locus_codim": dim_x - ldim})
                    if 2 * fdim >= dim_x - ldim:
                        small = False
                entry["fibre_jumps"] = jumps
        verdicts[name] = {"one_to_one_over_smooth": one_to_one, "small": small}
        per_cand[name] = entry
    # pointwise pairs served their purpose; drop them from the report
    for p in deep_primes:
        for name in cand_names:
            per_prime[p]["candidates"][name].pop("pointwise", None)
    report["per_candidate"] = per_cand
    report["verdicts"] = verdicts
    report["dim"] = dim_x
    return report
