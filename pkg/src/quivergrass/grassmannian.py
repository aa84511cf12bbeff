# Subrepresentation Grassmannians: exact point counts over F_p, point
# collection, stratification by iso type, and counting polynomials.

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ar import IndecTable, InvariantError, IsoType
from .fields import PrimeField
from .reps import Representation, hom_basis, quotient_rep, subrep_from_bases


class BudgetExceededError(RuntimeError):
    """Raised when guided enumeration visits more nodes than allowed."""


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over F_q."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def subspaces(field: PrimeField, n: int, k: int):
    """All k-dimensional subspaces of F_p^n, one basis matrix (n x k columns,
    in column-RREF position) per subspace, in a fixed deterministic order."""
    p = field.p
    if k == 0:
        yield field.zeros(n, 0)
        return
    for piv in itertools.combinations(range(n), k):
        # row space form: row i has 1 at piv[i], free entries at non-pivot
        # columns to the right of piv[i]
        free = [(i, c) for i in range(k) for c in range(n)
                if c not in piv and c > piv[i]]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = field.zeros(k, n)
            for i in range(k):
                rows[i, piv[i]] = 1
            for (i, c), val in zip(free, vals):
                rows[i, c] = val
            yield rows.T.copy()


def _quotient_maps(field: PrimeField, l_basis: np.ndarray):
    """Projection and section for F^n / span(columns of l_basis)."""
    n = l_basis.shape[0]
    rref_rows = field.row_space(l_basis.T)
    piv = [int(np.nonzero(r)[0][0]) for r in rref_rows]
    free = [c for c in range(n) if c not in piv]
    pr = field.zeros(len(free), n)
    for a, fc in enumerate(free):
        pr[a, fc] = 1
    for row, c in zip(rref_rows, piv):
        for a, fc in enumerate(free):
            pr[a, c] = (-row[fc]) % field.p
    lift = field.zeros(n, len(free))
    for a, fc in enumerate(free):
        lift[fc, a] = 1
    return pr, lift


def subspaces_containing(field: PrimeField, n: int, k: int, l_basis: np.ndarray):
    """All k-dimensional subspaces of F_p^n containing the column span of
    l_basis; bases returned as n x k column matrices."""
    lb = field.column_space(l_basis)
    l = lb.shape[1]
    if k < l or k > n:
        return
    pr, lift = _quotient_maps(field, lb)
    for w in subspaces(field, n - l, k - l):
        lifted = field.matmul(lift, w)
        yield np.concatenate([lb, lifted], axis=1)


# A point of the Grassmannian: per-vertex basis column matrices.
SubrepPoint = tuple


def count_points(m: Representation, e, *, collect: bool = False,
                 budget: int | None = None):
    """Number of subrepresentations of m with dimension vector e over F_p.

    Enumerates vertex by vertex in topological order; at each vertex only
    subspaces containing the forced span (images of the already-chosen
    subspaces) are visited.  At out-degree-zero vertices the count closes in
    a Gaussian binomial unless points are collected.

    Returns (count, points); points is empty unless collect is True.
    Raises BudgetExceededError if more than `budget` partial nodes are visited.
    """
    f = m.field
    q = m.quiver
    e = tuple(int(x) for x in e)
    if len(e) != q.n:
        raise ValueError("dimension vector length mismatch")
    if any(ev < 0 or ev > dv for ev, dv in zip(e, m.dims)):
        return (0, [])
    order = q.topological_order
    visited = 0
    points = []

    def forced(v, chosen):
        imgs = [f.matmul(m.mats[k], chosen[q.arrows_idx[k][0]])
                for k in q.in_arrows(v)]
        if not imgs:
            return f.zeros(m.dims[v], 0)
        return f.column_space(np.concatenate(imgs, axis=1))

    def rec(pos, chosen):
        nonlocal visited
        if pos == len(order):
            if collect:
                points.append(tuple(chosen))
            return 1
        v = order[pos]
        span = forced(v, chosen)
        l = span.shape[1]
        if l > e[v]:
            return 0
        if not collect and not q.out_arrows(v):
            # nothing downstream depends on the choice here
            sub = gaussian_binomial(m.dims[v] - l, e[v] - l, f.p)
            if sub == 0:
                return 0
            rest = rec(pos + 1, chosen)
            return sub * rest
        total = 0
        for basis in subspaces_containing(f, m.dims[v], e[v], span):
            visited += 1
            if budget is not None and visited > budget:
                raise BudgetExceededError(f"enumeration budget {budget} exceeded")
            chosen[v] = basis
            total += rec(pos + 1, chosen)
        chosen[v] = None
        return total

    count = rec(0, [None] * q.n)
    return count, points


def point_subrep(m: Representation, point: SubrepPoint):
    """The subrepresentation and inclusion attached to an enumeration point."""
    return subrep_from_bases(m, point)


def tangent_dim(m: Representation, point: SubrepPoint) -> int:
    """dim Hom(U, M/U): the tangent space dimension of the Grassmannian at U."""
    sub, _ = subrep_from_bases(m, point)
    quot, _ = quotient_rep(m, point)
    return len(hom_basis(sub, quot))


@dataclass
class Stratum:
    iso: IsoType
    points: list
    dim: int               # hom(N, M) - end(N)
    tangent: int           # tangent dimension at the first point


def stratify(m: Representation, e, table: IndecTable, *,
             budget: int | None = None) -> list[Stratum]:
    """Decompose the Grassmannian point set by iso type of the subrepresentation.

    Points with equal Hom-dimension fingerprints share an iso type, so the
    Krull-Schmidt decomposition runs once per fingerprint.
    """
    _, points = count_points(m, e, collect=True, budget=budget)
    m_iso = table.decompose(m)
    buckets: dict[tuple, list] = {}
    for pt in points:
        sub, _ = subrep_from_bases(m, pt)
        prof = table.hom_profile(sub)
        buckets.setdefault(prof, []).append(pt)
    strata: dict[IsoType, Stratum] = {}
    for prof, pts in buckets.items():
        iso = table.decompose_profile(prof)
        if iso in strata:
            strata[iso].points.extend(pts)
            continue
        end_n = table.hom_iso(iso, iso)
        dim = table.hom_iso(iso, m_iso) - end_n
        strata[iso] = Stratum(iso=iso, points=pts, dim=dim,
                              tangent=tangent_dim(m, pts[0]))
    return sorted(strata.values(), key=lambda s: (-s.dim, s.iso))


@dataclass
class CountPolynomial:
    coeffs: tuple            # c_0 + c_1 q + ... low degree first
    verified: bool
    holdout_prime: int
    holdout_expected: int
    holdout_actual: int

    def __call__(self, q: int) -> int:
        return sum(c * q ** i for i, c in enumerate(self.coeffs))

    def pretty(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                qs = "q" if i == 1 else f"q^{i}"
                terms.append(qs if c == 1 else f"{c}*{qs}")
        return " + ".join(terms) if terms else "0"


def count_polynomial(counts: dict) -> CountPolynomial:
    """Interpolate point counts over several primes to an integer polynomial
    in q, verifying the result on a held-out prime (the largest one).

    counts maps prime -> point count.  At least three primes are required.
    """
    if len(counts) < 3:
        raise ValueError("need at least three primes to interpolate and verify")
    primes = sorted(counts)
    fit, holdout = primes[:-1], primes[-1]
    # Lagrange interpolation over the rationals
    coeffs = [Fraction(0)] * len(fit)
    for i, pi in enumerate(fit):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, pj in enumerate(fit):
            if j == i:
                continue
            # multiply polynomial by (q - pj)
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
        raise InvariantError("interpolated counting polynomial is not integral")
    ints = tuple(int(c) for c in coeffs)
    expected = counts[holdout]
    actual = sum(c * holdout ** i for i, c in enumerate(ints))
    return CountPolynomial(coeffs=ints, verified=actual == expected,
                           holdout_prime=holdout,
                           holdout_expected=expected, holdout_actual=actual)
