# Representations of quivers over prime fields, and the exact Hom solver.

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fields import PrimeField
from .quiver import Quiver, QuiverError


class FieldMismatchError(ValueError):
    pass


# A morphism X -> Y is a tuple of per-vertex matrices f_v of shape
# (dim Y_v, dim X_v) with f_j X_alpha = Y_alpha f_i for every arrow i -> j.
Hom = tuple


@dataclass(frozen=True)
class Representation:
    """A representation: per-vertex dimensions and one matrix per arrow.

    The matrix of arrow alpha: i -> j has shape (dims[j], dims[i]) and acts
    on column vectors.  Instances are immutable; matrices are stored reduced
    mod p with the write flag cleared.
    """

    quiver: Quiver
    field: PrimeField
    dims: tuple
    mats: tuple

    def __post_init__(self):
        if len(self.dims) != self.quiver.n:
            raise QuiverError("dims length != vertex count")
        if len(self.mats) != len(self.quiver.arrows):
            raise QuiverError("one matrix per arrow required")
        fixed = []
        for k, (s, t) in enumerate(self.quiver.arrows_idx):
            m = self.field.reduce(self.mats[k])
            if m.shape != (self.dims[t], self.dims[s]):
                raise QuiverError(
                    f"matrix {k} has shape {m.shape}, expected "
                    f"({self.dims[t]}, {self.dims[s]})")
            m.setflags(write=False)
            fixed.append(m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "mats", tuple(fixed))

    @cached_property
    def content_key(self) -> str:
        h = hashlib.sha256()
        h.update(self.quiver.content_key().encode())
        h.update(str(self.field.p).encode())
        h.update(str(self.dims).encode())
        for m in self.mats:
            h.update(m.tobytes())
        return h.hexdigest()

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def path_matrix(self, path) -> np.ndarray:
        """Composite matrix along a path (tuple of arrow indices, source first)."""
        if not path:
            raise ValueError("empty path needs a vertex; use an identity instead")
        m = self.mats[path[0]]
        for k in path[1:]:
            m = self.field.matmul(self.mats[k], m)
        return m


def zero_rep(quiver: Quiver, field: PrimeField) -> Representation:
    dims = (0,) * quiver.n
    mats = tuple(field.zeros(0, 0) for _ in quiver.arrows)
    return Representation(quiver, field, dims, mats)


def simple_rep(quiver: Quiver, field: PrimeField, v_idx: int) -> Representation:
    dims = tuple(1 if i == v_idx else 0 for i in range(quiver.n))
    mats = tuple(field.zeros(dims[t], dims[s]) for s, t in quiver.arrows_idx)
    return Representation(quiver, field, dims, mats)


def direct_sum(*reps: Representation) -> Representation:
    if not reps:
        raise ValueError("need at least one summand")
    q, f = reps[0].quiver, reps[0].field
    for r in reps[1:]:
        if r.quiver is not q and r.quiver != q:
            raise QuiverError("direct sum across different quivers")
        if r.field != f:
            raise FieldMismatchError("direct sum across different fields")
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(q.n))
    mats = []
    for k, (s, t) in enumerate(q.arrows_idx):
        block = f.zeros(dims[t], dims[s])
        ro = co = 0
        for r in reps:
            block[ro:ro + r.dims[t], co:co + r.dims[s]] = r.mats[k]
            ro += r.dims[t]
            co += r.dims[s]
        mats.append(block)
    return Representation(q, f, dims, tuple(mats))


def hom_basis(x: Representation, y: Representation) -> list[Hom]:
    """Basis of Hom(x, y): solves the intertwiner system exactly over F_p.

    Each basis element is a tuple of matrices f_v: x_v -> y_v.
    """
    if x.field != y.field:
        raise FieldMismatchError("hom between representations over different fields")
    if x.quiver != y.quiver:
        raise QuiverError("hom between representations of different quivers")
    f = x.field
    q = x.quiver
    sizes = [y.dims[v] * x.dims[v] for v in range(q.n)]
    offs = np.cumsum([0] + sizes)
    nvar = int(offs[-1])
    rows = []
    for k, (i, j) in enumerate(q.arrows_idx):
        # equation f_j @ X_k - Y_k @ f_i = 0, entrywise
        neq = y.dims[j] * x.dims[i]
        if neq == 0:
            continue
        block = f.zeros(neq, nvar)
        xk, yk = x.mats[k], y.mats[k]
        for a in range(y.dims[j]):
            for b in range(x.dims[i]):
                row = a * x.dims[i] + b
                # f_j[a, c] * X_k[c, b]
                for c in range(x.dims[j]):
                    block[row, offs[j] + a * x.dims[j] + c] += xk[c, b]
                # - Y_k[a, c] * f_i[c, b]
                for c in range(y.dims[i]):
                    block[row, offs[i] + c * x.dims[i] + b] -= yk[a, c]
        rows.append(block % f.p)
    if nvar == 0:
        return []
    system = np.concatenate(rows, axis=0) if rows else f.zeros(0, nvar)
    basis_cols = f.nullspace(system)
    out = []
    for col in basis_cols.T:
        homs = tuple(
            col[offs[v]:offs[v + 1]].reshape(y.dims[v], x.dims[v])
            for v in range(q.n))
        out.append(homs)
    return out


def hom_dim_matrix(x: Representation, y: Representation) -> int:
    return len(hom_basis(x, y))


def compose_homs(g: Hom, h: Hom, field: PrimeField) -> Hom:
    """Composite g . h (h first) of per-vertex matrix tuples."""
    return tuple(field.matmul(gv, hv) for gv, hv in zip(g, h))


def flatten_hom(h: Hom) -> np.ndarray:
    parts = [m.reshape(-1) for m in h]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def unflatten_hom(vec: np.ndarray, shapes) -> Hom:
    out = []
    pos = 0
    for r, c in shapes:
        out.append(np.array(vec[pos:pos + r * c].reshape(r, c), dtype=np.int64))
        pos += r * c
    return tuple(out)


def subrep_from_bases(m: Representation, bases) -> tuple[Representation, Hom]:
    """Subrepresentation spanned by the given per-vertex basis matrices.

    bases[v] has shape (dims[v], k_v): columns span the subspace.  Raises if
    the spans are not arrow-stable.  Returns (subrep, inclusion hom).
    """
    f = m.field
    q = m.quiver
    bs = [f.reduce(b) for b in bases]
    dims = tuple(b.shape[1] for b in bs)
    mats = []
    for k, (i, j) in enumerate(q.arrows_idx):
        rhs = f.matmul(m.mats[k], bs[i])
        x = f.solve(bs[j], rhs)
        if x is None:
            raise QuiverError("given subspaces are not a subrepresentation")
        mats.append(x)
    sub = Representation(q, f, dims, tuple(mats))
    return sub, tuple(bs)


def quotient_rep(m: Representation, bases) -> tuple[Representation, Hom]:
    """Quotient of m by the subrepresentation spanned by bases.

    Returns (quotient, projection hom m -> quotient).  The projection at each
    vertex sends the complement of the subspace (non-pivot standard basis
    vectors) to the standard basis of the quotient.
    """
    f = m.field
    q = m.quiver
    projs = []
    lifts = []
    for v in range(q.n):
        d = m.dims[v]
        rref_rows = f.row_space(f.reduce(bases[v]).T)  # subspace basis as rows
        piv = [int(np.nonzero(row)[0][0]) for row in rref_rows]
        free = [c for c in range(d) if c not in piv]
        # projection kills the subspace; quotient coordinates = free coordinates
        pr = f.zeros(len(free), d)
        for a, fc in enumerate(free):
            pr[a, fc] = 1
        for row, c in zip(rref_rows, piv):
            for a, fc in enumerate(free):
                pr[a, c] = (-row[fc]) % f.p
        projs.append(pr)
        lift = f.zeros(d, len(free))
        for a, fc in enumerate(free):
            lift[fc, a] = 1
        lifts.append(lift)
    dims = tuple(p.shape[0] for p in projs)
    mats = []
    for k, (i, j) in enumerate(q.arrows_idx):
        mats.append(f.matmul(projs[j], f.matmul(m.mats[k], lifts[i])))
    quot = Representation(q, f, dims, tuple(mats))
    return quot, tuple(projs)


def random_rep(quiver: Quiver, field: PrimeField, rng, max_dim: int = 3) -> Representation:
    """Seeded random representation with dims in [0, max_dim]."""
    dims = tuple(rng.randrange(max_dim + 1) for _ in range(quiver.n))
    mats = []
    for s, t in quiver.arrows_idx:
        mats.append(np.array(
            [[rng.randrange(field.p) for _ in range(dims[s])] for _ in range(dims[t])],
            dtype=np.int64).reshape(dims[t], dims[s]))
    return Representation(quiver, field, dims, tuple(mats))
