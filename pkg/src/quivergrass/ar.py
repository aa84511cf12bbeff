# Auslander-Reiten data for a Dynkin quiver: indecomposables, tau, the AR
# quiver, Hom/Ext dimension tables, minimal projective resolutions, and
# Krull-Schmidt decomposition.

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fields import PrimeField
from .quiver import Quiver, NotDynkinError, QuiverError
from .reps import (Representation, direct_sum, hom_basis, simple_rep,
                   subrep_from_bases)


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


# Maximal coordinate of the highest root, per Dynkin family.
_ROOT_COORD_BOUND = {"A": 1, "D": 2, "E6": 3, "E7": 4, "E8": 6}


def positive_roots(quiver: Quiver) -> list[tuple]:
    """All positive roots of the underlying ADE diagram, by brute-force
    enumeration of the Tits form (q(d) = 1, d >= 0)."""
    dtype = quiver.dynkin_type
    if dtype.startswith("A"):
        bound = _ROOT_COORD_BOUND["A"]
    elif dtype.startswith("D"):
        bound = _ROOT_COORD_BOUND["D"]
    else:
        bound = _ROOT_COORD_BOUND[dtype]
    roots = []
    for d in itertools.product(range(bound + 1), repeat=quiver.n):
        if any(d) and quiver.tits_form(d) == 1:
            roots.append(d)
    return roots


def sink_sequence(quiver: Quiver) -> tuple:
    """An admissible sink ordering: reversed topological order (sinks first)."""
    return tuple(reversed(quiver.topological_order))


def simple_reflect(quiver: Quiver, v_idx: int, d) -> tuple:
    """Simple reflection of a dimension vector at a vertex (underlying graph)."""
    out = list(d)
    out[v_idx] = -d[v_idx] + sum(d[w] for w in quiver.neighbors[v_idx])
    return tuple(out)


def coxeter(quiver: Quiver, d) -> tuple:
    """Coxeter transformation: simple reflections along the sink sequence.

    dim(tau M) = coxeter(dim M) for non-projective indecomposable M; the
    result has a negative entry exactly when M is projective.
    """
    cur = tuple(d)
    for v in sink_sequence(quiver):
        cur = simple_reflect(quiver, v, cur)
    return cur


def coxeter_inv(quiver: Quiver, d) -> tuple:
    cur = tuple(d)
    for v in reversed(sink_sequence(quiver)):
        cur = simple_reflect(quiver, v, cur)
    return cur


def _reflection_cokernel(rep: Representation, v_idx: int) -> Representation:
    """Inverse reflection functor at a source: replace the space at the vertex
    by the cokernel of the map into the sum over outgoing arrows, and reverse
    those arrows."""
    f = rep.field
    q = rep.quiver
    out = q.out_arrows(v_idx)
    targets = [q.arrows_idx[k][1] for k in out]
    total = sum(rep.dims[t] for t in targets)
    phi = f.zeros(total, rep.dims[v_idx])
    ro = 0
    for k, t in zip(out, targets):
        phi[ro:ro + rep.dims[t]] = rep.mats[k]
        ro += rep.dims[t]
    # cokernel projection of phi
    rref_rows = f.row_space(phi.T)
    piv = [int(np.nonzero(row)[0][0]) for row in rref_rows]
    free = [c for c in range(total) if c not in piv]
    pr = f.zeros(len(free), total)
    for a, fc in enumerate(free):
        pr[a, fc] = 1
    for row, c in zip(rref_rows, piv):
        for a, fc in enumerate(free):
            pr[a, c] = (-row[fc]) % f.p
    new_quiver = q.reflect_at(v_idx)
    new_dims = list(rep.dims)
    new_dims[v_idx] = len(free)
    mats = []
    for k, (s, t) in enumerate(q.arrows_idx):
        if k in out:
            # arrow v -> t becomes t -> v: block of the projection
            off = 0
            for kk, tt in zip(out, targets):
                if kk == k:
                    break
                off += rep.dims[tt]
            mats.append(pr[:, off:off + rep.dims[t]])
        else:
            mats.append(rep.mats[k])
    return Representation(new_quiver, f, tuple(new_dims), tuple(mats))


def build_indecomposable(quiver: Quiver, field: PrimeField, root) -> Representation:
    """Explicit indecomposable with the given dimension vector, built by
    reflection functors from a simple at a sink."""
    seq = sink_sequence(quiver)
    cur_q = quiver
    cur_d = tuple(root)
    steps = []
    for step in range(len(seq) * 40):
        v = seq[step % len(seq)]
        if all(cur_d[i] == (1 if i == v else 0) for i in range(quiver.n)):
            rep = simple_rep(cur_q, field, v)
            for w in reversed(steps):
                rep = _reflection_cokernel(rep, w)
            if rep.dims != tuple(root):
                raise InvariantError("reflection construction missed the root")
            return rep
        new_d = simple_reflect(cur_q, v, cur_d)
        if min(new_d) < 0:
            raise InvariantError(f"reflection made {cur_d} negative at {v}")
        steps.append(v)
        cur_q = cur_q.reflect_at(v)
        cur_d = new_d
    raise InvariantError(f"reflection sequence for root {root} did not terminate")


@dataclass(frozen=True)
class Indecomposable:
    id: int
    dim_vector: tuple
    rep: Representation
    is_projective: bool
    is_injective: bool
    tau: int | None           # id of tau(U) for non-projective U
    tau_inv: int | None       # id of tau^{-1}(U) for non-injective U
    proj_vertex: int | None   # i with U = P_i, if projective
    inj_vertex: int | None    # i with U = I_i, if injective


# IsoType: sorted tuple of (indec id, multiplicity), multiplicities > 0.
IsoType = tuple


def isotype(pairs) -> IsoType:
    acc = {}
    for i, m in pairs:
        if m:
            acc[i] = acc.get(i, 0) + int(m)
    return tuple(sorted(acc.items()))


class IndecTable:
    """The full AR-theoretic data of mod kQ for a Dynkin quiver over F_p.

    Indecomposables are ordered topologically along the AR quiver (ties broken
    by lexicographic dimension vector) so every table and report is stable.
    """

    def __init__(self, quiver: Quiver, field: PrimeField):
        quiver.dynkin_type  # raises NotDynkinError early
        self.quiver = quiver
        self.field = field
        self._build()

    # -- construction ----------------------------------------------------

    def _build(self):
        q = self.quiver
        roots = positive_roots(q)
        proj_dims = [self._proj_dim_vector(i) for i in range(q.n)]
        inj_dims = [self._inj_dim_vector(i) for i in range(q.n)]
        # provisional records keyed by dim vector
        tau_of = {}
        tau_inv_of = {}
        for d in roots:
            c = coxeter(q, d)
            if min(c) >= 0:
                tau_of[d] = c
                tau_inv_of[c] = d
        # AR arrows on dim vectors: radical arrows between projectives, then
        # the mesh mirror rule to a fixpoint.
        arrows = set()
        for s, t in q.arrows_idx:
            arrows.add((proj_dims[t], proj_dims[s]))  # P_j -> P_i for i -> j
        changed = True
        while changed:
            changed = False
            for z in roots:
                tz = tau_of.get(z)
                if tz is None:
                    continue
                for (a, b) in list(arrows):
                    if a == tz and (b, z) not in arrows:
                        arrows.add((b, z))
                        changed = True
        # mesh additivity and tau cross-check
        for z in roots:
            tz = tau_of.get(z)
            if tz is None:
                continue
            middles = [b for (a, b) in arrows if a == tz]
            s = tuple(sum(m[i] for m in middles) for i in range(q.n))
            if tuple(x + y for x, y in zip(tz, z)) != s:
                raise InvariantError(f"mesh additivity fails at {z}")
        # canonical order: topological along AR arrows, lex dim vector ties
        order = self._ar_topo_order(roots, arrows)
        id_of = {d: i for i, d in enumerate(order)}
        self.indecs: list[Indecomposable] = []
        for i, d in enumerate(order):
            pv = next((v for v in range(q.n) if proj_dims[v] == d), None)
            iv = next((v for v in range(q.n) if inj_dims[v] == d), None)
            rep = build_indecomposable(q, self.field, d)
            if len(hom_basis(rep, rep)) != 1:
                raise InvariantError(f"constructed rep at {d} is not a brick")
            self.indecs.append(Indecomposable(
                id=i, dim_vector=d, rep=rep,
                is_projective=pv is not None,
                is_injective=iv is not None,
                tau=id_of[tau_of[d]] if d in tau_of else None,
                tau_inv=id_of[tau_inv_of[d]] if d in tau_inv_of else None,
                proj_vertex=pv, inj_vertex=iv))
        self.ar_arrows = sorted((id_of[a], id_of[b]) for a, b in arrows)
        if len(self.ar_arrows) != len(set(self.ar_arrows)):
            raise InvariantError("multiple AR arrows between a vertex pair")
        self.n_indecs = len(self.indecs)
        self.id_of_dim = id_of
        self._hom_cache: dict[tuple[int, int], int] = {}
        self._min_res_cache: dict[int, tuple[IsoType, IsoType]] = {}

    def _proj_dim_vector(self, i: int) -> tuple:
        paths = self.quiver.path_lists[i]
        return tuple(len(paths[j]) for j in range(self.quiver.n))

    def _inj_dim_vector(self, i: int) -> tuple:
        paths = self.quiver.path_lists
        return tuple(len(paths[j][i]) for j in range(self.quiver.n))

    def _ar_topo_order(self, roots, arrows):
        indeg = {d: 0 for d in roots}
        outs = {d: [] for d in roots}
        for a, b in arrows:
            indeg[b] += 1
            outs[a].append(b)
        avail = sorted([d for d in roots if indeg[d] == 0])
        order = []
        while avail:
            d = avail.pop(0)
            order.append(d)
            for b in outs[d]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    avail.append(b)
            avail.sort()
        if len(order) != len(roots):
            raise InvariantError("AR quiver is not acyclic")
        return order

    # -- lookups ---------------------------------------------------------

    def projective(self, vertex_idx: int) -> Indecomposable:
        for u in self.indecs:
            if u.proj_vertex == vertex_idx:
                return u
        raise KeyError(vertex_idx)

    def injective(self, vertex_idx: int) -> Indecomposable:
        for u in self.indecs:
            if u.inj_vertex == vertex_idx:
                return u
        raise KeyError(vertex_idx)

    def simple(self, vertex_idx: int) -> Indecomposable:
        d = tuple(1 if i == vertex_idx else 0 for i in range(self.quiver.n))
        return self.indecs[self.id_of_dim[d]]

    # -- hom/ext dimensions ----------------------------------------------

    def hom_dim(self, x: int, y: int) -> int:
        """dim Hom(X, Y) by the hereditary recursion
        hom(X, Y) = <dim X, dim Y> + hom(Y, tau X), hom(P_i, Y) = (dim Y)_i."""
        key = (x, y)
        if key in self._hom_cache:
            return self._hom_cache[key]
        xu = self.indecs[x]
        if xu.is_projective:
            val = self.indecs[y].dim_vector[xu.proj_vertex]
        else:
            val = (self.quiver.euler_form(xu.dim_vector, self.indecs[y].dim_vector)
                   + self.hom_dim(y, xu.tau))
        if val < 0:
            raise InvariantError("negative hom dimension")
        self._hom_cache[key] = val
        return val

    def ext_dim(self, x: int, y: int) -> int:
        """dim Ext^1(X, Y) via the AR formula ext(X, Y) = hom(Y, tau X)."""
        xu = self.indecs[x]
        if xu.is_projective:
            return 0
        return self.hom_dim(y, xu.tau)

    def hom_table(self) -> np.ndarray:
        n = self.n_indecs
        t = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            for y in range(n):
                t[x, y] = self.hom_dim(x, y)
        return t

    def hom_iso(self, x: IsoType, y: IsoType) -> int:
        return sum(mx * my * self.hom_dim(i, j) for i, mx in x for j, my in y)

    def ext_iso(self, x: IsoType, y: IsoType) -> int:
        return sum(mx * my * self.ext_dim(i, j) for i, mx in x for j, my in y)

    def dim_vector_of(self, iso: IsoType) -> tuple:
        out = [0] * self.quiver.n
        for i, m in iso:
            for v in range(self.quiver.n):
                out[v] += m * self.indecs[i].dim_vector[v]
        return tuple(out)

    def realize(self, iso: IsoType) -> Representation:
        """Canonical explicit representation of an iso type (direct sum of the
        table's explicit indecomposables)."""
        summands = []
        for i, m in iso:
            summands.extend([self.indecs[i].rep] * m)
        if not summands:
            from .reps import zero_rep
            return zero_rep(self.quiver, self.field)
        return direct_sum(*summands)

    # -- minimal projective resolutions ----------------------------------

    def top_dims(self, rep: Representation) -> tuple:
        """Dimension vector of top(M) = M / rad M."""
        f = self.field
        out = []
        for v in range(self.quiver.n):
            imgs = [f.matmul(rep.mats[k], np.eye(rep.dims[self.quiver.arrows_idx[k][0]],
                                                 dtype=np.int64))
                    for k in self.quiver.in_arrows(v)]
            if imgs:
                stacked = np.concatenate(imgs, axis=1)
                rad = f.rank(stacked)
            else:
                rad = 0
            out.append(rep.dims[v] - rad)
        return tuple(out)

    def projective_multiplicities(self, dim_vec) -> IsoType:
        """Write a dimension vector as a nonnegative sum of dim P_i (unique)."""
        q = self.quiver
        remaining = list(dim_vec)
        mult = {}
        # dim P_i has a 1 at i and support only at successors; peel sources first
        for v in q.topological_order:
            m = remaining[v]
            if m < 0:
                raise InvariantError("not a nonnegative projective combination")
            if m:
                pd = self._proj_dim_vector(v)
                for w in range(q.n):
                    remaining[w] -= m * pd[w]
                mult[self.projective(v).id] = m
        if any(remaining):
            raise InvariantError("dimension vector is not projective")
        return isotype(mult.items())

    def min_proj_res(self, u: int) -> tuple[IsoType, IsoType]:
        """(P_U, Q_U) iso types for 0 -> P_U -> Q_U -> U -> 0, U non-projective."""
        if u in self._min_res_cache:
            return self._min_res_cache[u]
        uu = self.indecs[u]
        if uu.is_projective:
            raise ValueError("resolution degenerate: module is projective")
        tops = self.top_dims(uu.rep)
        q_iso = isotype((self.projective(v).id, tops[v])
                        for v in range(self.quiver.n) if tops[v])
        qd = self.dim_vector_of(q_iso)
        pd = tuple(a - b for a, b in zip(qd, uu.dim_vector))
        p_iso = self.projective_multiplicities(pd)
        self._min_res_cache[u] = (p_iso, q_iso)
        return p_iso, q_iso

    # -- decomposition ----------------------------------------------------

    def hom_profile(self, m: Representation) -> tuple:
        return tuple(len(hom_basis(u.rep, m)) for u in self.indecs)

    def decompose_profile(self, profile) -> IsoType:
        """Solve sum_Y mult_Y hom(X, Y) = profile_X; the hom table is
        unitriangular in the canonical order, so back-substitution suffices."""
        n = self.n_indecs
        mult = [0] * n
        for x in range(n - 1, -1, -1):
            acc = sum(mult[y] * self.hom_dim(x, y) for y in range(x + 1, n))
            val = profile[x] - acc
            mult[x] = val
            if val < 0:
                raise InvariantError("negative multiplicity in decomposition")
        return isotype((i, m) for i, m in enumerate(mult))

    def decompose(self, m: Representation) -> IsoType:
        if m.field != self.field:
            raise QuiverError("representation over a different field")
        iso = self.decompose_profile(self.hom_profile(m))
        if self.dim_vector_of(iso) != m.dims:
            raise InvariantError("decomposition does not match dimensions")
        return iso

    # -- output -----------------------------------------------------------

    def ar_dot(self) -> str:
        lines = ['digraph "AR" {']
        for u in self.indecs:
            label = "".join(str(c) for c in u.dim_vector)
            mark = "P" if u.is_projective else ("I" if u.is_injective else "")
            lines.append(f'  n{u.id} [label="{label}{mark and " " + mark}"];')
        for a, b in self.ar_arrows:
            lines.append(f"  n{a} -> n{b};")
        for u in self.indecs:
            if u.tau is not None:
                lines.append(f"  n{u.id} -> n{u.tau} [style=dashed, constraint=false];")
        lines.append("}")
        return "\n".join(lines) + "\n"


_TABLE_CACHE: dict[tuple[str, int], IndecTable] = {}


def indec_table(quiver: Quiver, field: PrimeField) -> IndecTable:
    key = (quiver.content_key(), field.p)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = IndecTable(quiver, field)
    return _TABLE_CACHE[key]
