# Quiver data model: finite acyclic quivers, Dynkin classification, Euler form.

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property


class QuiverError(ValueError):
    pass


class CycleError(QuiverError):
    pass


class DisconnectedError(QuiverError):
    pass


class NotDynkinError(QuiverError):
    pass


@dataclass(frozen=True)
class Quiver:
    """A finite quiver: ordered vertex ids and a list of (source, target) arrows.

    Construction validates uniqueness of ids and acyclicity.  Dynkin-ness is
    not required here; the AR pipeline checks it separately via dynkin_type().
    """

    vertices: tuple
    arrows: tuple  # of (source_id, target_id)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        vset = set(self.vertices)
        for s, t in self.arrows:
            if s not in vset or t not in vset:
                raise QuiverError(f"arrow ({s},{t}) uses unknown vertex")
        self.topological_order  # raises CycleError on cycles

    @staticmethod
    def make(vertices, arrows) -> "Quiver":
        return Quiver(tuple(vertices), tuple((s, t) for s, t in arrows))

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def arrows_idx(self) -> tuple:
        """Arrows as (source_index, target_index) pairs."""
        ix = self.index
        return tuple((ix[s], ix[t]) for s, t in self.arrows)

    @cached_property
    def topological_order(self) -> tuple:
        """Vertex indices, sources first; deterministic (smallest position first)."""
        indeg = [0] * self.n
        out = [[] for _ in range(self.n)]
        for s, t in self.arrows_idx:
            indeg[t] += 1
            out[s].append(t)
        avail = sorted(i for i in range(self.n) if indeg[i] == 0)
        order = []
        while avail:
            v = avail.pop(0)
            order.append(v)
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    avail.append(w)
            avail.sort()
        if len(order) != self.n:
            raise CycleError("quiver contains a directed cycle")
        return tuple(order)

    @cached_property
    def neighbors(self) -> tuple:
        """Undirected adjacency, as a tuple of sorted index tuples."""
        adj = [set() for _ in range(self.n)]
        for s, t in self.arrows_idx:
            adj[s].add(t)
            adj[t].add(s)
        return tuple(tuple(sorted(a)) for a in adj)

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    @cached_property
    def dynkin_type(self) -> str:
        """Classify the underlying graph as an ADE tree ('A3', 'D4', 'E6', ...).

        Raises NotDynkinError for anything else (multiple edges, cycles,
        disconnected graphs, high-degree vertices, long E-type branches).
        """
        n = self.n
        if not self.is_connected():
            raise DisconnectedError("underlying graph is disconnected")
        if len(self.arrows) != n - 1:
            raise NotDynkinError("underlying graph is not a tree")
        if len({tuple(sorted((self.index[s], self.index[t]))) for s, t in self.arrows}) != n - 1:
            raise NotDynkinError("multiple edges between a vertex pair")
        degs = [len(nb) for nb in self.neighbors]
        if max(degs, default=0) <= 2:
            return f"A{n}"
        if degs.count(3) == 1 and max(degs) == 3:
            center = degs.index(3)
            lengths = []
            for start in self.neighbors[center]:
                length, prev, cur = 1, center, start
                while True:
                    nxt = [w for w in self.neighbors[cur] if w != prev]
                    if not nxt:
                        break
                    if len(nxt) > 1:
                        raise NotDynkinError("branching outside the unique degree-3 vertex")
                    prev, cur = cur, nxt[0]
                    length += 1
                lengths.append(length)
            lengths.sort()
            a, b, c = lengths
            if a == 1 and b == 1:
                return f"D{n}"
            if (a, b) == (1, 2) and c in (2, 3, 4):
                return f"E{n}"
            raise NotDynkinError("tree shape is not ADE")
        raise NotDynkinError("tree shape is not ADE")

    def euler_form(self, x, y) -> int:
        """Hereditary Euler form: sum x_i y_i - sum over arrows i->j of x_i y_j."""
        if len(x) != self.n or len(y) != self.n:
            raise QuiverError("dimension vector length mismatch")
        val = sum(int(a) * int(b) for a, b in zip(x, y))
        for s, t in self.arrows_idx:
            val -= int(x[s]) * int(y[t])
        return val

    def tits_form(self, d) -> int:
        return self.euler_form(d, d)

    def reflect_at(self, v_idx: int) -> "Quiver":
        """Reverse all arrows incident to the given vertex."""
        vid = self.vertices[v_idx]
        new = tuple((t, s) if s == vid or t == vid else (s, t) for s, t in self.arrows)
        return Quiver(self.vertices, new)

    def is_sink(self, v_idx: int) -> bool:
        return all(s != v_idx for s, _ in self.arrows_idx)

    def out_arrows(self, v_idx: int):
        return [k for k, (s, _) in enumerate(self.arrows_idx) if s == v_idx]

    def in_arrows(self, v_idx: int):
        return [k for k, (_, t) in enumerate(self.arrows_idx) if t == v_idx]

    @cached_property
    def path_lists(self) -> tuple:
        """paths[i][j]: all directed paths i -> j as tuples of arrow indices,
        in a fixed deterministic order (by length, then lexicographic)."""
        table = []
        for i in range(self.n):
            by_target = {j: [] for j in range(self.n)}
            by_target[i].append(())
            for v in self.topological_order:
                for p in by_target[v]:
                    for k in self.out_arrows(v):
                        by_target[self.arrows_idx[k][1]].append(p + (k,))
            for j in range(self.n):
                by_target[j].sort(key=lambda p: (len(p), p))
            table.append(tuple(tuple(by_target[j]) for j in range(self.n)))
        return tuple(table)

    def dot(self, name: str = "Q") -> str:
        lines = [f'digraph "{name}" {{']
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for s, t in self.arrows:
            lines.append(f'  "{s}" -> "{t}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def content_key(self) -> str:
        return json.dumps({"vertices": list(self.vertices),
                           "arrows": [list(a) for a in self.arrows]}, sort_keys=False)


def parse_arrow_spec(spec: str) -> Quiver:
    """Parse a shorthand like "1->2, 2->3" into a Quiver.

    Vertex ids are the strings appearing in the spec; numeric ids become ints.
    Vertices are ordered by first appearance, numeric-aware.
    """
    arrows = []
    seen = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "->" not in part:
            raise QuiverError(f"cannot parse arrow {part!r}")
        s, t = (x.strip() for x in part.split("->", 1))
        s = int(s) if s.isdigit() else s
        t = int(t) if t.isdigit() else t
        arrows.append((s, t))
        for v in (s, t):
            if v not in seen:
                seen.append(v)
    try:
        seen_sorted = sorted(seen)
    except TypeError:
        seen_sorted = seen
    return Quiver.make(seen_sorted, arrows)


def load_quiver(data) -> Quiver:
    """Build a Quiver from a parsed JSON dict or a shorthand string."""
    if isinstance(data, str):
        return parse_arrow_spec(data)
    return Quiver.make(data["vertices"], data["arrows"])
