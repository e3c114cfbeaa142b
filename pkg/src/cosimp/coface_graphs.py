"""Graphs of ∂-paths.

A ∂-path ∂^{i_k}_{s+k} ∘ ... ∘ ∂^{i_0}_s is stored as the tuple (i_0, ..., i_k)
with 0 <= i_j <= s + j.  A coherer τ^n_{ij} (i < j) acting at positions
(p, p+1) rewrites (..., i, j, ...) into (..., j-1, i, ...) with n = s + p; its
laterality is p + 1.  In the enhanced graphs (s = 1) the φ-expansion edges
change a leading 1 into a leading 0.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator

FaceTuple = tuple

DEFAULT_BUDGET = 10 ** 6

COHERER = "coherer"
COHERER_INV = "coherer-inverse"
PHI = "phi"
PHI_INV = "phi-inverse"
_INVERSE_KIND = {COHERER: COHERER_INV, COHERER_INV: COHERER, PHI: PHI_INV, PHI_INV: PHI}


class BudgetError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class CoherenceEdge:
    kind: str
    source: FaceTuple
    target: FaceTuple
    laterality: int  # 1-based position of the first entry acted on; φ edges use 0
    indices: tuple | None = None

    @property
    def forward(self) -> bool:
        return self.kind in (COHERER, PHI)

    @property
    def is_phi(self) -> bool:
        return self.kind in (PHI, PHI_INV)

    @property
    def position(self) -> int:
        return self.laterality - 1

    def inverse(self) -> "CoherenceEdge":
        return CoherenceEdge(_INVERSE_KIND[self.kind], self.target, self.source,
                             self.laterality, self.indices)

    def forward_edge(self) -> "CoherenceEdge":
        return self if self.forward else self.inverse()

    def to_json(self) -> dict:
        return {"kind": self.kind, "source": list(self.source), "target": list(self.target),
                "laterality": self.laterality,
                "indices": list(self.indices) if self.indices else None}

    @classmethod
    def from_json(cls, d: dict) -> "CoherenceEdge":
        return cls(d["kind"], tuple(d["source"]), tuple(d["target"]), d["laterality"],
                   tuple(d["indices"]) if d.get("indices") else None)


def check_tuple(s: int, t: FaceTuple) -> None:
    for j, x in enumerate(t):
        if not 0 <= x <= s + j:
            raise ValueError(f"entry {j} of {t} outside 0..{s + j}")


def height(v: FaceTuple) -> int:
    return sum(v)


def rank(v: FaceTuple) -> int:
    return sum(1 for a, b in zip(v, v[1:]) if b > a)


def coherer_at(s: int, v: FaceTuple, p: int) -> CoherenceEdge | None:
    """The directed coherer edge acting on positions (p, p+1) of v, if any."""
    i, j = v[p], v[p + 1]
    if i >= j:
        return None
    w = v[:p] + (j - 1, i) + v[p + 2:]
    return CoherenceEdge(COHERER, v, w, p + 1, (i, j))


def phi_at(v: FaceTuple) -> CoherenceEdge | None:
    if v and v[0] == 1:
        return CoherenceEdge(PHI, v, (0,) + v[1:], 0, None)
    return None


def out_coherers(s: int, v: FaceTuple) -> list[CoherenceEdge]:
    return [e for p in range(len(v) - 1) if (e := coherer_at(s, v, p)) is not None]


def out_edges_of(s: int, v: FaceTuple, enhanced: bool) -> list[CoherenceEdge]:
    edges = out_coherers(s, v)
    if enhanced and (e := phi_at(v)) is not None:
        edges.append(e)
    return edges


def component_point(s: int, v: FaceTuple) -> tuple:
    """Image of the composite coface map [s-1] -> [s+k]; labels the component."""
    pts = list(range(s))
    for i in v:
        pts = [x if x < i else x + 1 for x in pts]
    return tuple(pts)


def vertex_count(s: int, k: int) -> int:
    return math.prod(range(s + 1, s + k + 2))


class CofaceGraph:
    """G_{s,k}, or the enhanced G^φ_{1,k} when `enhanced` is set."""

    def __init__(self, s: int, k: int, enhanced: bool = False, budget: int = DEFAULT_BUDGET):
        if s < 1 or k < 1:
            raise ValueError("need s >= 1 and k >= 1")
        if enhanced and s != 1:
            raise ValueError("φ edges only exist for s = 1")
        if vertex_count(s, k) > budget:
            raise BudgetError(f"G_{{{s},{k}}} has {vertex_count(s, k)} vertices > budget {budget}")
        self.s, self.k, self.enhanced = s, k, enhanced
        self.vertices: tuple = tuple(itertools.product(*(range(s + j + 1) for j in range(k + 1))))
        self._vset = set(self.vertices)
        self.out: dict = {v: out_edges_of(s, v, enhanced) for v in self.vertices}
        self.inc: dict = {v: [] for v in self.vertices}
        for v in self.vertices:
            for e in self.out[v]:
                self.inc[e.target].append(e)
        self.edges: tuple = tuple(e for v in self.vertices for e in self.out[v])
        self.component, self.components = self._components()

    def __contains__(self, v) -> bool:
        return tuple(v) in self._vset

    def _components(self):
        comp: dict = {}
        comps: list[list] = []
        for v in self.vertices:  # lexicographic, so ids follow smallest members
            if v in comp:
                continue
            cid = len(comps)
            members = []
            queue = deque([v])
            comp[v] = cid
            while queue:
                x = queue.popleft()
                members.append(x)
                for e in self.out[x] + self.inc[x]:
                    y = e.target if e.source == x else e.source
                    if y not in comp:
                        comp[y] = cid
                        queue.append(y)
            comps.append(sorted(members))
        return comp, comps

    @property
    def coherer_edges(self) -> list[CoherenceEdge]:
        return [e for e in self.edges if e.kind == COHERER]

    @property
    def phi_edges(self) -> list[CoherenceEdge]:
        return [e for e in self.edges if e.kind == PHI]

    def neighbours(self, v) -> list[CoherenceEdge]:
        """All edges leaving v when inverses are allowed."""
        return self.out[v] + [e.inverse() for e in self.inc[v]]

    def check_vertex(self, v) -> FaceTuple:
        v = tuple(v)
        if v not in self._vset:
            raise ValueError(f"{v} is not a vertex of this graph")
        return v

    def to_json(self) -> dict:
        return {
            "s": self.s, "k": self.k, "enhanced": self.enhanced,
            "vertices": [list(v) for v in self.vertices],
            "edges": [e.to_json() for e in self.edges],
            "components": [[list(v) for v in c] for c in self.components],
        }

    def to_dot(self) -> str:
        palette = ["black", "red", "blue", "darkgreen", "orange", "purple", "brown", "cyan4",
                   "magenta", "gold4"]
        lines = [f'graph "G_{self.s}_{self.k}{"_phi" if self.enhanced else ""}" {{']
        classes = classify_vertices(self) if not self.enhanced else {}
        outs = {c["out"] for c in classes.values()}
        ins = {c["in"] for c in classes.values()}
        name = lambda v: '"' + "".join(map(str, v)) + '"'
        for v in self.vertices:
            attrs = [f"color={palette[self.component[v] % len(palette)]}"]
            if v in outs:
                attrs.append("shape=doublecircle")
            if v in ins:
                attrs.append("style=filled")
            lines.append(f"  {name(v)} [{', '.join(attrs)}];")
        for e in sorted(self.edges, key=lambda e: (e.source, e.target)):
            style = "dashed" if e.is_phi else "solid"
            lines.append(f"  {name(e.source)} -- {name(e.target)} "
                         f"[label={e.laterality}, style={style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(s: int, k: int, enhanced: bool = False, budget: int = DEFAULT_BUDGET) -> CofaceGraph:
    return CofaceGraph(s, k, enhanced, budget)


def classify_vertices(g: CofaceGraph) -> dict:
    """Per component: the out-vertices and in-vertices with respect to coherer edges."""
    res: dict = {}
    for cid, members in enumerate(g.components):
        outs = [v for v in members if not any(e.kind == COHERER for e in g.inc[v])]
        ins = [v for v in members if not any(e.kind == COHERER for e in g.out[v])]
        entry = {"outs": outs, "ins": ins}
        if len(outs) == 1:
            entry["out"] = outs[0]
        if len(ins) == 1:
            entry["in"] = ins[0]
        res[cid] = entry
    return res


def directed_paths(g: CofaceGraph, source, target, limit: int = 10 ** 5) -> list[list[CoherenceEdge]]:
    """Directed coherer-only paths from source to target, at most `limit` of them."""
    source, target = g.check_vertex(source), g.check_vertex(target)
    found: list = []
    h_target = height(target)

    def dfs(v, path):
        if len(found) >= limit:
            return
        if v == target:
            found.append(list(path))
            return
        if height(v) <= h_target:
            return
        for e in g.out[v]:
            if e.kind == COHERER:
                path.append(e)
                dfs(e.target, path)
                path.pop()

    dfs(source, [])
    return found


def descend(g: CofaceGraph, v) -> list[CoherenceEdge]:
    """Canonical directed path: least-laterality coherers down to the in-vertex,
    then (enhanced only) a φ-flip of the leading 1 and repeat until (0,...,0)."""
    v = tuple(v)
    path = []
    while True:
        cs = [e for e in g.out[v] if e.kind == COHERER]
        if cs:
            e = min(cs, key=lambda e: e.laterality)
        elif g.enhanced and v[0] == 1:
            e = phi_at(v)
        else:
            return path
        path.append(e)
        v = e.target


def reduced_connection(down1: list, down2: list) -> list[CoherenceEdge] | None:
    """down1 followed by the inverse of down2, with the common tail cancelled."""
    a, b = list(down1), list(down2)
    while a and b and a[-1] == b[-1]:
        a.pop()
        b.pop()
    return a + [e.inverse() for e in reversed(b)]


def connect(g: CofaceGraph, source, target) -> list[CoherenceEdge] | None:
    source, target = g.check_vertex(source), g.check_vertex(target)
    if g.component[source] != g.component[target]:
        return None
    d1, d2 = descend(g, source), descend(g, target)
    base1 = d1[-1].target if d1 else source
    base2 = d2[-1].target if d2 else target
    assert base1 == base2, (source, target, base1, base2)
    return reduced_connection(d1, d2)


def phi_connect(g: CofaceGraph, source, target) -> list[CoherenceEdge]:
    if not g.enhanced:
        raise ValueError("phi_connect needs an enhanced graph")
    path = connect(g, source, target)
    if path is None:
        raise ValueError(f"{source} and {target} are not connected in G^φ_{{1,{g.k}}}")
    return path


def bfs_path(g: CofaceGraph, source, target) -> list[CoherenceEdge] | None:
    """Shortest undirected path (edges possibly inverted)."""
    source, target = g.check_vertex(source), g.check_vertex(target)
    prev = {source: None}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for e in g.neighbours(x):
            if e.target not in prev:
                prev[e.target] = e
                queue.append(e.target)
    if target not in prev:
        return None
    path = []
    x = target
    while prev[x] is not None:
        path.append(prev[x])
        x = prev[x].source
    return path[::-1]


def undirected_adjacency(g: CofaceGraph, vertices=None, coherers_only=False) -> dict:
    vs = set(g.vertices if vertices is None else vertices)
    adj = {v: set() for v in vs}
    for e in g.edges:
        if coherers_only and e.kind != COHERER:
            continue
        if e.source in vs and e.target in vs:
            adj[e.source].add(e.target)
            adj[e.target].add(e.source)
    return adj


def iter_walk(g: CofaceGraph, start, length: int, rng) -> Iterator[CoherenceEdge]:
    v = start
    for _ in range(length):
        e = rng.choice(g.neighbours(v))
        yield e
        v = e.target


def dumps(g: CofaceGraph) -> str:
    return json.dumps(g.to_json(), sort_keys=True)
