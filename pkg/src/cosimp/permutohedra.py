"""Permutohedra: Cayley graphs of S_{k+1}, ordered set partitions as faces, and
the map Φ from a component of G_{1,k} (or G_{s,k}) onto the Cayley graph.

Permutations are one-line tuples (σ(1), ..., σ(k+1)).  Products compose right
to left, (σ·τ)(i) = σ(τ(i)), so right multiplication by (i, i+1) swaps the
entries in positions i and i+1.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import comb, factorial

from .coface_graphs import COHERER, CofaceGraph

Permutation = tuple


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    return tuple(sigma[t - 1] for t in tau)


def transposition(n: int, i: int, j: int | None = None) -> Permutation:
    j = i + 1 if j is None else j
    p = list(range(1, n + 1))
    p[i - 1], p[j - 1] = p[j - 1], p[i - 1]
    return tuple(p)


def times_adjacent(sigma: Permutation, i: int) -> Permutation:
    """σ·(i, i+1)."""
    s = list(sigma)
    s[i - 1], s[i] = s[i], s[i - 1]
    return tuple(s)


def from_cycles(n: int, cycles) -> Permutation:
    """Build a permutation from cycle notation, e.g. [(1,2,3),(4,)]; (123) sends 1->2->3->1."""
    img = list(range(1, n + 1))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b
    return tuple(img)


def parse_cycles(n: int, text: str) -> Permutation:
    cycles = []
    for part in text.replace(" ", "").strip("()").split(")("):
        if part:
            cycles.append(tuple(int(ch) for ch in part))
    return from_cycles(n, cycles)


def inverse(sigma: Permutation) -> Permutation:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, 1):
        inv[s - 1] = i
    return tuple(inv)


@dataclass
class CayleyGraph:
    k: int
    vertices: list
    edges: list  # (σ, σ·(i,i+1), i) with σ < σ·(i,i+1)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for a, b, _ in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def cayley_graph(k: int) -> CayleyGraph:
    n = k + 1
    verts = sorted(itertools.permutations(range(1, n + 1)))
    edges = []
    for v in verts:
        for i in range(1, n):
            w = times_adjacent(v, i)
            if v < w:
                edges.append((v, w, i))
    return CayleyGraph(k, verts, edges)


# --- faces -------------------------------------------------------------------

OrderedPartition = tuple  # tuple of frozensets


def ordered_partitions(n: int, r: int) -> list[OrderedPartition]:
    """All ordered partitions of {1..n} into r nonempty blocks."""
    out = []
    for labels in itertools.product(range(r), repeat=n):
        if len(set(labels)) != r:
            continue
        blocks = [[] for _ in range(r)]
        for x, b in enumerate(labels, 1):
            blocks[b].append(x)
        out.append(tuple(frozenset(b) for b in blocks))
    return sorted(out, key=lambda p: [sorted(b) for b in p])


def stirling2(n: int, r: int) -> int:
    return sum((-1) ** j * _binom(r, j) * (r - j) ** n for j in range(r + 1)) // factorial(r)


def _binom(n, k):
    return comb(n, k)


def vertex_on_face(sigma: Permutation, face: OrderedPartition) -> bool:
    """σ lies on the face iff its one-line tuple lists the blocks consecutively."""
    pos = 0
    for block in face:
        if set(sigma[pos:pos + len(block)]) != set(block):
            return False
        pos += len(block)
    return True


def face_vertices(face: OrderedPartition) -> list[Permutation]:
    out = [()]
    for block in face:
        out = [p + q for p in out for q in itertools.permutations(sorted(block))]
    return sorted(out)


def pair_to_face(sigma: Permutation, blocks: tuple[int, ...]) -> OrderedPartition:
    """The face σ(B_1), ..., σ(B_r) for the consecutive blocks of sizes `blocks`."""
    out, start = [], 1
    for size in blocks:
        out.append(frozenset(sigma[i - 1] for i in range(start, start + size)))
        start += size
    return tuple(out)


def transposition_blocks(n: int, i: int) -> tuple[int, ...]:
    """Block sizes of the partition associated with the generator (i, i+1)."""
    return tuple([1] * (i - 1) + [2] + [1] * (n - i - 1))


def face_to_pair(face: OrderedPartition) -> tuple[Permutation, tuple[int, ...]]:
    """Inverse of pair_to_face with σ the unique shuffle (increasing on each block)."""
    sigma = []
    for block in face:
        sigma.extend(sorted(block))
    return tuple(sigma), tuple(len(b) for b in face)


def is_shuffle(sigma: Permutation, blocks: tuple[int, ...]) -> bool:
    start = 0
    for size in blocks:
        seg = sigma[start:start + size]
        if list(seg) != sorted(seg):
            return False
        start += size
    return True


@dataclass
class Permutohedron:
    k: int
    cayley: CayleyGraph
    faces: dict = field(default_factory=dict)  # r -> list of ordered partitions

    def face_counts(self) -> dict:
        return {r: len(fs) for r, fs in self.faces.items()}

    def faces_json(self) -> list:
        return [{"r": r, "blocks": [sorted(b) for b in f]}
                for r in sorted(self.faces) for f in self.faces[r]]


def build_permutohedron(k: int, budget: int = 10 ** 6) -> Permutohedron:
    if k < 1:
        raise ValueError("k must be positive")
    if factorial(k + 1) > budget:
        raise ValueError(f"(k+1)! = {factorial(k + 1)} exceeds the budget {budget}")
    n = k + 1
    return Permutohedron(k, cayley_graph(k), {r: ordered_partitions(n, r) for r in range(1, n + 1)})


# --- Φ -----------------------------------------------------------------------

def laterality_words(g: CofaceGraph, members) -> dict:
    """BFS from the out-vertex along directed coherer edges: vertex -> laterality word."""
    members = set(members)
    out = [v for v in members if not any(e.kind == COHERER for e in g.inc[v])]
    if len(out) != 1:
        raise ValueError("component without a unique out-vertex")
    words = {out[0]: ()}
    queue = deque([out[0]])
    while queue:
        v = queue.popleft()
        for e in g.out[v]:
            if e.kind == COHERER and e.target not in words:
                words[e.target] = words[v] + (e.laterality,)
                queue.append(e.target)
    return words


def evaluate_laterality_word(word, n: int) -> Permutation:
    sigma = identity(n)
    for lat in word:
        sigma = times_adjacent(sigma, lat)
    return sigma


@dataclass
class PhiMap:
    mapping: dict  # vertex -> permutation
    path_independent: bool
    checked_paths: int
    edges_ok: bool


def phi_map(g: CofaceGraph, component: int, max_paths_per_vertex: int = 200) -> PhiMap:
    """Φ on one component of G_{s,k}; checks path independence on every vertex by
    evaluating up to `max_paths_per_vertex` directed paths from the out-vertex."""
    members = g.components[component]
    n = g.k + 1
    words = laterality_words(g, members)
    mapping = {v: evaluate_laterality_word(w, n) for v, w in words.items()}
    # all directed paths from the out-vertex, enumerated per vertex
    out_vertex = next(v for v, w in words.items() if w == ())
    counts = {v: 0 for v in members}
    independent = True
    checked = 0
    stack = [(out_vertex, identity(n))]
    while stack:
        v, sigma = stack.pop()
        if counts[v] >= max_paths_per_vertex:
            continue
        counts[v] += 1
        checked += 1
        if sigma != mapping[v]:
            independent = False
        for e in g.out[v]:
            if e.kind == COHERER:
                stack.append((e.target, times_adjacent(sigma, e.laterality)))
    edges_ok = True
    for v in members:
        for e in g.out[v]:
            if e.kind == COHERER:
                if times_adjacent(mapping[v], e.laterality) != mapping[e.target]:
                    edges_ok = False
    return PhiMap(mapping, independent, checked, edges_ok)


# --- graph isomorphism -------------------------------------------------------

@dataclass
class IsoResult:
    isomorphic: bool
    mapping: dict | None = None
    reason: str = ""


def _invariant(adj, v) -> tuple:
    # degree plus the sorted degree profile of the distance layers
    dist = {v: 0}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    layers: dict = {}
    for x, d in dist.items():
        layers.setdefault(d, []).append(len(adj[x]))
    return tuple((d, tuple(sorted(layers[d]))) for d in sorted(layers))


def check_graph_isomorphism(adj1: dict, adj2: dict, budget: int = 10 ** 4) -> IsoResult:
    """Adjacency dicts (vertex -> set of neighbours).  Returns an explicit
    bijection or a refutation (invariant mismatch or exhausted search)."""
    if len(adj1) > budget or len(adj2) > budget:
        raise ValueError("graph exceeds the isomorphism budget")
    if len(adj1) != len(adj2):
        return IsoResult(False, reason=f"vertex counts differ: {len(adj1)} vs {len(adj2)}")
    e1 = sum(len(s) for s in adj1.values())
    e2 = sum(len(s) for s in adj2.values())
    if e1 != e2:
        return IsoResult(False, reason=f"edge counts differ: {e1 // 2} vs {e2 // 2}")
    inv1 = {v: _invariant(adj1, v) for v in adj1}
    inv2 = {v: _invariant(adj2, v) for v in adj2}
    if sorted(inv1.values()) != sorted(inv2.values()):
        return IsoResult(False, reason="vertex invariants (degree / distance profiles) differ")
    # order vertices of g1 by BFS within components to keep the search constrained
    order, seen = [], set()
    for root in sorted(adj1, key=lambda v: (inv1[v], repr(v))):
        if root in seen:
            continue
        queue = deque([root])
        seen.add(root)
        while queue:
            x = queue.popleft()
            order.append(x)
            for y in sorted(adj1[x], key=repr):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    mapping: dict = {}
    used: set = set()
    candidates_by_inv: dict = {}
    for v, i in inv2.items():
        candidates_by_inv.setdefault(i, []).append(v)

    def extend(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        mapped_nbrs = [mapping[u] for u in adj1[v] if u in mapping]
        if mapped_nbrs:
            pool = set(adj2[mapped_nbrs[0]])
            for w in mapped_nbrs[1:]:
                pool &= adj2[w]
            pool = [w for w in pool if inv2[w] == inv1[v]]
        else:
            pool = candidates_by_inv[inv1[v]]
        for w in sorted(pool, key=repr):
            if w in used:
                continue
            ok = all((mapping[u] in adj2[w]) == (u in adj1[v]) for u in mapping)
            if not ok:
                continue
            mapping[v] = w
            used.add(w)
            if extend(idx + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if extend(0):
        return IsoResult(True, dict(mapping))
    return IsoResult(False, reason="exhaustive backtracking found no bijection")


def component_adjacency(g: CofaceGraph, component: int) -> dict:
    members = set(g.components[component])
    adj = {v: set() for v in members}
    for e in g.edges:
        if e.source in members:
            adj[e.source].add(e.target)
            adj[e.target].add(e.source)
    return adj


def graph_adjacency(g: CofaceGraph) -> dict:
    adj = {v: set() for v in g.vertices}
    for e in g.edges:
        adj[e.source].add(e.target)
        adj[e.target].add(e.source)
    return adj


def cycle_adjacency(n: int) -> dict:
    return {i: {(i - 1) % n, (i + 1) % n} for i in range(n)}


def relabel_component(g: CofaceGraph, c1: int, g2: CofaceGraph, c2: int) -> dict | None:
    """The isomorphism built by replaying laterality words from out-vertex to out-vertex."""
    w1 = laterality_words(g, g.components[c1])
    w2 = laterality_words(g2, g2.components[c2])
    inv2 = {}
    for v, w in w2.items():
        inv2.setdefault(evaluate_laterality_word(w, g2.k + 1), v)
    mapping = {}
    for v, w in w1.items():
        target = inv2.get(evaluate_laterality_word(w, g.k + 1))
        if target is None:
            return None
        mapping[v] = target
    return mapping


def is_graph_isomorphism(adj1: dict, adj2: dict, mapping: dict) -> bool:
    if set(mapping) != set(adj1) or set(mapping.values()) != set(adj2):
        return False
    return all({mapping[u] for u in adj1[v]} == adj2[mapping[v]] for v in adj1)

