"""Finite K-linear categories, functors, multifunctors and natural transformations.

Morphisms are coordinate tuples with respect to fixed hom bases.  A category
only has to answer `dim`, `compose` and `identity`; `TableCategory` stores
structure constants, while lazily defined categories (such as the categories of
iterates in `pseudofunctor`) compute composites on demand.

Functors out of a product C_1 x ... x C_m are `MultiFunctor`s; the Deligne
product itself is never built.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .linalg import Echelon, matvec
from .scalars import QQ, Field, is_zero, unit, zeros


class LinCategory:
    field: Field = QQ
    objects: tuple = ()

    def dim(self, x, y) -> int:
        raise NotImplementedError

    def compose(self, g, f, x, y, z):
        """g∘f for f: x -> y and g: y -> z."""
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def zero(self, x, y):
        return zeros(self.field, self.dim(x, y))

    def basis(self, x, y) -> list:
        d = self.dim(x, y)
        return [unit(self.field, d, i) for i in range(d)]

    def compose_chain(self, morphisms: Sequence, objects: Sequence):
        """morphisms[0]: objects[0] -> objects[1], ...; returns the full composite."""
        acc = morphisms[0]
        for m, (y, z) in zip(morphisms[1:], zip(objects[1:], objects[2:])):
            acc = self.compose(m, acc, objects[0], y, z)
        return acc

    def inverse(self, m, x, y):
        """Two-sided inverse of m: x -> y, or None."""
        d_yx = self.dim(y, x)
        d_xx, d_yy = self.dim(x, x), self.dim(y, y)
        basis = self.basis(y, x)
        left = [self.compose(b, m, x, y, x) for b in basis]   # b∘m
        right = [self.compose(m, b, y, x, y) for b in basis]  # m∘b
        e = Echelon(d_yx + 1, self.field)
        for r in range(d_xx):
            row = {j: left[j][r] for j in range(d_yx) if left[j][r]}
            if self.identity(x)[r]:
                row[d_yx] = self.identity(x)[r]
            e.add(row)
        for r in range(d_yy):
            row = {j: right[j][r] for j in range(d_yx) if right[j][r]}
            if self.identity(y)[r]:
                row[d_yx] = self.identity(y)[r]
            e.add(row)
        if d_yx in e.rows:
            return None
        sol = [self.field.zero] * d_yx
        for p, row in e.rows.items():
            sol[p] = row.get(d_yx, self.field.zero)
        sol = tuple(sol)
        if self.compose(sol, m, x, y, x) != tuple(self.identity(x)):
            return None
        if self.compose(m, sol, y, x, y) != tuple(self.identity(y)):
            return None
        return sol

    def is_identity(self, m, x) -> bool:
        return tuple(m) == tuple(self.identity(x))


def _nz(v):
    return [(i, x) for i, x in enumerate(v) if x]


class TableCategory(LinCategory):
    """A category given by hom bases and composition structure constants.

    comp[(x, y, z)][(gi, fi)] is a list of (k, c): basis g_gi ∘ f_fi = Σ c·h_k.
    """

    def __init__(self, objects, hom_basis: dict, comp: dict, identities: dict,
                 field: Field = QQ, name: str = ""):
        self.objects = tuple(objects)
        self.hom_basis = {k: list(v) for k, v in hom_basis.items()}
        self.comp = comp
        self.identities = {x: tuple(field(c) if isinstance(c, int) else c for c in v)
                           for x, v in identities.items()}
        self.field = field
        self.name = name

    def labels(self, x, y) -> list:
        return self.hom_basis.get((x, y), [])

    def dim(self, x, y) -> int:
        return len(self.hom_basis.get((x, y), ()))

    def identity(self, x):
        return self.identities[x]

    def compose(self, g, f, x, y, z):
        table = self.comp.get((x, y, z), {})
        acc = [self.field.zero] * self.dim(x, z)
        for gi, gv in _nz(g):
            for fi, fv in _nz(f):
                terms = table.get((gi, fi))
                if terms:
                    c0 = gv * fv
                    for k, c in terms:
                        acc[k] += c0 * c
        return tuple(acc)

    def to_json(self) -> dict:
        enc = self.field.to_json
        return {
            "field": self.field.name,
            "objects": list(self.objects),
            "hom_basis": [{"source": x, "target": y, "labels": list(v)}
                          for (x, y), v in self.hom_basis.items()],
            "comp": [{"objects": list(k), "g": gi, "f": fi,
                      "terms": [[kk, enc(c)] for kk, c in terms]}
                     for k, table in self.comp.items() for (gi, fi), terms in table.items()],
            "identities": [{"object": x, "coords": [enc(c) for c in v]}
                           for x, v in self.identities.items()],
        }

    @classmethod
    def from_json(cls, d: dict, field: Field | None = None) -> "TableCategory":
        from .scalars import field_from_name
        field = field or field_from_name(d.get("field", "QQ"))
        objects = [_hashable(o) for o in d["objects"]]
        hom_basis = {(_hashable(h["source"]), _hashable(h["target"])): list(h["labels"])
                     for h in d["hom_basis"]}
        comp: dict = {}
        for entry in d["comp"]:
            key = tuple(_hashable(o) for o in entry["objects"])
            comp.setdefault(key, {})[(entry["g"], entry["f"])] = [(k, field(c)) for k, c in entry["terms"]]
        identities = {_hashable(i["object"]): tuple(field(c) for c in i["coords"])
                      for i in d["identities"]}
        return cls(objects, hom_basis, comp, identities, field)


def _hashable(o):
    return tuple(_hashable(x) for x in o) if isinstance(o, list) else o


# --- finite-dimensional algebras ----------------------------------------------

@dataclass
class Algebra:
    """Associative unital algebra with basis e_0..e_{d-1}; mult[i][j] = coords of e_i e_j."""

    dim: int
    mult: list
    unit: tuple
    field: Field = QQ
    name: str = ""

    def mul(self, a, b):
        acc = [self.field.zero] * self.dim
        for i, x in _nz(a):
            for j, y in _nz(b):
                c0 = x * y
                for k, c in _nz(self.mult[i][j]):
                    acc[k] += c0 * c
        return tuple(acc)

    def one(self):
        return self.unit

    def is_commutative(self) -> bool:
        return all(self.mult[i][j] == self.mult[j][i] for i in range(self.dim) for j in range(self.dim))

    def check(self) -> list[str]:
        errs = []
        F = self.field
        for i in range(self.dim):
            e = unit(F, self.dim, i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                errs.append(f"unit fails on e_{i}")
        for i, j, k in itertools.product(range(self.dim), repeat=3):
            a, b, c = (unit(F, self.dim, t) for t in (i, j, k))
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                errs.append(f"associativity fails on (e_{i}, e_{j}, e_{k})")
        return errs

    def inverse(self, a):
        cat = one_object_category(self)
        return cat.inverse(a, "*", "*")

    def to_json(self) -> dict:
        enc = self.field.to_json
        return {"field": self.field.name, "dim": self.dim, "mult": [[[enc(c) for c in self.mult[i][j]] for j in range(self.dim)]
                                          for i in range(self.dim)],
                "unit": [enc(c) for c in self.unit], "name": self.name}

    @classmethod
    def from_json(cls, d: dict, field: Field | None = None) -> "Algebra":
        from .scalars import field_from_name
        field = field or field_from_name(d.get("field", "QQ"))
        mult = [[tuple(field(c) for c in d["mult"][i][j]) for j in range(d["dim"])] for i in range(d["dim"])]
        return cls(d["dim"], mult, tuple(field(c) for c in d["unit"]), field, d.get("name", ""))


def algebra_from_table(dim: int, products: dict, unit_coords, field: Field = QQ, name="") -> Algebra:
    mult = [[zeros(field, dim) for _ in range(dim)] for _ in range(dim)]
    for (i, j), v in products.items():
        mult[i][j] = tuple(field(c) for c in v)
    return Algebra(dim, mult, tuple(field(c) for c in unit_coords), field, name)


def rationals(field: Field = QQ) -> Algebra:
    return algebra_from_table(1, {(0, 0): (1,)}, (1,), field, "Q")


def dual_numbers(field: Field = QQ) -> Algebra:
    """Q[x]/(x^2) with basis (1, x)."""
    return algebra_from_table(2, {(0, 0): (1, 0), (0, 1): (0, 1), (1, 0): (0, 1)}, (1, 0), field, "Q[x]/(x^2)")


def split_product(n: int, field: Field = QQ) -> Algebra:
    """Q^n with orthogonal idempotent basis."""
    return algebra_from_table(n, {(i, i): tuple(1 if k == i else 0 for k in range(n)) for i in range(n)},
                              (1,) * n, field, f"Q^{n}")


def matrix_algebra(n: int, field: Field = QQ, upper: bool = False) -> Algebra:
    """M_n (or upper triangular T_n) with matrix-unit basis E_ij."""
    idx = [(i, j) for i in range(n) for j in range(n) if not upper or i <= j]
    pos = {e: k for k, e in enumerate(idx)}
    d = len(idx)
    products = {}
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            if j == k:
                products[(a, b)] = tuple(1 if t == pos[(i, l)] else 0 for t in range(d))
    unit_coords = tuple(1 if i == j else 0 for (i, j) in idx)
    return algebra_from_table(d, products, unit_coords, field, ("T" if upper else "M") + str(n))


def one_object_category(A: Algebra, obj="*") -> TableCategory:
    comp = {(obj, obj, obj): {(i, j): _nz(A.mult[i][j]) for i in range(A.dim) for j in range(A.dim)
                              if not is_zero(A.mult[i][j])}}
    return TableCategory([obj], {(obj, obj): [f"e{i}" for i in range(A.dim)]}, comp,
                         {obj: A.unit}, A.field, A.name)


def indiscrete_category(A: Algebra, objects) -> TableCategory:
    """Every hom-space is A and composition is multiplication in A."""
    objects = list(objects)
    hom = {(x, y): [f"e{i}" for i in range(A.dim)] for x in objects for y in objects}
    table = {(i, j): _nz(A.mult[i][j]) for i in range(A.dim) for j in range(A.dim)
             if not is_zero(A.mult[i][j])}
    comp = {(x, y, z): table for x in objects for y in objects for z in objects}
    return TableCategory(objects, hom, comp, {x: A.unit for x in objects}, A.field, A.name)


# --- functors ----------------------------------------------------------------

class LinFunctor:
    source: LinCategory
    target: LinCategory

    def obj(self, x):
        raise NotImplementedError

    def mor(self, v, x, y):
        raise NotImplementedError


class TableFunctor(LinFunctor):
    """hom_maps[(x, y)] is a matrix with dim target(Fx, Fy) rows and dim source(x, y) columns."""

    def __init__(self, source, target, object_map: dict, hom_maps: dict):
        self.source, self.target = source, target
        self.object_map = dict(object_map)
        self.hom_maps = hom_maps

    def obj(self, x):
        return self.object_map[x]

    def mor(self, v, x, y):
        M = self.hom_maps.get((x, y))
        if M is None:
            return self.target.zero(self.obj(x), self.obj(y))
        return matvec(M, v, self.target.field)


class IdentityFunctor(LinFunctor):
    def __init__(self, cat):
        self.source = self.target = cat

    def obj(self, x):
        return x

    def mor(self, v, x, y):
        return tuple(v)


class ComposedFunctor(LinFunctor):
    """second ∘ first."""

    def __init__(self, second: LinFunctor, first: LinFunctor):
        self.second, self.first = second, first
        self.source, self.target = first.source, second.target

    def obj(self, x):
        return self.second.obj(self.first.obj(x))

    def mor(self, v, x, y):
        return self.second.mor(self.first.mor(v, x, y), self.first.obj(x), self.first.obj(y))


def compose_functors(*functors: LinFunctor) -> LinFunctor:
    """compose_functors(H, G, F) = H∘G∘F."""
    acc = functors[-1]
    for f in reversed(functors[:-1]):
        acc = ComposedFunctor(f, acc)
    return acc


class FunctionFunctor(LinFunctor):
    def __init__(self, source, target, obj_fn: Callable, mor_fn: Callable):
        self.source, self.target = source, target
        self._obj, self._mor = obj_fn, mor_fn

    def obj(self, x):
        return self._obj(x)

    def mor(self, v, x, y):
        return self._mor(v, x, y)


class MultiFunctor:
    """A functor C_1 x ... x C_m -> D, multilinear on morphisms."""

    sources: tuple
    target: LinCategory

    @property
    def arity(self) -> int:
        return len(self.sources)

    def obj(self, xs: tuple):
        raise NotImplementedError

    def mor(self, vs: Sequence, xs: tuple, ys: tuple):
        raise NotImplementedError

    def object_tuples(self) -> Iterable[tuple]:
        return itertools.product(*(c.objects for c in self.sources))


class UnaryAsMulti(MultiFunctor):
    def __init__(self, F: LinFunctor):
        self.F = F
        self.sources = (F.source,)
        self.target = F.target

    def obj(self, xs):
        return self.F.obj(xs[0])

    def mor(self, vs, xs, ys):
        return self.F.mor(vs[0], xs[0], ys[0])


class TableMultiFunctor(MultiFunctor):
    """maps[(xs, ys)][basis index tuple] = image coordinates."""

    def __init__(self, sources, target, object_map: dict, maps: dict):
        self.sources, self.target = tuple(sources), target
        self.object_map, self.maps = object_map, maps

    def obj(self, xs):
        return self.object_map[tuple(xs)]

    def mor(self, vs, xs, ys):
        xs, ys = tuple(xs), tuple(ys)
        table = self.maps.get((xs, ys), {})
        out = list(self.target.zero(self.obj(xs), self.obj(ys)))
        for combo in itertools.product(*(_nz(v) for v in vs)):
            idx = tuple(i for i, _ in combo)
            img = table.get(idx)
            if img is None:
                continue
            c = self.target.field.one
            for _, x in combo:
                c = c * x
            for k, y in _nz(img):
                out[k] += c * y
        return tuple(out)


def as_multi(F) -> MultiFunctor:
    return F if isinstance(F, MultiFunctor) else UnaryAsMulti(F)


# --- natural transformations ------------------------------------------------

@dataclass
class NatTransform:
    """components[x] : source(x) -> target(x); x is an object (unary) or a tuple."""

    source: Any
    target: Any
    components: dict = field(default_factory=dict)

    def at(self, x):
        return self.components[x]

    @property
    def category(self) -> LinCategory:
        return self.source.target


def _objects_of(F):
    if isinstance(F, MultiFunctor):
        return list(F.object_tuples())
    return list(F.source.objects)


def identity_nat(F) -> NatTransform:
    D = F.target
    return NatTransform(F, F, {x: D.identity(F.obj(x)) for x in _objects_of(F)})


def vertical(s: NatTransform, t: NatTransform) -> NatTransform:
    """s·t, first t then s."""
    D = t.source.target
    comps = {}
    for x, tx in t.components.items():
        comps[x] = D.compose(s.components[x], tx, t.source.obj(x), t.target.obj(x), s.target.obj(x))
    return NatTransform(t.source, s.target, comps)


def whisker_left(H: LinFunctor, t: NatTransform) -> NatTransform:
    """H∘t."""
    comps = {x: H.mor(v, t.source.obj(x), t.target.obj(x)) for x, v in t.components.items()}
    return NatTransform(ComposedFunctor(H, t.source), ComposedFunctor(H, t.target), comps)


def whisker_right(t: NatTransform, K: LinFunctor) -> NatTransform:
    """t∘K."""
    comps = {x: t.components[K.obj(x)] for x in K.source.objects}
    return NatTransform(ComposedFunctor(t.source, K), ComposedFunctor(t.target, K), comps)


def whisker(t: NatTransform, F: LinFunctor, side: str) -> NatTransform:
    if side == "left":
        return whisker_left(F, t)
    if side == "right":
        return whisker_right(t, F)
    raise ValueError("side must be 'left' or 'right'")


def _slot_moves(F: MultiFunctor, xs: tuple):
    """(slot, ys, morphism tuple) for every basis morphism in one slot, identities elsewhere."""
    for i, C in enumerate(F.sources):
        for y in C.objects:
            for b in C.basis(xs[i], y):
                ys = xs[:i] + (y,) + xs[i + 1:]
                vs = tuple(b if j == i else F.sources[j].identity(xs[j]) for j in range(F.arity))
                yield i, ys, vs


def naturality_violations(t: NatTransform, limit: int = 20) -> list[str]:
    F, G = as_multi(t.source), as_multi(t.target)
    unary = not isinstance(t.source, MultiFunctor)
    D = F.target
    bad = []
    for xs in F.object_tuples():
        key = xs[0] if unary else xs
        for i, ys, vs in _slot_moves(F, xs):
            ykey = ys[0] if unary else ys
            lhs = D.compose(G.mor(vs, xs, ys), t.components[key], F.obj(xs), G.obj(xs), G.obj(ys))
            rhs = D.compose(t.components[ykey], F.mor(vs, xs, ys), F.obj(xs), F.obj(ys), G.obj(ys))
            if lhs != rhs:
                bad.append(f"naturality fails at {xs} -> {ys} (slot {i})")
                if len(bad) >= limit:
                    return bad
    return bad


@dataclass
class NatSpace:
    """Basis of Nat(F, G) in ambient component coordinates."""

    source: Any
    target: Any
    keys: list          # component keys in ambient order
    offsets: dict       # key -> (start, dim)
    ambient_dim: int
    basis: list         # ambient vectors
    free: list          # positions giving coordinates w.r.t. the basis

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def to_ambient(self, coords) -> tuple:
        if self.is_full:
            return tuple(coords)
        F = self.source.target.field
        acc = [F.zero] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                for i, x in _nz(b):
                    acc[i] += c * x
        return tuple(acc)

    def from_ambient(self, amb) -> tuple:
        return tuple(amb[p] for p in self.free) if not self.is_full else tuple(amb)

    def component(self, amb, key):
        start, d = self.offsets[key]
        return tuple(amb[start:start + d])

    def nat(self, coords) -> NatTransform:
        amb = self.to_ambient(coords)
        return NatTransform(self.source, self.target, {k: self.component(amb, k) for k in self.keys})

    def contains_ambient(self, amb) -> bool:
        return self.to_ambient(self.from_ambient(amb)) == tuple(amb)


def nat_space(Fx, Gx) -> NatSpace:
    """Exact basis of the natural transformations F => G."""
    F, G = as_multi(Fx), as_multi(Gx)
    if len(F.sources) != len(G.sources) or any(a is not b for a, b in zip(F.sources, G.sources)):
        raise ValueError("functors with different signatures")
    if F.target is not G.target:
        raise ValueError("functors with different targets")
    unary = not isinstance(Fx, MultiFunctor)
    D = F.target
    tuples = list(F.object_tuples())
    keys = [xs[0] if unary else xs for xs in tuples]
    offsets, pos = {}, 0
    for xs, key in zip(tuples, keys):
        d = D.dim(F.obj(xs), G.obj(xs))
        offsets[key] = (pos, d)
        pos += d
    total = pos
    ech = Echelon(total, D.field)
    for xs, key in zip(tuples, keys):
        sx, dx = offsets[key]
        Fx_, Gx_ = F.obj(xs), G.obj(xs)
        for i, ys, vs in _slot_moves(F, xs):
            ykey = ys[0] if unary else ys
            sy, dy = offsets[ykey]
            Fy_, Gy_ = F.obj(ys), G.obj(ys)
            gm, fm = G.mor(vs, xs, ys), F.mor(vs, xs, ys)
            nrows = D.dim(Fx_, Gy_)
            if nrows == 0:
                continue
            rows = [dict() for _ in range(nrows)]
            for j in range(dx):
                v = D.compose(gm, unit(D.field, dx, j), Fx_, Gx_, Gy_)
                for r, x in _nz(v):
                    rows[r][sx + j] = rows[r].get(sx + j, 0) + x
            for j in range(dy):
                v = D.compose(unit(D.field, dy, j), fm, Fx_, Fy_, Gy_)
                for r, x in _nz(v):
                    rows[r][sy + j] = rows[r].get(sy + j, 0) - x
            for row in rows:
                row = {c: x for c, x in row.items() if x}
                if row:
                    ech.add(row)
    basis = ech.nullspace()
    free = [j for j in range(total) if j not in ech.rows]
    return NatSpace(Fx, Gx, keys, offsets, total, basis, free)


# --- 2-categories --------------------------------------------------------------

class Lin2Category:
    """A strict K-linear 2-category with finitely many objects.

    hom[(X, Y)] is a TableCategory whose objects are the 1-morphisms X -> Y.
    comp1[(X, Y, Z)][(f, g)] is the label of g∘f.
    comp2[(X, Y, Z)][(f, f2, g, g2)][(a, b)] lists (k, c) with
    b * a = Σ c·basis_k in hom(X, Z)(g∘f, g2∘f2), for a: f => f2 and b: g => g2.
    """

    def __init__(self, objects, hom: dict, ident: dict, comp1: dict, comp2: dict,
                 field: Field = QQ, name: str = ""):
        self.objects = tuple(objects)
        self.hom, self.ident = hom, ident
        self.comp1, self.comp2 = comp1, comp2
        self.field = field
        self.name = name

    def one_cells(self, X, Y) -> tuple:
        return self.hom[(X, Y)].objects

    def c1(self, X, Y, Z, f, g):
        """g∘f."""
        return self.comp1[(X, Y, Z)][(f, g)]

    def hcomp(self, X, Y, Z, f, f2, alpha, g, g2, beta):
        """beta * alpha : g∘f => g2∘f2."""
        C = self.hom[(X, Z)]
        table = self.comp2[(X, Y, Z)].get((f, f2, g, g2), {})
        acc = [self.field.zero] * C.dim(self.c1(X, Y, Z, f, g), self.c1(X, Y, Z, f2, g2))
        for ai, av in _nz(alpha):
            for bi, bv in _nz(beta):
                terms = table.get((ai, bi))
                if terms:
                    c0 = av * bv
                    for k, c in terms:
                        acc[k] += c0 * c
        return tuple(acc)

    def id2(self, X, Y, f):
        return self.hom[(X, Y)].identity(f)

    def composition_functor(self, X, Y, Z) -> MultiFunctor:
        return CompositionFunctor(self, X, Y, Z)

    def paths(self, n: int) -> list:
        """All composable strings of n 1-morphisms, as Path records."""
        out = []
        for objs in itertools.product(self.objects, repeat=n + 1):
            cells = [self.one_cells(objs[i], objs[i + 1]) for i in range(n)]
            for arrows in itertools.product(*cells):
                out.append(Path(objs, arrows))
        return out

    def composite(self, objs, arrows):
        """Composite 1-morphism of a path (identity for the empty path)."""
        if not arrows:
            return self.ident[objs[0]]
        acc = arrows[0]
        for i in range(1, len(arrows)):
            acc = self.c1(objs[0], objs[i], objs[i + 1], acc, arrows[i])
        return acc

    def hcomp_chain(self, objs, sources, targets, cells):
        """Horizontal composite of cells[i]: sources[i] => targets[i] along objs."""
        if not cells:
            X = objs[0]
            return self.id2(X, X, self.ident[X])
        acc, s_acc, t_acc = cells[0], sources[0], targets[0]
        for i in range(1, len(cells)):
            X, Y, Z = objs[0], objs[i], objs[i + 1]
            acc = self.hcomp(X, Y, Z, s_acc, t_acc, acc, sources[i], targets[i], cells[i])
            s_acc = self.c1(X, Y, Z, s_acc, sources[i])
            t_acc = self.c1(X, Y, Z, t_acc, targets[i])
        return acc

    def to_json(self) -> dict:
        enc = self.field.to_json
        return {
            "field": self.field.name,
            "objects": list(self.objects),
            "hom": [{"source": X, "target": Y, "category": C.to_json()} for (X, Y), C in self.hom.items()],
            "ident": [{"object": X, "one_cell": f} for X, f in self.ident.items()],
            "comp1": [{"objects": list(k), "f": f, "g": g, "gf": gf}
                      for k, t in self.comp1.items() for (f, g), gf in t.items()],
            "comp2": [{"objects": list(k), "cells": list(key), "a": a, "b": b,
                       "terms": [[kk, enc(c)] for kk, c in terms]}
                      for k, t in self.comp2.items() for key, tab in t.items()
                      for (a, b), terms in tab.items()],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Lin2Category":
        from .scalars import field_from_name
        field = field_from_name(d.get("field", "QQ"))
        h = _hashable
        hom = {(h(e["source"]), h(e["target"])): TableCategory.from_json(e["category"], field) for e in d["hom"]}
        ident = {h(e["object"]): h(e["one_cell"]) for e in d["ident"]}
        comp1: dict = {}
        for e in d["comp1"]:
            comp1.setdefault(tuple(h(o) for o in e["objects"]), {})[(h(e["f"]), h(e["g"]))] = h(e["gf"])
        comp2: dict = {}
        for e in d["comp2"]:
            key = tuple(h(o) for o in e["objects"])
            cells = tuple(h(c) for c in e["cells"])
            comp2.setdefault(key, {}).setdefault(cells, {})[(e["a"], e["b"])] = \
                [(k, field(c)) for k, c in e["terms"]]
        return cls(d["objects"], hom, ident, comp1, comp2, field)


@dataclass(frozen=True)
class Path:
    objs: tuple
    arrows: tuple

    @property
    def length(self) -> int:
        return len(self.arrows)


class CompositionFunctor(MultiFunctor):
    def __init__(self, C2: Lin2Category, X, Y, Z):
        self.C2, self.X, self.Y, self.Z = C2, X, Y, Z
        self.sources = (C2.hom[(X, Y)], C2.hom[(Y, Z)])
        self.target = C2.hom[(X, Z)]

    def obj(self, xs):
        return self.C2.c1(self.X, self.Y, self.Z, xs[0], xs[1])

    def mor(self, vs, xs, ys):
        return self.C2.hcomp(self.X, self.Y, self.Z, xs[0], ys[0], vs[0], xs[1], ys[1], vs[1])


# --- validation -----------------------------------------------------------

@dataclass
class Report:
    ok: bool = True
    violations: list = field(default_factory=list)
    checked: int = 0

    def fail(self, msg: str):
        self.ok = False
        self.violations.append(msg)

    def merge(self, other: "Report", prefix: str = ""):
        self.checked += other.checked
        for v in other.violations:
            self.fail(prefix + v)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "violations": self.violations}


def validate_category(C: LinCategory, limit: int = 50) -> Report:
    rep = Report()
    obs = C.objects
    for x in obs:
        idx = C.identity(x)
        if len(idx) != C.dim(x, x):
            rep.fail(f"identity of {x!r} has wrong length")
            continue
    for x, y in itertools.product(obs, repeat=2):
        for i, f in enumerate(C.basis(x, y)):
            rep.checked += 1
            if C.compose(C.identity(y), f, x, y, y) != f:
                rep.fail(f"left unit fails on basis {i} of hom({x!r},{y!r})")
            if C.compose(f, C.identity(x), x, x, y) != f:
                rep.fail(f"right unit fails on basis {i} of hom({x!r},{y!r})")
    for w, x, y, z in itertools.product(obs, repeat=4):
        for a, f in enumerate(C.basis(w, x)):
            for b, g in enumerate(C.basis(x, y)):
                gf = C.compose(g, f, w, x, y)
                for c, h in enumerate(C.basis(y, z)):
                    rep.checked += 1
                    if C.compose(h, gf, w, y, z) != C.compose(C.compose(h, g, x, y, z), f, w, x, z):
                        rep.fail(f"associativity fails on basis triple ({a},{b},{c}) over {(w, x, y, z)!r}")
                        if len(rep.violations) >= limit:
                            return rep
    return rep


def validate_functor(F: LinFunctor, limit: int = 50) -> Report:
    rep = Report()
    C, D = F.source, F.target
    for x in C.objects:
        rep.checked += 1
        if F.mor(C.identity(x), x, x) != tuple(D.identity(F.obj(x))):
            rep.fail(f"F(id_{x!r}) is not an identity")
    for x, y, z in itertools.product(C.objects, repeat=3):
        for a, f in enumerate(C.basis(x, y)):
            Ff = F.mor(f, x, y)
            for b, g in enumerate(C.basis(y, z)):
                rep.checked += 1
                lhs = F.mor(C.compose(g, f, x, y, z), x, z)
                rhs = D.compose(F.mor(g, y, z), Ff, F.obj(x), F.obj(y), F.obj(z))
                if lhs != rhs:
                    rep.fail(f"F(g∘f) != F(g)∘F(f) on basis ({b},{a}) over {(x, y, z)!r}")
                    if len(rep.violations) >= limit:
                        return rep
    return rep


def validate_multifunctor(F: MultiFunctor, limit: int = 50) -> Report:
    """Tuplewise identities, slotwise composition, and factorisation of every
    basis tuple into single-slot moves (which gives joint functoriality)."""
    rep = Report()
    D = F.target
    for xs in F.object_tuples():
        ids = tuple(C.identity(x) for C, x in zip(F.sources, xs))
        rep.checked += 1
        if F.mor(ids, xs, xs) != tuple(D.identity(F.obj(xs))):
            rep.fail(f"identity tuple at {xs!r} not sent to an identity")
        for i, C in enumerate(F.sources):
            for y in C.objects:
                for z in C.objects:
                    for a, f in enumerate(C.basis(xs[i], y)):
                        for b, g in enumerate(C.basis(y, z)):
                            ys = xs[:i] + (y,) + xs[i + 1:]
                            zs = xs[:i] + (z,) + xs[i + 1:]
                            def tup(v, base):
                                return tuple(v if j == i else F.sources[j].identity(base[j])
                                             for j in range(F.arity))
                            rep.checked += 1
                            lhs = F.mor(tup(C.compose(g, f, xs[i], y, z), xs), xs, zs)
                            rhs = D.compose(F.mor(tup(g, ys), ys, zs), F.mor(tup(f, xs), xs, ys),
                                            F.obj(xs), F.obj(ys), F.obj(zs))
                            if lhs != rhs:
                                rep.fail(f"slot {i} composition fails at {xs!r}")
        # factorisation: F(v_1..v_m) = F(v_1 at slot 1) ∘ ... in slot order
        for ys in F.object_tuples():
            bases = [C.basis(x, y) for C, x, y in zip(F.sources, xs, ys)]
            for combo in itertools.product(*[list(enumerate(b)) for b in bases]):
                vs = tuple(v for _, v in combo)
                rep.checked += 1
                direct = F.mor(vs, xs, ys)
                cur, acc = xs, None
                for i in range(F.arity):
                    nxt = cur[:i] + (ys[i],) + cur[i + 1:]
                    step = tuple(vs[j] if j == i else F.sources[j].identity(cur[j]) for j in range(F.arity))
                    m = F.mor(step, cur, nxt)
                    acc = m if acc is None else D.compose(m, acc, F.obj(xs), F.obj(cur), F.obj(nxt))
                    cur = nxt
                if F.arity and acc != direct:
                    rep.fail(f"joint functoriality fails on {xs!r} -> {ys!r} basis {tuple(i for i, _ in combo)}")
                if len(rep.violations) >= limit:
                    return rep
    return rep


def validate_2category(C: Lin2Category, limit: int = 50) -> Report:
    rep = Report()
    for (X, Y), H in C.hom.items():
        rep.merge(validate_category(H), f"hom({X!r},{Y!r}): ")
    obs = C.objects
    # units and associativity on 1-cells
    for X, Y in itertools.product(obs, repeat=2):
        for f in C.one_cells(X, Y):
            rep.checked += 1
            if C.c1(X, X, Y, C.ident[X], f) != f or C.c1(X, Y, Y, f, C.ident[Y]) != f:
                rep.fail(f"identity 1-cells are not units for {f!r}")
    for X, Y, Z, T in itertools.product(obs, repeat=4):
        for f in C.one_cells(X, Y):
            for g in C.one_cells(Y, Z):
                gf = C.c1(X, Y, Z, f, g)
                for h in C.one_cells(Z, T):
                    rep.checked += 1
                    if C.c1(X, Z, T, gf, h) != C.c1(X, Y, T, f, C.c1(Y, Z, T, g, h)):
                        rep.fail(f"1-cell associativity fails on {(f, g, h)!r}")
    # composition bifunctors
    for X, Y, Z in itertools.product(obs, repeat=3):
        rep.merge(validate_multifunctor(C.composition_functor(X, Y, Z)), f"c_{(X, Y, Z)!r}: ")
    # strict units on 2-cells
    for X, Y in itertools.product(obs, repeat=2):
        H = C.hom[(X, Y)]
        iX, iY = C.ident[X], C.ident[Y]
        for f in H.objects:
            for f2 in H.objects:
                for a in H.basis(f, f2):
                    rep.checked += 1
                    if C.hcomp(X, X, Y, iX, iX, C.id2(X, X, iX), f, f2, a) != a:
                        rep.fail(f"left whiskering by identity changes a 2-cell {f!r}=>{f2!r}")
                    if C.hcomp(X, Y, Y, f, f2, a, iY, iY, C.id2(Y, Y, iY)) != a:
                        rep.fail(f"right whiskering by identity changes a 2-cell {f!r}=>{f2!r}")
    # associativity of horizontal composition on basis 2-cells
    for X, Y, Z, T in itertools.product(obs, repeat=4):
        for f, f2 in itertools.product(C.one_cells(X, Y), repeat=2):
            for g, g2 in itertools.product(C.one_cells(Y, Z), repeat=2):
                for h, h2 in itertools.product(C.one_cells(Z, T), repeat=2):
                    for a in C.hom[(X, Y)].basis(f, f2):
                        for b in C.hom[(Y, Z)].basis(g, g2):
                            ba = C.hcomp(X, Y, Z, f, f2, a, g, g2, b)
                            gf, gf2 = C.c1(X, Y, Z, f, g), C.c1(X, Y, Z, f2, g2)
                            for c in C.hom[(Z, T)].basis(h, h2):
                                rep.checked += 1
                                lhs = C.hcomp(X, Z, T, gf, gf2, ba, h, h2, c)
                                cb = C.hcomp(Y, Z, T, g, g2, b, h, h2, c)
                                hg, hg2 = C.c1(Y, Z, T, g, h), C.c1(Y, Z, T, g2, h2)
                                rhs = C.hcomp(X, Y, T, f, f2, a, hg, hg2, cb)
                                if lhs != rhs:
                                    rep.fail(f"horizontal associativity fails on {(f, g, h)!r}")
                                    if len(rep.violations) >= limit:
                                        return rep
    return rep


def validate(obj) -> Report:
    if isinstance(obj, Lin2Category):
        return validate_2category(obj)
    if isinstance(obj, MultiFunctor):
        return validate_multifunctor(obj)
    if isinstance(obj, LinFunctor):
        return validate_functor(obj)
    if isinstance(obj, LinCategory):
        return validate_category(obj)
    if isinstance(obj, NatTransform):
        rep = Report()
        for v in naturality_violations(obj):
            rep.fail(v)
        return rep
    raise TypeError(f"cannot validate {type(obj).__name__}")


def monoid_2category(elements, table: dict, A: Algebra, identity=None, name="") -> Lin2Category:
    """One object '*'; 1-cells are monoid elements, End(f) = A, Hom(f, g) = 0 for f != g.
    Both compositions are multiplication in A (A must be commutative for interchange).
    table[(a, b)] = a·b and g∘f is g·f."""
    elements = list(elements)
    e = identity if identity is not None else next(
        x for x in elements if all(table[(x, y)] == y and table[(y, x)] == y for y in elements))
    hom_basis = {}
    comp: dict = {}
    mult = {(i, j): _nz(A.mult[i][j]) for i in range(A.dim) for j in range(A.dim)
            if not is_zero(A.mult[i][j])}
    for f in elements:
        hom_basis[(f, f)] = [f"e{i}" for i in range(A.dim)]
        comp[(f, f, f)] = mult
    H = TableCategory(elements, hom_basis, comp, {f: A.unit for f in elements}, A.field, "M-hom")
    comp1 = {("*", "*", "*"): {(f, g): table[(g, f)] for f in elements for g in elements}}
    comp2 = {("*", "*", "*"): {(f, f, g, g): {(a, b): list(mult.get((b, a), []))
                                              for a in range(A.dim) for b in range(A.dim)
                                              if (b, a) in mult}
                               for f in elements for g in elements}}
    return Lin2Category(["*"], {("*", "*"): H}, {"*": e}, comp1, comp2, A.field, name)
