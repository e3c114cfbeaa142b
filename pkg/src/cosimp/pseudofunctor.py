"""K-linear pseudofunctors between finite strict 2-categories.

Conventions: F̂(f, g) : F(g)∘F(f) => F(g∘f) for X -f-> Y -g-> Z, and
F_0(X) : F(id_X) => id_{F(X)}.  An n-iterate is named by an integer
composition (i_1, ..., i_r) of n; it sends the path (f_1, ..., f_n) to the
composite in the target of F applied to consecutive blocks of lengths
i_1, ..., i_r, starting from f_1.

Morphisms of C^n(F) (indexed natural transformations) are handled in two
forms: coordinates in an exact basis of the Nat space, and "families",
dicts sending (objects, arrows) to the component 2-cell.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache

from .csso import EnhancedCSSO, DerivedComplex, ReferenceChoice, build_complex, _certify
from .lincat import (FunctionFunctor, Lin2Category, LinCategory, LinFunctor, MultiFunctor,
                     Report, monoid_2category, nat_space, validate_2category, validate_functor,
                     TableFunctor, Algebra, rationals, dual_numbers, _hashable)


# --- compositions ------------------------------------------------------------------

def compositions(n: int) -> list[tuple]:
    """All 2^{n-1} integer compositions of n, sorted."""
    if n == 0:
        return [()]
    out = []
    for cuts in itertools.product((0, 1), repeat=n - 1):
        parts, run = [], 1
        for c in cuts:
            if c:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        out.append(tuple(parts))
    return sorted(out)


def check_composition(comp, n: int) -> tuple:
    comp = tuple(comp)
    if n == 0 and comp == ():
        return comp
    if not comp or any(i < 1 for i in comp) or sum(comp) != n:
        raise ValueError(f"{comp} is not a composition of {n}")
    return comp


def blocks(comp) -> list[tuple[int, int]]:
    out, start = [], 0
    for i in comp:
        out.append((start, start + i))
        start += i
    return out


def coface_object(n: int, i: int, comp) -> tuple:
    """O^i_n on objects: prepend 1, append 1, or grow the block holding arrow i."""
    comp = tuple(comp)
    if not 0 <= i <= n:
        raise IndexError(f"O^{i}_{n} out of range")
    if i == 0:
        return (1,) + comp
    if i == n:
        return comp + (1,)
    out, pos = list(comp), 0
    for b, size in enumerate(comp):
        if pos < i <= pos + size:
            out[b] += 1
            return tuple(out)
        pos += size
    raise AssertionError("unreachable")


# --- the pseudofunctor record ----------------------------------------------------------

class Pseudofunctor:
    def __init__(self, source: Lin2Category, target: Lin2Category, obj_map: dict,
                 hom_functors: dict, fhat: dict, f0: dict, name: str = ""):
        self.source, self.target = source, target
        self.obj_map, self.hom_functors = obj_map, hom_functors
        self.fhat, self.f0 = fhat, f0
        self.name = name
        self.field = target.field
        self._inv: dict = {}

    def obj(self, X):
        return self.obj_map[X]

    def F1(self, X, Y, f):
        return self.hom_functors[(X, Y)].obj(f)

    def F2(self, X, Y, f, f2, a):
        return self.hom_functors[(X, Y)].mor(a, f, f2)

    def dhom(self, X, Y) -> LinCategory:
        return self.target.hom[(self.obj(X), self.obj(Y))]

    def fhat_at(self, X, Y, Z, f, g):
        return self.fhat[(X, Y, Z, f, g)]

    def fhat_inv(self, X, Y, Z, f, g):
        key = (X, Y, Z, f, g)
        if key not in self._inv:
            D = self.dhom(X, Z)
            src = self.target.c1(self.obj(X), self.obj(Y), self.obj(Z), self.F1(X, Y, f), self.F1(Y, Z, g))
            tgt = self.F1(X, Z, self.source.c1(X, Y, Z, f, g))
            inv = D.inverse(self.fhat[key], src, tgt)
            if inv is None:
                raise ValueError(f"F̂{key} is not invertible")
            self._inv[key] = inv
        return self._inv[key]

    @property
    def unitary(self) -> bool:
        for X in self.source.objects:
            e = self.source.ident[X]
            fe = self.F1(X, X, e)
            if fe != self.target.ident[self.obj(X)] or \
                    tuple(self.f0[X]) != tuple(self.dhom(X, X).identity(fe)):
                return False
        return True

    def fhat_family(self) -> dict:
        return {((X, Y, Z), (f, g)): self.fhat[(X, Y, Z, f, g)] for (X, Y, Z, f, g) in self.fhat}

    def with_fhat(self, fhat: dict, name: str = "") -> "Pseudofunctor":
        return Pseudofunctor(self.source, self.target, self.obj_map, self.hom_functors, fhat,
                             self.f0, name or self.name)

    def to_json(self) -> dict:
        """Self-contained JSON: both 2-categories, the hom functors tabulated on
        basis 2-cells, and the coordinates of F̂ and F_0."""
        enc = self.field.to_json
        homs = []
        for (X, Y), H in self.hom_functors.items():
            S = self.source.hom[(X, Y)]
            T = self.dhom(X, Y)
            maps = []
            for f in S.objects:
                for f2 in S.objects:
                    cols = [H.mor(b, f, f2) for b in S.basis(f, f2)]
                    if cols and T.dim(H.obj(f), H.obj(f2)):
                        maps.append({"x": f, "y": f2,
                                     "matrix": [[enc(c[r]) for c in cols] for r in range(len(cols[0]))]})
            homs.append({"source": X, "target": Y, "object_map": [[f, H.obj(f)] for f in S.objects],
                         "hom_maps": maps})
        return {
            "kind": "pseudofunctor",
            "name": self.name,
            "source": self.source.to_json(),
            "target": "source" if self.target is self.source else self.target.to_json(),
            "hom_functors": homs,
            "obj_map": [[X, Y] for X, Y in self.obj_map.items()],
            "fhat": [{"objects": [X, Y, Z], "f": f, "g": g, "coords": [enc(c) for c in v]}
                     for (X, Y, Z, f, g), v in self.fhat.items()],
            "f0": [{"object": X, "coords": [enc(c) for c in v]} for X, v in self.f0.items()],
        }


# --- iterates ---------------------------------------------------------------------

class IterateComponent(MultiFunctor):
    """The (X_0, ..., X_n)-component of the iterate F^{comp}."""

    def __init__(self, F: Pseudofunctor, objs: tuple, comp: tuple):
        self.F, self.objs, self.comp = F, tuple(objs), check_composition(comp, len(objs) - 1)
        C = F.source
        self.sources = tuple(C.hom[(objs[i], objs[i + 1])] for i in range(len(objs) - 1))
        self.target = F.dhom(objs[0], objs[-1])
        self.blocks = blocks(self.comp)
        self.fobjs = tuple(F.obj(objs[a]) for a, _ in self.blocks) + (F.obj(objs[-1]),)

    def _block_cells(self, arrows):
        C, F, o = self.F.source, self.F, self.objs
        return [F.F1(o[a], o[b], C.composite(o[a:b + 1], arrows[a:b])) for a, b in self.blocks]

    def obj(self, xs):
        return self.F.target.composite(self.fobjs, self._block_cells(xs))

    def mor(self, vs, xs, ys):
        C, F, o = self.F.source, self.F, self.objs
        cells, srcs, tgts = [], [], []
        for a, b in self.blocks:
            sub = o[a:b + 1]
            cell = C.hcomp_chain(sub, xs[a:b], ys[a:b], vs[a:b])
            s, t = C.composite(sub, xs[a:b]), C.composite(sub, ys[a:b])
            cells.append(F.F2(o[a], o[b], s, t, cell))
            srcs.append(F.F1(o[a], o[b], s))
            tgts.append(F.F1(o[a], o[b], t))
        return F.target.hcomp_chain(self.fobjs, srcs, tgts, cells)


def iterate(F: Pseudofunctor, comp) -> dict:
    """All components of F^{comp}, keyed by object tuple."""
    n = sum(comp)
    return {objs: IterateComponent(F, objs, comp)
            for objs in itertools.product(F.source.objects, repeat=n + 1)}


def object_tuples(F: Pseudofunctor, n: int) -> list[tuple]:
    """Object tuples carrying at least one path of length n."""
    out = []
    for objs in itertools.product(F.source.objects, repeat=n + 1):
        if all(F.source.hom[(objs[i], objs[i + 1])].objects for i in range(n)):
            out.append(objs)
    return out


class IterHom:
    """Hom(H, H') in C^n(F): the direct sum over object tuples of Nat spaces."""

    def __init__(self, F: Pseudofunctor, n: int, H, H2):
        self.F, self.n, self.H, self.H2 = F, n, tuple(H), tuple(H2)
        self.blocks = []
        start = 0
        for objs in object_tuples(F, n):
            A, B = IterateComponent(F, objs, H), IterateComponent(F, objs, H2)
            ns = nat_space(A, B)
            self.blocks.append((objs, A, B, ns, start))
            start += ns.dim
        self.dim = start

    def to_family(self, coords) -> dict:
        fam = {}
        for objs, _, _, ns, start in self.blocks:
            amb = ns.to_ambient(coords[start:start + ns.dim])
            for key in ns.keys:
                fam[(objs, key)] = ns.component(amb, key)
        return fam

    def ambient(self, fam: dict, objs, ns):
        amb = []
        for key in ns.keys:
            amb.extend(fam[(objs, key)])
        return amb

    def from_family(self, fam: dict, check: bool = True) -> tuple:
        out = []
        for objs, _, _, ns, _ in self.blocks:
            amb = self.ambient(fam, objs, ns)
            c = ns.from_ambient(amb)
            if check and ns.to_ambient(c) != tuple(amb):
                raise ValueError(f"family is not natural at the object tuple {objs}")
            out.extend(c)
        return tuple(out)

    def contains(self, fam: dict) -> list:
        """Object tuples where the family fails naturality."""
        bad = []
        for objs, _, _, ns, _ in self.blocks:
            if not ns.contains_ambient(self.ambient(fam, objs, ns)):
                bad.append(objs)
        return bad


class IterCategory(LinCategory):
    """C^n(F): objects the n-iterates, morphisms indexed natural transformations.
    C^0(F) is the unit category on the object ()."""

    def __init__(self, F: Pseudofunctor, n: int):
        self.F, self.n = F, n
        self.objects = compositions(n)
        self.field = F.field
        self._homs: dict = {}
        self.paths = [(p.objs, p.arrows) for p in F.source.paths(n)] if n else []

    def hom(self, H, H2) -> IterHom:
        key = (tuple(H), tuple(H2))
        h = self._homs.get(key)
        if h is None:
            h = self._homs[key] = IterHom(self.F, self.n, *key)
        return h

    def dim(self, x, y) -> int:
        return 1 if self.n == 0 else self.hom(x, y).dim

    def component_objects(self, H, objs, arrows):
        return IterateComponent(self.F, objs, H).obj(arrows)

    def compose_families(self, g, f, H1, H2, H3) -> dict:
        F = self.F
        out = {}
        for objs, arrows in f:
            D = F.dhom(objs[0], objs[-1])
            a = IterateComponent(F, objs, H1).obj(arrows)
            b = IterateComponent(F, objs, H2).obj(arrows)
            c = IterateComponent(F, objs, H3).obj(arrows)
            out[(objs, arrows)] = D.compose(g[(objs, arrows)], f[(objs, arrows)], a, b, c)
        return out

    def identity_family(self, H) -> dict:
        F = self.F
        return {(objs, arrows): F.dhom(objs[0], objs[-1]).identity(IterateComponent(F, objs, H).obj(arrows))
                for objs, arrows in self.paths}

    def compose(self, g, f, x, y, z):
        if self.n == 0:
            return (g[0] * f[0],)
        fam = self.compose_families(self.hom(y, z).to_family(g), self.hom(x, y).to_family(f), x, y, z)
        return self.hom(x, z).from_family(fam, check=False)

    def identity(self, x):
        if self.n == 0:
            return (self.field.one,)
        return self.hom(x, x).from_family(self.identity_family(x), check=False)


# --- coface functors ------------------------------------------------------------------

def coface_family(F: Pseudofunctor, n: int, i: int, fam, H, H2) -> dict:
    """O^i_n on an indexed family ψ: H => H2 (need not be natural)."""
    C, D = F.source, F.target
    out = {}
    if n == 1:
        lam = fam[0] if not isinstance(fam, dict) else fam[((), ())]
        for p in C.paths(1):
            (X, Y), (f,) = p.objs, p.arrows
            I = F.dhom(X, Y).identity(F.F1(X, Y, f))
            out[(p.objs, p.arrows)] = tuple(lam * c for c in I)
        return out
    for p in C.paths(n):
        o, a = p.objs, p.arrows
        if i == 0:
            head = F.F1(o[0], o[1], a[0])
            src = IterateComponent(F, o[1:], H).obj(a[1:])
            tgt = IterateComponent(F, o[1:], H2).obj(a[1:])
            v = D.hcomp(F.obj(o[0]), F.obj(o[1]), F.obj(o[-1]), head, head,
                        F.dhom(o[0], o[1]).identity(head), src, tgt, fam[(o[1:], a[1:])])
        elif i == n:
            last = F.F1(o[-2], o[-1], a[-1])
            src = IterateComponent(F, o[:-1], H).obj(a[:-1])
            tgt = IterateComponent(F, o[:-1], H2).obj(a[:-1])
            v = D.hcomp(F.obj(o[0]), F.obj(o[-2]), F.obj(o[-1]), src, tgt, fam[(o[:-1], a[:-1])],
                        last, last, F.dhom(o[-2], o[-1]).identity(last))
        else:
            merged = C.c1(o[i - 1], o[i], o[i + 1], a[i - 1], a[i])
            v = fam[(o[:i] + o[i + 1:], a[:i - 1] + (merged,) + a[i + 1:])]
        out[(o, a)] = v
    return out


class CofaceFunctor(LinFunctor):
    def __init__(self, F: Pseudofunctor, cats: dict, n: int, i: int):
        if not (n >= 1 and 0 <= i <= n):
            raise IndexError(f"O^{i}_{n} out of range")
        self.F, self.n, self.i = F, n, i
        self.source, self.target = cats(n - 1), cats(n)

    def obj(self, x):
        return coface_object(self.n, self.i, x)

    def mor(self, v, x, y):
        fam = v if self.n == 1 else self.source.hom(x, y).to_family(v)
        out = coface_family(self.F, self.n, self.i, fam, x, y)
        return self.target.hom(self.obj(x), self.obj(y)).from_family(out, check=False)


# --- the 2-cosemisimplicial object of F -------------------------------------------------------

class PseudofunctorCSSO(EnhancedCSSO):
    """(C•(F), O, τ): τ^n_{01} and τ^n_{n,n+1} built from F̂^{∓1}, every other τ an
    identity; trivially enhanced because O^0_1 = O^1_1."""

    enhanced = True

    def __init__(self, F: Pseudofunctor, max_degree: int):
        self.F, self.max_degree = F, max_degree
        self.name = f"C•({F.name or 'F'})"
        self._cats = {}
        self._cofaces = {}

    def category(self, n):
        if not 0 <= n <= self.max_degree:
            raise IndexError(f"degree {n} outside 0..{self.max_degree}")
        if n not in self._cats:
            self._cats[n] = IterCategory(self.F, n)
        return self._cats[n]

    def coface(self, n, i):
        key = (n, i)
        if key not in self._cofaces:
            self._cofaces[key] = CofaceFunctor(self.F, self.category, n, i)
        return self._cofaces[key]

    def tau_family(self, n, i, j, H, inverse=False) -> dict:
        F, C, D = self.F, self.F.source, self.F.target
        A = coface_object(n + 1, j, coface_object(n, i, H))
        B = coface_object(n + 1, i, coface_object(n, j - 1, H))
        cat = self.category(n + 1)
        if (i, j) == (0, 1):
            use_inverse = not inverse
        elif (i, j) == (n, n + 1):
            use_inverse = inverse
        else:
            if A != B:
                raise AssertionError(f"cosemisimplicial identity fails strictly for ({i},{j})")
            return cat.identity_family(A)
        out = {}
        for p in C.paths(n + 1):
            o, a = p.objs, p.arrows
            if (i, j) == (0, 1):
                X, Y, Z = o[0], o[1], o[2]
                fh = (F.fhat_inv if use_inverse else F.fhat_at)(X, Y, Z, a[0], a[1])
                if n == 1:
                    out[(o, a)] = fh
                    continue
                pair = D.composite((F.obj(X), F.obj(Y), F.obj(Z)), (F.F1(X, Y, a[0]), F.F1(Y, Z, a[1])))
                single = F.F1(X, Z, C.c1(X, Y, Z, a[0], a[1]))
                s, t = (single, pair) if use_inverse else (pair, single)
                rest = IterateComponent(F, o[2:], H).obj(a[2:])
                out[(o, a)] = D.hcomp(F.obj(X), F.obj(Z), F.obj(o[-1]), s, t, fh, rest, rest,
                                      F.dhom(o[2], o[-1]).identity(rest))
            else:
                X, Y, Z = o[-3], o[-2], o[-1]
                fh = (F.fhat_inv if use_inverse else F.fhat_at)(X, Y, Z, a[-2], a[-1])
                if n == 1:
                    out[(o, a)] = fh
                    continue
                pair = D.composite((F.obj(X), F.obj(Y), F.obj(Z)), (F.F1(X, Y, a[-2]), F.F1(Y, Z, a[-1])))
                single = F.F1(X, Z, C.c1(X, Y, Z, a[-2], a[-1]))
                s, t = (single, pair) if use_inverse else (pair, single)
                head = IterateComponent(F, o[:-2], H).obj(a[:-2])
                out[(o, a)] = D.hcomp(F.obj(o[0]), F.obj(X), F.obj(Z), head, head,
                                      F.dhom(o[0], X).identity(head), s, t, fh)
        return out

    def tau(self, n, i, j, x, inverse=False):
        self.check_indices(n, i, j)
        A = coface_object(n + 1, j, coface_object(n, i, x))
        B = coface_object(n + 1, i, coface_object(n, j - 1, x))
        s, t = (B, A) if inverse else (A, B)
        fam = self.tau_family(n, i, j, x, inverse)
        return self.category(n + 1).hom(s, t).from_family(fam, check=False)

    def phi(self, x, inverse=False):
        return self.category(1).identity((1,))


def csso_of(F: Pseudofunctor, max_degree: int) -> PseudofunctorCSSO:
    return PseudofunctorCSSO(F, max_degree)


# --- axioms ---------------------------------------------------------------------------

def assoc_sides(F: Pseudofunctor, objs, arrows):
    """The two composites F̂(gf,h)(1_{Fh} * F̂(f,g)) and F̂(f,hg)(F̂(g,h) * 1_{Ff})."""
    C, D = F.source, F.target
    X, Y, Z, T = objs
    f, g, h = arrows
    FX, FY, FZ, FT = (F.obj(o) for o in objs)
    Ff, Fg, Fh = F.F1(X, Y, f), F.F1(Y, Z, g), F.F1(Z, T, h)
    gf, hg = C.c1(X, Y, Z, f, g), C.c1(Y, Z, T, g, h)
    hgf = C.c1(X, Z, T, gf, h)
    Fgf, Fhg = F.F1(X, Z, gf), F.F1(Y, T, hg)
    FgFf = D.c1(FX, FY, FZ, Ff, Fg)
    FhFg = D.c1(FY, FZ, FT, Fg, Fh)
    top = D.hcomp(FX, FZ, FT, FgFf, Fgf, F.fhat_at(X, Y, Z, f, g), Fh, Fh, F.dhom(Z, T).identity(Fh))
    left = D.hcomp(FX, FY, FT, Ff, Ff, F.dhom(X, Y).identity(Ff), FhFg, Fhg, F.fhat_at(Y, Z, T, g, h))
    H = F.dhom(X, T)
    src = D.c1(FX, FZ, FT, FgFf, Fh)
    lhs = H.compose(F.fhat_at(X, Z, T, gf, h), top, src, D.c1(FX, FZ, FT, Fgf, Fh), F.F1(X, T, hgf))
    rhs = H.compose(F.fhat_at(X, Y, T, f, hg), left, src, D.c1(FX, FY, FT, Ff, Fhg), F.F1(X, T, hgf))
    return lhs, rhs


def sigma_families(F: Pseudofunctor, fams=None) -> dict:
    """σ^{12}, σ^{24}, σ^{13}, σ^{34} as cofaces of F̂ (or of given families
    fams = {"12": ..., ...} of F^{(1,1)} => F^{(2)} families)."""
    fh = F.fhat_family()
    fams = fams or {}
    g = lambda k: fams.get(k, fh)
    s, t = (1, 1), (2,)
    return {
        "12": coface_family(F, 3, 3, g("12"), s, t),   # F^{(1,1,1)} => F^{(2,1)}
        "24": coface_family(F, 3, 1, g("24"), s, t),   # F^{(2,1)} => F^{(3)}
        "13": coface_family(F, 3, 0, g("13"), s, t),   # F^{(1,1,1)} => F^{(1,2)}
        "34": coface_family(F, 3, 2, g("34"), s, t),   # F^{(1,2)} => F^{(3)}
    }


def check_pseudofunctor(F: Pseudofunctor, limit: int = 50) -> Report:
    """Hom functors, naturality and invertibility of F̂ and F_0, the associativity axiom checked
    directly and through the σ-hexagon (the two verdicts must agree), and the unit axiom."""
    rep = Report()
    C, D = F.source, F.target
    for (X, Y), Fxy in F.hom_functors.items():
        rep.merge(validate_functor(Fxy, limit), f"F_{{{X},{Y}}}: ")
    bad = IterHom(F, 2, (1, 1), (2,)).contains(F.fhat_family())
    rep.checked += 1
    for objs in bad:
        rep.fail(f"F̂ is not natural at {objs}")
    for (X, Y, Z, f, g) in F.fhat:
        rep.checked += 1
        try:
            F.fhat_inv(X, Y, Z, f, g)
        except ValueError as e:
            rep.fail(str(e))
    for X in C.objects:
        rep.checked += 1
        fe = F.F1(X, X, C.ident[X])
        if F.dhom(X, X).inverse(F.f0[X], fe, D.ident[F.obj(X)]) is None:
            rep.fail(f"F_0({X}) is not invertible")
    direct = set()
    for p in C.paths(3):
        rep.checked += 1
        lhs, rhs = assoc_sides(F, p.objs, p.arrows)
        if lhs != rhs:
            direct.add((p.objs, p.arrows))
            if len(rep.violations) < limit:
                rep.fail(f"associativity axiom fails at {p.objs} {p.arrows}")
    via_sigma = set(sigma_hexagon_failures(F))
    rep.assoc_direct = sorted(direct, key=repr)  # type: ignore[attr-defined]
    rep.assoc_sigma = sorted(via_sigma, key=repr)  # type: ignore[attr-defined]
    rep.checked += 1
    if direct != via_sigma:
        rep.fail("direct associativity and σ-hexagon verdicts disagree")
    for p in C.paths(1):
        (X, Y), (f,) = p.objs, p.arrows
        rep.checked += 2
        left, right = unit_sides(F, X, Y, f)
        if left[0] != left[1]:
            rep.fail(f"unit axiom fails for F̂(id, {f}) at {X}")
        if right[0] != right[1]:
            rep.fail(f"unit axiom fails for F̂({f}, id) at {Y}")
    return rep


def sigma_hexagon_failures(F: Pseudofunctor) -> list:
    sig = sigma_families(F)
    cat = IterCategory(F, 3)
    top = cat.compose_families(sig["24"], sig["12"], (1, 1, 1), (2, 1), (3,))
    bottom = cat.compose_families(sig["34"], sig["13"], (1, 1, 1), (1, 2), (3,))
    return [k for k in top if top[k] != bottom[k]]


def unit_sides(F: Pseudofunctor, X, Y, f):
    C, D = F.source, F.target
    FX, FY = F.obj(X), F.obj(Y)
    Ff = F.F1(X, Y, f)
    eX, eY = C.ident[X], C.ident[Y]
    FeX, FeY = F.F1(X, X, eX), F.F1(Y, Y, eY)
    one = F.dhom(X, Y).identity(Ff)
    l = D.hcomp(FX, FX, FY, FeX, D.ident[FX], F.f0[X], Ff, Ff, one)
    r = D.hcomp(FX, FY, FY, Ff, Ff, one, FeY, D.ident[FY], F.f0[Y])
    return (F.fhat_at(X, X, Y, eX, f), l), (F.fhat_at(X, Y, Y, f, eY), r)


# --- the padding complex -------------------------------------------------------------------

def padding_coboundary(F: Pseudofunctor, x: dict, n: int) -> dict:
    """δx on n-paths for x in X^{n-1}(F), a family of F^{(1,...,1)} => F^{(n-1)} cells."""
    C, D = F.source, F.target
    out = {}
    ones = (1,) * (n - 1)
    for p in C.paths(n):
        o, a = p.objs, p.arrows
        Fo = tuple(F.obj(v) for v in o)
        Fa = tuple(F.F1(o[k], o[k + 1], a[k]) for k in range(n))
        H = F.dhom(o[0], o[-1])
        src = D.composite(Fo, Fa)
        full = F.F1(o[0], o[-1], C.composite(o, a))
        acc = list(H.zero(src, full))
        for i in range(n + 1):
            if i == 0:
                rest = C.composite(o[1:], a[1:])
                Frest = F.F1(o[1], o[-1], rest)
                mid_src = IterateComponent(F, o[1:], ones).obj(a[1:])
                w = D.hcomp(Fo[0], Fo[1], Fo[-1], Fa[0], Fa[0], F.dhom(o[0], o[1]).identity(Fa[0]),
                            mid_src, Frest, x[(o[1:], a[1:])])
                mid = D.c1(Fo[0], Fo[1], Fo[-1], Fa[0], Frest)
                v = H.compose(F.fhat_at(o[0], o[1], o[-1], a[0], rest), w, src, mid, full)
            elif i == n:
                head = C.composite(o[:-1], a[:-1])
                Fhead = F.F1(o[0], o[-2], head)
                mid_src = IterateComponent(F, o[:-1], ones).obj(a[:-1])
                w = D.hcomp(Fo[0], Fo[-2], Fo[-1], mid_src, Fhead, x[(o[:-1], a[:-1])],
                            Fa[-1], Fa[-1], F.dhom(o[-2], o[-1]).identity(Fa[-1]))
                mid = D.c1(Fo[0], Fo[-2], Fo[-1], Fhead, Fa[-1])
                v = H.compose(F.fhat_at(o[0], o[-2], o[-1], head, a[-1]), w, src, mid, full)
            else:
                merged = C.c1(o[i - 1], o[i], o[i + 1], a[i - 1], a[i])
                no, na = o[:i] + o[i + 1:], a[:i - 1] + (merged,) + a[i + 1:]
                Fm = F.F1(o[i - 1], o[i + 1], merged)
                objs_w = Fo[:i] + Fo[i + 1:]
                srcs = list(Fa[:i - 1]) + [D.c1(Fo[i - 1], Fo[i], Fo[i + 1], Fa[i - 1], Fa[i])] + list(Fa[i + 1:])
                tgts = list(Fa[:i - 1]) + [Fm] + list(Fa[i + 1:])
                cells = [F.dhom(o[k], o[k + 1]).identity(Fa[k]) for k in range(i - 1)] + \
                        [F.fhat_at(o[i - 1], o[i], o[i + 1], a[i - 1], a[i])] + \
                        [F.dhom(o[k], o[k + 1]).identity(Fa[k]) for k in range(i + 1, n)]
                w = D.hcomp_chain(objs_w, srcs, tgts, cells)
                mid = D.composite(objs_w, tgts)
                v = H.compose(x[(no, na)], w, src, mid, full)
            sg = 1 if i % 2 == 0 else -1
            for r, c in enumerate(v):
                if c:
                    acc[r] += sg * c
        out[(o, a)] = tuple(acc)
    return out


def cochain_hom(F: Pseudofunctor, n: int) -> IterHom:
    """X^n(F) = Hom_{C^n(F)}(F^{(1,...,1)}, F^{(n)})."""
    return _cochain_hom(F, n)


@lru_cache(maxsize=256)
def _cochain_hom(F, n):
    return IterHom(F, n, (1,) * n, (n,))


def padding_complex(F: Pseudofunctor, top: int) -> DerivedComplex:
    homs = {n: cochain_hom(F, n) for n in range(1, top + 1)}
    dims = {n: h.dim for n, h in homs.items()}
    delta = {}
    for n in range(2, top + 1):
        cols = []
        for j in range(dims[n - 1]):
            e = [F.field.zero] * dims[n - 1]
            e[j] = F.field.one
            cols.append(homs[n].from_family(padding_coboundary(F, homs[n - 1].to_family(e), n)))
        delta[n] = [tuple(c[r] for c in cols) for r in range(dims[n])]
    objs = {n: ((1,) * n, (n,)) for n in homs}
    return DerivedComplex(list(range(1, top + 1)), dims, delta, _certify(delta, dims, F.field),
                          F.field, "padding", objs)


def deformation_complex(F: Pseudofunctor, top: int):
    """X•(F) built twice: through csso_of + build_complex with μ^n = (1,...,n),
    ν^n = (0,...,n-1), and by the direct padding formula.  Returns
    (complex, agree) where agree compares modules and matrices exactly."""
    m = csso_of(F, top)
    derived = build_complex(m, ReferenceChoice.default((), top))
    direct = padding_complex(F, top)
    agree = derived.dims == direct.dims and derived.delta == direct.delta
    return direct, derived, agree


# --- toy models -------------------------------------------------------------------------

def monoid_table(elements, mul) -> dict:
    return {(a, b): mul(a, b) for a in elements for b in elements}


def toy_monoids() -> dict:
    """name -> (elements, table with table[(a, b)] = a·b)."""
    def left_zero(a, b):
        if a == "e":
            return b
        if b == "e":
            return a
        return a
    return {
        "trivial": (["e"], {("e", "e"): "e"}),
        "idempotent": (["e", "v"], monoid_table(["e", "v"], lambda a, b: "v" if "v" in (a, b) else "e")),
        "z2": (["e", "a"], monoid_table(["e", "a"], lambda a, b: "e" if a == b else "a")),
        "left_zero": (["e", "a", "b"], monoid_table(["e", "a", "b"], left_zero)),
    }


def check_monoid(elements, table) -> list[str]:
    errs = []
    for a in elements:
        for b in elements:
            if table.get((a, b)) not in elements:
                errs.append(f"{a}·{b} missing or outside the monoid")
    if errs:
        return errs
    for a, b, c in itertools.product(elements, repeat=3):
        if table[(table[(a, b)], c)] != table[(a, table[(b, c)])]:
            errs.append(f"associativity fails at ({a},{b},{c})")
    if not any(all(table[(e, x)] == x == table[(x, e)] for x in elements) for e in elements):
        errs.append("no identity element")
    return errs


def build_toy_model(elements, table, A: Algebra, theta=None, c=None, name: str = "") -> Pseudofunctor:
    """One-object pseudofunctor: 1-cells are monoid elements, End(f) = A, F(f) = θ(f),
    F is the identity on 2-cells and F̂(f, g) = c(f, g) ∈ A^×."""
    errs = check_monoid(elements, table)
    if errs:
        raise ValueError("invalid monoid: " + "; ".join(errs))
    if not A.is_commutative():
        raise ValueError("the algebra must be commutative")
    errs = A.check()
    if errs:
        raise ValueError("invalid algebra: " + "; ".join(errs))
    theta = theta or {x: x for x in elements}
    for a, b in itertools.product(elements, repeat=2):
        if theta[table[(a, b)]] != table[(theta[a], theta[b])]:
            raise ValueError("θ is not a monoid endomorphism")
    C2 = monoid_2category(elements, table, A, name=name)
    one = tuple(A.unit)
    cvals = {}
    for f in elements:
        for g in elements:
            v = tuple(c[(f, g)]) if c is not None else one
            if A.inverse(v) is None:
                raise ValueError(f"c({f},{g}) is not a unit of A")
            cvals[(f, g)] = v
    H = C2.hom[("*", "*")]
    Fh = FunctionFunctor(H, H, lambda f: theta[f], lambda v, x, y: tuple(v))
    fhat = {("*", "*", "*", f, g): cvals[(f, g)] for f in elements for g in elements}
    e = C2.ident["*"]
    if theta[e] != e:
        raise ValueError("θ must preserve the identity")
    return Pseudofunctor(C2, C2, {"*": "*"}, {("*", "*"): Fh}, fhat, {"*": one}, name)


def cocycle_violations(elements, table, A: Algebra, c) -> list:
    """Triples where c(f,g) c(gf,h) != c(g,h) c(f,hg) (g∘f = g·f)."""
    bad = []
    for f, g, h in itertools.product(elements, repeat=3):
        gf, hg = table[(g, f)], table[(h, g)]
        if A.mul(c[(f, g)], c[(gf, h)]) != A.mul(c[(g, h)], c[(f, hg)]):
            bad.append((f, g, h))
    return bad


def coboundary_cocycle(elements, table, A: Algebra, b: dict) -> dict:
    """c(f,g) = b(f) b(g) b(gf)^{-1}, a unit-valued 2-cocycle (unitary when b(e) = 1)."""
    return {(f, g): A.mul(A.mul(b[f], b[g]), A.inverse(b[table[(g, f)]]))
            for f in elements for g in elements}


def random_unit_function(elements, A: Algebra, rng: random.Random, identity="e", bound=2) -> dict:
    out = {}
    for f in elements:
        if f == identity:
            out[f] = tuple(A.unit)
            continue
        while True:
            v = tuple(A.field.random(rng, bound) for _ in range(A.dim))
            if A.inverse(v) is not None:
                out[f] = v
                break
    return out


def toy_models() -> dict:
    """The standard fixtures: name -> Pseudofunctor with c ≡ 1, θ = id."""
    M = toy_monoids()
    out = {}
    for mname, aname, A in (("trivial", "Q", rationals()), ("idempotent", "Q", rationals()),
                            ("idempotent", "Q[x]/(x^2)", dual_numbers()), ("z2", "Q", rationals()),
                            ("left_zero", "Q", rationals())):
        els, tab = M[mname]
        out[f"{mname}/{aname}"] = build_toy_model(els, tab, A, name=f"{mname}/{aname}")
    return out


def modular_models() -> dict:
    """Cyclic and Klein four groups over GF(p), c ≡ 1, θ = id; here H^2 and H^3 are nonzero."""
    from .scalars import PrimeField
    out = {}
    for name, p, els, mul in (("z2", 2, [0, 1], lambda a, b: a ^ b),
                              ("z3", 3, [0, 1, 2], lambda a, b: (a + b) % 3),
                              ("klein", 2, [0, 1, 2, 3], lambda a, b: a ^ b)):
        key = f"{name}/GF({p})"
        out[key] = build_toy_model(els, monoid_table(els, mul), rationals(PrimeField(p)), name=key)
    return out


def pseudofunctor_from_json(d: dict) -> Pseudofunctor:
    h = _hashable
    source = Lin2Category.from_json(d["source"])
    target = source if d.get("target", "source") == "source" else Lin2Category.from_json(d["target"])
    K = target.field
    obj_map = {h(X): h(Y) for X, Y in d["obj_map"]}
    homs = {}
    for e in d["hom_functors"]:
        X, Y = h(e["source"]), h(e["target"])
        S, T = source.hom[(X, Y)], target.hom[(obj_map[X], obj_map[Y])]
        maps = {(h(m["x"]), h(m["y"])): [tuple(K(c) for c in row) for row in m["matrix"]]
                for m in e["hom_maps"]}
        homs[(X, Y)] = TableFunctor(S, T, {h(f): h(g) for f, g in e["object_map"]}, maps)
    fhat = {(*(h(o) for o in e["objects"]), h(e["f"]), h(e["g"])): tuple(K(c) for c in e["coords"])
            for e in d["fhat"]}
    f0 = {h(e["object"]): tuple(K(c) for c in e["coords"]) for e in d["f0"]}
    return Pseudofunctor(source, target, obj_map, homs, fhat, f0, d.get("name", ""))


def load_model(d: dict):
    """A toy description ({"monoid": ...}), a full pseudofunctor or a tower."""
    if "monoid" in d:
        return toy_from_json(d)
    kind = d.get("kind")
    if kind == "pseudofunctor":
        return pseudofunctor_from_json(d)
    if kind == "tower":
        from .csso import TowerCSSO
        return TowerCSSO.from_json(d)
    raise ValueError("unrecognized model description")


def toy_from_json(d: dict) -> Pseudofunctor:
    from .lincat import Algebra as _Alg
    els = list(d["monoid"]["elements"])
    table = {(a, b): x for a, b, x in d["monoid"]["table"]}
    A = _Alg.from_json(d["algebra"])
    theta = dict(d["theta"]) if d.get("theta") else None
    c = None
    if d.get("cocycle"):
        c = {(f, g): tuple(A.field(x) for x in v) for f, g, v in d["cocycle"]}
    return build_toy_model(els, table, A, theta, c, d.get("name", "toy"))


def toy_to_json(elements, table, A: Algebra, theta=None, c=None, name="toy") -> dict:
    enc = A.field.to_json
    return {"name": name,
            "monoid": {"elements": list(elements), "table": [[a, b, x] for (a, b), x in table.items()]},
            "algebra": A.to_json(),
            "theta": [[k, v] for k, v in theta.items()] if theta else None,
            "cocycle": [[f, g, [enc(x) for x in v]] for (f, g), v in c.items()] if c else None}


def validate_source(F: Pseudofunctor) -> Report:
    rep = validate_2category(F.source)
    if F.target is not F.source:
        rep.merge(validate_2category(F.target), "target: ")
    return rep
