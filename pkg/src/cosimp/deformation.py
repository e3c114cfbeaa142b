"""Deformations of the pseudofunctorial structure over K[h]/(h^N).

A deformation of order n is a list γ_1, ..., γ_n of families F^{(1,1)} => F^{(2)}
(γ_0 = F̂).  Its structural square has edges σ^{12}(h), σ^{24}(h), σ^{13}(h),
σ^{34}(h), each the series Σ_k (coface of γ_k) h^k, and the degree-m
equation reads Σ_{p+q=m} σ^{24}_p σ^{12}_q - σ^{34}_p σ^{13}_q = 0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .linalg import Echelon, nullspace, rank, solve_linear
from .lincat import Report
from .pseudofunctor import (IterCategory, Pseudofunctor, coface_family, cochain_hom,
                            padding_coboundary, padding_complex)
from .series import TruncatedSeries, add, iszero, series_mul, sub

S11, S12, S3 = (1, 1), (2,), (1, 1, 1)
HEXAGON = {  # key -> (coface index into degree 3, source, target)
    "12": (3, (1, 1, 1), (2, 1)),
    "24": (1, (2, 1), (3,)),
    "13": (0, (1, 1, 1), (1, 2)),
    "34": (2, (1, 2), (3,)),
}


class DeformationError(ValueError):
    pass


# --- data ---------------------------------------------------------------------------

@dataclass
class DeformationData:
    base: Pseudofunctor
    order: int
    fhat_k: dict                      # k -> family on 2-paths
    f0_k: dict = field(default_factory=dict)   # k -> {X: coords}; missing means zero

    def gamma(self, k: int) -> dict:
        if k == 0:
            return self.base.fhat_family()
        if 1 <= k <= self.order:
            return self.fhat_k[k]
        return zero_family(self.base, 2)

    def f0(self, k: int, X):
        F = self.base
        if k == 0:
            return F.f0[X]
        fam = self.f0_k.get(k)
        if fam is None or X not in fam:
            e = F.F1(X, X, F.source.ident[X])
            return F.dhom(X, X).zero(e, F.target.ident[F.obj(X)])
        return fam[X]

    @property
    def normalized(self) -> bool:
        return all(iszero(v) for fam in self.f0_k.values() for v in fam.values())

    def extended(self, gamma_next: dict) -> "DeformationData":
        ks = dict(self.fhat_k)
        ks[self.order + 1] = gamma_next
        return DeformationData(self.base, self.order + 1, ks, dict(self.f0_k))

    def truncated(self, order: int) -> "DeformationData":
        return DeformationData(self.base, order, {k: v for k, v in self.fhat_k.items() if k <= order},
                               {k: v for k, v in self.f0_k.items() if k <= order})

    def to_json(self) -> dict:
        enc = self.base.field.to_json
        return {"order": self.order,
                "fhat_k": {str(k): [{"objects": list(o), "arrows": list(a),
                                     "coords": [[i, enc(c)] for i, c in enumerate(v) if c]}
                                    for (o, a), v in sorted(fam.items(), key=repr) if not iszero(v)]
                           for k, fam in sorted(self.fhat_k.items())},
                "f0_k": {str(k): [{"object": X, "coords": [enc(c) for c in v]} for X, v in fam.items()]
                         for k, fam in sorted(self.f0_k.items())}}

    @classmethod
    def from_json(cls, F: Pseudofunctor, d: dict) -> "DeformationData":
        order = int(d["order"])
        fam_k = {}
        for k in range(1, order + 1):
            fam = zero_family(F, 2)
            for e in d.get("fhat_k", {}).get(str(k), []):
                key = (tuple(e["objects"]), tuple(e["arrows"]))
                if key not in fam:
                    raise DeformationError(f"{key} is not a path of length two")
                v = list(fam[key])
                for i, c in e["coords"]:
                    v[i] = F.field(c)
                fam[key] = tuple(v)
            fam_k[k] = fam
        f0 = {int(k): {e["object"]: tuple(F.field(c) for c in e["coords"]) for e in v}
              for k, v in d.get("f0_k", {}).items()}
        return cls(F, order, fam_k, f0)


def zero_family(F: Pseudofunctor, n: int, H=None, H2=None) -> dict:
    """The zero family F^{(1,...,1)} => F^{(n)} (or H => H2) on n-paths."""
    cat = IterCategory(F, n)
    H = H or (1,) * n
    H2 = H2 or (n,)
    out = {}
    for objs, arrows in cat.paths:
        D = F.dhom(objs[0], objs[-1])
        out[(objs, arrows)] = D.zero(cat.component_objects(H, objs, arrows),
                                     cat.component_objects(H2, objs, arrows))
    return out


def null_deformation(F: Pseudofunctor, order: int) -> DeformationData:
    return DeformationData(F, order, {k: zero_family(F, 2) for k in range(1, order + 1)})


# --- structural equations ---------------------------------------------------------------

class Structure:
    """Cached σ-families of the γ_k and the categories C^3(F), C^4(F)."""

    def __init__(self, d: DeformationData):
        self.d, self.F = d, d.base
        self.cat3 = IterCategory(self.F, 3)
        self._sig: dict = {}

    def sigma(self, key: str, k: int) -> dict:
        idx = (key, k)
        if idx not in self._sig:
            i, _, _ = HEXAGON[key]
            self._sig[idx] = coface_family(self.F, 3, i, self.d.gamma(k), S11, S12)
        return self._sig[idx]

    def vert(self, g, f, chain) -> dict:
        return self.cat3.compose_families(g, f, *chain)

    def term(self, p: int, q: int) -> dict:
        """σ^{24}_p σ^{12}_q - σ^{34}_p σ^{13}_q."""
        a = self.vert(self.sigma("24", p), self.sigma("12", q), (S3, (2, 1), (3,)))
        b = self.vert(self.sigma("34", p), self.sigma("13", q), (S3, (1, 2), (3,)))
        return sub(a, b)

    def equation(self, m: int, lo: int = 0) -> dict:
        acc = zero_family(self.F, 3)
        for p in range(lo, m + 1 - lo):
            acc = add(acc, self.term(p, m - p))
        return acc


def check_deformation(d: DeformationData, limit: int = 50) -> Report:
    """Structural equations in degrees 0..n on every 3-path, the unit equalities
    for k = 1..n, and naturality of every γ_k."""
    rep = Report()
    F = d.base
    X2 = cochain_hom(F, 2)
    for k in range(1, d.order + 1):
        rep.checked += 1
        for objs in X2.contains(d.gamma(k)):
            rep.fail(f"γ_{k} is not natural at {objs}")
    st = Structure(d)
    rep.failures = []  # type: ignore[attr-defined]
    for m in range(0, d.order + 1):
        E = st.equation(m)
        for key, v in E.items():
            rep.checked += 1
            if not iszero(v):
                rep.failures.append((m, key))  # type: ignore[attr-defined]
                if len(rep.violations) < limit:
                    rep.fail(f"structural equation of degree {m} fails at {key[0]} {key[1]}")
    C, D = F.source, F.target
    for k in range(1, d.order + 1):
        g = d.gamma(k)
        for p in C.paths(1):
            (X, Y), (f,) = p.objs, p.arrows
            FX, FY, Ff = F.obj(X), F.obj(Y), F.F1(X, Y, f)
            one = F.dhom(X, Y).identity(Ff)
            eX, eY = C.ident[X], C.ident[Y]
            FeX, FeY = F.F1(X, X, eX), F.F1(Y, Y, eY)
            l = D.hcomp(FX, FX, FY, FeX, D.ident[FX], d.f0(k, X), Ff, Ff, one)
            r = D.hcomp(FX, FY, FY, Ff, Ff, one, FeY, D.ident[FY], d.f0(k, Y))
            rep.checked += 2
            if g[((X, X, Y), (eX, f))] != l:
                rep.fail(f"unit equality fails for γ_{k}(id, {f})")
                rep.failures.append((k, "triangle-left", f))  # type: ignore[attr-defined]
            if g[((X, Y, Y), (f, eY))] != r:
                rep.fail(f"unit equality fails for γ_{k}({f}, id)")
                rep.failures.append((k, "triangle-right", f))  # type: ignore[attr-defined]
    return rep


# --- deviation calculus -----------------------------------------------------------------

@dataclass
class DeviationSquare:
    """A square X -α-> Y -β-> Z, X -γ-> T -δ-> Z of truncated series in a category;
    the deviation is measured from the first path β∘α to the second δ∘γ."""

    category: object
    corners: tuple            # (X, Y, T, Z)
    alpha: TruncatedSeries
    beta: TruncatedSeries
    gamma: TruncatedSeries
    delta: TruncatedSeries

    def __post_init__(self):
        orders = {s.order for s in (self.alpha, self.beta, self.gamma, self.delta)}
        if len(orders) != 1:
            raise ValueError("edges must share one truncation order")

    @property
    def order(self) -> int:
        return self.alpha.order

    def _mul(self, x, y, z):
        return lambda g, f: self.category.compose(g, f, x, y, z)

    def first(self) -> TruncatedSeries:
        X, Y, T, Z = self.corners
        return series_mul(self.beta, self.alpha, self._mul(X, Y, Z))

    def second(self) -> TruncatedSeries:
        X, Y, T, Z = self.corners
        return series_mul(self.delta, self.gamma, self._mul(X, T, Z))

    def difference(self) -> TruncatedSeries:
        return self.second() - self.first()


@dataclass
class Deviation:
    degree: int | None        # None: commutes through the truncation order
    value: object = None

    @property
    def commutes(self) -> bool:
        return self.degree is None


def deviation(sq: DeviationSquare) -> Deviation:
    lead = sq.difference().leading()
    return Deviation(None) if lead is None else Deviation(*lead)


def paste(sq1: DeviationSquare, sq2: DeviationSquare) -> DeviationSquare:
    """Paste sq2 (left edge β of sq1 reused) to the right of sq1."""
    X, Y, T, Z = sq1.corners
    Y2, U, Z2, V = sq2.corners
    if (Y2, Z2) != (Y, Z) or sq1.beta != sq2.gamma:
        raise ValueError("squares do not share the edge β")
    C = sq1.category
    top = series_mul(sq2.alpha, sq1.alpha, lambda g, f: C.compose(g, f, X, Y, U))
    bottom = series_mul(sq2.delta, sq1.delta, lambda g, f: C.compose(g, f, T, Z, V))
    return DeviationSquare(C, (X, U, T, V), top, sq2.beta, sq1.gamma, bottom)


def check_additivity(sq1: DeviationSquare, sq2: DeviationSquare) -> Report:
    """Deviation of the pasted square against ξ_0∘Ψ_1 + Ψ_2∘α_0."""
    rep = Report()
    d1, d2 = deviation(sq1), deviation(sq2)
    whole = deviation(paste(sq1, sq2))
    rep.checked += 1
    if d1.degree is None or d1.degree != d2.degree:
        rep.fail("both squares must first deviate in the same degree")
        return rep
    X, Y, T, Z = sq1.corners
    _, U, _, V = sq2.corners
    C = sq1.category
    predicted = add(C.compose(sq2.delta[0], d1.value, X, Z, V), C.compose(d2.value, sq1.alpha[0], X, Y, V))
    rep.predicted, rep.direct = predicted, whole  # type: ignore[attr-defined]
    n1 = d1.degree
    diff = paste(sq1, sq2).difference()
    if diff[n1] != predicted:
        rep.fail(f"degree-{n1} coefficient of the pasted square differs from ξ_0∘Ψ_1 + Ψ_2∘α_0")
    if any(not iszero(diff[m]) for m in range(n1)):
        rep.fail("pasted square fails to commute below the common degree")
    return rep


class FamilyCategory:
    """compose() on families of C^n(F) (for deviation squares of families)."""

    def __init__(self, cat: IterCategory):
        self.cat = cat

    def compose(self, g, f, x, y, z):
        return self.cat.compose_families(g, f, x, y, z)


def structural_square(d: DeformationData, N: int | None = None) -> DeviationSquare:
    """The hexagon square with first path σ^{34}·σ^{13} and second σ^{24}·σ^{12},
    so that its deviation in degree n+1 is the obstruction Ψ."""
    N = N or d.order + 2
    st = Structure(d)
    ser = lambda key: TruncatedSeries.from_list([st.sigma(key, k) for k in range(N)], N)
    return DeviationSquare(FamilyCategory(st.cat3), (S3, (1, 2), (2, 1), (3,)),
                           ser("13"), ser("34"), ser("12"), ser("24"))


# --- obstruction and extension ------------------------------------------------------------

def obstruction_family(d: DeformationData) -> dict:
    """Ψ = Σ_{p+q=n+1, 1<=p,q<=n} σ^{24}_p σ^{12}_q - σ^{34}_p σ^{13}_q."""
    return Structure(d).equation(d.order + 1, lo=1)


@dataclass
class Obstruction:
    order: int
    psi: dict
    coords: tuple
    natural: bool
    delta_psi_zero: bool
    deviation_matches: bool
    class_vanishes: bool
    extension: dict | None = None
    certificate: dict | None = None

    def to_json(self, field) -> dict:
        enc = field.to_json
        return {"degree": 3, "order": self.order,
                "psi": [[i, enc(c)] for i, c in enumerate(self.coords) if c],
                "delta_psi_norm": 0 if self.delta_psi_zero else 1,
                "natural": self.natural, "deviation_matches": self.deviation_matches,
                "class_vanishes": self.class_vanishes,
                "extension": "present" if self.extension is not None else "absent",
                "certificate": self.certificate}


def _require_normalized(d: DeformationData):
    if not d.base.unitary:
        raise DeformationError("obstruction theory needs a unitary pseudofunctor")
    if not d.normalized:
        raise DeformationError("obstruction theory needs F_0^k = 0 for k >= 1")
    rep = check_deformation(d)
    if not rep.ok:
        raise DeformationError("invalid deformation: " + "; ".join(rep.violations[:5]))


class LinearData:
    """δ: X^2 -> X^3 and the unit (triangle) constraints on X^2, in Nat coordinates."""

    def __init__(self, F: Pseudofunctor):
        self.F = F
        self.X1, self.X2, self.X3 = cochain_hom(F, 1), cochain_hom(F, 2), cochain_hom(F, 3)
        cx = padding_complex(F, 3)
        self.complex = cx
        self.delta2, self.delta3 = cx.delta[2], cx.delta[3]
        self.triangle_rows = self._triangles()

    def _triangles(self) -> list:
        F, C = self.F, self.F.source
        n = self.X2.dim
        cols = []
        keys = [((X, X, Y), (C.ident[X], f)) for (X, Y), (f,) in ((p.objs, p.arrows) for p in C.paths(1))]
        keys += [((X, Y, Y), (f, C.ident[Y])) for (X, Y), (f,) in ((p.objs, p.arrows) for p in C.paths(1))]
        keys = list(dict.fromkeys(keys))
        for j in range(n):
            e = [F.field.zero] * n
            e[j] = F.field.one
            fam = self.X2.to_family(e)
            col = []
            for k in keys:
                col.extend(fam[k])
            cols.append(col)
        nrows = len(cols[0]) if cols else 0
        return [tuple(c[r] for c in cols) for r in range(nrows)]

    def solve(self, psi_coords) -> tuple:
        """(normalized solution or None, plain solution or None)."""
        A = list(self.delta3) + self.triangle_rows
        b = list(psi_coords) + [self.F.field.zero] * len(self.triangle_rows)
        n = self.X2.dim
        norm = solve_linear(A, b, n, self.F.field) if A else None
        plain = solve_linear(list(self.delta3), list(psi_coords), n, self.F.field) if self.delta3 else None
        return norm, plain


def obstruction(d: DeformationData, ld: LinearData | None = None) -> Obstruction:
    _require_normalized(d)
    F = d.base
    ld = ld or LinearData(F)
    psi = obstruction_family(d)
    natural = not ld.X3.contains(psi)
    coords = ld.X3.from_family(psi, check=False)
    dpsi = padding_coboundary(F, psi, 4)
    sq = structural_square(d)
    dev = deviation(sq)
    dev_val = dev.value if dev.degree == d.order + 1 else (zero_family(F, 3) if dev.commutes else None)
    matches = dev_val == psi if dev_val is not None else False
    norm, plain = ld.solve(coords)
    ext, cert = None, None
    if norm is not None and norm.consistent:
        ext = ld.X2.to_family(norm.particular)
    elif ld.X2.dim == 0 and iszero(coords):
        ext = {}
    else:
        cert = certificate(ld, coords)
    vanishes = (plain is not None and plain.consistent) or (not ld.delta3 and iszero(coords))
    return Obstruction(d.order, psi, coords, natural, iszero(dpsi), matches, vanishes, ext, cert)


def certificate(ld: LinearData, coords) -> dict:
    """Rank certificate that Ψ is outside im δ (+ unit constraints)."""
    n = ld.X2.dim
    A = list(ld.delta3) + ld.triangle_rows
    b = list(coords) + [ld.F.field.zero] * len(ld.triangle_rows)
    cols = n
    r = rank(A, cols, ld.F.field) if A else 0
    aug = [tuple(row) + (x,) for row, x in zip(A, b)]
    ra = rank(aug, cols + 1, ld.F.field) if aug else 0
    plain_r = rank(ld.delta3, cols, ld.F.field) if ld.delta3 else 0
    plain_aug = rank([tuple(row) + (x,) for row, x in zip(ld.delta3, coords)], cols + 1, ld.F.field) \
        if ld.delta3 else 0
    return {"rank_delta_with_units": r, "rank_augmented_with_units": ra,
            "rank_delta": plain_r, "rank_augmented": plain_aug,
            "inconsistent": ra > r}


@dataclass
class ExtensionResult:
    extended: DeformationData | None
    obstruction: Obstruction

    @property
    def obstructed(self) -> bool:
        return self.extended is None


def extend(d: DeformationData, ld: LinearData | None = None, rng: random.Random | None = None) -> ExtensionResult:
    """Solve δ(γ_{n+1}) = Ψ with γ_{n+1}(id, f) = γ_{n+1}(f, id) = 0.  With rng a random
    element of the solution space is returned instead of the particular one."""
    ld = ld or LinearData(d.base)
    ob = obstruction(d, ld)
    if ob.extension is None:
        return ExtensionResult(None, ob)
    gamma = ob.extension
    if rng is not None:
        norm, _ = ld.solve(ob.coords)
        x = list(norm.particular)
        for v in norm.kernel:
            c = d.base.field.random(rng, 2)
            x = [a + c * b for a, b in zip(x, v)]
        gamma = ld.X2.to_family(tuple(x))
    return ExtensionResult(d.extended(gamma), ob)


def random_deformation(F: Pseudofunctor, order: int, rng: random.Random,
                       ld: LinearData | None = None) -> DeformationData | None:
    """A random valid deformation built by extending the null one degree by degree
    with random solutions; None if some step is obstructed."""
    ld = ld or LinearData(F)
    d = DeformationData(F, 0, {})
    for _ in range(order):
        res = extend(d, ld, rng)
        if res.obstructed:
            return None
        d = res.extended
    return d


# --- first-order classification ------------------------------------------------------------

@dataclass
class FirstOrderClassification:
    dim_solutions: int
    dim_classes: int
    dim_h2: int
    solutions_equal_cocycles: bool
    representatives: list

    @property
    def matches(self) -> bool:
        return self.solutions_equal_cocycles and self.dim_classes == self.dim_h2

    def to_json(self) -> dict:
        return {"dim_solutions": self.dim_solutions, "dim_classes": self.dim_classes,
                "dim_h2": self.dim_h2, "solutions_equal_cocycles": self.solutions_equal_cocycles,
                "matches": self.matches}


def first_order_map(F: Pseudofunctor, ld: LinearData) -> list:
    """Matrix of x -> degree-1 structural equation of the order-1 data γ_1 = x."""
    n = ld.X2.dim
    cols = []
    for j in range(n):
        e = [F.field.zero] * n
        e[j] = F.field.one
        d = DeformationData(F, 1, {1: ld.X2.to_family(tuple(e))})
        cols.append(ld.X3.from_family(Structure(d).equation(1), check=False))
    m = ld.X3.dim
    return [tuple(c[r] for c in cols) for r in range(m)]


def _span(vectors, n, field) -> Echelon:
    e = Echelon(n, field)
    for v in vectors:
        e.add(v)
    return e


def classify_first_order(F: Pseudofunctor, ld: LinearData | None = None) -> FirstOrderClassification:
    if not F.unitary:
        raise DeformationError("classification needs a unitary pseudofunctor")
    ld = ld or LinearData(F)
    fld, n = F.field, ld.X2.dim
    L = first_order_map(F, ld)
    sols = nullspace(L + ld.triangle_rows, n, fld) if (L or ld.triangle_rows) else \
        [tuple(fld.one if i == j else fld.zero for i in range(n)) for j in range(n)]
    cocyc = nullspace(list(ld.delta3) + ld.triangle_rows, n, fld) if (ld.delta3 or ld.triangle_rows) else sols
    S, Z = _span(sols, n, fld), _span(cocyc, n, fld)
    equal = S.rank == Z.rank and all(Z.contains(v) for v in sols)
    d2 = ld.delta2
    bounds = [tuple(row[j] for row in d2) for j in range(ld.X1.dim)] if d2 else []
    both = _span(list(sols) + bounds, n, fld)
    B = _span(bounds, n, fld)
    inter = S.rank + B.rank - both.rank
    h2 = _h(ld, 2)
    reps = []
    cls = _span(bounds, n, fld)
    for v in sols:
        if cls.add(v):
            reps.append(v)
    return FirstOrderClassification(S.rank, S.rank - inter, h2, equal, reps)


def _h(ld: LinearData, n: int) -> int:
    from .csso import cohomology
    return cohomology(ld.complex)[n]


# --- the cube -------------------------------------------------------------------------------

# σ^{i,4} as cofaces of the hexagon edges; every σ arises twice and both are compared
CUBE = {
    0: [(4, "12")], 1: [(4, "13"), (0, "12")], 2: [(0, "13")], 3: [(1, "13")],
    4: [(4, "24"), (1, "12")], 5: [(0, "24"), (2, "13")], 6: [(4, "34"), (2, "12")],
    7: [(0, "34"), (3, "13")], 8: [(3, "12")], 9: [(2, "34"), (3, "34")],
    10: [(1, "34"), (3, "24")], 11: [(1, "24"), (2, "24")],
}
CUBE_ENDS = {0: ((1, 1, 1, 1), (2, 1, 1)), 1: ((1, 1, 1, 1), (1, 2, 1)), 2: ((1, 1, 1, 1), (1, 1, 2)),
             3: ((2, 1, 1), (2, 2)), 4: ((2, 1, 1), (3, 1)), 5: ((1, 2, 1), (1, 3)),
             6: ((1, 2, 1), (3, 1)), 7: ((1, 1, 2), (1, 3)), 8: ((1, 1, 2), (2, 2)),
             9: ((1, 3), (4,)), 10: ((2, 2), (4,)), 11: ((3, 1), (4,))}


class Cube:
    def __init__(self, d: DeformationData):
        self.d, self.F = d, d.base
        self.st = Structure(d)
        self.cat4 = IterCategory(self.F, 4)
        self._s: dict = {}

    def sigma(self, i: int, k: int, which: int = 0) -> dict:
        key = (i, k, which)
        if key not in self._s:
            face, edge = CUBE[i][which]
            _, src, tgt = HEXAGON[edge]
            self._s[key] = coface_family(self.F, 4, face, self.st.sigma(edge, k), src, tgt)
        return self._s[key]

    def consistent(self, k: int) -> bool:
        return all(self.sigma(i, k, 0) == self.sigma(i, k, w) for i in CUBE for w in range(len(CUBE[i])))

    def series(self, i: int, N: int) -> TruncatedSeries:
        return TruncatedSeries.from_list([self.sigma(i, k) for k in range(N)], N)

    def path(self, edges, N: int) -> TruncatedSeries:
        fc = FamilyCategory(self.cat4)
        acc = self.series(edges[0], N)
        src = CUBE_ENDS[edges[0]][0]
        mid = CUBE_ENDS[edges[0]][1]
        for e in edges[1:]:
            tgt = CUBE_ENDS[e][1]
            acc = series_mul(self.series(e, N), acc, lambda g, f, a=src, b=mid, c=tgt: fc.compose(g, f, a, b, c))
            mid = tgt
        return acc

    def top_face(self, N: int) -> bool:
        """σ^3·σ^0 = σ^8·σ^2 coefficientwise."""
        a, b = self.path([0, 3], N), self.path([2, 8], N)
        return all(x == y for x, y in zip(a.coeffs, b.coeffs))

    def o(self, i: int, psi: dict, H, H2) -> dict:
        return coface_family(self.F, 4, i, psi, H, H2)

    def dev_d1(self, psi: dict) -> dict:
        c = self.cat4
        A = lambda g, f, x, y, z: c.compose_families(g, f, x, y, z)
        s0, s1, s11 = self.sigma(0, 0), self.sigma(1, 0), self.sigma(11, 0)
        t1 = A(s11, self.o(4, psi, S3, (3,)), (1, 1, 1, 1), (3, 1), (4,))
        t2 = A(self.o(1, psi, S3, (3,)), s0, (1, 1, 1, 1), (2, 1, 1), (4,))
        t3 = A(self.o(2, psi, S3, (3,)), s1, (1, 1, 1, 1), (1, 2, 1), (4,))
        return add(sub(t1, t2), t3)

    def dev_d2(self, psi: dict) -> dict:
        c = self.cat4
        A = lambda g, f, x, y, z: c.compose_families(g, f, x, y, z)
        s2, s9 = self.sigma(2, 0), self.sigma(9, 0)
        t1 = A(s9, self.o(0, psi, S3, (3,)), (1, 1, 1, 1), (1, 3), (4,))
        t2 = A(self.o(3, psi, S3, (3,)), s2, (1, 1, 1, 1), (1, 1, 2), (4,))
        return sub(t2, t1)

    def boundary_deviation(self):
        """Deviation of the common boundary of D_1 and D_2, from σ^9σ^5σ^1 to σ^10σ^3σ^0."""
        N = self.d.order + 2
        diff = self.path([0, 3, 10], N) - self.path([1, 5, 9], N)
        return diff.leading(), diff


@dataclass
class CubeReport:
    consistent: bool
    top_face: bool
    face_deviations: bool
    d1_equals_boundary: bool
    d2_equals_boundary: bool
    d1_minus_d2_is_delta_psi: bool
    delta_psi_zero: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())


def check_cube(d: DeformationData) -> CubeReport:
    """Faces of the cube are cofaces of the structural square,
    the top face commutes, Dev(D_1) and Dev(D_2) both equal the boundary deviation,
    and their difference is δΨ computed by the padding formula."""
    cube = Cube(d)
    F = d.base
    n = d.order
    N = n + 2
    psi = obstruction_family(d)
    consistent = all(cube.consistent(k) for k in range(n + 1))
    top = cube.top_face(N)
    faces = {4: [0, 4, 1, 6], 1: [4, 11, 3, 10], 2: [6, 11, 5, 9], 0: [1, 5, 2, 7], 3: [8, 10, 7, 9]}
    face_ok = True
    for i, (t, r, l, b) in faces.items():
        first = cube.path([l, b], N)
        second = cube.path([t, r], N)
        diff = second - first
        expect = cube.o(i, psi, S3, (3,))
        if any(not iszero(diff[m]) for m in range(n + 1)) or diff[n + 1] != expect:
            face_ok = False
    lead, diff = cube.boundary_deviation()
    bdev = diff[n + 1]
    d1, d2 = cube.dev_d1(psi), cube.dev_d2(psi)
    below = all(iszero(diff[m]) for m in range(n + 1))
    dpsi = padding_coboundary(F, psi, 4)
    return CubeReport(consistent, top, face_ok, below and d1 == bdev, below and d2 == bdev,
                      sub(d1, d2) == dpsi, iszero(dpsi))


# --- random squares for the additivity check ---------------------------------------------

def random_series(cat, x, y, N: int, rng: random.Random, lo: int = 0, head=None) -> TruncatedSeries:
    """Random series x -> y with zero coefficients in degrees 1..lo-1 (and c_0 = head if given)."""
    fld = cat.field
    dim = cat.dim(x, y)
    rnd = lambda: tuple(fld.random(rng, 2) for _ in range(dim))
    zero = tuple(fld.zero for _ in range(dim))
    coeffs = [tuple(head) if head is not None else rnd()]
    coeffs += [rnd() if m >= lo else zero for m in range(1, N)]
    return TruncatedSeries(N, tuple(coeffs))


def unipotent_inverse(cat, s: TruncatedSeries, x) -> TruncatedSeries:
    """Inverse of an endomorphism series with s_0 = id_x."""
    one = TruncatedSeries.from_list([tuple(cat.identity(x))], s.order)
    u = one - s
    mul = lambda g, f: cat.compose(g, f, x, x, x)
    acc, power = one, one
    for _ in range(1, s.order):
        power = series_mul(power, u, mul)
        acc = acc + power
    return acc


def random_square_pair(cat, N: int, rng: random.Random, n: int = 0, objects=None):
    """Two squares sharing the edge β, each commuting modulo h^{n+1} and deviating in
    degree n+1.  γ and ε are unipotent endomorphisms so that δ and η can be solved for."""
    objects = list(objects or cat.objects)
    for _ in range(100):
        X = rng.choice(objects)
        Y = rng.choice([y for y in objects if cat.dim(X, y)] or [X])
        Z = rng.choice([z for z in objects if cat.dim(Y, z)] or [Y])
        V = rng.choice([v for v in objects if cat.dim(Z, v)] or [Z])
        if not all(cat.dim(a, b) for a, b in ((X, Y), (Y, Z), (Z, V), (X, X), (Y, Y))):
            continue
        alpha = random_series(cat, X, Y, N, rng)
        beta = random_series(cat, Y, Z, N, rng)
        xi = random_series(cat, Z, V, N, rng)
        gamma = random_series(cat, X, X, N, rng, 1, cat.identity(X))
        eps = random_series(cat, Y, Y, N, rng, 1, cat.identity(Y))
        bump1 = random_series(cat, X, Z, N, rng, n + 1, cat.zero(X, Z))
        bump2 = random_series(cat, Y, V, N, rng, n + 1, cat.zero(Y, V))
        ba = series_mul(beta, alpha, lambda g, f: cat.compose(g, f, X, Y, Z))
        delta = series_mul(ba + bump1, unipotent_inverse(cat, gamma, X),
                           lambda g, f: cat.compose(g, f, X, X, Z))
        xb = series_mul(xi, beta, lambda g, f: cat.compose(g, f, Y, Z, V))
        eta = series_mul(xb - bump2, unipotent_inverse(cat, eps, Y),
                         lambda g, f: cat.compose(g, f, Y, Y, V))
        sq1 = DeviationSquare(cat, (X, Y, X, Z), alpha, beta, gamma, delta)
        sq2 = DeviationSquare(cat, (Y, Y, Z, V), eps, eta, beta, xi)
        if deviation(sq1).degree == n + 1 and deviation(sq2).degree == n + 1:
            return sq1, sq2
    raise ValueError("could not build a deviating pair")


# --- an obstructed instance ---------------------------------------------------------------

def klein_model():
    """Z/2 x Z/2 (elements 0..3 under xor) with End = GF(2), c ≡ 1."""
    from .pseudofunctor import modular_models
    return modular_models()["klein/GF(2)"]


def klein_obstructed() -> DeformationData:
    """First-order deformation by the cocycle x_1 y_2; it does not extend to order two."""
    F = klein_model()
    K = F.field
    fam = {k: (K((f & 1) * ((g >> 1) & 1)),) for k, (f, g) in ((k, k[1]) for k in F.fhat_family())}
    return DeformationData(F, 1, {1: fam})
