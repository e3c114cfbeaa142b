"""Enhanced 2-cosemisimplicial objects in Cat_K and their cochain complexes.

A model answers four questions: the category in each degree, the coface
functor F^i_n : C^{n-1} -> C^n, the component of the coherer
τ^n_{ij} : F^j_{n+1} F^i_n => F^i_{n+1} F^{j-1}_n at an object, and (when
enhanced) the component of φ : F^1_1 => F^0_1.  Morphisms are coordinate
tuples in the hom bases of the categories.
"""
from __future__ import annotations

import itertools
import random
import dataclasses
from dataclasses import dataclass
from functools import lru_cache

from .coface_graphs import CofaceGraph, component_point
from .coherence_words import (_walk, apply_path_functor, apply_path_object, canonical_word,
                              evaluate_word, letter_component, make_word)
from .linalg import Echelon, matmul, rank
from .lincat import (FunctionFunctor, LinCategory, Report, indiscrete_category, matrix_algebra,
                     one_object_category, rationals, dual_numbers)
from .scalars import unit


class ConnectivityError(ValueError):
    pass


class EnhancedCSSO:
    """Interface; subclasses provide categories, cofaces and coherers up to max_degree."""

    max_degree: int = 0
    enhanced: bool = False
    name: str = ""

    def category(self, n: int) -> LinCategory:
        raise NotImplementedError

    def coface(self, n: int, i: int):
        raise NotImplementedError

    def tau(self, n: int, i: int, j: int, x, inverse: bool = False):
        raise NotImplementedError

    def phi(self, x, inverse: bool = False):
        raise ConnectivityError("this object carries no enhancement")

    def check_indices(self, n: int, i: int, j: int):
        if not (1 <= n and n + 1 <= self.max_degree and 0 <= i < j <= n + 1):
            raise IndexError(f"τ^{n}_{{{i}{j}}} outside the model (max degree {self.max_degree})")


# --- conjugation towers ---------------------------------------------------------

class TowerCSSO(EnhancedCSSO):
    """C^n = C for every n and F^i_n(m) = u^i_n(y) m u^i_n(x)^{-1}.

    With τ^n_{ij} = (u^i_{n+1} u^{j-1}_n)(u^j_{n+1} u^i_n)^{-1} and
    φ = u^0_1 (u^1_1)^{-1} every coherence diagram commutes, so these are
    valid enhanced objects with non-trivial (and, over matrix algebras,
    non-commuting) coherers."""

    def __init__(self, C: LinCategory, max_degree: int, u: dict, enhanced: bool = True, name=""):
        self.C, self.max_degree, self.enhanced = C, max_degree, enhanced
        self.u = u
        self.u_inv = {key: {x: _inverse(C, a, x) for x, a in fam.items()} for key, fam in u.items()}
        self.name = name or "tower"
        self._functors: dict = {}

    def category(self, n):
        if not 0 <= n <= self.max_degree:
            raise IndexError(f"degree {n} outside 0..{self.max_degree}")
        return self.C

    def coface(self, n, i):
        key = (n, i)
        F = self._functors.get(key)
        if F is None:
            if not (1 <= n <= self.max_degree and 0 <= i <= n):
                raise IndexError(f"F^{i}_{n} outside the model")
            C, u, ui = self.C, self.u[key], self.u_inv[key]

            def mor(v, x, y, C=C, u=u, ui=ui):
                return C.compose(u[y], C.compose(v, ui[x], x, x, y), x, y, y)

            F = self._functors[key] = FunctionFunctor(C, C, lambda x: x, mor)
        return F

    def _prod(self, x, *factors):
        C = self.C
        acc = C.identity(x)
        for f in factors:
            acc = C.compose(acc, f, x, x, x)
        return acc

    def tau(self, n, i, j, x, inverse=False):
        self.check_indices(n, i, j)
        u, ui = self.u, self.u_inv
        fwd = (u[(n + 1, i)][x], u[(n, j - 1)][x], ui[(n, i)][x], ui[(n + 1, j)][x])
        if inverse:
            return self._prod(x, u[(n + 1, j)][x], u[(n, i)][x], ui[(n, j - 1)][x], ui[(n + 1, i)][x])
        return self._prod(x, *fwd)

    def phi(self, x, inverse=False):
        if not self.enhanced:
            raise ConnectivityError("this object carries no enhancement")
        if inverse:
            return self._prod(x, self.u[(1, 1)][x], self.u_inv[(1, 0)][x])
        return self._prod(x, self.u[(1, 0)][x], self.u_inv[(1, 1)][x])

    def to_json(self) -> dict:
        enc = self.C.field.to_json
        return {"kind": "tower", "max_degree": self.max_degree, "enhanced": self.enhanced,
                "category": self.C.to_json() if hasattr(self.C, "to_json") else None,
                "u": [{"n": n, "i": i, "object": x, "coords": [enc(c) for c in a]}
                      for (n, i), fam in sorted(self.u.items()) for x, a in fam.items()],
                "name": self.name}

    @classmethod
    def from_json(cls, d: dict) -> "TowerCSSO":
        from .lincat import TableCategory, _hashable
        if not d.get("category"):
            raise ValueError("tower JSON needs its category")
        C = TableCategory.from_json(d["category"])
        u: dict = {}
        for e in d["u"]:
            u.setdefault((e["n"], e["i"]), {})[_hashable(e["object"])] = tuple(C.field(c) for c in e["coords"])
        return cls(C, d["max_degree"], u, d.get("enhanced", True), d.get("name", ""))


def _inverse(C, a, x):
    inv = C.inverse(a, x, x)
    if inv is None:
        raise ValueError(f"tower element at {x!r} is not invertible")
    return inv


def random_unit(C: LinCategory, x, rng: random.Random, bound: int = 2, tries: int = 200):
    for _ in range(tries):
        v = tuple(C.field.random(rng, bound) for _ in range(C.dim(x, x)))
        if C.inverse(v, x, x) is not None:
            return v
    raise ValueError(f"no invertible element found at {x!r}")


def identity_tower(C: LinCategory, max_degree: int, enhanced: bool = True) -> TowerCSSO:
    u = {(n, i): {x: C.identity(x) for x in C.objects}
         for n in range(1, max_degree + 1) for i in range(n + 1)}
    return TowerCSSO(C, max_degree, u, enhanced, "identity tower")


def conjugation_tower(C: LinCategory, max_degree: int, rng: random.Random,
                      enhanced: bool = True, name: str = "") -> TowerCSSO:
    u = {(n, i): {x: random_unit(C, x, rng) for x in C.objects}
         for n in range(1, max_degree + 1) for i in range(n + 1)}
    return TowerCSSO(C, max_degree, u, enhanced, name or "conjugation tower")


def tower_bases():
    """Small base categories for random towers, commutative and not."""
    return [
        ("M2", one_object_category(matrix_algebra(2))),
        ("T2", one_object_category(matrix_algebra(2, upper=True))),
        ("Q on two objects", indiscrete_category(rationals(), ["X", "Y"])),
        ("Q[x]/(x^2) on two objects", indiscrete_category(dual_numbers(), ["X", "Y"])),
        ("M2 on two objects", indiscrete_category(matrix_algebra(2), ["X", "Y"])),
    ]


def random_towers(count: int, max_degree: int, seed: int = 0, enhanced: bool = True) -> list:
    rng = random.Random(seed)
    bases = tower_bases()
    out = []
    for t in range(count):
        name, C = bases[t % len(bases)]
        out.append(conjugation_tower(C, max_degree, rng, enhanced, f"tower over {name} #{t}"))
    return out


class PerturbedCSSO(EnhancedCSSO):
    """A model with one coherer component replaced (for negative tests)."""

    def __init__(self, base: EnhancedCSSO, n: int, i: int, j: int, x, new_value, new_inverse=None):
        self.base = base
        self.max_degree, self.enhanced, self.name = base.max_degree, base.enhanced, base.name + " (perturbed)"
        self.key = (n, i, j, x)
        self.value = tuple(new_value)
        C = base.category(n + 1)
        a = base.coface(n + 1, j).obj(base.coface(n, i).obj(x))
        b = base.coface(n + 1, i).obj(base.coface(n, j - 1).obj(x))
        self.inv = new_inverse if new_inverse is not None else C.inverse(self.value, a, b)

    def category(self, n):
        return self.base.category(n)

    def coface(self, n, i):
        return self.base.coface(n, i)

    def tau(self, n, i, j, x, inverse=False):
        if (n, i, j, x) == self.key:
            return self.inv if inverse else self.value
        return self.base.tau(n, i, j, x, inverse)

    def phi(self, x, inverse=False):
        return self.base.phi(x, inverse)


# --- axiom checks ------------------------------------------------------------------

def hexagon_words(s: int, i: int, j: int, k: int):
    """The two sides of the coherence hexagon at the vertex (i, j, k) of G_{s,2}."""
    g = _graph(s, 2, False)
    v = (i, j, k)
    return (make_word(g, v, _walk(s, v, [0, 1, 0])), make_word(g, v, _walk(s, v, [1, 0, 1])))


def phi_relation_words():
    g = _graph(1, 1, True)
    v = (1, 2)
    return (make_word(g, v, _walk(1, v, [0, "phi", 0])), make_word(g, v, _walk(1, v, ["phi", 0, "phi"])))


@lru_cache(maxsize=64)
def _graph(s, k, enhanced):
    return CofaceGraph(s, k, enhanced)


def check_csso(m: EnhancedCSSO, naturality: bool = True, limit: int = 100) -> Report:
    """Hexagons for all admissible (i, j, k) and degrees, the φ relation, the
    inverse pairs, and (optionally) naturality of every coherer on basis morphisms."""
    rep = Report()
    rep.failed_hexagons = []  # type: ignore[attr-defined]
    N = m.max_degree
    for s in range(1, N - 1):
        for i, j, k in itertools.combinations(range(s + 3), 3):
            w1, w2 = hexagon_words(s, i, j, k)
            for x in m.category(s - 1).objects:
                rep.checked += 1
                if evaluate_word(w1, m, x) != evaluate_word(w2, m, x):
                    rep.fail(f"hexagon (i,j,k)=({i},{j},{k}) in degree {s} fails at {x!r}")
                    rep.failed_hexagons.append((s, i, j, k))  # type: ignore[attr-defined]
    if m.enhanced and N >= 2:
        w1, w2 = phi_relation_words()
        for x in m.category(0).objects:
            rep.checked += 1
            if evaluate_word(w1, m, x) != evaluate_word(w2, m, x):
                rep.fail(f"φ relation fails at {x!r}")
    for n in range(1, N):
        C = m.category(n + 1)
        for i, j in itertools.combinations(range(n + 2), 2):
            for x in m.category(n - 1).objects:
                a = m.coface(n + 1, j).obj(m.coface(n, i).obj(x))
                b = m.coface(n + 1, i).obj(m.coface(n, j - 1).obj(x))
                t, ti = m.tau(n, i, j, x), m.tau(n, i, j, x, inverse=True)
                rep.checked += 1
                if C.compose(ti, t, a, b, a) != tuple(C.identity(a)) or \
                        C.compose(t, ti, b, a, b) != tuple(C.identity(b)):
                    rep.fail(f"τ^{n}_{{{i}{j}}} at {x!r} is not inverse to its declared inverse")
                if naturality:
                    for msg in _tau_naturality(m, n, i, j):
                        rep.fail(msg)
                        if len(rep.violations) >= limit:
                            return rep
                    break
    if m.enhanced and N >= 1:
        C1 = m.category(1)
        for x in m.category(0).objects:
            a, b = m.coface(1, 1).obj(x), m.coface(1, 0).obj(x)
            p, pi = m.phi(x), m.phi(x, inverse=True)
            rep.checked += 1
            if C1.compose(pi, p, a, b, a) != tuple(C1.identity(a)):
                rep.fail(f"φ at {x!r} is not inverse to its declared inverse")
    return rep


def _tau_naturality(m, n, i, j):
    C0, C = m.category(n - 1), m.category(n + 1)
    A = (m.coface(n, i), m.coface(n + 1, j))
    B = (m.coface(n, j - 1), m.coface(n + 1, i))
    for x in C0.objects:
        for y in C0.objects:
            for b, v in enumerate(C0.basis(x, y)):
                fa, ax, ay = apply_chain(A, v, x, y)
                fb, bx, by = apply_chain(B, v, x, y)
                lhs = C.compose(fb, m.tau(n, i, j, x), ax, bx, by)
                rhs = C.compose(m.tau(n, i, j, y), fa, ax, ay, by)
                if lhs != rhs:
                    yield f"τ^{n}_{{{i}{j}}} not natural on basis {b} of hom({x!r},{y!r})"


def apply_chain(functors, v, x, y):
    for F in functors:
        v, x, y = F.mor(v, x, y), F.obj(x), F.obj(y)
    return v, x, y


# --- references and connectors ---------------------------------------------------------

@dataclass(frozen=True)
class ReferenceChoice:
    base: object
    mu: dict
    nu: dict

    def __post_init__(self):
        for fam in (self.mu, self.nu):
            for n, t in fam.items():
                if len(t) != n or any(not 0 <= x <= q for q, x in enumerate(t, 1)):
                    raise ValueError(f"reference tuple {t} violates the bounds 0 <= t_q <= q")

    @classmethod
    def default(cls, base, N: int) -> "ReferenceChoice":
        """μ^n = (1,...,n) and ν^n = (0,...,n-1): iterates (1,...,1) and (n)."""
        return cls(base, {n: tuple(range(1, n + 1)) for n in range(1, N + 1)},
                   {n: tuple(range(n)) for n in range(1, N + 1)})

    @classmethod
    def zeros(cls, base, N: int) -> "ReferenceChoice":
        return cls(base, {n: (0,) * n for n in range(1, N + 1)}, {n: (0,) * n for n in range(1, N + 1)})

    @classmethod
    def dual_default(cls, base, N: int) -> "ReferenceChoice":
        return cls(base, {n: tuple(range(1, n + 1)) for n in range(1, N + 1)},
                   {n: (0,) * n for n in range(1, N + 1)})

    @classmethod
    def random(cls, base, N: int, rng: random.Random) -> "ReferenceChoice":
        pick = lambda n: tuple(rng.randint(0, q) for q in range(1, n + 1))
        return cls(base, {n: pick(n) for n in range(1, N + 1)}, {n: pick(n) for n in range(1, N + 1)})

    def with_base(self, base) -> "ReferenceChoice":
        return ReferenceChoice(base, self.mu, self.nu)

    def to_json(self) -> dict:
        return {"base": self.base, "mu": {str(n): list(t) for n, t in sorted(self.mu.items())},
                "nu": {str(n): list(t) for n, t in sorted(self.nu.items())}}

    @classmethod
    def from_json(cls, d: dict) -> "ReferenceChoice":
        base = d.get("base")
        base = tuple(base) if isinstance(base, list) else base
        return cls(base, {int(n): tuple(t) for n, t in d["mu"].items()},
                   {int(n): tuple(t) for n, t in d["nu"].items()})


def canonical_connector(m: EnhancedCSSO, source, target, x, allow_phi: bool | None = None):
    """Component at x of the canonical (enhanced) 2-isomorphism between two ∂-paths
    out of degree 0 of the same length."""
    source, target = tuple(source), tuple(target)
    if len(source) != len(target) or not source:
        raise ValueError("connector needs two ∂-paths of the same positive length")
    enhanced = m.enhanced if allow_phi is None else allow_phi
    k = len(source) - 1
    if k == 0:
        word = _length_one_word(enhanced, source, target)
        if word is None:
            raise ConnectivityError(f"no canonical path between {source} and {target}")
        C = m.category(1)
        if not word:
            return C.identity(m.coface(1, source[0]).obj(x))
        return letter_component(m, 1, word[0], x)
    g = _graph(1, k, enhanced)
    w = canonical_word(g, source, target)
    if w is None:
        raise ConnectivityError(f"no canonical path between {source} and {target} without φ")
    return evaluate_word(w, m, x)


def _length_one_word(enhanced, source, target):
    from .coface_graphs import phi_at
    if source == target:
        return []
    if not enhanced:
        return None
    e = phi_at(source) if source == (1,) else phi_at(target)
    return [e if source == (1,) else e.inverse()]


@dataclass
class DerivedComplex:
    degrees: list           # degrees n carrying modules M^n
    dims: dict              # n -> dim M^n
    delta: dict             # n -> matrix of δ: M^{n-1} -> M^n (rows = dim M^n)
    square_zero: dict       # n -> True when δ_{n+1} δ_n = 0 exactly
    field: object = None
    label: str = ""
    objects: dict = dataclasses.field(default_factory=dict)  # n -> (X_n, X'_n)

    @property
    def certified(self) -> bool:
        return all(self.square_zero.values())

    def to_json(self) -> dict:
        enc = self.field.to_json
        return {
            "label": self.label,
            "degrees": self.degrees,
            "dims": {str(n): d for n, d in self.dims.items()},
            "delta": {str(n): [[[j, enc(x)] for j, x in enumerate(row) if x] for row in M]
                      for n, M in self.delta.items()},
            "delta_squared_zero": {str(n): ok for n, ok in self.square_zero.items()},
            "cohomology": {str(n): d for n, d in cohomology(self).items()},
        }


def _matrix_from_columns(cols, nrows, field):
    return [tuple(c[r] for c in cols) for r in range(nrows)] if cols else [()] * nrows


def _certify(delta: dict, dims: dict, field) -> dict:
    out = {}
    for n in sorted(delta):
        if n + 1 in delta:
            prod = matmul(delta[n + 1], delta[n], field) if dims[n - 1] and dims[n + 1] else []
            out[n] = all(x == 0 for row in prod for x in row)
    return out


def path_object(m, tup, x):
    return apply_path_object(m, 1, tup, x)


def build_complex(m: EnhancedCSSO, ref: ReferenceChoice, top: int | None = None) -> DerivedComplex:
    """Modules M^n = Hom(X_n, X'_n) and δ(φ) = Σ_i (-1)^i α_{i,n} F^i_n(φ) β_{i,n}."""
    if not m.enhanced:
        raise ConnectivityError("the derived complex needs an enhanced object; "
                                "use dual_path_complex for plain ones")
    return _assemble(m, ref, top, range_of=lambda n: range(n + 1), sign=lambda i: (-1) ** i,
                     allow_phi=True, lo=1, label="derived")


def dual_path_complex(m: EnhancedCSSO, ref: ReferenceChoice, top: int | None = None) -> DerivedComplex:
    """The complex starting in degree 2 whose coboundary omits the extreme cofaces:
    δ = Σ_{i=1}^{n-1} (-1)^{i+1} α_{i,n} F^i_n(φ) β_{i,n}.  No enhancement is used;
    the references must keep every connector inside one component."""
    top = m.max_degree if top is None else top
    for n in range(3, top + 1):
        for i in range(1, n):
            for a, b in ((ref.mu[n], ref.mu[n - 1] + (i,)), (ref.nu[n - 1] + (i,), ref.nu[n])):
                if component_point(1, a) != component_point(1, b):
                    raise ConnectivityError(f"reference ∂-paths {a} and {b} lie in different "
                                            f"components of G_{{1,{n - 1}}}")
    return _assemble(m, ref, top, range_of=lambda n: range(1, n), sign=lambda i: (-1) ** (i + 1),
                     allow_phi=False, lo=2, label="dual path")


def _assemble(m, ref, top, range_of, sign, allow_phi, lo, label):
    top = m.max_degree if top is None else top
    if top > m.max_degree:
        raise ValueError(f"degree {top} exceeds the model's maximal degree {m.max_degree}")
    x = ref.base
    field_ = m.category(0).field
    objs = {n: (path_object(m, ref.mu[n], x), path_object(m, ref.nu[n], x)) for n in range(lo, top + 1)}
    dims = {n: m.category(n).dim(*objs[n]) for n in objs}
    delta = {}
    for n in range(lo + 1, top + 1):
        C = m.category(n)
        Xn, Xpn = objs[n]
        Xm, Xpm = objs[n - 1]
        terms = []
        for i in range_of(n):
            F = m.coface(n, i)
            beta = canonical_connector(m, ref.mu[n], ref.mu[n - 1] + (i,), x, allow_phi)
            alpha = canonical_connector(m, ref.nu[n - 1] + (i,), ref.nu[n], x, allow_phi)
            terms.append((sign(i), F, alpha, beta))
        cols = []
        for b in m.category(n - 1).basis(Xm, Xpm):
            acc = [field_.zero] * dims[n]
            for sg, F, alpha, beta in terms:
                img = F.mor(b, Xm, Xpm)
                A, B = F.obj(Xm), F.obj(Xpm)
                v = C.compose(alpha, C.compose(img, beta, Xn, A, B), Xn, B, Xpn)
                for r, c in enumerate(v):
                    if c:
                        acc[r] += sg * c
            cols.append(tuple(acc))
        delta[n] = _matrix_from_columns(cols, dims[n], field_)
    return DerivedComplex(list(range(lo, top + 1)), dims, delta, _certify(delta, dims, field_),
                          field_, label, objs)


def connector_equations(m: EnhancedCSSO, ref: ReferenceChoice, n: int) -> Report:
    """α_{j,n+1} F^j(α_{i,n}) τ^n_{j,i+1} = α_{i+1,n+1} F^{i+1}(α_{j,n}) for 0 <= j <= i <= n
    (and the mirrored identity for β), evaluated at the reference objects."""
    rep = Report()
    x = ref.base
    C = m.category(n + 1)
    Xp = path_object(m, ref.nu[n - 1], x) if n >= 2 else None
    X = path_object(m, ref.mu[n - 1], x) if n >= 2 else None
    Xp_top = path_object(m, ref.nu[n + 1], x)
    X_top = path_object(m, ref.mu[n + 1], x)
    con = lambda a, b: canonical_connector(m, a, b, x)
    for i in range(n + 1):
        for j in range(i + 1):
            if n < 2:
                continue
            rep.checked += 1
            Fj, Fi1 = m.coface(n + 1, j), m.coface(n + 1, i + 1)
            a_in, a_jn = con(ref.nu[n - 1] + (i,), ref.nu[n]), con(ref.nu[n - 1] + (j,), ref.nu[n])
            src_in = m.coface(n, i).obj(Xp)
            src_jn = m.coface(n, j).obj(Xp)
            Xn = path_object(m, ref.nu[n], x)
            t = m.tau(n, j, i + 1, Xp)
            lhs_mid = Fj.mor(a_in, src_in, Xn)
            o1 = Fi1.obj(src_jn)          # F^{i+1} F^j X'
            o2 = Fj.obj(src_in)           # F^j F^i X'
            lhs = C.compose(con(ref.nu[n] + (j,), ref.nu[n + 1]),
                            C.compose(lhs_mid, t, o1, o2, Fj.obj(Xn)), o1, Fj.obj(Xn), Xp_top)
            rhs = C.compose(con(ref.nu[n] + (i + 1,), ref.nu[n + 1]), Fi1.mor(a_jn, src_jn, Xn),
                            o1, Fi1.obj(Xn), Xp_top)
            if lhs != rhs:
                rep.fail(f"α-equation fails for (i,j)=({i},{j}) in degree {n}")
            rep.checked += 1
            b_in = con(ref.mu[n], ref.mu[n - 1] + (i,))
            b_jn = con(ref.mu[n], ref.mu[n - 1] + (j,))
            Xm = path_object(m, ref.mu[n], x)
            p1 = Fi1.obj(m.coface(n, j).obj(X))
            p2 = Fj.obj(m.coface(n, i).obj(X))
            left = C.compose(m.tau(n, j, i + 1, X),
                             C.compose(Fi1.mor(b_jn, Xm, m.coface(n, j).obj(X)),
                                       con(ref.mu[n + 1], ref.mu[n] + (i + 1,)), X_top, Fi1.obj(Xm), p1),
                             X_top, p1, p2)
            right = C.compose(Fj.mor(b_in, Xm, m.coface(n, i).obj(X)),
                              con(ref.mu[n + 1], ref.mu[n] + (j,)), X_top, Fj.obj(Xm), p2)
            if left != right:
                rep.fail(f"β-equation fails for (i,j)=({i},{j}) in degree {n}")
    return rep


# --- cochain isomorphisms ---------------------------------------------------------

@dataclass
class CochainIso:
    maps: dict          # n -> matrix M^n -> M̄^n
    commutes: dict      # n -> f^n δ = δ̄ f^{n-1}
    invertible: dict    # n -> full rank

    @property
    def ok(self) -> bool:
        return all(self.commutes.values()) and all(self.invertible.values())

    def to_json(self) -> dict:
        return {"commutes": {str(n): v for n, v in self.commutes.items()},
                "invertible": {str(n): v for n, v in self.invertible.items()}}


def complex_isomorphism(m: EnhancedCSSO, ref1: ReferenceChoice, ref2: ReferenceChoice,
                        h=None, top: int | None = None) -> CochainIso:
    """f^n(φ) = τ^φ(ν^n -> ν̄^n) ∘ φ ∘ τ^φ(μ̄^n -> μ^n); when the base objects differ,
    first transport along the isomorphism h: X -> Y, f^n(φ) = F^{ν}(h) φ F^{μ}(h^{-1})."""
    c1, c2 = build_complex(m, ref1, top), build_complex(m, ref2, top)
    X, Y = ref1.base, ref2.base
    C0 = m.category(0)
    if X != Y and h is None:
        raise ValueError("different base objects need an isomorphism h")
    h_inv = C0.inverse(h, X, Y) if h is not None else None
    if h is not None and h_inv is None:
        raise ValueError("h is not invertible")
    maps = {}
    for n in c1.degrees:
        C = m.category(n)
        Xn, Xpn = c1.objects[n]
        Yn, Ypn = c2.objects[n]
        if h is not None:
            Fh, _, _ = apply_path_functor(m, 1, ref1.nu[n], h, X, Y)
            Fhi, _, _ = apply_path_functor(m, 1, ref1.mu[n], h_inv, Y, X)
            Zn = path_object(m, ref1.mu[n], Y)
            Zpn = path_object(m, ref1.nu[n], Y)
        else:
            Zn, Zpn = Xn, Xpn
        left = canonical_connector(m, ref1.nu[n], ref2.nu[n], Y)
        right = canonical_connector(m, ref2.mu[n], ref1.mu[n], Y)
        cols = []
        for b in C.basis(Xn, Xpn):
            v = b
            if h is not None:
                v = C.compose(Fh, C.compose(v, Fhi, Zn, Xn, Xpn), Zn, Xpn, Zpn)
            v = C.compose(left, C.compose(v, right, Yn, Zn, Zpn), Yn, Zpn, Ypn)
            cols.append(v)
        maps[n] = _matrix_from_columns(cols, c2.dims[n], c1.field)
    commutes, invertible = {}, {}
    for n in c1.degrees:
        invertible[n] = (c1.dims[n] == c2.dims[n] and
                         (c1.dims[n] == 0 or rank(maps[n], c1.dims[n], c1.field) == c1.dims[n]))
        if n - 1 in maps:
            lhs = matmul(maps[n], c1.delta[n], c1.field) if c1.dims[n - 1] else []
            rhs = matmul(c2.delta[n], maps[n - 1], c1.field) if c1.dims[n - 1] else []
            commutes[n] = lhs == rhs
    return CochainIso(maps, commutes, invertible)


def find_isomorphism(C: LinCategory, x, y, rng: random.Random | None = None, tries: int = 100):
    rng = rng or random.Random(0)
    for b in C.basis(x, y):
        if C.inverse(b, x, y) is not None:
            return b
    for _ in range(tries):
        v = tuple(C.field.random(rng, 2) for _ in range(C.dim(x, y)))
        if C.inverse(v, x, y) is not None:
            return v
    return None


# --- cohomology -----------------------------------------------------------------------

def cohomology(c: DerivedComplex) -> dict:
    """dim H^n = dim ker δ_{n+1} - rank δ_n for the degrees where both maps are known
    (the first degree has no incoming map)."""
    ranks = {n: (rank(M, c.dims[n - 1], c.field) if c.dims[n - 1] and c.dims[n] else 0)
             for n, M in c.delta.items()}
    out = {}
    for n in c.degrees:
        if n + 1 not in c.delta:
            continue
        ker = c.dims[n] - ranks[n + 1]
        out[n] = ker - ranks.get(n, 0)
    return out


def coboundary_space(c: DerivedComplex, n: int) -> Echelon:
    """Row space of the image of δ_n (as an echelon of column vectors)."""
    e = Echelon(c.dims[n], c.field)
    M = c.delta.get(n)
    if M is None:
        return e
    for j in range(c.dims[n - 1]):
        e.add(tuple(row[j] for row in M))
    return e


def unit_vector(c: DerivedComplex, n: int, i: int):
    return unit(c.field, c.dims[n], i)
