"""The nine acceptance criteria as callable checks.

Each runner returns a Criterion with a verdict and a short detail string.  The
cohomology oracle used by criterion 6 (and the rank oracle used to re-verify
obstruction certificates) can be swapped out; the defaults below are a plain
bar-complex computation with their own elimination, sharing no code with the
package's linear algebra.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import coface_graphs as cg
from . import permutohedra as pm
from .coherence_words import fuzz
from .csso import (ReferenceChoice, build_complex, check_csso, cohomology, complex_isomorphism,
                   find_isomorphism, random_towers)
from .deformation import (LinearData, check_additivity, check_cube, check_deformation,
                          classify_first_order, extend, klein_obstructed, obstruction,
                          random_deformation, random_square_pair)
from .lincat import matrix_algebra, one_object_category
from .pseudofunctor import (csso_of, deformation_complex, modular_models, padding_complex,
                            toy_models, toy_monoids)

SEED = 20240611


@dataclass
class Criterion:
    number: int
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number}. {self.title}: {self.detail} ({self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "title": self.title, "ok": self.ok,
                "detail": self.detail, "seconds": round(self.seconds, 2)}


# --- independent oracles -----------------------------------------------------------------

def _rank(rows, p: int | None = None) -> int:
    """Row rank by Gauss-Jordan over Q (Fraction) or GF(p)."""
    rows = [[(Fraction(x) if p is None else int(x) % p) for x in r] for r in rows]
    rows = [r for r in rows if any(r)]
    rk, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rk < len(rows) and col < ncols:
        piv = next((i for i in range(rk, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = (1 / rows[rk][col]) if p is None else pow(rows[rk][col], -1, p)
        rows[rk] = [x * inv if p is None else x * inv % p for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][col]:
                c = rows[i][col]
                rows[i] = [a - c * b if p is None else (a - c * b) % p for a, b in zip(rows[i], rows[rk])]
        rk += 1
        col += 1
    return rk


def bar_differential(elements, mul, n: int) -> list:
    """Matrix of d: C^n -> C^{n+1} of the unnormalized bar complex with trivial coefficients."""
    src = list(itertools.product(elements, repeat=n))
    idx = {t: i for i, t in enumerate(src)}
    rows = []
    for m in itertools.product(elements, repeat=n + 1):
        r = [0] * len(src)
        r[idx[m[1:]]] += 1
        for i in range(n):
            r[idx[m[:i] + (mul(m[i], m[i + 1]),) + m[i + 2:]]] += (-1) ** (i + 1)
        r[idx[m[:-1]]] += (-1) ** (n + 1)
        rows.append(r)
    return rows


def bar_cohomology(elements, mul, top: int = 3, p: int | None = None, rank=_rank) -> dict:
    ranks = {n: rank(bar_differential(elements, mul, n), p) for n in range(top + 1)}
    return {n: len(elements) ** n - ranks[n] - (ranks[n - 1] if n else 0) for n in range(1, top + 1)}


def _char(F) -> int | None:
    return getattr(F.field, "p", None)


# --- criteria ------------------------------------------------------------------------------

def criterion_1() -> tuple[bool, str]:
    bad = []
    for s, k in itertools.product((1, 2, 3), (1, 2, 3, 4)):
        g = cg.build_graph(s, k)
        V = len(g.vertices)
        if V != math.prod(range(s + 1, s + k + 2)):
            bad.append(f"|V| ({s},{k})")
        if 2 * len(g.coherer_edges) != k * V:
            bad.append(f"edges ({s},{k})")
        if len(g.components) != math.comb(s + k + 1, k + 1):
            bad.append(f"components ({s},{k})")
        for cid, c in cg.classify_vertices(g).items():
            if len(c["outs"]) != 1 or len(c["ins"]) != 1:
                bad.append(f"out/in ({s},{k}) component {cid}")
                continue
            paths = cg.directed_paths(g, c["out"], c["in"], limit=100)
            if not paths or any(len(p) != k * (k + 1) // 2 for p in paths):
                bad.append(f"path lengths ({s},{k}) component {cid}")
    return not bad, "12 graphs" if not bad else "; ".join(bad[:5])


def _stirling2(n: int, r: int) -> int:
    return sum((-1) ** j * math.comb(r, j) * (r - j) ** n for j in range(r + 1)) // math.factorial(r)


def criterion_2() -> tuple[bool, str]:
    bad = []
    for k in (1, 2, 3, 4):
        g = cg.build_graph(1, k)
        cay = pm.cayley_graph(k).adjacency()
        for cid in range(len(g.components)):
            phi = pm.phi_map(g, cid)
            if not (phi.path_independent and phi.edges_ok):
                bad.append(f"Φ path dependence k={k} component {cid}")
            if not pm.is_graph_isomorphism(pm.component_adjacency(g, cid), cay, phi.mapping):
                bad.append(f"Φ not an isomorphism k={k} component {cid}")
        counts = pm.build_permutohedron(k).face_counts()
        for r in range(1, k + 2):
            if counts.get(r) != math.factorial(r) * _stirling2(k + 1, r):
                bad.append(f"face count k={k} r={r}")
    return not bad, "k = 1..4" if not bad else "; ".join(bad[:5])


def criterion_3(pairs: int = 1000, models: int = 10) -> tuple[bool, str]:
    bad = []
    for k in (2, 3, 4):
        if len(cg.build_graph(1, k, enhanced=True).components) != 1:
            bad.append(f"G^φ_(1,{k}) disconnected")
    gphi = cg.build_graph(1, 2, enhanced=True)
    g13 = cg.build_graph(1, 3)
    iso = pm.check_graph_isomorphism(pm.graph_adjacency(gphi), pm.component_adjacency(g13, 0))
    if not (iso.isomorphic and pm.is_graph_isomorphism(pm.graph_adjacency(gphi),
                                                       pm.component_adjacency(g13, 0), iso.mapping)):
        bad.append("G^φ_(1,2) not isomorphic to a component of G_(1,3)")
    stats = []
    for k in (2, 3):
        g = cg.build_graph(1, k, enhanced=True)
        ms = random_towers(models, k + 2, seed=SEED + k, enhanced=True)
        rep = fuzz(g, pairs, random.Random(SEED + k), ms)
        stats.append(f"k={k}: {rep.normalized_equal}/{rep.pairs} normalized, {rep.evaluated_equal} evaluated")
        if not rep.ok or rep.evaluated_equal != rep.pairs:
            bad.append(f"fuzz k={k}")
    return not bad, "; ".join(stats) if not bad else "; ".join(bad)


def _iso_checks(m, base, top, rng) -> list:
    bad = []
    ref = ReferenceChoice.default(base, top)
    c = build_complex(m, ref, top)
    if not c.certified:
        bad.append(f"{m.name}: δδ != 0")
    iso = complex_isomorphism(m, ref, ReferenceChoice.random(base, top, rng), top=top)
    if not iso.ok:
        bad.append(f"{m.name}: reference change")
    C0 = m.category(0)
    others = [y for y in C0.objects if y != base] or [base]
    for y in others:
        h = find_isomorphism(C0, base, y, rng) if y != base else _nontrivial_auto(C0, base, rng)
        if h is None:
            continue
        iso = complex_isomorphism(m, ref, ReferenceChoice.random(y, top, rng), h=h, top=top)
        if not iso.ok:
            bad.append(f"{m.name}: base change to {y!r}")
    return bad


def _nontrivial_auto(C, x, rng):
    for _ in range(50):
        v = tuple(C.field.random(rng, 3) for _ in range(C.dim(x, x)))
        if v != tuple(C.identity(x)) and C.inverse(v, x, x) is not None:
            return v
    return None


def criterion_4() -> tuple[bool, str]:
    bad = []
    rng = random.Random(SEED)
    for name, F in toy_models().items():
        if name.startswith("left_zero"):
            continue
        bad += _iso_checks(csso_of(F, 4), (), 4, rng)
    for m in random_towers(5, 4, seed=SEED, enhanced=True):
        if not check_csso(m).ok:
            bad.append(f"{m.name}: not a valid enhanced CSSO")
        bad += _iso_checks(m, m.category(0).objects[0], 4, rng)
    return not bad, "4 toy models + 5 random towers" if not bad else "; ".join(bad[:5])


def criterion_5() -> tuple[bool, str]:
    bad = [name for name, F in toy_models().items() if not deformation_complex(F, 4)[2]]
    return not bad, "identical matrices on every toy model" if not bad else "differ: " + ", ".join(bad)


def _oracle_models():
    M = toy_monoids()
    out = []
    for name, F in toy_models().items():
        mon = name.split("/")[0]
        if name.endswith("Q"):
            els, tab = M[mon]
            out.append((name, F, els, tab, None))
    mods = {"z2/GF(2)": ([0, 1], lambda a, b: a ^ b, 2), "z3/GF(3)": ([0, 1, 2], lambda a, b: (a + b) % 3, 3),
            "klein/GF(2)": ([0, 1, 2, 3], lambda a, b: a ^ b, 2)}
    for name, F in modular_models().items():
        els, mul, p = mods[name]
        out.append((name, F, els, {(a, b): mul(a, b) for a in els for b in els}, p))
    return out


def criterion_6(oracle=bar_cohomology) -> tuple[bool, str]:
    bad, dims = [], []
    for name, F, els, tab, p in _oracle_models():
        h = cohomology(padding_complex(F, 4))
        o = oracle(els, lambda a, b: tab[(a, b)], 3, p)
        got = {n: h[n] for n in (1, 2, 3)}
        dims.append(f"{name} {got[1]},{got[2]},{got[3]}")
        if got != {n: o[n] for n in (1, 2, 3)}:
            bad.append(f"{name}: {got} vs oracle {o}")
        if name == "z2/Q" and (got[2], got[3]) != (0, 0):
            bad.append("z2/Q: H^2 or H^3 nonzero")
    return not bad, "; ".join(dims) if not bad else "; ".join(bad)


def _verify_certificate(ld: LinearData, psi_coords, p) -> bool:
    A = [list(r) for r in ld.delta3]
    aug = [list(r) + [x] for r, x in zip(A, psi_coords)]
    conv = (lambda x: int(x.v)) if p else (lambda x: Fraction(int(x.numerator), int(x.denominator)))
    A = [[conv(x) for x in r] for r in A]
    aug = [[conv(x) for x in r] for r in aug]
    tri = [[conv(x) for x in r] for r in ld.triangle_rows]
    with_units = _rank(A + tri, p) < _rank(aug + [r + [0] for r in tri], p)
    return with_units


def criterion_7(samples: int = 50) -> tuple[bool, str]:
    bad, counts = [], []
    models = {**toy_models(), **modular_models()}
    obstructed_seen = 0
    for name, F in models.items():
        rng = random.Random(SEED)
        ld = LinearData(F)
        h3 = cohomology(padding_complex(F, 4))[3]
        p = _char(F)
        valid = 0
        attempts = 0
        while valid < samples and attempts < 20 * samples:
            attempts += 1
            n = 1 + valid % 3
            d = random_deformation(F, n, rng, ld)
            if d is None:
                continue
            valid += 1
            ob = obstruction(d, ld)
            if not ob.delta_psi_zero:
                bad.append(f"{name}: δΨ != 0 at order {n}")
            res = extend(d, ld)
            if res.obstructed:
                obstructed_seen += 1
                if h3 == 0:
                    bad.append(f"{name}: obstructed although H^3 = 0")
                if not _verify_certificate(ld, ob.coords, p):
                    bad.append(f"{name}: certificate does not verify")
            elif not check_deformation(res.extended).ok:
                bad.append(f"{name}: extension invalid at order {n + 1}")
        counts.append(f"{name} {valid}")
        if valid < samples:
            bad.append(f"{name}: only {valid} valid deformations")
    d = klein_obstructed()
    ld = LinearData(d.base)
    res = extend(d, ld)
    if not res.obstructed or not _verify_certificate(ld, res.obstruction.coords, 2):
        bad.append("constructed obstructed instance extends or certificate fails")
    else:
        obstructed_seen += 1
    detail = f"{', '.join(counts)}; {obstructed_seen} obstructed with verified certificates"
    return not bad, detail if not bad else "; ".join(bad[:5])


def criterion_8(pairs: int = 500, cubes: int = 2) -> tuple[bool, str]:
    bad = []
    rng = random.Random(SEED)
    cats = [F.dhom("*", "*") for F in toy_models().values()]
    cats.append(one_object_category(matrix_algebra(2)))
    for t in range(pairs):
        sq1, sq2 = random_square_pair(cats[t % len(cats)], 4, rng, n=t % 3)
        if not check_additivity(sq1, sq2).ok:
            bad.append(f"additivity pair {t}")
    tested = 0
    for name, F in {**toy_models(), **modular_models()}.items():
        r = random.Random(SEED + 1)
        ld = LinearData(F)
        made = 0
        while made < cubes:
            d = random_deformation(F, 1 + made % 2, r, ld)
            if d is None:
                continue
            made += 1
            rep = check_cube(d)
            tested += 1
            if not rep.ok:
                bad.append(f"cube {name}: {rep}")
    rep = check_cube(klein_obstructed())
    tested += 1
    if not rep.ok:
        bad.append("cube on the obstructed instance")
    return not bad, f"{pairs} square pairs, {tested} cubes" if not bad else "; ".join(bad[:5])


def criterion_9() -> tuple[bool, str]:
    bad, dims = [], []
    for name, F in {**toy_models(), **modular_models()}.items():
        cl = classify_first_order(F)
        h2 = cohomology(padding_complex(F, 3))[2]
        dims.append(f"{name} {cl.dim_classes}")
        if not cl.matches or cl.dim_h2 != h2:
            bad.append(f"{name}: {cl.to_json()}")
    return not bad, "; ".join(dims) if not bad else "; ".join(bad)


TITLES = {
    1: "graph statistics",
    2: "permutohedron isomorphism",
    3: "enhanced coherence",
    4: "derived complex",
    5: "padding and derived coboundaries agree",
    6: "cohomology oracle",
    7: "obstruction cocycles",
    8: "deviation calculus",
    9: "first-order classification",
}
RUNNERS = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
           6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def run(number: int, **kwargs) -> Criterion:
    t = time.perf_counter()
    try:
        ok, detail = RUNNERS[number](**kwargs)
    except Exception as exc:  # a crash is a failure, reported like any other
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Criterion(number, TITLES[number], ok, detail, time.perf_counter() - t)


def run_all(numbers=None) -> list[Criterion]:
    return [run(n) for n in (numbers or sorted(RUNNERS))]
