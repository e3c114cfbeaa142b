"""Words in expanded coherers and the word problem for canonical 2-isomorphisms.

A word lists its letters in traversal order: letter t goes from the target of
letter t-1 to its own target, so as a vertical composite the word reads
letters[-1] · ... · letters[0].

Every word from u to v is rewritten into the normal form
canon(u) · canon(v)^{-1}, where canon(x) is the least-laterality descent of
x (through φ-flips in the enhanced graphs).  The rewriting only uses
hexagons, interchange squares, the φ relation and free cancellation, and it is
recorded step by step so that it can be replayed and audited.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache

from .coface_graphs import (PHI, CofaceGraph, CoherenceEdge, bfs_path, coherer_at,
                            descend, phi_at, reduced_connection)

HEXAGON = "hexagon"
INTERCHANGE = "interchange"
PHI_HEXAGON = "phi-hexagon"
INSERT = "insert"
CANCEL = "cancel"


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class CohererWord:
    s: int
    k: int
    enhanced: bool
    source: tuple
    target: tuple
    letters: tuple = ()

    def __post_init__(self):
        cur = self.source
        for t, e in enumerate(self.letters):
            if e.source != cur:
                raise WordError(f"letter {t} starts at {e.source}, expected {cur}")
            cur = e.target
        if cur != self.target:
            raise WordError(f"word ends at {cur}, declared target {self.target}")

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "CohererWord":
        return CohererWord(self.s, self.k, self.enhanced, self.target, self.source,
                           tuple(e.inverse() for e in reversed(self.letters)))

    def then(self, other: "CohererWord") -> "CohererWord":
        return CohererWord(self.s, self.k, self.enhanced, self.source, other.target,
                           self.letters + other.letters)

    def to_json(self) -> dict:
        return {"s": self.s, "k": self.k, "enhanced": self.enhanced,
                "source": list(self.source), "target": list(self.target),
                "letters": [e.to_json() for e in self.letters]}

    @classmethod
    def from_json(cls, d: dict) -> "CohererWord":
        return cls(d["s"], d["k"], d["enhanced"], tuple(d["source"]), tuple(d["target"]),
                   tuple(CoherenceEdge.from_json(e) for e in d["letters"]))


def make_word(g: CofaceGraph, source, letters) -> CohererWord:
    source = tuple(source)
    letters = tuple(letters)
    target = letters[-1].target if letters else source
    return CohererWord(g.s, g.k, g.enhanced, source, target, letters)


@dataclass(frozen=True)
class RewriteRule:
    kind: str
    lhs: tuple
    rhs: tuple

    def reversed(self) -> "RewriteRule":
        kind = {INSERT: CANCEL, CANCEL: INSERT}.get(self.kind, self.kind)
        return RewriteRule(kind, self.rhs, self.lhs)


@dataclass(frozen=True)
class Step:
    offset: int
    rule: RewriteRule

    def shifted(self, d: int) -> "Step":
        return Step(self.offset + d, self.rule)

    def reversed(self) -> "Step":
        return Step(self.offset, self.rule.reversed())

    def to_json(self) -> dict:
        return {"offset": self.offset, "kind": self.rule.kind,
                "lhs": [e.to_json() for e in self.rule.lhs],
                "rhs": [e.to_json() for e in self.rule.rhs]}


def reverse_steps(steps) -> tuple:
    return tuple(st.reversed() for st in reversed(steps))


# --- the relations between two out-edges ------------------------------------

def _walk(s: int, v, moves) -> list[CoherenceEdge]:
    """Follow moves (a position, or 'phi') from v."""
    out = []
    for m in moves:
        e = phi_at(v) if m == "phi" else coherer_at(s, v, m)
        if e is None:
            raise WordError(f"no edge {m!r} at {v}")
        out.append(e)
        v = e.target
    return out


def completion(s: int, e: CoherenceEdge, m: CoherenceEdge) -> RewriteRule:
    """The relation whose two sides start with the distinct forward edges e and m."""
    if e == m or e.source != m.source or not (e.forward and m.forward):
        raise WordError("completion needs two distinct forward edges with one source")
    x = e.source
    pe = "phi" if e.kind == PHI else e.position
    pm = "phi" if m.kind == PHI else m.position
    if "phi" in (pe, pm):
        q = pm if pe == "phi" else pe
        if q >= 1:
            kind, a, b = INTERCHANGE, [pe, pm], [pm, pe]
        else:  # τ12 then φ then τ01  versus  φ then τ02 then φ
            kind = PHI_HEXAGON
            a, b = ([0, "phi", 0], ["phi", 0, "phi"]) if pe == 0 else (["phi", 0, "phi"], [0, "phi", 0])
    elif abs(pe - pm) >= 2:
        kind, a, b = INTERCHANGE, [pe, pm], [pm, pe]
    else:
        w = min(pe, pm)
        kind = HEXAGON
        a = [pe, w + 1 if pe == w else w, pe]
        b = [pm, w + 1 if pm == w else w, pm]
    lhs, rhs = _walk(s, x, a), _walk(s, x, b)
    if lhs[-1].target != rhs[-1].target:
        raise WordError(f"{kind} at {x} does not close")
    return RewriteRule(kind, tuple(lhs), tuple(rhs))


def is_rule_instance(s: int, rule: RewriteRule) -> bool:
    """Independent check that a step is a hexagon/square/φ relation, a free
    cancellation, or an insertion of a cancelling pair."""
    lhs, rhs = rule.lhs, rule.rhs
    if rule.kind in (INSERT, CANCEL):
        pair = rhs if rule.kind == INSERT else lhs
        other = lhs if rule.kind == INSERT else rhs
        return (not other and len(pair) == 2 and pair[1] == pair[0].inverse())
    if not lhs or not rhs or not all(e.forward for e in lhs + rhs):
        return False
    if lhs[0].source != rhs[0].source or lhs[-1].target != rhs[-1].target or lhs[0] == rhs[0]:
        return False
    try:
        expected = completion(s, lhs[0], rhs[0])
    except WordError:
        return False
    return expected == rule


# --- normalization -------------------------------------------------------------

class Normalizer:
    """Rewrites words of one graph into normal form, memoizing the key lemma

        e · canon(target e)  ~>  canon(source e)

    for every forward edge e."""

    def __init__(self, g: CofaceGraph):
        self.g = g
        self._canon: dict = {}
        self._lemma: dict = {}

    def canon(self, x) -> tuple:
        x = tuple(x)
        c = self._canon.get(x)
        if c is None:
            c = self._canon[x] = tuple(descend(self.g, x))
        return c

    def lemma(self, e: CoherenceEdge) -> tuple:
        got = self._lemma.get(e)
        if got is not None:
            return got
        x = e.source
        cx = self.canon(x)
        if not cx or cx[0] == e:
            steps: tuple = ()
        else:
            rule = completion(self.g.s, e, cx[0])
            out = []
            # expand canon(target e) into lhs[1:] · canon(c)
            for t in range(1, len(rule.lhs)):
                out.extend(st.shifted(t) for st in reverse_steps(self.lemma(rule.lhs[t])))
            out.append(Step(0, rule))
            for t in range(len(rule.rhs) - 1, 0, -1):
                out.extend(st.shifted(t) for st in self.lemma(rule.rhs[t]))
            steps = tuple(out)
        self._lemma[e] = steps
        return steps

    def normal_form(self, source, target) -> tuple:
        return tuple(reduced_connection(list(self.canon(source)), list(self.canon(target))))

    def normalize(self, w: CohererWord) -> tuple[tuple, tuple]:
        """(normal form letters, steps taking w to it)."""
        m = len(w.letters)
        steps = []
        cv = self.canon(w.target)
        for t, c in enumerate(cv):
            steps.append(Step(m + t, RewriteRule(INSERT, (), (c, c.inverse()))))
        for t in range(m - 1, -1, -1):
            e = w.letters[t]
            if e.forward:
                steps.extend(st.shifted(t) for st in self.lemma(e))
            else:
                f = e.inverse()
                steps.extend(st.shifted(t + 1) for st in reverse_steps(self.lemma(f)))
                steps.append(Step(t, RewriteRule(CANCEL, (e, f), ())))
        cu = self.canon(w.source)
        i = len(cu)
        j = 0
        while i - 1 - j >= 0 and j < len(cv) and cu[i - 1 - j] == cv[len(cv) - 1 - j]:
            j += 1
        for r in range(j):
            pos = len(cu) - 1 - r
            a = cu[pos]
            steps.append(Step(pos, RewriteRule(CANCEL, (a, a.inverse()), ())))
        return self.normal_form(w.source, w.target), tuple(steps)


@lru_cache(maxsize=64)
def _graph(s: int, k: int, enhanced: bool) -> CofaceGraph:
    return CofaceGraph(s, k, enhanced)


@lru_cache(maxsize=64)
def normalizer_for(s: int, k: int, enhanced: bool) -> Normalizer:
    return Normalizer(_graph(s, k, enhanced))


def canonical_word(g: CofaceGraph, source, target) -> CohererWord | None:
    """Least-laterality descent from source, then the inverse descent to target;
    None when the vertices lie in different components."""
    source, target = g.check_vertex(source), g.check_vertex(target)
    if g.component[source] != g.component[target]:
        return None
    norm = normalizer_for(g.s, g.k, g.enhanced)
    return make_word(g, source, norm.normal_form(source, target))


@dataclass
class EqualityResult:
    equal: bool
    normal_form: tuple
    trace: tuple
    counterexample: str | None = None

    def to_json(self) -> dict:
        return {"equal": self.equal, "normal_form": [e.to_json() for e in self.normal_form],
                "trace": [st.to_json() for st in self.trace], "counterexample": self.counterexample}


def replay(s: int, letters, steps, check_rules: bool = True) -> tuple:
    """Apply steps to a letter sequence, checking each one; returns the result."""
    word = list(letters)
    for n, st in enumerate(steps):
        lhs, rhs = st.rule.lhs, st.rule.rhs
        o = st.offset
        if tuple(word[o:o + len(lhs)]) != lhs:
            raise WordError(f"step {n}: left-hand side not found at offset {o}")
        if check_rules and not is_rule_instance(s, st.rule):
            raise WordError(f"step {n}: not an instance of a {st.rule.kind} relation")
        if lhs and rhs and (lhs[0].source != rhs[0].source or lhs[-1].target != rhs[-1].target):
            raise WordError(f"step {n}: sides not parallel")
        word[o:o + len(lhs)] = rhs
        for a, b in zip(word, word[1:]):
            if a.target != b.source:
                raise WordError(f"step {n}: word no longer composable")
    return tuple(word)


def words_equal(w1: CohererWord, w2: CohererWord, verify: bool = False) -> EqualityResult:
    """Decide equality of parallel words; the trace rewrites w1 into w2."""
    if (w1.s, w1.k, w1.enhanced) != (w2.s, w2.k, w2.enhanced):
        raise WordError("words live in different graphs")
    if w1.source != w2.source or w1.target != w2.target:
        raise WordError("words are not parallel")
    norm = normalizer_for(w1.s, w1.k, w1.enhanced)
    try:
        nf1, t1 = norm.normalize(w1)
        nf2, t2 = norm.normalize(w2)
    except WordError as exc:
        return EqualityResult(False, (), (), f"normalization failed: {exc}")
    if nf1 != nf2:
        return EqualityResult(False, nf1, t1, "distinct normal forms")
    trace = t1 + reverse_steps(t2)
    if verify:
        try:
            end = replay(w1.s, w1.letters, trace)
        except WordError as exc:
            return EqualityResult(False, nf1, trace, f"replay failed: {exc}")
        if end != w2.letters:
            return EqualityResult(False, nf1, trace, "replay does not reach the second word")
    return EqualityResult(True, nf1, trace)


# --- evaluation in a model -------------------------------------------------------

def apply_path_functor(model, s: int, entries, m, a, b):
    """Apply F^{entries[-1]} ∘ ... ∘ F^{entries[0]} (starting in degree s-1) to m: a -> b.
    Returns (image, image source, image target)."""
    for j, i in enumerate(entries):
        F = model.coface(s + j, i)
        m, a, b = F.mor(m, a, b), F.obj(a), F.obj(b)
    return m, a, b


def apply_path_object(model, s: int, entries, x):
    for j, i in enumerate(entries):
        x = model.coface(s + j, i).obj(x)
    return x


def letter_component(model, s: int, e: CoherenceEdge, x):
    """Component at x (an object of degree s-1) of the whiskered letter e."""
    f = e.forward_edge()
    v = f.source
    inverse = not e.forward
    if f.kind == PHI:
        comp = model.phi(x, inverse=inverse)
        hi = 1
        src = model.coface(s, v[0]).obj(x)
        tgt = model.coface(s, 0).obj(x)
        if inverse:
            src, tgt = tgt, src
        C = 1
    else:
        p = f.position
        y = apply_path_object(model, s, v[:p], x)
        i, j = f.indices
        n = s + p
        comp = model.tau(n, i, j, y, inverse=inverse)
        a = model.coface(n + 1, j).obj(model.coface(n, i).obj(y))
        b = model.coface(n + 1, i).obj(model.coface(n, j - 1).obj(y))
        src, tgt = (b, a) if inverse else (a, b)
        hi = p + 2
        C = n + 1
    m, _, _ = apply_path_functor(model, C + 1, v[hi:], comp, src, tgt)
    return m


def evaluate_word(w: CohererWord, model, x):
    """The component at x (object of the source degree) of the composite 2-cell."""
    cat = model.category(w.s + w.k)
    start = apply_path_object(model, w.s, w.source, x)
    acc = cat.identity(start)
    cur = start
    for e in w.letters:
        comp = letter_component(model, w.s, e, x)
        nxt = apply_path_object(model, w.s, e.target, x)
        acc = cat.compose(comp, acc, start, cur, nxt)
        cur = nxt
    return acc


def evaluate_word_nat(w: CohererWord, model) -> dict:
    """Components at every object of degree s-1."""
    return {x: evaluate_word(w, model, x) for x in model.category(w.s - 1).objects}


# --- fuzzing ---------------------------------------------------------------------

def random_walk_word(g: CofaceGraph, start, length: int, rng: random.Random) -> CohererWord:
    v = tuple(start)
    letters = []
    for _ in range(length):
        e = rng.choice(g.neighbours(v))
        letters.append(e)
        v = e.target
    return make_word(g, start, letters)


def random_parallel_pair(g: CofaceGraph, rng: random.Random, max_len: int = 6):
    u = rng.choice(g.vertices)
    w1 = random_walk_word(g, u, rng.randint(0, max_len), rng)
    w2a = random_walk_word(g, u, rng.randint(0, max_len), rng)
    tail = bfs_path(g, w2a.target, w1.target)
    if tail is None:
        return None
    w2 = make_word(g, u, w2a.letters + tuple(tail))
    if len(w2) > 2 * max_len:
        return None
    return w1, w2


@dataclass
class FuzzReport:
    pairs: int = 0
    normalized_equal: int = 0
    evaluated_equal: int = 0
    failures: list | None = None

    @property
    def ok(self) -> bool:
        return not self.failures and self.normalized_equal == self.pairs

    def to_json(self) -> dict:
        return {"pairs": self.pairs, "normalized_equal": self.normalized_equal,
                "evaluated_equal": self.evaluated_equal, "failures": self.failures or []}


def fuzz(g: CofaceGraph, pairs: int, rng: random.Random, models=(), verify_every: int = 1,
         max_len: int = 6) -> FuzzReport:
    rep = FuzzReport(failures=[])
    cache: dict = {}
    while rep.pairs < pairs:
        pair = random_parallel_pair(g, rng, max_len)
        if pair is None:
            continue
        w1, w2 = pair
        rep.pairs += 1
        res = words_equal(w1, w2, verify=(rep.pairs % verify_every == 0))
        if res.equal:
            rep.normalized_equal += 1
        else:
            rep.failures.append({"w1": w1.to_json(), "w2": w2.to_json(), "reason": res.counterexample})
            continue
        agree = True
        for mi, model in enumerate(models):
            for x in model.category(g.s - 1).objects:
                a = _cached_eval(cache, mi, model, w1, x)
                b = _cached_eval(cache, mi, model, w2, x)
                if a != b:
                    agree = False
                    rep.failures.append({"w1": w1.to_json(), "w2": w2.to_json(),
                                         "reason": f"evaluations differ in model {mi} at {x!r}"})
                    break
            if not agree:
                break
        if agree:
            rep.evaluated_equal += 1
    return rep


def _cached_eval(cache, mi, model, w, x):
    cat = model.category(w.s + w.k)
    start = apply_path_object(model, w.s, w.source, x)
    acc, cur = cat.identity(start), start
    for e in w.letters:
        key = (mi, e, x)
        comp = cache.get(key)
        if comp is None:
            comp = cache[key] = letter_component(model, w.s, e, x)
        nxt = apply_path_object(model, w.s, e.target, x)
        acc = cat.compose(comp, acc, start, cur, nxt)
        cur = nxt
    return acc


def dumps_trace(steps) -> str:
    return json.dumps([st.to_json() for st in steps], sort_keys=True)
