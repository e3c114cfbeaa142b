import random

import pytest
from hypothesis import given, settings, strategies as st

from cosimp import coface_graphs as cg
from cosimp import coherence_words as cw
from cosimp.csso import random_towers


@pytest.fixture(scope="module")
def models():
    return random_towers(3, 5, seed=11, enhanced=True)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10 ** 6))
def test_parallel_words_are_equal(k, seed):
    g = cg.build_graph(1, k, enhanced=True)
    rng = random.Random(seed)
    pair = None
    while pair is None:
        pair = cw.random_parallel_pair(g, rng)
    res = cw.words_equal(*pair, verify=True)
    assert res.equal
    assert cw.replay(1, pair[0].letters, res.trace) == pair[1].letters


def test_fuzz_in_coherer_models(models):
    for k in (2, 3):
        g = cg.build_graph(1, k, enhanced=True)
        rep = cw.fuzz(g, 60, random.Random(k), models)
        assert rep.ok and rep.evaluated_equal == rep.pairs == 60


def test_word_and_inverse_compose_to_identity(models):
    g = cg.build_graph(1, 2, enhanced=True)
    w = cw.random_walk_word(g, (1, 2, 3), 5, random.Random(2))
    loop = w.then(w.inverse())
    m = models[0]
    for x in m.category(0).objects:
        C = m.category(3)
        start = cw.apply_path_object(m, 1, loop.source, x)
        assert cw.evaluate_word(loop, m, x) == tuple(C.identity(start))


def test_canonical_word_and_components():
    g = cg.build_graph(1, 3)
    w = cw.canonical_word(g, (0, 2, 3, 4), (1, 1, 1, 0))
    assert w.source == (0, 2, 3, 4) and w.target == (1, 1, 1, 0)
    assert cw.canonical_word(g, (0, 2, 3, 4), (0, 1, 2, 3)) is None


def test_malformed_words_rejected():
    g = cg.build_graph(1, 2)
    e = cg.coherer_at(1, (0, 2, 3), 0)
    with pytest.raises(cw.WordError):
        cw.make_word(g, (0, 1, 2), [e])
    w = cw.make_word(g, (0, 2, 3), [e])
    other = cw.make_word(cg.build_graph(1, 2, enhanced=True), (0, 2, 3), [e])
    with pytest.raises(cw.WordError):
        cw.words_equal(w, other)


def test_json_round_trip():
    g = cg.build_graph(1, 3, enhanced=True)
    w = cw.random_walk_word(g, (1, 2, 3, 4), 6, random.Random(4))
    assert cw.CohererWord.from_json(w.to_json()) == w
