import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cosimp.csso import check_csso, cohomology
from cosimp.lincat import dual_numbers, rationals
from cosimp.pseudofunctor import (blocks, build_toy_model, check_composition, check_monoid,
                                  check_pseudofunctor, coboundary_cocycle, cocycle_violations, compositions,
                                  csso_of, deformation_complex, load_model, monoid_table,
                                  padding_complex, pseudofunctor_from_json, random_unit_function,
                                  toy_monoids, toy_to_json)
from cosimp.scalars import QQ

from conftest import sympy_bar_cohomology


def test_compositions_count():
    # ordered compositions of n number 2^(n-1)
    assert [len(compositions(n)) for n in range(1, 6)] == [1, 2, 4, 8, 16]
    assert blocks((2, 1, 3)) == [(0, 2), (2, 3), (3, 6)]
    with pytest.raises(ValueError):
        check_composition((2, 0), 2)


def test_toy_monoids_are_monoids():
    for els, tab in toy_monoids().values():
        assert check_monoid(els, tab) == []
    assert check_monoid(["e", "a"], {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "x"})


@pytest.mark.parametrize("name", ["trivial/Q", "idempotent/Q", "idempotent/Q[x]/(x^2)", "z2/Q", "left_zero/Q"])
def test_toys_are_pseudofunctors(toys, name):
    F = toys[name]
    rep = check_pseudofunctor(F)
    assert rep.ok, rep.violations[:3]
    assert F.unitary


def test_modular_models_are_pseudofunctors(modular):
    for F in modular.values():
        assert check_pseudofunctor(F).ok


def test_noncocycle_is_rejected_by_both_tests():
    els, tab = toy_monoids()["z2"]
    A = rationals()
    c = {(f, g): (QQ(1),) for f in els for g in els}
    c[("a", "a")] = (QQ(2),)
    c[("e", "a")] = (QQ(3),)
    assert cocycle_violations(els, tab, A, c)
    F = build_toy_model(els, tab, A, c=c)
    rep = check_pseudofunctor(F)
    assert not rep.ok
    assert rep.assoc_direct and rep.assoc_direct == rep.assoc_sigma


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["idempotent", "z2", "left_zero"]))
def test_coboundary_cocycles_give_pseudofunctors(seed, mon):
    els, tab = toy_monoids()[mon]
    A = dual_numbers()
    b = random_unit_function(els, A, random.Random(seed))
    c = coboundary_cocycle(els, tab, A, b)
    assert cocycle_violations(els, tab, A, c) == []
    F = build_toy_model(els, tab, A, c=c)
    assert check_pseudofunctor(F).ok


def test_iterates_form_a_csso(toys):
    assert check_csso(csso_of(toys["z2/Q"], 4)).ok


@pytest.mark.parametrize("name", ["idempotent/Q", "z2/Q", "idempotent/Q[x]/(x^2)"])
def test_padding_complex_equals_derived_complex(toys, name):
    _, _, agree = deformation_complex(toys[name], 4)
    assert agree


def test_padding_complex_matches_sympy_bar_cohomology(toys, modular):
    M = toy_monoids()
    for mon in ("idempotent", "z2", "left_zero"):
        els, tab = M[mon]
        h = cohomology(padding_complex(toys[f"{mon}/Q"], 4))
        o = sympy_bar_cohomology(els, lambda a, b: tab[(a, b)], 3)
        assert {n: h[n] for n in (1, 2, 3)} == o
    groups = {"z2/GF(2)": ([0, 1], 2), "z3/GF(3)": ([0, 1, 2], 3), "klein/GF(2)": ([0, 1, 2, 3], 2)}
    for name, (els, p) in groups.items():
        mul = (lambda a, b: (a + b) % 3) if p == 3 else (lambda a, b: a ^ b)
        h = cohomology(padding_complex(modular[name], 4))
        assert {n: h[n] for n in (1, 2, 3)} == sympy_bar_cohomology(els, mul, 3, p)


def test_klein_cohomology_dimensions(modular):
    # H^n(Z/2 x Z/2; F_2) has dimension n + 1
    h = cohomology(padding_complex(modular["klein/GF(2)"], 4))
    assert (h[1], h[2], h[3]) == (2, 3, 4)


def test_toy_json_round_trip():
    els, tab = toy_monoids()["idempotent"]
    A = dual_numbers()
    b = random_unit_function(els, A, random.Random(2))
    c = coboundary_cocycle(els, tab, A, b)
    d = json.loads(json.dumps(toy_to_json(els, tab, A, c=c, name="t")))
    F = load_model(d)
    assert F.fhat == build_toy_model(els, tab, A, c=c).fhat


def test_full_json_round_trip(toys):
    F = toys["idempotent/Q[x]/(x^2)"]
    d = json.loads(json.dumps(F.to_json()))
    G = pseudofunctor_from_json(d)
    assert G.fhat == F.fhat and G.f0 == F.f0
    assert padding_complex(G, 3).delta == padding_complex(F, 3).delta
    assert load_model(d).fhat == F.fhat


def test_bad_inputs_rejected():
    els, tab = toy_monoids()["z2"]
    from cosimp.lincat import matrix_algebra
    with pytest.raises(ValueError):
        build_toy_model(els, tab, matrix_algebra(2))
    with pytest.raises(ValueError):
        build_toy_model(els, tab, rationals(), c={(f, g): (QQ(0),) for f in els for g in els})
    with pytest.raises(ValueError):
        build_toy_model(els, tab, rationals(), theta={"e": "a", "a": "a"})
    with pytest.raises(ValueError):
        load_model({"kind": "nothing"})
    assert monoid_table([0], lambda a, b: 0) == {(0, 0): 0}
