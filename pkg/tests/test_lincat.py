import random

import pytest
from hypothesis import given, settings, strategies as st

from cosimp.lincat import (FunctionFunctor, NatTransform, dual_numbers, identity_nat, matrix_algebra,
                           monoid_2category, nat_space, naturality_violations, one_object_category,
                           rationals, split_product, validate, validate_category, vertical)
from cosimp.scalars import QQ, PrimeField


@pytest.mark.parametrize("A", [rationals(), dual_numbers(), split_product(2), matrix_algebra(2),
                               matrix_algebra(2, upper=True), rationals(PrimeField(5))])
def test_algebras_are_associative_and_unital(A):
    assert A.check() == []
    assert validate_category(one_object_category(A)).ok


def test_commutativity_flags():
    assert dual_numbers().is_commutative()
    assert not matrix_algebra(2).is_commutative()


def test_inverse_in_matrix_algebra():
    A = matrix_algebra(2)
    a = tuple(QQ(x) for x in (1, 2, 0, 1))
    assert A.mul(a, A.inverse(a)) == A.unit
    assert A.inverse(tuple(QQ(x) for x in (1, 1, 1, 1))) is None


@settings(max_examples=30)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_matrix_product_matches_manual(a, b):
    A = matrix_algebra(2)
    x, y = tuple(map(QQ, a)), tuple(map(QQ, b))
    manual = (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
              x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])
    assert A.mul(x, y) == manual


def test_algebra_json_keeps_the_field():
    from cosimp.lincat import Algebra
    A = rationals(PrimeField(3))
    assert Algebra.from_json(A.to_json()).field == PrimeField(3)


def test_nat_space_of_conjugation_functor():
    A = matrix_algebra(2)
    C = one_object_category(A)
    rng = random.Random(0)
    from cosimp.csso import random_unit
    u = random_unit(C, "*", rng)
    ui = C.inverse(u, "*", "*")
    F = FunctionFunctor(C, C, lambda x: x, lambda v, x, y: C.compose(u, C.compose(v, ui, x, x, y), x, y, y))
    ident = FunctionFunctor(C, C, lambda x: x, lambda v, x, y: tuple(v))
    ns = nat_space(ident, F)
    assert ns.dim == 1  # End of M2 has trivial centre, so Nat(id, c_u) is spanned by u
    t = ns.nat(ns.basis and (QQ(1),))
    assert naturality_violations(t) == []
    bad = NatTransform(ident, F, {"*": tuple(QQ(x) for x in (1, 0, 0, 0))})
    assert naturality_violations(bad) != [] or u == C.identity("*")
    assert vertical(identity_nat(F), t).components == t.components


def test_monoid_2category_validates():
    els = ["e", "a"]
    table = {(x, y): "e" if x == y else "a" for x in els for y in els}
    C = monoid_2category(els, table, dual_numbers())
    assert validate(C).ok
