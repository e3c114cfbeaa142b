from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from cosimp.linalg import Echelon, matvec, nullspace, rank, solve_linear
from cosimp.scalars import QQ, PrimeField

from conftest import sympy_rank

entry = st.integers(-3, 3).map(QQ)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=1, max_size=max_rows))


@given(matrices())
def test_rank_matches_sympy(M):
    assert rank(M, len(M[0])) == sympy_rank([[int(x) for x in r] for r in M])


@given(matrices())
def test_rank_mod_p_matches_sympy(M):
    K = PrimeField(3)
    Mp = [[K(int(x)) for x in r] for r in M]
    assert rank(Mp, len(M[0]), K) == sympy_rank([[int(x) for x in r] for r in M], 3)


@given(matrices())
def test_nullspace_is_kernel_of_full_dimension(M):
    n = len(M[0])
    ker = nullspace(M, n)
    assert len(ker) == n - rank(M, n)
    for v in ker:
        assert all(x == 0 for x in matvec(M, v))


@settings(max_examples=60)
@given(matrices(), st.lists(entry, min_size=6, max_size=6))
def test_solve_linear_consistent_systems(M, x):
    n = len(M[0])
    x = x[:n]
    b = matvec(M, x)
    sol = solve_linear(M, b, n)
    assert sol.consistent
    assert matvec(M, sol.particular) == b
    for v in sol.kernel:
        assert all(c == 0 for c in matvec(M, v))


def test_inconsistent_system():
    M = [(QQ(1), QQ(1)), (QQ(2), QQ(2))]
    assert not solve_linear(M, [QQ(1), QQ(3)], 2).consistent


def test_echelon_membership():
    e = Echelon(3)
    e.add((1, 2, 0))
    e.add((0, 1, 1))
    assert e.contains((1, 3, 1)) and not e.contains((0, 0, 1))
    assert e.rank == 2
    assert not e.add((mpq(2), mpq(4), mpq(0)))
