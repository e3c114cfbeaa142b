import itertools

import pytest
import sympy

from cosimp.pseudofunctor import modular_models, toy_models


@pytest.fixture(scope="session")
def toys():
    return toy_models()


@pytest.fixture(scope="session")
def modular():
    return modular_models()


def sympy_rank(rows, p=None):
    """Rank through sympy, over QQ or GF(p)."""
    if not rows or not rows[0]:
        return 0
    if p is None:
        return sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in rows]).rank()
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.domains import GF
    K = GF(p)
    return DomainMatrix([[K(int(x)) for x in r] for r in rows], (len(rows), len(rows[0])), K).rank()


def sympy_bar_cohomology(elements, mul, top=3, p=None):
    """dim H^n of the bar complex of a monoid with trivial coefficients (n = 1..top)."""
    def d(n):
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
    ranks = {n: sympy_rank(d(n), p) for n in range(top + 1)}
    return {n: len(elements) ** n - ranks[n] - (ranks[n - 1] if n else 0) for n in range(1, top + 1)}


def as_ints(v):
    """Coordinates (mpq or ModP) as plain Python numbers for sympy."""
    out = []
    for x in v:
        out.append(int(x.v) if hasattr(x, "v") else sympy.Rational(int(x.numerator), int(x.denominator)))
    return out


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
