"""Exact linear algebra by sparse Gauss-Jordan elimination.

Matrices are lists of rows (sequences of field elements).  Internally rows are
dicts ``column -> value`` so that the large, very sparse systems coming from
naturality constraints stay cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .scalars import Field, QQ


def _sparse(row: Sequence) -> dict:
    return {j: x for j, x in enumerate(row) if x}


class Echelon:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self, ncols: int, field: Field = QQ):
        self.ncols = ncols
        self.field = field
        self.rows: dict[int, dict] = {}  # pivot column -> row with pivot 1

    def _reduce_full(self, row: dict) -> dict:
        while True:
            hit = [c for c in row if c in self.rows]
            if not hit:
                return row
            for c in hit:
                x = row.get(c)
                if not x:
                    continue
                for j, y in self.rows[c].items():
                    v = row.get(j, 0) - x * y
                    if v:
                        row[j] = v
                    else:
                        row.pop(j, None)

    def add(self, row) -> bool:
        """Add a row; return True if it increased the rank."""
        if not isinstance(row, dict):
            row = _sparse(row)
        row = self._reduce_full(dict(row))
        if not row:
            return False
        p = min(row)
        inv = 1 / row[p]
        row = {j: x * inv for j, x in row.items()}
        for c, other in self.rows.items():
            x = other.get(p)
            if x:
                for j, y in row.items():
                    v = other.get(j, 0) - x * y
                    if v:
                        other[j] = v
                    else:
                        other.pop(j, None)
        self.rows[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, row) -> bool:
        if not isinstance(row, dict):
            row = _sparse(row)
        return not self._reduce_full(dict(row))

    def nullspace(self) -> list[tuple]:
        """Basis of {x : r.x = 0 for all rows r}, one vector per free column."""
        zero, one = self.field.zero, self.field.one
        free = [j for j in range(self.ncols) if j not in self.rows]
        basis = []
        for f in free:
            v = [zero] * self.ncols
            v[f] = one
            for p, row in self.rows.items():
                x = row.get(f)
                if x:
                    v[p] = -x
            basis.append(tuple(v))
        return basis


def rank(rows: Sequence[Sequence], ncols: int | None = None, field: Field = QQ) -> int:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    e = Echelon(ncols, field)
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(rows: Sequence[Sequence], ncols: int, field: Field = QQ) -> list[tuple]:
    e = Echelon(ncols, field)
    for r in rows:
        e.add(r)
    return e.nullspace()


@dataclass(frozen=True)
class Solution:
    consistent: bool
    particular: tuple | None = None
    kernel: list = dc_field(default_factory=list)


def solve_linear(A: Sequence[Sequence], b: Sequence, ncols: int | None = None,
                 field: Field = QQ) -> Solution:
    """Solve A x = b exactly.

    Returns the particular solution with all free variables set to zero together
    with a kernel basis, or an inconsistent marker.
    """
    if len(A) != len(b):
        raise ValueError(f"{len(A)} rows but right-hand side of length {len(b)}")
    if ncols is None:
        ncols = len(A[0]) if A else 0
    e = Echelon(ncols + 1, field)
    for row, rhs in zip(A, b):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        d = _sparse(row)
        if rhs:
            d[ncols] = field(rhs) if isinstance(rhs, int) else rhs
        e.add(d)
    if ncols in e.rows:
        return Solution(False)
    x = [field.zero] * ncols
    for p, row in e.rows.items():
        x[p] = row.get(ncols, field.zero)
    # the free column `ncols` yields the one basis vector with last entry 1
    kernel = [v[:ncols] for v in e.nullspace() if v[ncols] == 0]
    return Solution(True, tuple(x), kernel)


def matvec(M: Sequence[Sequence], v: Sequence, field: Field = QQ) -> tuple:
    out = []
    for row in M:
        acc = field.zero
        for a, x in zip(row, v):
            if a and x:
                acc += a * x
        out.append(acc)
    return tuple(out)


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], field: Field = QQ) -> list[tuple]:
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        if len(row) != inner:
            raise ValueError("dimension mismatch in matmul")
        acc = [field.zero] * ncols
        for a, brow in zip(row, B):
            if a:
                for j, y in enumerate(brow):
                    if y:
                        acc[j] += a * y
        out.append(tuple(acc))
    return out


def transpose(M: Sequence[Sequence], ncols: int) -> list[tuple]:
    return [tuple(row[j] for row in M) for j in range(ncols)]


def columns_to_matrix(cols: Sequence[Sequence], nrows: int, field: Field = QQ) -> list[tuple]:
    """Matrix whose j-th column is cols[j]."""
    return [tuple(c[i] for c in cols) for i in range(nrows)] if cols else [()] * nrows


def is_zero_matrix(M: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in M for x in row)


def identity_matrix(n: int, field: Field = QQ) -> list[tuple]:
    z, o = field.zero, field.one
    return [tuple(o if i == j else z for j in range(n)) for i in range(n)]


def column_space_rank(cols: Sequence[Sequence], field: Field = QQ) -> int:
    if not cols:
        return 0
    return rank(cols, len(cols[0]), field)


def in_span(cols: Sequence[Sequence], v: Sequence, field: Field = QQ) -> bool:
    e = Echelon(len(v), field)
    for c in cols:
        e.add(c)
    return e.contains(v)
