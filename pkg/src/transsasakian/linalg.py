"""Vectors and matrices over the rational-function field."""

from __future__ import annotations

from typing import Iterable, Sequence

from .expr import Chart, DomainError, Expr

Matrix = list[list[Expr]]


class Vec:
    """Component vector (frame or coordinate basis) with Expr entries."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: Chart, comps: Iterable):
        self.chart = chart
        self.comps = tuple(chart.expr(c) for c in comps)

    @classmethod
    def zero(cls, chart: Chart, n: int) -> Vec:
        return cls(chart, [chart.zero] * n)

    @classmethod
    def unit(cls, chart: Chart, n: int, i: int) -> Vec:
        return cls(chart, [chart.one if k == i else chart.zero for k in range(n)])

    def __len__(self) -> int:
        return len(self.comps)

    def __iter__(self):
        return iter(self.comps)

    def __getitem__(self, i: int) -> Expr:
        return self.comps[i]

    def _check(self, other: Vec) -> None:
        if len(other) != len(self):
            raise DomainError(f"vector length mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: Vec) -> Vec:
        self._check(other)
        return Vec(self.chart, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: Vec) -> Vec:
        self._check(other)
        return Vec(self.chart, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> Vec:
        return Vec(self.chart, [-a for a in self.comps])

    def __mul__(self, s) -> Vec:
        if isinstance(s, Vec):
            return NotImplemented
        s = self.chart.expr(s)
        if s.is_zero():
            return Vec.zero(self.chart, len(self))
        return Vec(self.chart, [a * s for a in self.comps])

    __rmul__ = __mul__

    def __truediv__(self, s) -> Vec:
        return self * self.chart.expr(s).inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, Vec) and self.comps == other.comps

    def __hash__(self) -> int:
        return hash(self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def nonzero(self) -> list[int]:
        return [i for i, c in enumerate(self.comps) if not c.is_zero()]

    def __repr__(self) -> str:
        return "Vec(" + ", ".join(str(c) for c in self.comps) + ")"


def vsum(chart: Chart, n: int, terms: Iterable[Vec]) -> Vec:
    acc = [chart.zero] * n
    for v in terms:
        for k, c in enumerate(v.comps):
            if c:
                acc[k] = acc[k] + c
    return Vec(chart, acc)


def combine(chart: Chart, coeffs: Sequence[Expr], vecs: Sequence[Vec]) -> Vec:
    """Return sum(coeffs[i] * vecs[i]), skipping zero coefficients."""
    n = len(vecs[0]) if vecs else 0
    return vsum(chart, n, (v * c for c, v in zip(coeffs, vecs) if c))


def mat_vec(chart: Chart, m: Matrix, v: Sequence[Expr]) -> Vec:
    out = []
    for row in m:
        acc = chart.zero
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return Vec(chart, out)


def mat_mul(chart: Chart, a: Matrix, b: Matrix) -> Matrix:
    cols = len(b[0])
    inner = len(b)
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = chart.zero
            for k in range(inner):
                if row[k] and b[k][j]:
                    acc = acc + row[k] * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def identity(chart: Chart, n: int) -> Matrix:
    return [[chart.one if i == j else chart.zero for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def _eliminate(chart: Chart, m: Matrix, rhs: Matrix | None):
    """Gauss-Jordan elimination in place; returns (pivot columns, sign of row swaps)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    sign = 1
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            if rhs is not None:
                rhs[r], rhs[p] = rhs[p], rhs[r]
            sign = -sign
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        if rhs is not None:
            rhs[r] = [x * inv for x in rhs[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                if rhs is not None:
                    rhs[i] = [a - f * b for a, b in zip(rhs[i], rhs[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots, sign


def det(chart: Chart, m: Matrix) -> Expr:
    n = len(m)
    if any(len(row) != n for row in m):
        raise DomainError("determinant of a non-square matrix")
    a = [list(row) for row in m]
    result = chart.one
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return chart.zero
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        piv = a[c][c]
        result = result * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def rank(chart: Chart, m: Matrix) -> int:
    if not m:
        return 0
    pivots, _ = _eliminate(chart, [list(r) for r in m], None)
    return len(pivots)


def inverse(chart: Chart, m: Matrix) -> Matrix:
    n = len(m)
    a = [list(row) for row in m]
    rhs = identity(chart, n)
    pivots, _ = _eliminate(chart, a, rhs)
    if len(pivots) != n:
        raise DomainError("matrix is singular over the rational-function field")
    return rhs


def solve(chart: Chart, m: Matrix, b: Sequence[Expr]) -> Vec:
    """Solve the square nonsingular system ``m x = b``."""
    n = len(m)
    a = [list(row) for row in m]
    rhs = [[chart.expr(x)] for x in b]
    pivots, _ = _eliminate(chart, a, rhs)
    if len(pivots) != n:
        raise DomainError("matrix is singular over the rational-function field")
    return Vec(chart, [r[0] for r in rhs])
