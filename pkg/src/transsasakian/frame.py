"""Vector fields, frames, frame metrics and the Levi-Civita connection.

Vector fields are first-order operators with coordinate-basis coefficients.
Everything downstream works in *frame* components: a frame-component vector
``a`` (a :class:`~transsasakian.linalg.Vec`) stands for ``sum_i a[i] E_i``.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Sequence

from .expr import Chart, DomainError, Expr
from .linalg import Matrix, Vec, combine, det, identity, inverse, mat_mul, mat_vec, vsum

__all__ = [
    "VectorField",
    "Frame",
    "MetricFrame",
    "Connection",
    "Manifold",
    "vf_apply",
    "lie_bracket",
    "to_frame_components",
    "koszul_connection",
    "covariant_derivative",
    "metric_pair",
]


class ChartMismatch(DomainError):
    pass


class VectorField:
    """A vector field ``sum_c coeffs[c] * d/dx_c`` on one chart."""

    __slots__ = ("chart", "coeffs")

    def __init__(self, chart: Chart, coeffs: Sequence):
        if len(coeffs) != chart.dim:
            raise DomainError(
                f"vector field needs {chart.dim} coefficients, got {len(coeffs)}"
            )
        self.chart = chart
        self.coeffs = tuple(chart.expr(c) for c in coeffs)

    def _same_chart(self, other: VectorField) -> None:
        if other.chart != self.chart:
            raise ChartMismatch("vector fields live on different charts")

    def __call__(self, f: Expr) -> Expr:
        f = self.chart.expr(f)
        acc = self.chart.zero
        for c, a in enumerate(self.coeffs):
            if a:
                df = f.diff(c)
                if df:
                    acc = acc + a * df
        return acc

    def bracket(self, other: VectorField) -> VectorField:
        self._same_chart(other)
        return VectorField(
            self.chart, [self(b) - other(a) for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __add__(self, other: VectorField) -> VectorField:
        self._same_chart(other)
        return VectorField(self.chart, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: VectorField) -> VectorField:
        self._same_chart(other)
        return VectorField(self.chart, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> VectorField:
        return VectorField(self.chart, [-a for a in self.coeffs])

    def __mul__(self, s) -> VectorField:
        s = self.chart.expr(s)
        return VectorField(self.chart, [a * s for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorField) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def __repr__(self) -> str:
        return "VectorField(" + ", ".join(str(a) for a in self.coeffs) + ")"


def vf_apply(X: VectorField, f: Expr) -> Expr:
    return X(f)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    return X.bracket(Y)


class Frame:
    """Ordered invertible set of vector fields spanning the tangent space.

    Construction fails fast on a singular coefficient matrix, reporting the
    determinant.
    """

    def __init__(self, chart: Chart, fields: Sequence[VectorField], names: Sequence[str] | None = None):
        fields = tuple(fields)
        if len(fields) != chart.dim:
            raise DomainError(f"a frame on a {chart.dim}-dimensional chart needs {chart.dim} fields, got {len(fields)}")
        for f in fields:
            if f.chart != chart:
                raise ChartMismatch("frame field on a different chart")
        self.chart = chart
        self.fields = fields
        self.names = tuple(names) if names is not None else tuple(f"E{i + 1}" for i in range(len(fields)))
        # column i holds the coordinate coefficients of fields[i]
        self.matrix: Matrix = [[f.coeffs[c] for f in fields] for c in range(chart.dim)]
        self.determinant = det(chart, self.matrix)
        if self.determinant.is_zero():
            raise DomainError("frame fields are linearly dependent (determinant is 0)")
        self.inverse_matrix = inverse(chart, self.matrix)
        if mat_mul(chart, self.inverse_matrix, self.matrix) != identity(chart, self.dim):
            raise DomainError("frame inverse check failed")

    @property
    def dim(self) -> int:
        return len(self.fields)

    def components(self, X: VectorField) -> Vec:
        if X.chart != self.chart:
            raise ChartMismatch("vector field on a different chart")
        return mat_vec(self.chart, self.inverse_matrix, X.coeffs)

    def field(self, a: Vec) -> VectorField:
        """Coordinate-basis vector field with frame components ``a``."""
        return VectorField(self.chart, mat_vec(self.chart, self.matrix, a.comps).comps)

    def unit(self, i: int) -> Vec:
        return Vec.unit(self.chart, self.dim, i)

    def derivative(self, i: int, f: Expr) -> Expr:
        """``E_i(f)``."""
        return self._derivative(i, f)

    @lru_cache(maxsize=None)
    def _derivative(self, i: int, f: Expr) -> Expr:
        return self.fields[i](f)

    def apply(self, a: Vec, f: Expr) -> Expr:
        """Directional derivative of ``f`` along the frame-component vector ``a``."""
        acc = self.chart.zero
        for i, ai in enumerate(a.comps):
            if ai:
                d = self._derivative(i, f)
                if d:
                    acc = acc + ai * d
        return acc

    @cached_property
    def structure_constants(self) -> list[list[Vec]]:
        """``C[i][j]`` = frame components of ``[E_i, E_j]``."""
        n = self.dim
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            out[i][i] = Vec.zero(self.chart, n)
            for j in range(i + 1, n):
                c = self.components(self.fields[i].bracket(self.fields[j]))
                out[i][j] = c
                out[j][i] = -c
        return out

    def bracket(self, a: Vec, b: Vec) -> Vec:
        """Frame components of ``[A, B]`` for frame-component vectors ``a``, ``b``."""
        n = self.dim
        C = self.structure_constants
        terms = [Vec(self.chart, [self.apply(a, bk) - self.apply(b, ak) for ak, bk in zip(a.comps, b.comps)])]
        for i, ai in enumerate(a.comps):
            if not ai:
                continue
            for j, bj in enumerate(b.comps):
                if bj and i != j:
                    terms.append(C[i][j] * (ai * bj))
        return vsum(self.chart, n, terms)


def to_frame_components(X: VectorField, F: Frame) -> Vec:
    return F.components(X)


class MetricFrame:
    """Symmetric nondegenerate metric given by ``g_ij = g(E_i, E_j)``."""

    def __init__(self, frame: Frame, components: Sequence[Sequence]):
        chart = frame.chart
        n = frame.dim
        comps = [[chart.expr(x) for x in row] for row in components]
        if len(comps) != n or any(len(r) != n for r in comps):
            raise DomainError(f"metric must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if comps[i][j] != comps[j][i]:
                    raise DomainError(f"metric is not symmetric at ({i + 1},{j + 1})")
        self.frame = frame
        self.chart = chart
        self.components = comps
        self.determinant = det(chart, comps)
        if self.determinant.is_zero():
            raise DomainError("metric is degenerate (determinant is 0)")
        self.inverse = inverse(chart, comps)

    def __call__(self, a: Vec, b: Vec) -> Expr:
        chart = self.chart
        acc = chart.zero
        for i, ai in enumerate(a.comps):
            if not ai:
                continue
            for j, bj in enumerate(b.comps):
                gij = self.components[i][j]
                if bj and gij:
                    acc = acc + ai * gij * bj
        return acc

    def lower(self, a: Vec) -> Vec:
        return mat_vec(self.chart, self.components, a.comps)

    def raise_(self, w: Sequence[Expr]) -> Vec:
        return mat_vec(self.chart, self.inverse, w)

    def negative_directions(self) -> int | None:
        """Number of negative eigen-directions for a constant diagonal metric, else None."""
        n = self.frame.dim
        diag = []
        for i in range(n):
            for j in range(n):
                x = self.components[i][j]
                if i != j and x:
                    return None
            if not self.components[i][i].is_constant():
                return None
            diag.append(self.components[i][i].constant_value())
        return sum(1 for d in diag if d < 0)


def metric_pair(g: MetricFrame, X: VectorField, Y: VectorField) -> Expr:
    return g(g.frame.components(X), g.frame.components(Y))


class Connection:
    """``gamma[i][j]`` holds the frame components of ``nabla_{E_i} E_j``."""

    def __init__(self, frame: Frame, gamma: list[list[Vec]]):
        self.frame = frame
        self.gamma = gamma

    def coefficient(self, k: int, i: int, j: int) -> Expr:
        """``Gamma^k_{ij}``."""
        return self.gamma[i][j][k]

    def nabla(self, a: Vec, b: Vec) -> Vec:
        """Frame components of ``nabla_A B`` (Leibniz expansion)."""
        F = self.frame
        n = F.dim
        terms = [Vec(F.chart, [F.apply(a, bj) for bj in b.comps])]
        for i, ai in enumerate(a.comps):
            if not ai:
                continue
            for j, bj in enumerate(b.comps):
                if bj:
                    terms.append(self.gamma[i][j] * (ai * bj))
        return vsum(F.chart, n, terms)


def koszul_connection(g: MetricFrame) -> Connection:
    """Levi-Civita connection from the Koszul formula in frame form.

    2 g(nabla_i E_j, E_k) = E_i g_jk + E_j g_ik - E_k g_ij
                            + g([E_i,E_j],E_k) - g([E_j,E_k],E_i) + g([E_k,E_i],E_j)
    """
    F = g.frame
    chart = F.chart
    n = F.dim
    C = F.structure_constants
    G = g.components
    half = chart.const(1) / 2

    def cg(i: int, j: int, k: int) -> Expr:
        # g([E_i, E_j], E_k)
        acc = chart.zero
        for l, c in enumerate(C[i][j].comps):
            if c and G[l][k]:
                acc = acc + c * G[l][k]
        return acc

    gamma = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            lowered = []
            for k in range(n):
                val = (
                    F.derivative(i, G[j][k])
                    + F.derivative(j, G[i][k])
                    - F.derivative(k, G[i][j])
                    + cg(i, j, k)
                    - cg(j, k, i)
                    + cg(k, i, j)
                )
                lowered.append(val * half)
            gamma[i][j] = g.raise_(lowered)
    return Connection(F, gamma)


def covariant_derivative(C: Connection, X: VectorField, Y: VectorField) -> VectorField:
    F = C.frame
    return F.field(C.nabla(F.components(X), F.components(Y)))


class Manifold:
    """A chart, a frame and a frame metric, with the Levi-Civita connection cached."""

    def __init__(self, chart: Chart, frame: Frame, metric: MetricFrame, name: str = ""):
        self.chart = chart
        self.frame = frame
        self.metric = metric
        self.name = name

    @property
    def dim(self) -> int:
        return self.frame.dim

    @cached_property
    def connection(self) -> Connection:
        return koszul_connection(self.metric)

    def vec(self, comps: Sequence) -> Vec:
        if len(comps) != self.dim:
            raise DomainError(f"expected {self.dim} frame components, got {len(comps)}")
        return Vec(self.chart, comps)

    def unit(self, i: int) -> Vec:
        return self.frame.unit(i)

    def units(self) -> list[Vec]:
        return [self.unit(i) for i in range(self.dim)]

    def zero_vec(self) -> Vec:
        return Vec.zero(self.chart, self.dim)

    def g(self, a: Vec, b: Vec) -> Expr:
        return self.metric(a, b)

    def nabla(self, a: Vec, b: Vec) -> Vec:
        return self.connection.nabla(a, b)

    def bracket(self, a: Vec, b: Vec) -> Vec:
        return self.frame.bracket(a, b)

    def apply(self, a: Vec, f: Expr) -> Expr:
        return self.frame.apply(a, f)

    def combine(self, coeffs: Sequence[Expr], vecs: Sequence[Vec]) -> Vec:
        if not vecs:
            return self.zero_vec()
        return combine(self.chart, coeffs, vecs)
