"""Riemann, Ricci, scalar and concircular curvature in frame components.

Conventions (echoed in every report):

* ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``
* ``S(Y,Z) = trace(X -> R(X,Y)Z)``, i.e. ``S_jk = sum_i R^i_{ijk}``
* ``tau = sum g^{jk} S_jk``
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .checks import Check, Point, residual_check, zero_check
from .expr import DomainError, Expr
from .frame import Manifold, MetricFrame
from .linalg import Vec, vsum

CONVENTIONS = {
    "koszul": "2g(nabla_X Y,Z) = Xg(Y,Z) + Yg(X,Z) - Zg(X,Y) + g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)",
    "riemann": "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z",
    "ricci": "S(Y,Z) = trace(X -> R(X,Y)Z)  (contraction over the first slot)",
    "scalar": "tau = g^{jk} S_jk",
    "concircular": "C(X,Y)Z = R(X,Y)Z - tau/(2n(2n+1)) (g(Y,Z)X - g(X,Z)Y)",
}


class CurvatureTensor:
    """``comps[i][j][k]`` = frame components of ``R(E_i,E_j)E_k``."""

    def __init__(self, manifold: Manifold, comps: list[list[list[Vec]]]):
        self.manifold = manifold
        self.comps = comps

    def component(self, l: int, i: int, j: int, k: int) -> Expr:
        return self.comps[i][j][k][l]

    def __call__(self, x: Vec, y: Vec, z: Vec) -> Vec:
        M = self.manifold
        n = M.dim
        terms = []
        for i, xi in enumerate(x.comps):
            if not xi:
                continue
            for j, yj in enumerate(y.comps):
                if not yj:
                    continue
                xy = xi * yj
                for k, zk in enumerate(z.comps):
                    if zk:
                        terms.append(self.comps[i][j][k] * (xy * zk))
        return vsum(M.chart, n, terms)

    def lowered(self, i: int, j: int, k: int, l: int) -> Expr:
        """``g(R(E_i,E_j)E_k, E_l)``."""
        M = self.manifold
        return M.g(self.comps[i][j][k], M.unit(l))

    def indices(self):
        return product(range(self.manifold.dim), repeat=3)


def riemann(M: Manifold) -> CurvatureTensor:
    """Curvature of the Levi-Civita connection of ``M``, all n^3 frame slots."""
    conn = M.connection
    n = M.dim
    units = M.units()
    Cst = M.frame.structure_constants
    comps = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in product(range(n), repeat=3):
        first = conn.nabla(units[i], conn.gamma[j][k])
        second = conn.nabla(units[j], conn.gamma[i][k])
        third = vsum(
            M.chart, n, (conn.gamma[m][k] * c for m, c in enumerate(Cst[i][j].comps) if c)
        )
        comps[i][j][k] = first - second - third
    return CurvatureTensor(M, comps)


@dataclass
class RicciTensor:
    manifold: Manifold
    comps: list[list[Expr]]

    def __call__(self, a: Vec, b: Vec) -> Expr:
        chart = self.manifold.chart
        acc = chart.zero
        for j, aj in enumerate(a.comps):
            if not aj:
                continue
            for k, bk in enumerate(b.comps):
                if bk and self.comps[j][k]:
                    acc = acc + aj * self.comps[j][k] * bk
        return acc


@dataclass
class ScalarCurvature:
    value: Expr


def ricci(R: CurvatureTensor, g: MetricFrame | None = None) -> RicciTensor:
    M = R.manifold
    n = M.dim
    chart = M.chart
    comps = []
    for j in range(n):
        row = []
        for k in range(n):
            acc = chart.zero
            for i in range(n):
                acc = acc + R.comps[i][j][k][i]
            row.append(acc)
        comps.append(row)
    return RicciTensor(M, comps)


def scalar(S: RicciTensor, g: MetricFrame) -> ScalarCurvature:
    chart = g.chart
    acc = chart.zero
    n = len(S.comps)
    for j in range(n):
        for k in range(n):
            if g.inverse[j][k] and S.comps[j][k]:
                acc = acc + g.inverse[j][k] * S.comps[j][k]
    return ScalarCurvature(acc)


def half_dimension(dim: int) -> int:
    if dim % 2 != 1:
        raise DomainError(f"dimension {dim} is not of the form 2n+1")
    return (dim - 1) // 2


def concircular(R: CurvatureTensor, g: MetricFrame, tau: ScalarCurvature | Expr, n: int | None = None) -> CurvatureTensor:
    M = R.manifold
    dim = M.dim
    if n is None:
        n = half_dimension(dim)
    elif 2 * n + 1 != dim:
        raise DomainError(f"n={n} does not match dimension {dim}")
    tau_value = tau.value if isinstance(tau, ScalarCurvature) else tau
    factor = tau_value / (2 * n * (2 * n + 1))
    G = g.components
    units = M.units()
    comps = [[[None] * dim for _ in range(dim)] for _ in range(dim)]
    for i, j, k in product(range(dim), repeat=3):
        correction = units[i] * G[j][k] - units[j] * G[i][k]
        comps[i][j][k] = R.comps[i][j][k] - correction * factor
    return CurvatureTensor(M, comps)


def curvature_properties(R: CurvatureTensor, S: RicciTensor, points: Sequence[Point] | None = None) -> list[Check]:
    """Antisymmetry, first Bianchi, pair symmetry and Ricci symmetry."""
    M = R.manifold
    n = M.dim
    rng = range(n)
    zero = M.zero_vec()
    checks = [
        residual_check(
            "riemann.antisymmetry",
            (((i, j, k), R.comps[i][j][k] + R.comps[j][i][k], zero) for i, j, k in product(rng, repeat=3)),
            "R(X,Y)Z + R(Y,X)Z = 0",
            points,
        ),
        residual_check(
            "riemann.bianchi1",
            (
                ((i, j, k), R.comps[i][j][k] + R.comps[j][k][i] + R.comps[k][i][j], zero)
                for i, j, k in product(rng, repeat=3)
            ),
            "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0",
            points,
        ),
        residual_check(
            "riemann.pair_symmetry",
            (
                ((i, j, k, l), R.lowered(i, j, k, l), R.lowered(k, l, i, j))
                for i, j, k, l in product(rng, repeat=4)
                if (i, j) < (k, l)
            ),
            "g(R(X,Y)Z,W) = g(R(Z,W)X,Y)",
            points,
        ),
        residual_check(
            "ricci.symmetry",
            (((j, k), S.comps[j][k], S.comps[k][j]) for j in rng for k in rng if j < k),
            "S(X,Y) = S(Y,X)",
            points,
        ),
    ]
    return checks


def connection_properties(M: Manifold, points: Sequence[Point] | None = None) -> list[Check]:
    """Torsion-freeness, metric compatibility and the Jacobi identity on frame fields."""
    n = M.dim
    units = M.units()
    conn = M.connection
    C = M.frame.structure_constants
    G = M.metric.components
    zero = M.zero_vec()
    torsion = residual_check(
        "connection.torsion_free",
        (
            ((i, j), conn.gamma[i][j] - conn.gamma[j][i], C[i][j])
            for i in range(n)
            for j in range(n)
        ),
        "nabla_X Y - nabla_Y X = [X,Y]",
        points,
    )
    compat = residual_check(
        "connection.metric_compatible",
        (
            (
                (i, j, k),
                M.frame.derivative(i, G[j][k]),
                M.g(conn.gamma[i][j], units[k]) + M.g(units[j], conn.gamma[i][k]),
            )
            for i, j, k in product(range(n), repeat=3)
        ),
        "X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)",
        points,
    )
    antisym = residual_check(
        "bracket.antisymmetry",
        (((i, j), C[i][j] + C[j][i], zero) for i in range(n) for j in range(n)),
        "[X,Y] + [Y,X] = 0",
        points,
    )
    jacobi = residual_check(
        "bracket.jacobi",
        (
            (
                (i, j, k),
                M.bracket(units[i], C[j][k]) + M.bracket(units[j], C[k][i]) + M.bracket(units[k], C[i][j]),
                zero,
            )
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(j + 1, n)
        ),
        "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0",
        points,
    )
    return [torsion, compat, antisym, jacobi]


def riemann_zero_check(R: CurvatureTensor, points: Sequence[Point] | None = None) -> Check:
    n = R.manifold.dim
    return zero_check(
        "riemann.components",
        (((i, j, k), R.comps[i][j][k]) for i, j, k in product(range(n), repeat=3) if i < j),
        "R(E_i,E_j)E_k",
        points,
    )


def verify_proposition1(
    R: CurvatureTensor,
    S: RicciTensor,
    structure,
    params,
    points: Sequence[Point] | None = None,
) -> list[Check]:
    """Residuals of the four curvature identities of a trans-Sasakian manifold.

    ``structure`` is a :class:`~transsasakian.structure.StructureData` and
    ``params`` the extracted :class:`~transsasakian.structure.TransSasakianParams`;
    each identity is checked on its own, exactly as stated.
    """
    M = R.manifold
    dim = M.dim
    n = half_dimension(dim)
    units = M.units()
    xi = structure.xi
    phi = structure.phi_apply
    phi2 = structure.phi2_apply
    eta = structure.eta_of
    alpha, beta = params.alpha, params.beta
    xa, xb = params.xi_alpha, params.xi_beta
    ab2 = alpha * alpha + beta * beta
    two_ab = alpha * beta * 2

    def d(v: Vec, f: Expr) -> Expr:
        return M.apply(v, f)

    def r_xi_rhs(x: Vec, y: Vec) -> Vec:
        ex, ey = eta(x), eta(y)
        return (
            (x * ey - y * ex) * ab2
            + (phi(x) * ey - phi(y) * ex) * two_ab
            + phi(x) * d(y, alpha)
            - phi(y) * d(x, alpha)
            + phi2(x) * d(y, beta)
            - phi2(y) * d(x, beta)
        )

    r_xi = residual_check(
        "prop1.R_xi",
        (((i, j), R(units[i], units[j], xi), r_xi_rhs(units[i], units[j])) for i in range(dim) for j in range(dim)),
        "R(X,Y)xi = (a^2+b^2)[eta(Y)X - eta(X)Y] + 2ab[eta(Y)phiX - eta(X)phiY] "
        "+ Y(a)phiX - X(a)phiY + Y(b)phi^2X - X(b)phi^2Y",
        points,
    )
    eta_r = residual_check(
        "prop1.eta_R",
        (
            (
                (i, j, k),
                eta(R.comps[i][j][k]),
                M.g(units[i] * eta(units[j]) - units[j] * eta(units[i]), units[k]) * ab2,
            )
            for i, j, k in product(range(dim), repeat=3)
        ),
        "eta(R(X,Y)Z) = (a^2+b^2) g(eta(Y)X - eta(X)Y, Z)",
        points,
    )
    r_xi_xi = residual_check(
        "prop1.R_xi_xi",
        (
            ((i,), R(xi, u, xi), phi2(u) * (ab2 - xb) + phi(u) * (two_ab - xa))
            for i, u in enumerate(units)
        ),
        "R(xi,X)xi = (a^2+b^2-xi(b)) phi^2 X + (2ab - xi(a)) phi X",
        points,
    )
    ricci_xi = residual_check(
        "prop1.ricci_xi",
        (
            (
                (i,),
                S(u, xi),
                (ab2 * (2 * n) - xb) * eta(u) + d(u, beta) * (2 * n - 1) - d(phi(u), alpha),
            )
            for i, u in enumerate(units)
        ),
        "S(X,xi) = [2n(a^2+b^2) - xi(b)] eta(X) + (2n-1) X(b) - (phi X)(a)",
        points,
    )
    return [r_xi, eta_r, r_xi_xi, ricci_xi]
