"""Lorentzian almost-contact metric structures and trans-Sasakian functions.

A structure is given in frame components: ``phi[i][j]`` is the ``E_i``
component of ``phi E_j`` and ``xi`` is a frame-component vector.  The 1-form
is always derived as ``eta(X) = g(X, xi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .checks import FAIL, INFO, PASS, Check, Point, Witness, residual_check
from .expr import DomainError, Expr
from .frame import Manifold
from .linalg import Vec, det, mat_vec

__all__ = [
    "StructureData",
    "TransSasakianParams",
    "NotTransSasakian",
    "check_structure",
    "extract_alpha_beta",
    "classify",
]


class NotTransSasakian(Exception):
    """No pair of functions fits nabla_X xi = -alpha phi X - beta phi^2 X."""

    def __init__(self, message: str, checks: list[Check]):
        super().__init__(message)
        self.checks = checks


class StructureData:
    def __init__(self, manifold: Manifold, phi: Sequence[Sequence], xi: Sequence | Vec):
        n = manifold.dim
        chart = manifold.chart
        phi = [[chart.expr(x) for x in row] for row in phi]
        if len(phi) != n or any(len(r) != n for r in phi):
            raise DomainError(f"phi must be a {n}x{n} matrix")
        self.manifold = manifold
        self.phi = phi
        self.xi = xi if isinstance(xi, Vec) else manifold.vec(xi)
        self.eta = manifold.metric.lower(self.xi)

    def phi_apply(self, a: Vec) -> Vec:
        return mat_vec(self.manifold.chart, self.phi, a.comps)

    def phi2_apply(self, a: Vec) -> Vec:
        return self.phi_apply(self.phi_apply(a))

    def eta_of(self, a: Vec) -> Expr:
        acc = self.manifold.chart.zero
        for e, x in zip(self.eta.comps, a.comps):
            if e and x:
                acc = acc + e * x
        return acc


@dataclass
class TransSasakianParams:
    alpha: Expr
    beta: Expr
    xi_alpha: Expr
    xi_beta: Expr
    checks: list[Check] = field(default_factory=list)

    def residual_status(self, eq: str) -> str:
        for c in self.checks:
            if c.id == f"structure.{eq}":
                return c.status
        raise KeyError(eq)

    @property
    def nabla_phi_holds(self) -> bool:
        return self.residual_status("nabla_phi") == PASS


def check_structure(S: StructureData, points: Sequence[Point] | None = None) -> list[Check]:
    """Almost-contact axioms plus the consequences phi xi = 0 and eta o phi = 0."""
    M = S.manifold
    n = M.dim
    chart = M.chart
    units = M.units()
    phi_units = [S.phi_apply(u) for u in units]
    checks = []

    checks.append(
        residual_check(
            "structure.phi_squared",
            (((j,), S.phi_apply(phi_units[j]), units[j] + S.xi * S.eta[j]) for j in range(n)),
            "phi^2 X = X + eta(X) xi",
            points,
        )
    )
    if checks[0].status == FAIL:
        opposite = residual_check(
            "structure.phi_squared_opposite",
            (((j,), S.phi_apply(phi_units[j]), -(units[j] + S.xi * S.eta[j])) for j in range(n)),
            "diagnostic: phi^2 X = -(X + eta(X) xi)",
            points,
        )
        if opposite.status == PASS:
            opposite.status = INFO
            opposite.summary += " holds; phi follows the opposite sign convention"
            checks.append(opposite)
    eta_xi = S.eta_of(S.xi)
    checks.append(residual_check("structure.eta_xi", [((), eta_xi, chart.const(-1))], "eta(xi) = -1", points))
    checks.append(
        residual_check(
            "structure.compatible_metric",
            (
                ((i, j), M.g(phi_units[i], phi_units[j]), M.metric.components[i][j] + S.eta[i] * S.eta[j])
                for i in range(n)
                for j in range(i, n)
            ),
            "g(phi X, phi Y) = g(X,Y) + eta(X) eta(Y)",
            points,
        )
    )
    checks.append(
        residual_check("structure.phi_xi", [((), S.phi_apply(S.xi), M.zero_vec())], "phi xi = 0", points)
    )
    checks.append(
        residual_check(
            "structure.eta_phi",
            (((j,), S.eta_of(phi_units[j]), chart.zero) for j in range(n)),
            "eta(phi X) = 0",
            points,
        )
    )
    return checks


def _fit_alpha_beta(S: StructureData) -> tuple[Expr, Expr] | None:
    """Solve nabla_{E_i} xi = -alpha phi E_i - beta phi^2 E_i from two components."""
    M = S.manifold
    n = M.dim
    for i in range(n):
        u = M.unit(i)
        p1 = S.phi_apply(u)
        if p1.is_zero():
            continue
        p2 = S.phi_apply(p1)
        target = M.nabla(u, S.xi)
        for a in range(n):
            for b in range(a + 1, n):
                m = [[-p1[a], -p2[a]], [-p1[b], -p2[b]]]
                d = det(M.chart, m)
                if d.is_zero():
                    continue
                alpha = (target[a] * m[1][1] - m[0][1] * target[b]) / d
                beta = (m[0][0] * target[b] - m[1][0] * target[a]) / d
                return alpha, beta
    return None


def extract_alpha_beta(S: StructureData, points: Sequence[Point] | None = None) -> TransSasakianParams:
    """Fit alpha, beta from nabla xi, then report the nabla phi, nabla xi and nabla eta residuals.

    Raises :class:`NotTransSasakian` when no pair fits nabla xi exactly.
    """
    M = S.manifold
    n = M.dim
    chart = M.chart
    units = M.units()
    fit = _fit_alpha_beta(S)
    if fit is None:
        check = Check(
            "structure.nabla_xi",
            FAIL,
            "no frame index with phi X != 0 gives a solvable system",
            [Witness((), "phi vanishes on every frame field")],
            nonzero_count=1,
        )
        raise NotTransSasakian("cannot solve for alpha, beta", [check])
    alpha, beta = fit

    nabla_xi = residual_check(
        "structure.nabla_xi",
        (
            ((i,), M.nabla(u, S.xi), -(S.phi_apply(u) * alpha) - S.phi2_apply(u) * beta)
            for i, u in enumerate(units)
        ),
        "nabla_X xi = -alpha phi X - beta phi^2 X",
        points,
    )
    if nabla_xi.status == FAIL:
        raise NotTransSasakian("nabla xi is not of trans-Sasakian form", [nabla_xi])

    def nabla_phi(x: Vec, y: Vec) -> Vec:
        return M.nabla(x, S.phi_apply(y)) - S.phi_apply(M.nabla(x, y))

    def nabla_phi_rhs(x: Vec, y: Vec) -> Vec:
        gxy = M.g(x, y)
        gpxy = M.g(S.phi_apply(x), y)
        ey = S.eta_of(y)
        return (S.xi * gxy - x * ey) * alpha + (S.xi * gpxy - S.phi_apply(x) * ey) * beta

    nabla_phi_check = residual_check(
        "structure.nabla_phi",
        (((i, j), nabla_phi(units[i], units[j]), nabla_phi_rhs(units[i], units[j])) for i, j in product(range(n), repeat=2)),
        "(nabla_X phi)Y = alpha(g(X,Y)xi - eta(Y)X) + beta(g(phi X,Y)xi - eta(Y)phi X)",
        points,
    )
    nabla_phi_check.payload["note"] = (
        "a beta-term written as g(phi X,Y) - eta(Y) phi X mixes a scalar and a vector; "
        "the type-correct form g(phi X,Y) xi - eta(Y) phi X is checked"
    )

    def nabla_eta(x: Vec, y: Vec) -> Expr:
        return M.apply(x, S.eta_of(y)) - S.eta_of(M.nabla(x, y))

    nabla_eta_check = residual_check(
        "structure.nabla_eta",
        (
            (
                (i, j),
                nabla_eta(units[i], units[j]),
                M.g(S.phi_apply(units[i]), units[j]) * alpha
                + M.g(S.phi_apply(units[i]), S.phi_apply(units[j])) * beta,
            )
            for i, j in product(range(n), repeat=2)
        ),
        "(nabla_X eta)Y = alpha g(phi X,Y) + beta g(phi X, phi Y)",
        points,
    )
    orth = residual_check(
        "structure.nabla_xi_orthogonal",
        (((i,), M.g(M.nabla(u, S.xi), S.xi), chart.zero) for i, u in enumerate(units)),
        "g(nabla_X xi, xi) = 0",
        points,
    )
    xi_alpha = M.apply(S.xi, alpha)
    xi_beta = M.apply(S.xi, beta)
    return TransSasakianParams(alpha, beta, xi_alpha, xi_beta, [nabla_xi, nabla_phi_check, nabla_eta_check, orth])


def _is_constant(e: Expr) -> bool:
    return all(e.diff(c).is_zero() for c in range(e.chart.dim))


GENERAL = "trans-Sasakian (general)"
BETA_KENMOTSU = "Lorentzian beta-Kenmotsu"
ALPHA_SASAKIAN = "Lorentzian alpha-Sasakian"
KENMOTSU = "Lorentzian Kenmotsu"
SASAKIAN = "Lorentzian Sasakian"
COSYMPLECTIC = "cosymplectic"


def classify(p: TransSasakianParams) -> str:
    a, b = p.alpha, p.beta
    if a.is_zero() and b.is_zero():
        return COSYMPLECTIC
    if a.is_zero():
        if b == 1:
            return KENMOTSU
        if _is_constant(b):
            return BETA_KENMOTSU
    if b.is_zero():
        if a == 1:
            return SASAKIAN
        if _is_constant(a):
            return ALPHA_SASAKIAN
    return GENERAL
