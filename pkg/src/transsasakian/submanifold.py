"""Submanifolds modeled as involutive tangent distributions.

A :class:`SubmanifoldSpec` lists tangent fields by their ambient frame
components.  All projections are exact Gram-matrix solves; the normal frame
is orthogonal but not normalized so that nothing leaves the rational
function field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

from .checks import FAIL, FALSE, PASS, TRUE, Check, Point, Witness, residual_check, zero_check
from .curvature import CurvatureTensor
from .expr import DomainError, Expr
from .frame import Manifold
from .linalg import Matrix, Vec, det, inverse, mat_vec, rank, vsum

__all__ = [
    "SubmanifoldSpec",
    "Submanifold",
    "NotInvariant",
    "UnsupportedConfiguration",
    "normal_complement",
    "gauss_split",
    "second_fundamental_form",
    "shape_operator",
    "normal_curvature",
    "nabla_sigma",
    "check_invariant",
    "verify_theorem1",
    "gauss_equation_check",
    "sigma_zero_check",
]


class UnsupportedConfiguration(DomainError):
    """Degenerate induced metric (a null tangent or normal direction)."""


class NotInvariant(DomainError):
    def __init__(self, message: str, check: Check | None = None):
        super().__init__(message)
        self.check = check


@dataclass
class SubmanifoldSpec:
    name: str
    tangent: list[Vec]
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.names:
            self.names = [f"e{i + 1}" for i in range(len(self.tangent))]


@dataclass
class NormalFrame:
    fields: list[Vec]
    norms: list[Expr]


class Submanifold:
    """All extrinsic data of one distribution inside a manifold bundle."""

    def __init__(self, manifold: Manifold, spec: SubmanifoldSpec):
        self.manifold = manifold
        self.spec = spec
        self.tangent = list(spec.tangent)
        self.m = len(self.tangent)
        if self.m == 0:
            raise DomainError(f"submanifold {spec.name!r} has no tangent fields")
        chart = manifold.chart
        self.chart = chart
        self.gram: Matrix = [[manifold.g(a, b) for b in self.tangent] for a in self.tangent]
        if rank(chart, [list(v.comps) for v in self.tangent]) < self.m:
            raise DomainError(f"tangent fields of {spec.name!r} are linearly dependent")
        if det(chart, self.gram).is_zero():
            raise UnsupportedConfiguration(f"induced metric on {spec.name!r} is degenerate")
        self.gram_inverse = inverse(chart, self.gram)

    # -- projections --------------------------------------------------------

    def tangent_coeffs(self, v: Vec) -> Vec:
        """Coefficients ``c`` with ``tan(v) = sum c_a e_a``."""
        M = self.manifold
        return mat_vec(self.chart, self.gram_inverse, [M.g(v, e) for e in self.tangent])

    def from_tangent(self, c: Sequence[Expr]) -> Vec:
        return self.manifold.combine(list(c), self.tangent)

    def tan(self, v: Vec) -> Vec:
        return self.from_tangent(self.tangent_coeffs(v).comps)

    def nor(self, v: Vec) -> Vec:
        return v - self.tan(v)

    def in_span(self, v: Vec) -> bool:
        return self.nor(v).is_zero()

    # -- structure of the distribution --------------------------------------

    @cached_property
    def brackets(self) -> dict[tuple[int, int], Vec]:
        M = self.manifold
        return {(a, b): M.bracket(self.tangent[a], self.tangent[b]) for a in range(self.m) for b in range(a + 1, self.m)}

    def involutivity_check(self) -> Check:
        witnesses = []
        for (a, b), br in self.brackets.items():
            off = self.nor(br)
            for k in off.nonzero():
                witnesses.append(Witness((a + 1, b + 1, k + 1), str(off[k])))
        if witnesses:
            return Check(
                "submanifold.involutive",
                FAIL,
                "[e_a, e_b] leaves the distribution; it is not integrable",
                witnesses[:12],
                nonzero_count=len(witnesses),
            )
        return Check("submanifold.involutive", PASS, "[e_a, e_b] stays in the distribution")

    @property
    def involutive(self) -> bool:
        return all(self.in_span(br) for br in self.brackets.values())

    def _require_involutive(self) -> None:
        if not self.involutive:
            raise DomainError(f"distribution {self.spec.name!r} is not involutive")

    @cached_property
    def normal_frame(self) -> NormalFrame:
        M = self.manifold
        normals: list[Vec] = []
        norms: list[Expr] = []
        target = M.dim - self.m
        for k in range(M.dim):
            if len(normals) == target:
                break
            v = self.nor(M.unit(k))
            for n_, q in zip(normals, norms):
                c = M.g(v, n_)
                if c:
                    v = v - n_ * (c / q)
            if v.is_zero():
                continue
            v = v / v[v.nonzero()[0]]
            q = M.g(v, v)
            if q.is_zero():
                continue
            normals.append(v)
            norms.append(q)
        if len(normals) != target:
            raise UnsupportedConfiguration(
                f"could not build a nondegenerate orthogonal normal frame for {self.spec.name!r}"
            )
        return NormalFrame(normals, norms)

    @property
    def normals(self) -> list[Vec]:
        return self.normal_frame.fields

    def normal_coeffs(self, v: Vec) -> list[Expr]:
        M = self.manifold
        return [M.g(v, n_) / q for n_, q in zip(self.normal_frame.fields, self.normal_frame.norms)]

    # -- Gauss / Weingarten --------------------------------------------------

    def gauss_split(self, x: Vec, y: Vec) -> tuple[Vec, Vec]:
        d = self.manifold.nabla(x, y)
        t = self.tan(d)
        return t, d - t

    @cached_property
    def _split(self) -> dict[tuple[int, int], tuple[Vec, Vec]]:
        self._require_involutive()
        return {(a, b): self.gauss_split(self.tangent[a], self.tangent[b]) for a, b in product(range(self.m), repeat=2)}

    @cached_property
    def sigma(self) -> dict[tuple[int, int], Vec]:
        """``sigma[(a, b)]`` = sigma(e_a, e_b) as an ambient frame vector."""
        return {k: v[1] for k, v in self._split.items()}

    @cached_property
    def induced(self) -> dict[tuple[int, int], Vec]:
        """Tangent-frame coefficients of the induced ``nabla_{e_a} e_b``."""
        return {k: self.tangent_coeffs(v[0]) for k, v in self._split.items()}

    @property
    def totally_geodesic(self) -> bool:
        return all(v.is_zero() for v in self.sigma.values())

    def sigma_of(self, x: Sequence[Expr], y: Sequence[Expr]) -> Vec:
        """sigma on tangent-coefficient vectors."""
        terms = []
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if yb:
                    terms.append(self.sigma[a, b] * (xa * yb))
        return vsum(self.chart, self.manifold.dim, terms)

    def induced_nabla(self, x: Vec, y: Vec) -> Vec:
        return self.tan(self.manifold.nabla(x, y))

    def normal_nabla(self, x: Vec, v: Vec) -> Vec:
        return self.nor(self.manifold.nabla(x, v))

    @cached_property
    def shape(self) -> list[Matrix]:
        """``shape[alpha][b][a]``: e_b coefficient of A_{n_alpha} e_a."""
        self._require_involutive()
        out = []
        for n_ in self.normals:
            cols = [(-self.tangent_coeffs(self.manifold.nabla(e, n_))).comps for e in self.tangent]
            out.append([[cols[a][b] for a in range(self.m)] for b in range(self.m)])
        return out

    def shape_apply(self, v: Vec, x: Sequence[Expr]) -> Vec:
        """A_V X for a normal vector ``v`` and tangent coefficients ``x``; tangent coefficients out."""
        coeffs = [self.chart.zero] * self.m
        for va, A in zip(self.normal_coeffs(v), self.shape):
            if not va:
                continue
            Ax = mat_vec(self.chart, A, x)
            coeffs = [c + va * y for c, y in zip(coeffs, Ax.comps)]
        return Vec(self.chart, coeffs)

    @cached_property
    def normal_connection(self) -> dict[tuple[int, int], list[Expr]]:
        """Normal-frame coefficients of nabla-perp_{e_a} n_alpha."""
        return {
            (a, al): self.normal_coeffs(self.normal_nabla(e, n_))
            for (a, e), (al, n_) in product(enumerate(self.tangent), enumerate(self.normals))
        }

    @cached_property
    def normal_curvature(self) -> dict[tuple[int, int, int], Vec]:
        """R-perp(e_a, e_b) n_alpha as an ambient (normal) vector."""
        self._require_involutive()
        out = {}
        for a, b in product(range(self.m), repeat=2):
            ea, eb = self.tangent[a], self.tangent[b]
            br = self.manifold.bracket(ea, eb)
            for al, n_ in enumerate(self.normals):
                out[a, b, al] = (
                    self.normal_nabla(ea, self.normal_nabla(eb, n_))
                    - self.normal_nabla(eb, self.normal_nabla(ea, n_))
                    - self.normal_nabla(br, n_)
                )
        return out

    def rperp_apply(self, a: int, b: int, v: Vec) -> Vec:
        terms = [self.normal_curvature[a, b, al] * c for al, c in enumerate(self.normal_coeffs(v)) if c]
        return vsum(self.chart, self.manifold.dim, terms)

    @cached_property
    def nabla_sigma(self) -> dict[tuple[int, int, int], Vec]:
        """(nabla_{e_x} sigma)(e_y, e_z) as ambient normal vectors."""
        out = {}
        sig = self.sigma
        for x, y, z in product(range(self.m), repeat=3):
            val = self.normal_nabla(self.tangent[x], sig[y, z])
            wy = self.induced[x, y]
            wz = self.induced[x, z]
            e = [self.chart.one if k == z else self.chart.zero for k in range(self.m)]
            f = [self.chart.one if k == y else self.chart.zero for k in range(self.m)]
            val = val - self.sigma_of(wy.comps, e) - self.sigma_of(f, wz.comps)
            out[x, y, z] = val
        return out

    @property
    def is_parallel(self) -> bool:
        return all(v.is_zero() for v in self.nabla_sigma.values())

    @cached_property
    def induced_curvature(self) -> dict[tuple[int, int, int], Vec]:
        """R(e_a, e_b) e_c of the induced connection, as ambient tangent vectors."""
        self._require_involutive()
        M = self.manifold
        E = self.tangent
        first = {(b, c): self.induced_nabla(E[b], E[c]) for b, c in product(range(self.m), repeat=2)}
        out = {}
        for a, b, c in product(range(self.m), repeat=3):
            br = M.bracket(E[a], E[b])
            out[a, b, c] = (
                self.induced_nabla(E[a], first[b, c])
                - self.induced_nabla(E[b], first[a, c])
                - self.induced_nabla(br, E[c])
            )
        return out

    # -- self-consistency --------------------------------------------------

    def properties(self, points: Sequence[Point] | None = None) -> list[Check]:
        M = self.manifold
        m = self.m
        rng = range(m)
        checks = [
            residual_check(
                "submanifold.normal_orthogonal",
                (((a, al), M.g(e, n_), self.chart.zero) for (a, e), (al, n_) in product(enumerate(self.tangent), enumerate(self.normals))),
                "g(e_a, n_alpha) = 0",
                points,
            ),
            residual_check(
                "submanifold.sigma_symmetric",
                (((a, b), self.sigma[a, b], self.sigma[b, a]) for a in rng for b in rng if a < b),
                "sigma(X,Y) = sigma(Y,X)",
                points,
            ),
            residual_check(
                "submanifold.shape_reciprocity",
                (
                    (
                        (a, b, al),
                        M.g(self.from_tangent(self.shape_apply(n_, _unit(self.chart, m, a)).comps), self.tangent[b]),
                        M.g(self.sigma[a, b], n_),
                    )
                    for a, b in product(rng, repeat=2)
                    for al, n_ in enumerate(self.normals)
                ),
                "g(A_V X, Y) = g(sigma(X,Y), V)",
                points,
            ),
            residual_check(
                "submanifold.normal_metric_compatible",
                (
                    (
                        (a, al, be),
                        M.apply(self.tangent[a], M.g(self.normals[al], self.normals[be])),
                        M.g(self.normal_nabla(self.tangent[a], self.normals[al]), self.normals[be])
                        + M.g(self.normals[al], self.normal_nabla(self.tangent[a], self.normals[be])),
                    )
                    for a in rng
                    for al in range(len(self.normals))
                    for be in range(len(self.normals))
                ),
                "X g(V,W) = g(nabla-perp_X V, W) + g(V, nabla-perp_X W)",
                points,
            ),
            residual_check(
                "submanifold.nabla_sigma_symmetric",
                (((x, y, z), self.nabla_sigma[x, y, z], self.nabla_sigma[x, z, y]) for x, y, z in product(rng, repeat=3) if y < z),
                "(nabla_X sigma)(Y,Z) = (nabla_X sigma)(Z,Y)",
                points,
            ),
            residual_check(
                "submanifold.rperp_antisymmetric",
                (
                    ((a, b, al), self.normal_curvature[a, b, al] + self.normal_curvature[b, a, al], M.zero_vec())
                    for a, b in product(rng, repeat=2)
                    for al in range(len(self.normals))
                ),
                "R-perp(X,Y) + R-perp(Y,X) = 0",
                points,
            ),
        ]
        return checks


def _unit(chart, m: int, a: int) -> list[Expr]:
    return [chart.one if k == a else chart.zero for k in range(m)]


# -- module-level operations -------------------------------------------------


def normal_complement(M: Manifold, spec: SubmanifoldSpec) -> NormalFrame:
    return Submanifold(M, spec).normal_frame


def gauss_split(sub: Submanifold, x: Vec, y: Vec) -> tuple[Vec, Vec]:
    for v in (x, y):
        if not sub.in_span(v):
            raise DomainError("gauss_split needs tangent arguments")
    return sub.gauss_split(x, y)


def second_fundamental_form(sub: Submanifold) -> dict[tuple[int, int], Vec]:
    return sub.sigma


def shape_operator(sub: Submanifold, v: Vec) -> Matrix:
    """Matrix of A_V in the tangent frame: column a holds A_V e_a."""
    if not sub.nor(v) == v:
        raise DomainError("shape_operator needs a normal vector")
    cols = [sub.shape_apply(v, _unit(sub.chart, sub.m, a)).comps for a in range(sub.m)]
    return [[cols[a][b] for a in range(sub.m)] for b in range(sub.m)]


def normal_curvature(sub: Submanifold) -> dict[tuple[int, int, int], Vec]:
    return sub.normal_curvature


def nabla_sigma(sub: Submanifold) -> dict[tuple[int, int, int], Vec]:
    return sub.nabla_sigma


def check_invariant(structure, sub: Submanifold) -> Check:
    """xi tangent and phi(TM) inside TM; witnesses name the offending field."""
    witnesses = []
    if not sub.in_span(structure.xi):
        witnesses.append(Witness((), "xi is not tangent"))
    for a, e in enumerate(sub.tangent):
        off = sub.nor(structure.phi_apply(e))
        if not off.is_zero():
            witnesses.append(Witness((a + 1,), f"phi {sub.spec.names[a]} leaves the distribution"))
    if witnesses:
        return Check("submanifold.invariant", FALSE, "not an invariant submanifold", witnesses, nonzero_count=len(witnesses))
    return Check("submanifold.invariant", TRUE, "xi tangent and phi(TM) in TM")


def normal_phi_stability(structure, sub: Submanifold) -> Check:
    witnesses = []
    for al, n_ in enumerate(sub.normals):
        t = sub.tan(structure.phi_apply(n_))
        if not t.is_zero():
            witnesses.append(Witness((al + 1,), "phi n leaves the normal bundle"))
    if witnesses:
        return Check("submanifold.normal_phi_stable", FAIL, "normal bundle is not phi-stable", witnesses, nonzero_count=len(witnesses))
    return Check("submanifold.normal_phi_stable", PASS, "phi maps the normal bundle to itself")


def _require_invariant(structure, sub: Submanifold) -> None:
    inv = check_invariant(structure, sub)
    if inv.status != TRUE:
        raise NotInvariant(f"{sub.spec.name!r} is not an invariant submanifold", inv)
    if not sub.involutive:
        raise NotInvariant(f"{sub.spec.name!r} is not involutive")


def verify_theorem1(
    structure,
    sub: Submanifold,
    ambient_R: CurvatureTensor,
    points: Sequence[Point] | None = None,
) -> list[Check]:
    _require_invariant(structure, sub)
    stable = normal_phi_stability(structure, sub)
    M = sub.manifold
    m = sub.m
    rng = range(m)
    xi_t = sub.tangent_coeffs(structure.xi)
    phi_t = [sub.tangent_coeffs(structure.phi_apply(e)).comps for e in sub.tangent]
    unit = [_unit(sub.chart, m, a) for a in rng]
    R = sub.induced_curvature

    def induced_R_xi(a: int, b: int) -> Vec:
        return vsum(sub.chart, M.dim, (R[a, b, c] * xc for c, xc in enumerate(xi_t.comps) if xc))

    checks = [
        stable,
        residual_check(
            "theorem1.R_xi",
            (((a, b), ambient_R(sub.tangent[a], sub.tangent[b], structure.xi), induced_R_xi(a, b)) for a in rng for b in rng),
            "R~(X,Y)xi = R(X,Y)xi",
            points,
        ),
        residual_check(
            "theorem1.sigma_phi_symmetric",
            (((a, b), sub.sigma_of(unit[a], phi_t[b]), sub.sigma_of(phi_t[a], unit[b])) for a in rng for b in rng),
            "sigma(X, phi Y) = sigma(phi X, Y)",
            points,
        ),
    ]
    if stable.status == PASS:
        checks.append(
            residual_check(
                "theorem1.sigma_phi",
                (((a, b), sub.sigma_of(unit[a], phi_t[b]), structure.phi_apply(sub.sigma[a, b])) for a in rng for b in rng),
                "sigma(X, phi Y) = phi sigma(X,Y)",
                points,
            )
        )
    else:
        checks.append(Check("theorem1.sigma_phi", FAIL, "phi does not act on the normal bundle"))
    checks.append(
        residual_check(
            "theorem1.sigma_xi",
            (((a,), sub.sigma_of(unit[a], xi_t.comps), M.zero_vec()) for a in rng),
            "sigma(X, xi) = 0",
            points,
        )
    )
    checks.append(
        residual_check(
            "theorem1.shape_xi",
            (((al,), sub.shape_apply(n_, xi_t.comps), Vec.zero(sub.chart, m)) for al, n_ in enumerate(sub.normals)),
            "A_V xi = 0",
            points,
        )
    )
    return checks


def gauss_equation_check(
    sub: Submanifold,
    ambient_R: CurvatureTensor,
    points: Sequence[Point] | None = None,
) -> list[Check]:
    """Tangential and normal parts of the Gauss equation on all tangent triples."""
    sub._require_involutive()
    m = sub.m
    E = sub.tangent
    tan_items = []
    nor_items = []
    for a, b, c in product(range(m), repeat=3):
        full = ambient_R(E[a], E[b], E[c])
        lhs_t = sub.tan(full)
        lhs_n = full - lhs_t
        A1 = sub.from_tangent(sub.shape_apply(sub.sigma[a, c], _unit(sub.chart, m, b)).comps)
        A2 = sub.from_tangent(sub.shape_apply(sub.sigma[b, c], _unit(sub.chart, m, a)).comps)
        tan_items.append(((a, b, c), lhs_t, sub.induced_curvature[a, b, c] + A1 - A2))
        nor_items.append(((a, b, c), lhs_n, sub.nabla_sigma[a, b, c] - sub.nabla_sigma[b, a, c]))
    return [
        residual_check(
            "gauss.tangential",
            tan_items,
            "tan R~(X,Y)Z = R(X,Y)Z + A_{sigma(X,Z)}Y - A_{sigma(Y,Z)}X",
            points,
        ),
        residual_check(
            "gauss.normal",
            nor_items,
            "nor R~(X,Y)Z = (nabla_X sigma)(Y,Z) - (nabla_Y sigma)(X,Z)",
            points,
        ),
    ]


def sigma_zero_check(sub: Submanifold, points: Sequence[Point] | None = None) -> Check:
    return zero_check(
        "submanifold.sigma",
        (((a, b), sub.sigma[a, b]) for a, b in product(range(sub.m), repeat=2) if a <= b),
        "sigma(e_a, e_b); ZERO means totally geodesic",
        points,
    )
