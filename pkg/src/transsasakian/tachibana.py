"""Tachibana tensors Q(A, T) and the theorem evaluators built from them.

Tensors here live on the submanifold: slots are indexed by the tangent frame
``e_1..e_m`` and values are scalars (Expr) or ambient frame vectors (Vec).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Sequence, Union

from .checks import (
    FAIL,
    FALSE,
    INFO,
    NONZERO,
    PASS,
    REFUSED,
    TRUE,
    ZERO,
    Check,
    Point,
    condition_check,
    zero_check,
)
from .curvature import CurvatureTensor, RicciTensor, concircular, half_dimension
from .expr import Chart, DomainError, Expr
from .frame import Manifold
from .linalg import Matrix, Vec
from .structure import StructureData, TransSasakianParams
from .submanifold import NotInvariant, Submanifold, check_invariant

Value = Union[Expr, Vec]

__all__ = [
    "CovariantTensor",
    "wedge_apply",
    "tachibana_Q",
    "curvature_dot",
    "TheoremContext",
    "TheoremReport",
    "theorem_report",
    "THEOREMS",
]


class CovariantTensor:
    """A (0,k) tensor on an m-dimensional frame with scalar or vector values.

    ``symmetric`` lists slot pairs under which the components must be
    symmetric; this is verified at construction.
    """

    def __init__(
        self,
        chart: Chart,
        m: int,
        rank: int,
        comps: dict[tuple[int, ...], Value],
        bundle: str = "scalar",
        symmetric: Sequence[tuple[int, int]] = (),
        width: int = 0,
    ):
        if bundle not in ("scalar", "tangent", "normal"):
            raise DomainError(f"unknown value bundle {bundle!r}")
        if bundle != "scalar" and width <= 0:
            raise DomainError("vector-valued tensors need the value width")
        self.chart = chart
        self.m = m
        self.rank = rank
        self.bundle = bundle
        self.width = width
        self.comps = dict(comps)
        self.symmetric = tuple(symmetric)
        for idx in product(range(m), repeat=rank):
            if idx not in self.comps:
                raise DomainError(f"missing component {idx}")
        for s1, s2 in self.symmetric:
            for idx in self.comps:
                swapped = list(idx)
                swapped[s1], swapped[s2] = swapped[s2], swapped[s1]
                if self.comps[idx] != self.comps[tuple(swapped)]:
                    raise DomainError(f"component {idx} breaks the declared ({s1},{s2}) symmetry")

    def zero_value(self) -> Value:
        if self.bundle == "scalar":
            return self.chart.zero
        return Vec.zero(self.chart, self.width)

    def __getitem__(self, idx: tuple[int, ...]) -> Value:
        return self.comps[idx]

    def __add__(self, other: CovariantTensor) -> CovariantTensor:
        if (self.m, self.rank, self.bundle) != (other.m, other.rank, other.bundle):
            raise DomainError("tensor shapes differ")
        comps = {k: self.comps[k] + other.comps[k] for k in self.comps}
        return CovariantTensor(self.chart, self.m, self.rank, comps, self.bundle, width=self.width)

    def __neg__(self) -> CovariantTensor:
        comps = {k: -v for k, v in self.comps.items()}
        return CovariantTensor(self.chart, self.m, self.rank, comps, self.bundle, self.symmetric, self.width)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.comps.values())

    def evaluate(self, args: Sequence[Sequence[Expr]]) -> Value:
        """Multilinear evaluation on tangent-coefficient vectors."""
        acc = self.zero_value()
        for idx, val in self.comps.items():
            if val.is_zero():
                continue
            coeff = self.chart.one
            for slot, i in enumerate(idx):
                c = args[slot][i]
                if not c:
                    coeff = None
                    break
                coeff = coeff * c
            if coeff is not None:
                acc = acc + val * coeff
        return acc

    def zero_check(self, check_id: str, summary: str = "", points: Sequence[Point] | None = None) -> Check:
        return zero_check(check_id, sorted(self.comps.items()), summary, points)


def bilinear(A: Matrix, u: Sequence[Expr], v: Sequence[Expr], chart: Chart) -> Expr:
    acc = chart.zero
    for a, ua in enumerate(u):
        if not ua:
            continue
        for b, vb in enumerate(v):
            if vb and A[a][b]:
                acc = acc + ua * A[a][b] * vb
    return acc


def wedge_apply(A: Matrix, x: Sequence[Expr], y: Sequence[Expr], z: Sequence[Expr], chart: Chart) -> list[Expr]:
    """(X wedge_A Y)Z = A(Y,Z) X - A(X,Z) Y, all in tangent coefficients."""
    ayz = bilinear(A, y, z, chart)
    axz = bilinear(A, x, z, chart)
    return [ayz * xi - axz * yi for xi, yi in zip(x, y)]


def _check_symmetric(A: Matrix) -> None:
    m = len(A)
    for a in range(m):
        for b in range(a + 1, m):
            if A[a][b] != A[b][a]:
                raise DomainError(f"(0,2) tensor is not symmetric at ({a + 1},{b + 1})")


def tachibana_Q(A: Matrix, T: CovariantTensor) -> CovariantTensor:
    """Q(A,T)(X_1..X_k; X, Y) = -sum_s T(.., (X wedge_A Y) X_s, ..).

    Components are indexed ``(i_1..i_k, x, y)`` on frame fields, where
    ``(e_x wedge_A e_y) e_u = A[y][u] e_x - A[x][u] e_y``.
    """
    if T.rank < 1:
        raise DomainError("Q(A,T) needs a tensor with at least one slot")
    _check_symmetric(A)
    m = T.m
    zero = T.zero_value()
    comps: dict[tuple[int, ...], Value] = {}
    for idx in product(range(m), repeat=T.rank):
        for x, y in product(range(m), repeat=2):
            acc = zero
            if x != y:
                for s, u in enumerate(idx):
                    ayu, axu = A[y][u], A[x][u]
                    if ayu:
                        val = T.comps[idx[:s] + (x,) + idx[s + 1:]]
                        if not val.is_zero():
                            acc = acc - val * ayu
                    if axu:
                        val = T.comps[idx[:s] + (y,) + idx[s + 1:]]
                        if not val.is_zero():
                            acc = acc + val * axu
            comps[idx + (x, y)] = acc
    return CovariantTensor(T.chart, m, T.rank + 2, comps, T.bundle, width=T.width)


def curvature_dot(
    op: dict[tuple[int, int, int], Vec],
    perp: Callable[[int, int, Vec], Vec],
    T: CovariantTensor,
) -> CovariantTensor:
    """(F(X,Y) . T)(U,V) = F_perp(X,Y) T(U,V) - T(F(X,Y)U, V) - T(U, F(X,Y)V).

    ``op[x, y, u]`` holds the tangent coefficients of F(e_x,e_y)e_u and
    ``perp(x, y, v)`` applies the normal curvature operator to a normal vector.
    Components are indexed ``(x, y, u, v)``.
    """
    if T.rank != 2:
        raise DomainError("curvature_dot acts on rank-2 tensors")
    m = T.m
    units = [[T.chart.one if k == a else T.chart.zero for k in range(m)] for a in range(m)]
    comps = {}
    for x, y, u, v in product(range(m), repeat=4):
        val = perp(x, y, T.comps[u, v]) if T.bundle == "normal" else T.zero_value()
        val = val - T.evaluate([op[x, y, u].comps, units[v]]) - T.evaluate([units[u], op[x, y, v].comps])
        comps[x, y, u, v] = val
    return CovariantTensor(T.chart, m, 4, comps, T.bundle, width=T.width)


# -- theorem evaluators ---------------------------------------------------


@dataclass
class TheoremSpec:
    number: int
    hypothesis: str
    metric: str  # "g" or "S"
    tensor: str  # sigma, nabla_sigma, R_sigma, C_sigma


THEOREMS: dict[int, TheoremSpec] = {
    2: TheoremSpec(2, "Q(S,sigma)", "S", "sigma"),
    3: TheoremSpec(3, "Q(g,sigma)", "g", "sigma"),
    4: TheoremSpec(4, "Q(S,nabla~.sigma)", "S", "nabla_sigma"),
    5: TheoremSpec(5, "Q(g,nabla~.sigma)", "g", "nabla_sigma"),
    6: TheoremSpec(6, "Q(g,R~.sigma)", "g", "R_sigma"),
    7: TheoremSpec(7, "Q(S,R~.sigma)", "S", "R_sigma"),
    8: TheoremSpec(8, "Q(g,C.sigma)", "g", "C_sigma"),
    9: TheoremSpec(9, "Q(S,C.sigma)", "S", "C_sigma"),
}


@dataclass
class Disjunct:
    name: str
    text: str
    expr: Expr | None  # None for the totally-geodesic flag
    source: str = "stated"


@dataclass
class TheoremReport:
    number: int
    submanifold: str
    hypothesis: Check
    disjuncts: list[Check]
    verdict: Check
    notes: list[str] = field(default_factory=list)

    @property
    def checks(self) -> list[Check]:
        notes = [Check(f"theorem{self.number}.note", INFO, n) for n in self.notes]
        return [self.hypothesis, *self.disjuncts, self.verdict, *notes]


class TheoremContext:
    """Everything the theorem evaluators need for one invariant submanifold."""

    def __init__(
        self,
        sub: Submanifold,
        structure: StructureData,
        params: TransSasakianParams,
        R: CurvatureTensor,
        S: RicciTensor,
        tau: Expr,
        reference: TransSasakianParams | None = None,
    ):
        inv = check_invariant(structure, sub)
        if inv.status != TRUE:
            raise NotInvariant(f"{sub.spec.name!r} is not an invariant submanifold", inv)
        if not sub.involutive:
            raise NotInvariant(f"{sub.spec.name!r} is not involutive")
        self.sub = sub
        self.structure = structure
        self.params = params
        self.R = R
        self.S = S
        self.tau = tau
        self.reference = reference
        self.manifold: Manifold = sub.manifold
        self.n = half_dimension(self.manifold.dim)
        self.chart = sub.chart

    # tensors on the submanifold

    @cached_property
    def g_matrix(self) -> Matrix:
        return self.sub.gram

    @cached_property
    def S_matrix(self) -> Matrix:
        E = self.sub.tangent
        return [[self.S(a, b) for b in E] for a in E]

    def metric(self, which: str) -> Matrix:
        return self.g_matrix if which == "g" else self.S_matrix

    @cached_property
    def sigma(self) -> CovariantTensor:
        return CovariantTensor(self.chart, self.sub.m, 2, self.sub.sigma, "normal", [(0, 1)], self.manifold.dim)

    @cached_property
    def nabla_sigma(self) -> CovariantTensor:
        return CovariantTensor(self.chart, self.sub.m, 3, self.sub.nabla_sigma, "normal", [(1, 2)], self.manifold.dim)

    def _tangential_op(self, F: CurvatureTensor) -> dict[tuple[int, int, int], Vec]:
        E = self.sub.tangent
        return {
            (x, y, u): self.sub.tangent_coeffs(F(E[x], E[y], E[u]))
            for x, y, u in product(range(self.sub.m), repeat=3)
        }

    @cached_property
    def concircular(self) -> CurvatureTensor:
        return concircular(self.R, self.manifold.metric, self.tau, self.n)

    @cached_property
    def R_sigma(self) -> CovariantTensor:
        return curvature_dot(self._tangential_op(self.R), self.sub.rperp_apply, self.sigma)

    @cached_property
    def C_sigma(self) -> CovariantTensor:
        return curvature_dot(self._tangential_op(self.concircular), self.sub.rperp_apply, self.sigma)

    def tensor(self, name: str) -> CovariantTensor:
        return getattr(self, name)

    def hypothesis_tensor(self, number: int) -> CovariantTensor:
        spec = THEOREMS[number]
        return tachibana_Q(self.metric(spec.metric), self.tensor(spec.tensor))

    # scalar conditions

    def conditions(self, number: int, p: TransSasakianParams) -> list[Disjunct]:
        a, b, xa, xb = p.alpha, p.beta, p.xi_alpha, p.xi_beta
        n = self.n
        c = 2 * n * (2 * n + 1)
        tau = self.tau
        A = a * a + b * b - xb
        B = a * b * 2 - xa
        plus = (a + b) ** 2 - (xa + xb)
        minus = (a - b) ** 2 - (xa - xb)
        tg = Disjunct("totally_geodesic", "sigma = 0", None)
        if number == 2:
            return [tg, Disjunct("xi_beta", "xi(beta) = alpha^2 + beta^2", A)]
        if number == 3:
            return [tg]
        if number == 4:
            return [tg, Disjunct("xi_beta", "xi(beta) = alpha^2 + beta^2", A), Disjunct("alpha2_beta2", "alpha^2 - beta^2 = 0", a * a - b * b)]
        if number == 5:
            return [tg, Disjunct("alpha2_beta2", "alpha^2 - beta^2 = 0", a * a - b * b)]
        if number == 6:
            return [
                tg,
                Disjunct("minus", "eta(grad(beta - alpha)) = (beta - alpha)^2", (xb - xa) - (b - a) ** 2),
                Disjunct("plus", "eta(grad(beta + alpha)) = (beta + alpha)^2", (xb + xa) - (b + a) ** 2),
                Disjunct("derived_final", "[a^2+b^2-xi(b)]^2 - [2ab-xi(a)]^2 = 0", A * A - B * B, "derived"),
            ]
        if number == 7:
            return [
                tg,
                Disjunct("xi_beta", "xi(beta) = alpha^2 + beta^2", A),
                Disjunct("minus", "xi(beta - alpha) = (alpha - beta)^2", (xb - xa) - (a - b) ** 2),
                Disjunct("plus", "xi(beta + alpha) = (alpha + beta)^2", (xb + xa) - (a + b) ** 2),
                Disjunct("derived_final", "2n[a^2+b^2-xi(b)]([a^2+b^2-xi(b)]^2 - [2ab-xi(a)]^2) = 0", A * (A * A - B * B) * (2 * n), "derived"),
            ]
        if number == 8:
            return [
                tg,
                Disjunct("tau_plus", "tau = 2n(2n+1)[(alpha+beta)^2 - xi(alpha+beta)]", tau - plus * c),
                Disjunct("tau_minus", "tau = 2n(2n+1)[(alpha-beta)^2 - xi(alpha-beta)]", tau - minus * c),
                Disjunct("derived_final", "[a^2+b^2-xi(b) - tau/(2n(2n+1))]^2 - [2ab-xi(a)]^2 = 0", (A - tau / c) ** 2 - B * B, "derived"),
                Disjunct("derived_tau_minus", "tau = 2n(2n+1)[(alpha-beta)^2 + xi(alpha-beta)]", tau - ((a - b) ** 2 + (xa - xb)) * c, "derived"),
            ]
        if number == 9:
            return [
                tg,
                Disjunct("tau_B_plus", "tau = 2n(2n+1)(2 alpha beta - xi(alpha))", tau - B * c),
                Disjunct("tau_B_minus", "tau = -2n(2n+1)(2 alpha beta - xi(alpha))", tau + B * c),
                Disjunct("tau_plus", "tau = 2n(2n+1)[(alpha+beta)^2 - xi(alpha+beta)]", tau - plus * c),
                Disjunct("tau_minus", "tau = 2n(2n+1)[(alpha-beta)^2 - xi(alpha-beta)]", tau - minus * c),
                Disjunct(
                    "derived_final",
                    "2n[a^2+b^2-xi(b)]([a^2+b^2-xi(b) - tau/(2n(2n+1))]^2 - [2ab-xi(a)]^2) = 0",
                    A * ((A - tau / c) ** 2 - B * B) * (2 * n),
                    "derived",
                ),
            ]
        raise DomainError(f"no theorem {number}; choose 2..9")


_NOTES = {
    6: "the stated conditions eta(grad(beta -+ alpha)) = (beta -+ alpha)^2 are exactly the two factors of derived_final",
    8: "derived_final factors as tau = 2n(2n+1)[(alpha-beta)^2 + xi(alpha-beta)] in the minus case, "
    "while the stated condition has - xi(alpha-beta); both are reported",
    9: "derived_final does not factor into the stated conditions; it is reported separately "
    "(read as 2n A ([A - tau/(2n(2n+1))]^2 - B^2) with A = a^2+b^2-xi(b), B = 2ab-xi(a))",
}


def theorem_report(ctx: TheoremContext, number: int, points: Sequence[Point] | None = None) -> TheoremReport:
    if number not in THEOREMS:
        raise DomainError(f"theorem index {number} outside 2..9")
    spec = THEOREMS[number]
    prefix = f"theorem{number}"
    hyp_tensor = ctx.hypothesis_tensor(number)
    hyp = hyp_tensor.zero_check(f"{prefix}.hypothesis", f"{spec.hypothesis} = 0 over all tangent frame arguments", points)
    hyp.payload["tensor"] = spec.hypothesis
    hyp_zero = hyp.status == ZERO
    tg = ctx.sub.totally_geodesic

    disjunct_checks = []
    rescuing = []
    ref_conditions = ctx.conditions(number, ctx.reference) if ctx.reference is not None else None
    for k, d in enumerate(ctx.conditions(number, ctx.params)):
        cid = f"{prefix}.{d.name}"
        if d.expr is None:
            check = Check(cid, TRUE if tg else FALSE, d.text)
        else:
            check = condition_check(cid, d.expr, d.text, points)
            if ref_conditions is not None:
                check.payload["expression_with_reference_values"] = str(ref_conditions[k].expr)
        check.payload["source"] = d.source
        if check.status == TRUE and d.source == "stated":
            rescuing.append(d.name)
        disjunct_checks.append(check)

    if number == 3:
        ok = hyp_zero == tg
        summary = f"Q(g,sigma)=0 is {hyp_zero}, totally geodesic is {tg}; the equivalence {'holds' if ok else 'fails'}"
    elif not hyp_zero:
        ok = True
        summary = "hypothesis tensor is nonzero, so the implication holds vacuously"
    else:
        ok = bool(rescuing)
        summary = "hypothesis holds; " + (
            "rescued by " + ", ".join(rescuing) if rescuing else "no disjunct of the conclusion holds"
        )
    verdict = Check(f"{prefix}.verdict", PASS if ok else FAIL, summary, payload={"rescuing_disjuncts": rescuing})

    notes = []
    if not ctx.params.nabla_phi_holds:
        notes.append("the ambient structure fails the trans-Sasakian equation for nabla phi; the theorem's standing hypothesis is not met")
    if number in _NOTES:
        notes.append(_NOTES[number])
    return TheoremReport(number, ctx.sub.spec.name, hyp, disjunct_checks, verdict, notes)


def refused_report(number: int, name: str, reason: str) -> TheoremReport:
    prefix = f"theorem{number}"
    refused = Check(f"{prefix}.verdict", REFUSED, reason)
    return TheoremReport(number, name, Check(f"{prefix}.hypothesis", REFUSED, reason), [], refused)
