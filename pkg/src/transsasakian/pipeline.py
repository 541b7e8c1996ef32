"""Command pipelines over a parsed manifest."""

from __future__ import annotations

from functools import cached_property
from itertools import product

from .checks import FAIL, INFO, REFUSED, Check, sample_points, zero_check
from .curvature import (
    connection_properties,
    curvature_properties,
    ricci,
    riemann,
    riemann_zero_check,
    scalar,
    verify_proposition1,
)
from .expr import Expr
from .manifest import Manifest
from .report import Report
from .structure import NotTransSasakian, TransSasakianParams, check_structure, classify, extract_alpha_beta
from .submanifold import (
    NotInvariant,
    Submanifold,
    check_invariant,
    gauss_equation_check,
    sigma_zero_check,
    verify_theorem1,
)
from .tachibana import THEOREMS, TheoremContext, refused_report, theorem_report

COMMANDS = ("structure-check", "curvature", "prop1", "submanifold-report", "theorem", "all")


class UsageError(ValueError):
    """A command that cannot run against this manifest."""


def sign_agreement(engine: Expr, reference: Expr) -> str:
    if engine == reference:
        return "equal"
    if engine == -reference:
        return "opposite sign"
    return "different"


class Session:
    def __init__(self, manifest: Manifest, seed: int | None = None):
        self.manifest = manifest
        self.seed = manifest.seed if seed is None else seed
        self.points = sample_points(manifest.chart, self.seed)
        self._subs: dict[str, Submanifold] = {}

    @property
    def M(self):
        return self.manifest.manifold

    @cached_property
    def R(self):
        return riemann(self.M)

    @cached_property
    def S(self):
        return ricci(self.R)

    @cached_property
    def tau(self) -> Expr:
        return scalar(self.S, self.M.metric).value

    def structure(self):
        if self.manifest.structure is None:
            raise UsageError("this command needs a [structure] block in the manifest")
        return self.manifest.structure

    @cached_property
    def params(self) -> TransSasakianParams | NotTransSasakian:
        try:
            return extract_alpha_beta(self.structure(), self.points)
        except NotTransSasakian as exc:
            return exc

    def submanifold(self, name: str) -> Submanifold:
        if name not in self.manifest.submanifolds:
            known = ", ".join(sorted(self.manifest.submanifolds)) or "none"
            raise UsageError(f"unknown submanifold {name!r} (known: {known})")
        if name not in self._subs:
            self._subs[name] = Submanifold(self.M, self.manifest.submanifolds[name])
        return self._subs[name]

    def new_report(self, command: str) -> Report:
        return Report(self.manifest.name, command, self.seed, len(self.points))

    # sections

    def structure_sections(self, rep: Report) -> None:
        st = self.structure()
        rep.add("structure axioms", check_structure(st, self.points))
        p = self.params
        if isinstance(p, NotTransSasakian):
            rep.add("trans-Sasakian functions", p.checks)
            return
        info = Check(
            "structure.functions",
            INFO,
            "functions fitted from nabla xi",
            payload={
                "alpha": str(p.alpha),
                "beta": str(p.beta),
                "xi(alpha)": str(p.xi_alpha),
                "xi(beta)": str(p.xi_beta),
                "class": classify(p),
            },
        )
        rep.add("trans-Sasakian functions", [info, *p.checks])
        ref = self.manifest.reference.params
        if ref is not None:
            checks = []
            for key in ("alpha", "beta", "xi_alpha", "xi_beta"):
                e, r = getattr(p, key), getattr(ref, key)
                checks.append(
                    Check(
                        f"reference.{key}",
                        INFO,
                        f"engine {e} vs reference {r}",
                        payload={"engine": str(e), "reference": str(r), "agreement": sign_agreement(e, r)},
                    )
                )
            rep.add("comparison with reference values", checks)

    def connection_sections(self, rep: Report) -> None:
        M = self.M
        names = M.frame.names
        rows = []
        for i, j in product(range(M.dim), repeat=2):
            v = M.connection.gamma[i][j]
            if not v.is_zero():
                rows.append(f"nabla_{names[i]} {names[j]} = " + _combo(v, names))
        rep.add(
            "connection",
            [Check("connection.table", INFO, "nonzero covariant derivatives of frame fields", payload={"entries": rows}),
             *connection_properties(M, self.points)],
        )
        refs = self.manifest.reference.connection
        if refs:
            checks = []
            for (i, j), ref in sorted(refs.items()):
                eng = M.connection.gamma[i][j]
                agreement = [sign_agreement(a, b) for a, b in zip(eng.comps, ref.comps)]
                checks.append(
                    Check(
                        f"reference.nabla_{names[i]}_{names[j]}",
                        INFO,
                        f"engine {_combo(eng, names)} vs reference {_combo(ref, names)}",
                        payload={"components": agreement},
                    )
                )
            rep.add("connection vs reference", checks)

    def curvature_sections(self, rep: Report) -> None:
        self.connection_sections(rep)
        M = self.M
        names = M.frame.names
        ricci_rows = [
            f"S({names[j]},{names[k]}) = {self.S.comps[j][k]}"
            for j in range(M.dim)
            for k in range(j, M.dim)
            if not self.S.comps[j][k].is_zero()
        ]
        rep.add(
            "curvature",
            [
                riemann_zero_check(self.R, self.points),
                *curvature_properties(self.R, self.S, self.points),
                Check("ricci.components", INFO, "nonzero Ricci components", payload={"entries": ricci_rows}),
                Check("scalar.tau", INFO, "scalar curvature", payload={"tau": str(self.tau)}),
            ],
        )

    def prop1_sections(self, rep: Report) -> None:
        p = self.params
        if isinstance(p, NotTransSasakian):
            rep.add("curvature identities of trans-Sasakian type", p.checks)
            return
        checks = verify_proposition1(self.R, self.S, self.structure(), p, self.points)
        if not p.nabla_phi_holds:
            checks.append(
                Check("prop1.note", INFO, "the structure fails the nabla phi equation, so these identities are not implied")
            )
        rep.add("curvature identities of trans-Sasakian type", checks)

    def submanifold_sections(self, rep: Report, name: str) -> None:
        sub = self.submanifold(name)
        title = f"submanifold {name}"
        inv = sub.involutivity_check()
        if inv.status == FAIL:
            rep.add(title, [inv])
            return
        checks = [inv]
        if self.manifest.structure is not None:
            checks.append(check_invariant(self.structure(), sub))
        checks.append(
            Check("submanifold.normal_frame", INFO, "normal frame", payload={"normals": [str(v) for v in sub.normals]})
        )
        checks.append(sigma_zero_check(sub, self.points))
        checks += sub.properties(self.points)
        checks += gauss_equation_check(sub, self.R, self.points)
        checks.append(
            zero_check(
                "submanifold.nabla_sigma",
                sorted(sub.nabla_sigma.items()),
                "(nabla~ sigma); ZERO means parallel second fundamental form",
                self.points,
            )
        )
        checks.append(
            zero_check("submanifold.rperp", sorted(sub.normal_curvature.items()), "normal curvature R_perp", self.points)
        )
        rep.add(title, checks)
        if self.manifest.structure is None:
            return
        p = self.params
        if isinstance(p, NotTransSasakian):
            return
        try:
            rep.add(f"{title}: invariant-submanifold identities", verify_theorem1(self.structure(), sub, self.R, self.points))
        except NotInvariant as exc:
            rep.add(f"{title}: invariant-submanifold identities", [Check("theorem1.verdict", REFUSED, str(exc))])

    def theorem_sections(self, rep: Report, number: int, name: str) -> None:
        if number not in THEOREMS:
            raise UsageError(f"theorem index {number} outside 2..9")
        sub = self.submanifold(name)
        title = f"theorem {number} on {name}"
        p = self.params
        if isinstance(p, NotTransSasakian):
            rep.add(title, refused_report(number, name, "the ambient structure is not trans-Sasakian").checks)
            return
        try:
            ctx = self.context(name)
        except NotInvariant as exc:
            rep.add(title, refused_report(number, name, str(exc)).checks)
            return
        rep.add(title, theorem_report(ctx, number, self.points).checks)

    def context(self, name: str) -> TheoremContext:
        key = f"_ctx_{name}"
        if key not in self.__dict__:
            self.__dict__[key] = TheoremContext(
                self.submanifold(name),
                self.structure(),
                self.params,
                self.R,
                self.S,
                self.tau,
                self.manifest.reference.params,
            )
        return self.__dict__[key]

    # dispatch

    def run(self, command: str, args: list[str] | None = None) -> Report:
        args = args or []
        if command not in COMMANDS:
            raise UsageError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
        label = " ".join([command, *args])
        rep = self.new_report(label)
        if command == "structure-check":
            self.structure_sections(rep)
        elif command == "curvature":
            self.curvature_sections(rep)
        elif command == "prop1":
            self.prop1_sections(rep)
        elif command == "submanifold-report":
            if len(args) != 1:
                raise UsageError("submanifold-report needs one submanifold name")
            self.submanifold_sections(rep, args[0])
        elif command == "theorem":
            if len(args) != 2:
                raise UsageError("theorem needs an index 2..9 and a submanifold name")
            try:
                number = int(args[0])
            except ValueError:
                raise UsageError(f"theorem index {args[0]!r} is not an integer") from None
            self.theorem_sections(rep, number, args[1])
        else:
            if self.manifest.structure is not None:
                self.structure_sections(rep)
            self.curvature_sections(rep)
            if self.manifest.structure is not None:
                self.prop1_sections(rep)
            for name in self.manifest.submanifolds:
                self.submanifold_sections(rep, name)
                if self.manifest.structure is not None:
                    for k in THEOREMS:
                        self.theorem_sections(rep, k, name)
        return rep


def _combo(v, names) -> str:
    terms = []
    for c, n in zip(v.comps, names):
        if c.is_zero():
            continue
        s = str(c)
        if c == 1:
            terms.append(n)
        elif c == -1:
            terms.append(f"-{n}")
        elif any(ch in s[1:] for ch in "+-") or "/" in s:
            terms.append(f"({s}){n}")
        else:
            terms.append(f"{s}*{n}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"
