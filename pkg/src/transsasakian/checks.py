"""Check entries, residual identities and seeded point cross-checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence, Union

from .expr import Chart, EvaluationError, Expr
from .linalg import Vec

PASS = "PASS"
FAIL = "FAIL"
ZERO = "ZERO"
NONZERO = "NONZERO"
TRUE = "TRUE"
FALSE = "FALSE"
REFUSED = "REFUSED"
INFO = "INFO"

Value = Union[Expr, Vec]
Point = dict[str, Fraction]

MAX_WITNESSES = 12


@dataclass
class Witness:
    index: tuple[int, ...]
    value: str

    def as_dict(self) -> dict[str, Any]:
        return {"index": list(self.index), "value": self.value}


@dataclass
class Check:
    id: str
    status: str
    summary: str = ""
    witnesses: list[Witness] = field(default_factory=list)
    payload: dict[str, Any] = field(default_factory=dict)
    nonzero_count: int = 0
    crosscheck: str | None = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def as_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"id": self.id, "status": self.status, "summary": self.summary}
        if self.witnesses:
            out["nonzero_count"] = self.nonzero_count
            out["witnesses"] = [w.as_dict() for w in self.witnesses]
        if self.payload:
            out["payload"] = self.payload
        if self.crosscheck is not None:
            out["crosscheck"] = self.crosscheck
        return out


def sample_points(chart: Chart, seed: int, count: int = 3) -> list[Point]:
    """Seeded random rational points with every coordinate nonzero."""
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        pt = {}
        for name in chart.coords:
            num = 0
            while num == 0:
                num = rng.randint(-9, 9)
            pt[name] = Fraction(num, rng.randint(1, 7))
        points.append(pt)
    return points


def _components(v: Value) -> Sequence[Expr]:
    return v.comps if isinstance(v, Vec) else (v,)


def _label(index: tuple[int, ...], comp: int | None) -> tuple[int, ...]:
    # report indices are 1-based; a trailing entry is the vector component
    base = tuple(i + 1 for i in index)
    return base + ((comp + 1,) if comp is not None else ())


def residual_check(
    check_id: str,
    items: Iterable[tuple[tuple[int, ...], Value, Value]],
    summary: str = "",
    points: Sequence[Point] | None = None,
) -> Check:
    """Compare ``lhs`` and ``rhs`` over all index tuples.

    PASS iff every residual component is the zero Expr.  On PASS, both sides are
    also evaluated at the given points and must agree exactly.
    """
    witnesses: list[Witness] = []
    count = 0
    pairs: list[tuple[Expr, Expr]] = []
    for index, lhs, rhs in items:
        lcs, rcs = _components(lhs), _components(rhs)
        vector = isinstance(lhs, Vec)
        for c, (l, r) in enumerate(zip(lcs, rcs)):
            res = l - r
            if res.is_zero():
                pairs.append((l, r))
            else:
                count += 1
                if len(witnesses) < MAX_WITNESSES:
                    witnesses.append(Witness(_label(index, c if vector else None), str(res)))
    if count:
        return Check(check_id, FAIL, summary, witnesses, nonzero_count=count)
    check = Check(check_id, PASS, summary)
    if points:
        check.crosscheck = crosscheck(pairs, points)
        if check.crosscheck.startswith("MISMATCH"):
            check.status = FAIL
    return check


def crosscheck(pairs: Sequence[tuple[Expr, Expr]], points: Sequence[Point]) -> str:
    evaluated = 0
    skipped = 0
    for pt in points:
        for lhs, rhs in pairs:
            try:
                lv, rv = lhs.eval_at(pt), rhs.eval_at(pt)
            except EvaluationError:
                skipped += 1
                continue
            if lv != rv:
                return f"MISMATCH at {_point_text(pt)}: {lv} != {rv}"
            evaluated += 1
    text = f"agree at {len(points)} seeded points ({evaluated} evaluations"
    if skipped:
        text += f", {skipped} skipped at poles"
    return text + ")"


def _point_text(pt: Point) -> str:
    return "{" + ", ".join(f"{k}={v}" for k, v in pt.items()) + "}"


def zero_check(
    check_id: str,
    items: Iterable[tuple[tuple[int, ...], Value]],
    summary: str = "",
    points: Sequence[Point] | None = None,
) -> Check:
    """ZERO/NONZERO status of a tensor given as (index, value) pairs."""
    witnesses: list[Witness] = []
    count = 0
    exprs: list[Expr] = []
    for index, value in items:
        vector = isinstance(value, Vec)
        for c, x in enumerate(_components(value)):
            if x.is_zero():
                exprs.append(x)
                continue
            count += 1
            if len(witnesses) < MAX_WITNESSES:
                witnesses.append(Witness(_label(index, c if vector else None), str(x)))
    if count:
        return Check(check_id, NONZERO, summary, witnesses, nonzero_count=count)
    check = Check(check_id, ZERO, summary)
    if points:
        check.crosscheck = crosscheck([(x, x.chart.zero) for x in exprs[:64]], points)
    return check


def condition_check(check_id: str, expr: Expr, summary: str = "", points: Sequence[Point] | None = None) -> Check:
    """A scalar condition ``expr = 0``: TRUE when it vanishes identically."""
    status = TRUE if expr.is_zero() else FALSE
    check = Check(check_id, status, summary, payload={"expression": str(expr)})
    if points and status == TRUE:
        check.crosscheck = crosscheck([(expr, expr.chart.zero)], points)
    return check
