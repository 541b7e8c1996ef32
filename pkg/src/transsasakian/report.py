"""Report assembly and its two renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .checks import FAIL, Check
from .curvature import CONVENTIONS

FORMAT_VERSION = 1


@dataclass
class Section:
    title: str
    checks: list[Check] = field(default_factory=list)

    def as_dict(self) -> dict[str, Any]:
        return {"title": self.title, "checks": [c.as_dict() for c in self.checks]}


@dataclass
class Report:
    manifest: str
    command: str
    seed: int
    points: int
    sections: list[Section] = field(default_factory=list)

    def add(self, title: str, checks: list[Check]) -> Section:
        sec = Section(title, list(checks))
        self.sections.append(sec)
        return sec

    def all_checks(self) -> list[Check]:
        return [c for s in self.sections for c in s.checks]

    def find(self, check_id: str) -> Check:
        for c in self.all_checks():
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.all_checks() if c.status == FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.all_checks():
            out[c.status] = out.get(c.status, 0) + 1
        return dict(sorted(out.items()))

    def as_dict(self) -> dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "manifest": self.manifest,
            "command": self.command,
            "conventions": dict(CONVENTIONS),
            "crosscheck": {"seed": self.seed, "points": self.points},
            "sections": [s.as_dict() for s in self.sections],
            "counts": self.counts(),
        }

    def to_machine(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_human(self) -> str:
        lines = [f"manifest: {self.manifest}", f"command: {self.command}", "conventions:"]
        lines += [f"  {k}: {v}" for k, v in CONVENTIONS.items()]
        lines.append(f"cross-checks: {self.points} seeded rational points (seed {self.seed})")
        for sec in self.sections:
            lines.append("")
            lines.append(f"== {sec.title}")
            for c in sec.checks:
                lines.append(f"[{c.status}] {c.id}: {c.summary}".rstrip(": "))
                if c.witnesses:
                    lines.append(f"    {c.nonzero_count} nonzero component(s); first witnesses:")
                    for w in c.witnesses:
                        idx = ",".join(str(i) for i in w.index)
                        lines.append(f"      ({idx}) {w.value}")
                for k, v in c.payload.items():
                    lines.append(f"    {k}: {_flat(v)}")
                if c.crosscheck:
                    lines.append(f"    cross-check: {c.crosscheck}")
        lines.append("")
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in self.counts().items()))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_machine() if fmt == "machine" else self.to_human()


def _flat(v: Any) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, ensure_ascii=False)
    return str(v)
