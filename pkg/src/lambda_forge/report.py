"""Check results and the line-oriented report format.

Every check renders as ``<TAG> <name> PASS|FAIL [witness]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class CheckResult:
    tag: str
    name: str
    passed: bool
    witness: str = ""
    checked: int = 0

    def line(self) -> str:
        s = f"{self.tag} {self.name} {'PASS' if self.passed else 'FAIL'}"
        if self.witness and not self.passed:
            s += f" [{self.witness}]"
        return s


@dataclass
class Report:
    title: str
    results: list[CheckResult] = field(default_factory=list)

    def add(self, tag: str, name: str, failures: list[str], checked: int = 0) -> CheckResult:
        r = CheckResult(tag, name, not failures, failures[0] if failures else "", checked)
        self.results.append(r)
        return r

    def extend(self, results: Iterable[CheckResult]) -> None:
        self.results.extend(results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed_tags(self) -> set[str]:
        return {r.tag for r in self.results if not r.passed}

    def result(self, tag: str) -> CheckResult:
        for r in self.results:
            if r.tag == tag:
                return r
        raise KeyError(tag)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]

    def __str__(self) -> str:
        return "\n".join([f"# {self.title}"] + self.lines())
