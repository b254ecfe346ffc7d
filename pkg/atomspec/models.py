import json
from dataclasses import dataclass, field
from enum import Enum

from .const import GUARD_HOM, GUARD_SUBMODULES, GUARD_TUPLES


class Membership(str, Enum):
    IN = "In"
    NOT_IN = "NotIn"
    INCONCLUSIVE = "Inconclusive"


class Verdict(str, Enum):
    YES = "Yes"
    NO = "No"
    INCONCLUSIVE = "Inconclusive"


class Status(str, Enum):
    COMPLETE = "complete"
    EMBEDDING_ONLY = "embedding_only"


@dataclass(frozen=True)
class OracleLimits:
    submodules: int = GUARD_SUBMODULES
    hom: int = GUARD_HOM
    tuples: int = GUARD_TUPLES


@dataclass
class CheckResult:
    name: str
    passed: bool
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "witnesses": self.witnesses}


@dataclass
class VerificationReport:
    right_rooted: Verdict
    checks: list[CheckResult] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)

    def check(self, name: str) -> CheckResult:
        for result in self.checks:
            if result.name == name:
                return result
        raise KeyError(name)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.checks)

    def to_json(self) -> dict:
        return {
            "right_rooted": self.right_rooted.value,
            "checks": [result.to_json() for result in self.checks],
            "counts": dict(self.counts),
        }

    def render(self) -> str:
        return json.dumps(self.to_json(), indent=2)
