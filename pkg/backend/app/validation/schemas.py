from dataclasses import asdict, dataclass, field
from enum import Enum


class Level(str, Enum):
    FAST = "fast"
    FULL = "full"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""


@dataclass
class ValidationReport:
    level: Level
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> dict:
        return {
            "level": self.level.value,
            "passed": self.passed,
            "checks": [asdict(check) for check in self.checks],
        }
