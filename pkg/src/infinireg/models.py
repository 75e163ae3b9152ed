"""Data models for property suites and their reports."""

from __future__ import annotations

from dataclasses import dataclass, field

SUITE_NAMES = (
    "five-term",
    "li2-equiv",
    "eqhom",
    "lift-indep",
    "cech",
    "euler",
    "welldef",
    "scaling",
    "wedge-basis",
    "master-identity",
)


@dataclass
class PropertySuiteConfig:
    """A seeded run of one property suite."""

    suite: str
    seed: int = 42
    samples: int = 25
    xvars: int = 1
    tvars: int = 1
    degree: int = 1  # polynomial degree bound
    height: int = 3  # coefficient height bound
    cap: int = 6  # exactness ansatz degree cap
    retry_cap: int = 100

    def __post_init__(self):
        if self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.xvars < 1 or self.tvars < 1:
            raise ValueError("xvars and tvars must be positive")
        if self.degree < 1 or self.height < 1:
            raise ValueError("degree and height bounds must be positive")

    @property
    def label(self) -> str:
        return (f"{self.suite} seed={self.seed} samples={self.samples} "
                f"n={self.xvars} m={self.tvars} deg={self.degree} height={self.height}")


@dataclass
class SampleResult:
    """Outcome of one sample; inputs and sides are already serialized."""

    index: int
    passed: bool
    inputs: dict[str, str] = field(default_factory=dict)
    sides: dict[str, str] = field(default_factory=dict)
    rejections: int = 0  # regenerated degenerate draws

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class SuiteReport:
    config: PropertySuiteConfig
    results: list[SampleResult] = field(default_factory=list)

    @property
    def passed_count(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed_count(self) -> int:
        return len(self.results) - self.passed_count

    @property
    def all_passed(self) -> bool:
        return self.failed_count == 0

    @property
    def rejections(self) -> int:
        return sum(r.rejections for r in self.results)

    def failures(self) -> list[SampleResult]:
        return [r for r in self.results if not r.passed]
