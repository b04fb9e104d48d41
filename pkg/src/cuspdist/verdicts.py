"""Three-valued verdicts with machine-readable certificates.

Distinction criteria in residual characteristic ell are not all settled by
an if-and-only-if statement; rather than silently upgrading a one-way
implication, every decision carries the names of the rules it applied and
reports ``unknown`` where no rule decides the case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    value: str
    certificate: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        assert self.value in (YES, NO, UNKNOWN)

    @property
    def is_yes(self) -> bool:
        return self.value == YES

    @property
    def is_no(self) -> bool:
        return self.value == NO

    @property
    def is_unknown(self) -> bool:
        return self.value == UNKNOWN

    def to_json(self) -> dict:
        return {"verdict": self.value, "certificate": list(self.certificate)}


def yes(*rules: str) -> Verdict:
    return Verdict(YES, tuple(rules))


def no(*rules: str) -> Verdict:
    return Verdict(NO, tuple(rules))


def unknown(*rules: str) -> Verdict:
    return Verdict(UNKNOWN, tuple(rules))
