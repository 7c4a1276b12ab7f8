"""Structured pass/fail results with minimal witnesses."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """A single violated condition.

    ``tag`` names the condition (ML1, ML2, MS1, MS2, MS3, NotChordal,
    SunFound, NotGraded, NotVine, Proximity, ...).  ``subject`` lists the
    offending vertices or nodes, ``cycle`` carries a closed walk when the
    witness is a cycle.
    """

    tag: str
    subject: tuple[str, ...] = ()
    cycle: tuple[str, ...] | None = None
    message: str = ""

    def to_json(self) -> dict:
        out: dict = {"tag": self.tag}
        if self.subject:
            out["subject"] = list(self.subject)
        if self.cycle is not None:
            out["cycle"] = list(self.cycle)
        if self.message:
            out["message"] = self.message
        return out


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validation check; ``ok`` is true iff no violation."""

    ok: bool
    violation: Violation | None = None

    def __post_init__(self) -> None:
        if self.ok == (self.violation is not None):
            raise ValueError("ok must hold exactly when no violation is present")

    @classmethod
    def passed(cls) -> "Verdict":
        return cls(True, None)

    @classmethod
    def failed(cls, tag: str, subject: tuple[str, ...] = (),
               cycle: tuple[str, ...] | None = None, message: str = "") -> "Verdict":
        return cls(False, Violation(tag, subject, cycle, message))

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if self.violation is not None:
            out["violation"] = self.violation.to_json()
        return out
