"""Outcome labels shared by the obstruction tests."""

from enum import Enum


class Verdict(str, Enum):
    EXCLUDED = "excluded"
    PASSED = "passed"
    INAPPLICABLE = "inapplicable"
    # used where "not excluded" must not be read as a positive statement
    POSSIBLE = "possible"

    def __str__(self) -> str:
        return self.value

    @property
    def fired(self) -> bool:
        return self is Verdict.EXCLUDED
