"""Exception hierarchy shared by every pplan module."""

from __future__ import annotations


class PPlanError(Exception):
    """Base class for all errors raised by pplan."""


class Inconsistent(PPlanError):
    """A literal set contains (or closes to) both ``f`` and ``-f``."""

    def __init__(self, literal):
        self.literal = literal
        super().__init__(f"inconsistent: both {literal} and its complement derived")


class InconsistentTheory(PPlanError):
    """An executable action has no successor state (contradictory effects or static laws)."""


class NotAState(PPlanError):
    pass


class UnknownFluent(PPlanError):
    pass


class UnknownAction(PPlanError):
    pass


class NotExecutable(PPlanError):
    pass


class UnboundVariable(PPlanError):
    pass


class EmptySort(PPlanError):
    pass


class NameClash(PPlanError):
    pass


class ParseError(PPlanError):
    """Syntax error in a domain, preference or plan file, with a source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        self.msg = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


class ResolutionError(PPlanError):
    """A name or construct could not be resolved against the action theory."""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        self.msg = message
        self.line = line
        self.column = column
        self.source = source
        loc = f"{source}:{line}:{column}: " if line else ""
        super().__init__(f"{loc}{message}")


class UnresolvedName(ResolutionError):
    """A name in a preference does not denote a declared desire, fluent or action."""


class UnresolvedFluent(UnresolvedName, UnknownFluent):
    pass


class UnresolvedAction(UnresolvedName, UnknownAction):
    pass


class IndexOutOfRange(PPlanError, IndexError):
    pass


class TooManyDesires(PPlanError):
    pass


class ArithmeticOverflow(PPlanError, OverflowError):
    pass


class CostOverflow(PPlanError):
    pass


class NoPlan(PPlanError):
    """No trajectory achieves the goal within the horizon."""


class InvalidPlan(PPlanError):
    pass


class SoundnessViolation(PPlanError, AssertionError):
    pass


class NotStratified(PPlanError):
    pass
