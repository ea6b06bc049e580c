"""Exception hierarchy shared across the package.

Two branches matter for the CLI: InputError maps to exit code 2 (the input
was bad or out of budget), InternalDefect maps to exit code 3 (a structural
guarantee the solver relies on did not hold, which is a bug, not an input
problem).
"""

from __future__ import annotations


class FapkitError(Exception):
    pass


class InputError(FapkitError):
    pass


class MalformedEdge(InputError):
    """An edge line or header in an instance file is unusable."""


class NotAForest(InputError):
    """The declared forest edges contain a cycle."""


class Infeasible(InputError):
    """No link subset can make the instance 2-edge-connected."""


class UnsatisfiableProfile(InputError):
    """A generator profile admits no instance (e.g. density too low)."""


class BudgetExceeded(InputError):
    """An exact oracle refused to run; carries the bound interval known so far."""

    def __init__(self, message: str, lower: int, upper: int | None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper


class InvalidPartition(FapkitError, ValueError):
    """A quotient partition does not cover the vertex set exactly once."""


class InternalDefect(FapkitError):
    pass


class AssertionFailure(InternalDefect):
    """A structural invariant the solver maintains was observed broken."""


class NoTrailTarget(InternalDefect):
    """No reachable trail target exists, which feasible inputs never produce."""


class CoverageFailure(InternalDefect):
    """A derived up-link set failed to cover every tree 1-cut."""


class InfeasibleWitness(InputError):
    """An optimal-solution witness handed to the auditor is not feasible."""
