"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` (a kebab-case slug)
next to its human-readable message, so scripted callers can branch on the
code while logs stay legible.
"""

from __future__ import annotations


class CovdynError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def __str__(self) -> str:
        return f"[{self.code}] {super().__str__()}"


# -- directed graphs ---------------------------------------------------------

class DuplicateVertex(CovdynError):
    code = "duplicate-vertex"


class DuplicateEdge(CovdynError):
    code = "duplicate-edge"


class DanglingEdge(CovdynError):
    code = "dangling-edge"


class NotSurjective(CovdynError):
    """A vertex is missing an in-edge or an out-edge."""

    code = "not-surjective"


class InvalidWalk(CovdynError):
    code = "invalid-walk"


class BudgetExceeded(CovdynError):
    """An enumeration would produce more items than the configured budget."""

    code = "budget-exceeded"


# -- homomorphisms and coverings ---------------------------------------------

class NotAHomomorphism(CovdynError):
    code = "not-a-homomorphism"


class TypeMismatch(CovdynError):
    """Composition of maps whose middle graphs disagree."""

    code = "type-mismatch"


class NotACover(CovdynError):
    code = "not-a-cover"


class IndexOutOfRange(CovdynError):
    code = "index-out-of-range"


class NotStartingAtZero(CovdynError):
    code = "not-starting-at-zero"


class InvalidTower(CovdynError):
    code = "invalid-tower"


# -- Gambaudo-Martens structure ----------------------------------------------

class CircuitNotRooted(CovdynError):
    code = "circuit-not-rooted"


class EdgeNotOnAnyCircuit(CovdynError):
    code = "edge-not-on-any-circuit"


class MergeViolation(CovdynError):
    code = "merge-violation"


class DuplicateCircuit(CovdynError):
    code = "duplicate-circuit"


class BaseNotPreserved(CovdynError):
    code = "base-not-preserved"


class FirstStepMismatch(CovdynError):
    code = "first-step-mismatch"


class WordTraceMismatch(CovdynError):
    code = "word-trace-mismatch"


class WordNotStartingWithOne(CovdynError):
    code = "word-not-starting-with-one"


class EmptyWord(CovdynError):
    code = "empty-word"


class UnknownLetter(CovdynError):
    code = "unknown-letter"


class NotSimple(CovdynError):
    """Strengthened per-level simplicity fails where a construction needs it."""

    code = "not-simple"


# -- Bratteli diagrams ---------------------------------------------------------

class BadDiagram(CovdynError):
    code = "bad-diagram"


class NotAPath(CovdynError):
    code = "not-a-path"


class MaxPathAtDepth(CovdynError):
    """Successor undefined: the prefix is maximal up to the declared depth."""

    code = "max-path-at-depth"


class MinPathAtDepth(CovdynError):
    """Predecessor undefined: the prefix is minimal up to the declared depth."""

    code = "min-path-at-depth"


# -- array systems --------------------------------------------------------------

class InsufficientMargin(CovdynError):
    code = "insufficient-margin"


class NormalizationNotFoundWithinBound(CovdynError):
    code = "normalization-not-found"


class NotNormalized(CovdynError):
    code = "not-normalized"


# -- input files ----------------------------------------------------------------

class ParseError(CovdynError):
    code = "parse-error"

    def __init__(self, message: str, line: int, col: int, expected: str = ""):
        super().__init__(message, line=line, col=col, expected=expected)
        self.line = line
        self.col = col
        self.expected = expected

    def __str__(self) -> str:
        loc = f"line {self.line}, col {self.col}"
        want = f" (expected {self.expected})" if self.expected else ""
        return f"[{self.code}] {Exception.__str__(self)} at {loc}{want}"
