"""Exception types shared across the package."""

from __future__ import annotations


class CertainTrustError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CertainTrustError, ValueError):
    """An operation was applied outside its mathematical domain.

    Examples: combining opinions whose prior expectations make an operator
    denominator vanish, evidence counts exceeding the declared maximum, or
    a zero initial expectation in the behavioral-probability metric.
    """


class FormulaSyntaxError(CertainTrustError, ValueError):
    """A topology formula could not be parsed.

    Attributes:
        offset: byte offset of the offending position in the input.
        expected: token descriptions that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at byte offset {offset}"
        if self.expected:
            detail += f" (expected {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnbalancedParenthesesError(FormulaSyntaxError):
    """A formula's parentheses do not balance."""


class UnboundComponentError(CertainTrustError, KeyError):
    """A formula references a component with no bound opinion."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"formula references unbound component {self.name!r}"


class EvaluationError(CertainTrustError):
    """An operator failed while folding a formula over its leaf opinions.

    Attributes:
        path: dotted position of the failing node, starting at ``root``.
        expression: text of the failing subexpression.
    """

    def __init__(self, message: str, path: str, expression: str):
        self.path = path
        self.expression = expression
        super().__init__(f"{message} (at {path}: {expression!r})")


class ScenarioError(CertainTrustError, ValueError):
    """A scenario document is malformed or violates its schema.

    Attributes:
        field: dotted path of the offending field, when known.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ConfigError(CertainTrustError, ValueError):
    """A run configuration value is missing, malformed or out of range."""
