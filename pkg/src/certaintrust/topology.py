"""Propositional system topologies and their trust assessment.

A system's redundancy structure is written as a propositional formula over
component names, e.g. ``(A1 | A2) & (B1 | B2)`` for a server that needs one
of two app servers and one of two database servers.  The formula is parsed
into an AST and evaluated by folding the opinion operators over per-component
opinions, giving the composite opinion of the whole system.

Grammar (whitespace insignificant)::

    formula  := or_expr
    or_expr  := and_expr (("|" | "OR") and_expr)*
    and_expr := unary (("&" | "AND") unary)*
    unary    := ("!" | "NOT") unary | atom
    atom     := IDENT | "(" or_expr ")"
    IDENT    := [A-Za-z][A-Za-z0-9_]*

Keywords are case-insensitive; NOT binds tighter than AND, which binds
tighter than OR; AND and OR associate to the left.

A scenario bundles a formula with its component inputs -- either raw
evidence counts or direct ``(t, c, f)`` opinions -- and assessment produces
opinions, expectation values, trust percentages, behavioral probabilities
and linguistic classes for every component, every subexpression and the
system root.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Union

from .errors import (
    DomainError,
    EvaluationError,
    FormulaSyntaxError,
    ScenarioError,
    UnbalancedParenthesesError,
    UnboundComponentError,
)
from .fuzzy import FuzzyLabel, LinguisticVariable, classify_trust
from .opinions import (
    EvidenceRecord,
    NotMode,
    Opinion,
    TrustAssessment,
    behavioral_probability,
    derive_opinion,
    expectation,
    op_and,
    op_not,
    op_or,
    trust_percent,
)

__all__ = [
    "Formula",
    "Leaf",
    "Not",
    "And",
    "Or",
    "parse_formula",
    "unparse",
    "free_variables",
    "evaluate_formula",
    "ScenarioDefaults",
    "Scenario",
    "scenario_from_dict",
    "load_scenario",
    "ComponentAssessment",
    "NodeAssessment",
    "RootAssessment",
    "SystemReport",
    "assess_system",
]


class Formula:
    """Base class of formula AST nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Leaf(Formula):
    name: str

    def __post_init__(self):
        if not self.name:
            raise FormulaSyntaxError("component name must be non-empty", 0)


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


def free_variables(node: Formula) -> frozenset[str]:
    """The component names referenced by a formula."""
    if isinstance(node, Leaf):
        return frozenset((node.name,))
    if isinstance(node, Not):
        return free_variables(node.child)
    if isinstance(node, (And, Or)):
        return free_variables(node.left) | free_variables(node.right)
    raise TypeError(f"not a formula node: {node!r}")


_PRECEDENCE = {Or: 1, And: 2, Not: 3, Leaf: 4}


def unparse(node: Formula) -> str:
    """Render a formula with minimal parentheses; parse(unparse(x)) == x."""
    if isinstance(node, Leaf):
        return node.name
    if isinstance(node, Not):
        child = unparse(node.child)
        if _PRECEDENCE[type(node.child)] < _PRECEDENCE[Not]:
            child = f"({child})"
        return f"!{child}"
    if isinstance(node, (And, Or)):
        symbol = "&" if isinstance(node, And) else "|"
        prec = _PRECEDENCE[type(node)]
        left = unparse(node.left)
        if _PRECEDENCE[type(node.left)] < prec:
            left = f"({left})"
        right = unparse(node.right)
        # left-associative: an equal-precedence right child needs parens
        if _PRECEDENCE[type(node.right)] <= prec:
            right = f"({right})"
        return f"{left} {symbol} {right}"
    raise TypeError(f"not a formula node: {node!r}")


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
      | (?P<and>&)
      | (?P<or>\|)
      | (?P<not>!)
      | (?P<lparen>\()
      | (?P<rparen>\))
    """,
    re.VERBOSE,
)

_KEYWORDS = {"and": "and", "or": "or", "not": "not"}


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | and | or | not | lparen | rparen | end
    text: str
    offset: int  # byte offset into the source


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    index = 0
    while index < len(text):
        match = _TOKEN_RE.match(text, index)
        if match is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[index]!r}",
                _byte_offset(text, index),
                frozenset({"identifier", "'&'", "'|'", "'!'", "'('", "')'"}),
            )
        kind = match.lastgroup
        if kind != "ws":
            value = match.group()
            if kind == "ident":
                kind = _KEYWORDS.get(value.casefold(), "ident")
            tokens.append(_Token(kind, value, _byte_offset(text, index)))
        index = match.end()
    tokens.append(_Token("end", "", _byte_offset(text, len(text))))
    return tokens


_TOKEN_NAMES = {
    "ident": "identifier",
    "and": "'&'",
    "or": "'|'",
    "not": "'!'",
    "lparen": "'('",
    "rparen": "')'",
    "end": "end of input",
}

_ATOM_EXPECTED = frozenset({"identifier", "'('", "'!'"})


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def match(self, kind: str) -> bool:
        if self.peek().kind == kind:
            self.index += 1
            return True
        return False

    def or_expr(self) -> Formula:
        node = self.and_expr()
        while self.match("or"):
            node = Or(node, self.and_expr())
        return node

    def and_expr(self) -> Formula:
        node = self.unary()
        while self.match("and"):
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        if self.match("not"):
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        token = self.peek()
        if token.kind == "ident":
            self.advance()
            return Leaf(token.text)
        if token.kind == "lparen":
            open_token = self.advance()
            node = self.or_expr()
            closer = self.peek()
            if closer.kind != "rparen":
                raise UnbalancedParenthesesError(
                    f"unclosed '(' opened at byte offset {open_token.offset}",
                    closer.offset,
                    frozenset({"')'"}),
                )
            self.advance()
            return node
        if token.kind == "rparen":
            raise UnbalancedParenthesesError("unmatched ')'", token.offset, _ATOM_EXPECTED)
        raise FormulaSyntaxError(
            f"unexpected {_TOKEN_NAMES[token.kind]}", token.offset, _ATOM_EXPECTED
        )


def parse_formula(text: str) -> Formula:
    """Parse a topology formula; see the module docstring for the grammar."""
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", 0, _ATOM_EXPECTED)
    parser = _Parser(_tokenize(text))
    node = parser.or_expr()
    trailing = parser.peek()
    if trailing.kind != "end":
        if trailing.kind == "rparen":
            raise UnbalancedParenthesesError("unmatched ')'", trailing.offset, frozenset({"end of input"}))
        raise FormulaSyntaxError(
            f"unexpected {_TOKEN_NAMES[trailing.kind]} after complete formula",
            trailing.offset,
            frozenset({"'&'", "'|'", "end of input"}),
        )
    return node


def evaluate_formula(
    node: Formula,
    leaves: Mapping[str, Opinion],
    not_mode: NotMode = NotMode.NEGATE_CERTAINTY,
) -> Opinion:
    """Fold the opinion operators over a formula, post-order.

    Raises ``UnboundComponentError`` for a leaf with no bound opinion and
    wraps operator domain failures into ``EvaluationError`` carrying the
    offending subexpression and its path.
    """
    return _evaluate(node, leaves, not_mode, "root")


def _evaluate(node: Formula, leaves: Mapping[str, Opinion], not_mode: NotMode, path: str) -> Opinion:
    if isinstance(node, Leaf):
        try:
            return leaves[node.name]
        except KeyError:
            raise UnboundComponentError(node.name) from None
    if isinstance(node, Not):
        return op_not(_evaluate(node.child, leaves, not_mode, f"{path}.operand"), not_mode)
    if isinstance(node, (And, Or)):
        left = _evaluate(node.left, leaves, not_mode, f"{path}.left")
        right = _evaluate(node.right, leaves, not_mode, f"{path}.right")
        try:
            return op_and(left, right) if isinstance(node, And) else op_or(left, right)
        except DomainError as exc:
            raise EvaluationError(str(exc), path, unparse(node)) from exc
    raise TypeError(f"not a formula node: {node!r}")


@dataclass(frozen=True)
class ScenarioDefaults:
    """Context parameters applied where a component omits them."""

    big_n: int | None = None
    w: float = 1.0
    f: float = 0.5
    scale: float = 5.0


@dataclass(frozen=True)
class Scenario:
    """A topology formula plus the inputs of every referenced component."""

    formula: Formula
    components: Mapping[str, Union[EvidenceRecord, Opinion]]
    defaults: ScenarioDefaults = field(default_factory=ScenarioDefaults)

    def __post_init__(self):
        if not self.components:
            raise ScenarioError("scenario has no components", "components")
        unbound = sorted(free_variables(self.formula) - set(self.components))
        if unbound:
            raise ScenarioError(
                f"formula references unbound component(s): {', '.join(unbound)}", "formula"
            )


_EVIDENCE_KEYS = {"r", "s", "N", "w", "f", "scale"}
_DIRECT_KEYS = {"t", "c", "f"}


def _component_from_dict(name: str, raw: dict, defaults: ScenarioDefaults):
    where = f"components.{name}"
    if not isinstance(raw, dict):
        raise ScenarioError("component entry must be an object", where)
    keys = set(raw)
    has_evidence = bool(keys & {"r", "s"})
    has_direct = bool(keys & {"t", "c"})
    if has_evidence and has_direct:
        raise ScenarioError("evidence form (r, s) and direct form (t, c) are mutually exclusive", where)
    try:
        if has_evidence:
            unknown = keys - _EVIDENCE_KEYS
            if unknown:
                raise ScenarioError(f"unknown field(s) {sorted(unknown)}", where)
            if "r" not in raw or "s" not in raw:
                raise ScenarioError("evidence form needs both r and s", where)
            big_n = raw.get("N", defaults.big_n)
            if big_n is None:
                raise ScenarioError("no N given and no default N in the scenario", where)
            return EvidenceRecord(
                r=_as_count(raw["r"], f"{where}.r"),
                s=_as_count(raw["s"], f"{where}.s"),
                big_n=_as_count(big_n, f"{where}.N"),
                w=_as_number(raw.get("w", defaults.w), f"{where}.w"),
                f=_as_number(raw.get("f", defaults.f), f"{where}.f"),
                scale=_as_number(raw.get("scale", defaults.scale), f"{where}.scale"),
            )
        if has_direct:
            unknown = keys - _DIRECT_KEYS
            if unknown:
                raise ScenarioError(f"unknown field(s) {sorted(unknown)}", where)
            if "t" not in raw or "c" not in raw:
                raise ScenarioError("direct form needs both t and c", where)
            return Opinion(
                t=_as_number(raw["t"], f"{where}.t"),
                c=_as_number(raw["c"], f"{where}.c"),
                f=_as_number(raw.get("f", defaults.f), f"{where}.f"),
            )
    except ScenarioError:
        raise
    except DomainError as exc:
        raise ScenarioError(str(exc), where) from exc
    raise ScenarioError("component must give either evidence (r, s) or a direct opinion (t, c)", where)


def _as_count(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"must be an integer, got {value!r}", where)
    return value


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"must be a number, got {value!r}", where)
    return float(value)


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a scenario from its JSON document form.

    Document shape::

        {"formula": "<DSL string>",
         "defaults": {"N": ..., "w": ..., "f": ..., "scale": ...},
         "components": {"A1": {"r": 5, "s": 2} | {"t": 0.714, "c": 0.724, "f": 0.5}, ...}}
    """
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    unknown = set(doc) - {"formula", "defaults", "components"}
    if unknown:
        raise ScenarioError(f"unknown top-level field(s): {sorted(unknown)}")
    if "formula" not in doc:
        raise ScenarioError("missing required field", "formula")
    if not isinstance(doc["formula"], str):
        raise ScenarioError("must be a string", "formula")
    raw_defaults = doc.get("defaults", {})
    if not isinstance(raw_defaults, dict):
        raise ScenarioError("must be an object", "defaults")
    unknown = set(raw_defaults) - {"N", "w", "f", "scale"}
    if unknown:
        raise ScenarioError(f"unknown field(s) {sorted(unknown)}", "defaults")
    defaults = ScenarioDefaults(
        big_n=_as_count(raw_defaults["N"], "defaults.N") if "N" in raw_defaults else None,
        w=_as_number(raw_defaults.get("w", 1.0), "defaults.w"),
        f=_as_number(raw_defaults.get("f", 0.5), "defaults.f"),
        scale=_as_number(raw_defaults.get("scale", 5.0), "defaults.scale"),
    )
    raw_components = doc.get("components")
    if not isinstance(raw_components, dict) or not raw_components:
        raise ScenarioError("must be a non-empty object", "components")
    components = {
        name: _component_from_dict(name, raw, defaults) for name, raw in raw_components.items()
    }
    return Scenario(formula=parse_formula(doc["formula"]), components=components, defaults=defaults)


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise ScenarioError(f"duplicate key {key!r} in scenario document")
        seen[key] = value
    return seen


def load_scenario(path: str | Path) -> Scenario:
    """Load and validate a scenario JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


@dataclass(frozen=True)
class ComponentAssessment:
    """Full metric readout for one named component."""

    name: str
    opinion: Opinion
    expectation: float
    trust_percent: float
    trust_class: FuzzyLabel
    behavior: TrustAssessment


@dataclass(frozen=True)
class NodeAssessment:
    """Opinion and expectation of one formula subexpression."""

    path: str
    expression: str
    opinion: Opinion
    expectation: float


@dataclass(frozen=True)
class RootAssessment:
    """Composite system readout at the formula root."""

    expression: str
    opinion: Opinion
    expectation: float
    trust_percent: float
    trust_class: FuzzyLabel
    behavior: TrustAssessment


@dataclass(frozen=True)
class SystemReport:
    components: tuple[ComponentAssessment, ...]
    nodes: tuple[NodeAssessment, ...]
    root: RootAssessment


def _assess_opinion(op: Opinion, scale: float, trust_var: LinguisticVariable | None):
    e = expectation(op)
    t_pct = trust_percent(op, scale)
    return e, t_pct, classify_trust(t_pct, trust_var), behavioral_probability(t_pct, op.f)


def assess_system(
    scenario: Scenario,
    not_mode: NotMode = NotMode.NEGATE_CERTAINTY,
    trust_var: LinguisticVariable | None = None,
    scale: float | None = None,
) -> SystemReport:
    """Assess every component, every formula node and the system root.

    Behavioral probabilities are taken against each node's own initial
    expectation (composite priors emerge from the operator algebra, they are
    never user-supplied at internal nodes).
    """
    effective_scale = scenario.defaults.scale if scale is None else scale
    opinions: dict[str, Opinion] = {}
    components = []
    for name, entry in scenario.components.items():
        op = derive_opinion(entry) if isinstance(entry, EvidenceRecord) else entry
        opinions[name] = op
        e, t_pct, t_class, behavior = _assess_opinion(op, effective_scale, trust_var)
        components.append(
            ComponentAssessment(
                name=name,
                opinion=op,
                expectation=e,
                trust_percent=t_pct,
                trust_class=t_class,
                behavior=behavior,
            )
        )

    nodes: list[NodeAssessment] = []

    def walk(node: Formula, path: str) -> Opinion:
        if isinstance(node, Leaf):
            op = _evaluate(node, opinions, not_mode, path)
        elif isinstance(node, Not):
            op = op_not(walk(node.child, f"{path}.operand"), not_mode)
        else:
            left = walk(node.left, f"{path}.left")
            right = walk(node.right, f"{path}.right")
            try:
                op = op_and(left, right) if isinstance(node, And) else op_or(left, right)
            except DomainError as exc:
                raise EvaluationError(str(exc), path, unparse(node)) from exc
        nodes.append(NodeAssessment(path=path, expression=unparse(node), opinion=op, expectation=expectation(op)))
        return op

    root_opinion = walk(scenario.formula, "root")
    e, t_pct, t_class, behavior = _assess_opinion(root_opinion, effective_scale, trust_var)
    root = RootAssessment(
        expression=unparse(scenario.formula),
        opinion=root_opinion,
        expectation=e,
        trust_percent=t_pct,
        trust_class=t_class,
        behavior=behavior,
    )
    return SystemReport(components=tuple(components), nodes=tuple(nodes), root=root)
