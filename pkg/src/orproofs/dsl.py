"""Nested AND/OR acceptance expressions over named proofs.

Grammar (keywords are case-sensitive, AND binds tighter than OR, and a run
of the same operator becomes one n-ary node)::

    expr     := or_expr
    or_expr  := and_expr ("OR" and_expr)*
    and_expr := atom ("AND" atom)*
    atom     := IDENT | "(" expr ")"

A compiled expression verifies against a :class:`VerificationInput` that
mirrors its shape; each OR node's input names the branch it satisfies.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from orproofs.aggregation import check_constituent, aggregate_and, aggregate_or_many, split_point
from orproofs.errors import ExprSyntaxError, ShapeMismatch, UnboundAtom
from orproofs.merkle import is_digest
from orproofs.proofs import (
    TAG_ALL,
    TAG_ANY,
    Proof,
    ProofKind,
    ProvingContext,
    Single,
    Structured,
    VerifyingContext,
    holds,
    verify,
)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
KEYWORDS = ("AND", "OR")


@dataclass(frozen=True)
class AtomRef:
    name: str


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


AcceptanceExpr = Union[AtomRef, And, Or]


@dataclass(frozen=True)
class AtomInput:
    h: bytes


@dataclass(frozen=True)
class AndInput:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class OrInput:
    selected: int
    input: "VerificationInput"


VerificationInput = Union[AtomInput, AndInput, OrInput]


# -- parsing ------------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "AND", "OR", "(", ")", "end"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            col, i = col + 1, i + 1
            continue
        if ch in "()":
            tokens.append(_Token(ch, ch, line, col))
            col, i = col + 1, i + 1
            continue
        m = IDENT_RE.match(text, i)
        if not m:
            raise ExprSyntaxError("unexpected character", line, col, ch)
        word = m.group()
        tokens.append(_Token(word if word in KEYWORDS else "ident", word, line, col))
        col, i = col + len(word), m.end()
    tokens.append(_Token("end", "<end of input>", line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(message, tok.line, tok.column, tok.text)

    def expr(self):
        children = [self.and_expr()]
        while self.peek().kind == "OR":
            self.take()
            children.append(self.and_expr())
        return children[0] if len(children) == 1 else Or(children)

    def and_expr(self):
        children = [self.atom()]
        while self.peek().kind == "AND":
            self.take()
            children.append(self.atom())
        return children[0] if len(children) == 1 else And(children)

    def atom(self):
        tok = self.peek()
        if tok.kind == "ident":
            self.take()
            return AtomRef(tok.text)
        if tok.kind == "(":
            self.take()
            inner = self.expr()
            if self.peek().kind != ")":
                self.fail("expected ')'")
            self.take()
            return inner
        prev = self.tokens[self.pos - 1] if self.pos else None
        if tok.kind == "end" and prev is not None and prev.kind in KEYWORDS:
            self.fail("dangling operator", prev)
        self.fail("expected an identifier or '('")


def parse(text: str) -> AcceptanceExpr:
    p = _Parser(text)
    result = p.expr()
    if p.peek().kind != "end":
        p.fail("unexpected token")
    return result


def pretty(expr: AcceptanceExpr) -> str:
    """Render ``expr`` so that :func:`parse` rebuilds the same tree."""
    if isinstance(expr, AtomRef):
        return expr.name
    if isinstance(expr, And):
        return " AND ".join(f"({pretty(c)})" if not isinstance(c, AtomRef) else c.name for c in expr.children)
    if isinstance(expr, Or):
        return " OR ".join(f"({pretty(c)})" if isinstance(c, Or) else pretty(c) for c in expr.children)
    raise TypeError(f"not an expression: {expr!r}")


def atom_names(expr: AcceptanceExpr) -> list[str]:
    """Atom names in first-occurrence order."""
    seen = {}
    stack = [expr]
    while stack:
        e = stack.pop()
        if isinstance(e, AtomRef):
            seen.setdefault(e.name, None)
        else:
            stack.extend(reversed(e.children))
    return list(seen)


# -- semantics ----------------------------------------------------------------

def eval_reference(expr: AcceptanceExpr, truth: Mapping[str, bool]) -> bool:
    if isinstance(expr, AtomRef):
        if expr.name not in truth:
            raise UnboundAtom(expr.name)
        return bool(truth[expr.name])
    values = [eval_reference(c, truth) for c in expr.children]
    return all(values) if isinstance(expr, And) else any(values)


def compile(ctx: ProvingContext, expr: AcceptanceExpr, bindings: Mapping[str, Proof]) -> Proof:
    """Aggregate the bound proofs along ``expr``; the root is reissued as an EXPR proof."""

    def build(e):
        if isinstance(e, AtomRef):
            if e.name not in bindings:
                raise UnboundAtom(e.name)
            proof = bindings[e.name]
            check_constituent(ctx, proof)
            return proof
        kids = [build(c) for c in e.children]
        if isinstance(e, And):
            return aggregate_and(ctx, kids)
        return aggregate_or_many(ctx, kids)

    return ctx.issue(ProofKind.EXPR, build(expr).descriptor)


def check_shape(expr: AcceptanceExpr, vinput: VerificationInput) -> None:
    if isinstance(expr, AtomRef):
        if not isinstance(vinput, AtomInput):
            raise ShapeMismatch(f"atom {expr.name!r} expects an atom input, got {type(vinput).__name__}")
    elif isinstance(expr, And):
        if not isinstance(vinput, AndInput):
            raise ShapeMismatch(f"AND node expects an and input, got {type(vinput).__name__}")
        if len(vinput.children) != len(expr.children):
            raise ShapeMismatch(f"AND node has {len(expr.children)} children, input has {len(vinput.children)}")
        for e, i in zip(expr.children, vinput.children):
            check_shape(e, i)
    elif isinstance(expr, Or):
        if not isinstance(vinput, OrInput):
            raise ShapeMismatch(f"OR node expects an or input, got {type(vinput).__name__}")
        if not isinstance(vinput.selected, int) or not 0 <= vinput.selected < len(expr.children):
            raise ShapeMismatch(f"OR selector {vinput.selected!r} outside [0, {len(expr.children)})")
        check_shape(expr.children[vinput.selected], vinput.input)
    else:
        raise TypeError(f"not an expression: {expr!r}")


def _or_branch(vctx: VerifyingContext, desc, k: int, i: int):
    """Descend the balanced OR fold of ``k`` children at ``desc`` to child ``i``."""
    while k > 1:
        node = vctx.transcript.node(desc)
        if node is None or node.tag != TAG_ANY or len(node.payload) != 2:
            return None
        mid = split_point(k)
        if i < mid:
            desc, k = node.payload[0], mid
        else:
            desc, k, i = node.payload[1], k - mid, i - mid
    return desc


def holds_structured(vctx: VerifyingContext, desc, expr: AcceptanceExpr, vinput: VerificationInput) -> bool:
    if isinstance(expr, AtomRef):
        return isinstance(vinput, AtomInput) and is_digest(vinput.h) and holds(vctx, desc, Single(vinput.h))
    if isinstance(expr, And):
        if not isinstance(vinput, AndInput) or len(vinput.children) != len(expr.children):
            return False
        node = vctx.transcript.node(desc)
        if node is None or node.tag != TAG_ALL or len(node.payload) != len(expr.children):
            return False
        return all(holds_structured(vctx, d, e, i) for d, e, i in zip(node.payload, expr.children, vinput.children))
    if isinstance(expr, Or):
        if not isinstance(vinput, OrInput) or not 0 <= vinput.selected < len(expr.children):
            return False
        branch = _or_branch(vctx, desc, len(expr.children), vinput.selected)
        return branch is not None and holds_structured(vctx, branch, expr.children[vinput.selected], vinput.input)
    return False


def verify_structured(vctx: VerifyingContext, proof: Proof, expr: AcceptanceExpr, vinput: VerificationInput) -> bool:
    check_shape(expr, vinput)
    return verify(vctx, proof, Structured(vinput, expr))


# -- JSON form of verification inputs -----------------------------------------

def input_to_json(vinput: VerificationInput):
    if isinstance(vinput, AtomInput):
        return {"atom": vinput.h.hex()}
    if isinstance(vinput, AndInput):
        return {"and": [input_to_json(c) for c in vinput.children]}
    if isinstance(vinput, OrInput):
        return {"or": {"selected": vinput.selected, "input": input_to_json(vinput.input)}}
    raise TypeError(f"not a verification input: {vinput!r}")


def input_from_json(obj) -> VerificationInput:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError("verification input must be an object with exactly one of 'atom', 'and', 'or'")
    (key, value), = obj.items()
    if key == "atom":
        h = bytes.fromhex(value) if isinstance(value, str) else None
        if h is None or len(h) != 32:
            raise ValueError("'atom' must be a 64-character hex digest")
        return AtomInput(h)
    if key == "and":
        if not isinstance(value, list):
            raise ValueError("'and' must be a list")
        return AndInput([input_from_json(v) for v in value])
    if key == "or":
        if not isinstance(value, dict) or set(value) != {"selected", "input"}:
            raise ValueError("'or' must be an object with 'selected' and 'input'")
        if not isinstance(value["selected"], int) or isinstance(value["selected"], bool):
            raise ValueError("'selected' must be an integer")
        return OrInput(value["selected"], input_from_json(value["input"]))
    raise ValueError(f"unknown verification input key {key!r}")
