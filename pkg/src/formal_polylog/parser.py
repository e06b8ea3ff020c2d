"""Expression grammar shared by the CLI, family files, and the relation database.

Scalars are rational functions in the context variables (with ``zeta`` for the chosen
root of unity); symbols are ``cor(...)``, ``II(a; ...; b)`` and ``Li[...](...)``, and a
top-level expression may be a rational combination of symbols.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, Union

import pyparsing as pp
from sympy.polys.domains import QQ

from .coalg import LinComb, combine, normalize
from .errors import FieldError, ParseError, SymbolError
from .field import FieldContext, FieldElem
from .hopf import HopfElem, IISym, hopf_symbol, ii_to_lie
from .polylog import LiSym, li_hopf, li_lie

pp.ParserElement.enable_packrat()

Position = tuple[int, int]


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str
    position: Position = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Zeta:
    pass


@dataclass(frozen=True)
class Neg:
    operand: Ast


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Ast
    right: Ast


@dataclass(frozen=True)
class CorNode:
    entries: tuple[Ast, ...]


@dataclass(frozen=True)
class IINode:
    lower: Ast
    middle: tuple[Ast, ...]
    upper: Ast


@dataclass(frozen=True)
class LiNode:
    n0: int
    indices: tuple[int, ...]
    args: tuple[Ast, ...]


Ast = Union[Num, Var, Zeta, Neg, BinOp, CorNode, IINode, LiNode]


def _position(text: str, loc: int) -> Position:
    return pp.lineno(loc, text), pp.col(loc, text)


def _fail(text: str, loc: int, message: str) -> None:
    line, column = _position(text, loc)
    raise ParseError(message, line=line, column=column)


def _fold_left(tokens: pp.ParseResults) -> Ast:
    items = tokens[0]
    node = items[0]
    for index in range(1, len(items), 2):
        node = BinOp(items[index], node, items[index + 1])
    return node


def _fold_power(tokens: pp.ParseResults) -> Ast:
    items = tokens[0]
    node = items[-1]
    for index in range(len(items) - 3, -1, -2):
        node = BinOp("^", items[index], node)
    return node


def _fold_neg(tokens: pp.ParseResults) -> Ast:
    items = tokens[0]
    node = items[-1]
    for _ in items[:-1]:
        node = Neg(node)
    return node


def _cor_action(text: str, loc: int, tokens: pp.ParseResults) -> CorNode:
    entries = tuple(tokens[0])
    if len(entries) < 2:
        _fail(text, loc, "cor(...) needs at least two entries.")
    return CorNode(entries)


def _li_action(text: str, loc: int, tokens: pp.ParseResults) -> LiNode:
    head = [int(n) for n in tokens[0]]
    if len(tokens) == 3:
        if len(head) != 1:
            _fail(text, loc, "Li[n0; ...] takes a single leading index.")
        n0, indices, args = head[0], tuple(int(n) for n in tokens[1]), tuple(tokens[2])
    else:
        n0, indices, args = 0, tuple(head), tuple(tokens[1])
    if not indices or any(n < 1 for n in indices):
        _fail(text, loc, "Li indices must be positive.")
    if len(indices) != len(args):
        _fail(text, loc, f"Li[...] has {len(indices)} indices but {len(args)} arguments.")
    return LiNode(n0, indices, args)


def _build_grammar() -> pp.ParserElement:
    lpar, rpar, lbrack, rbrack, semi = map(pp.Suppress, "()[];")
    expr = pp.Forward()
    integer = pp.Word(pp.nums)
    exprs = pp.Group(pp.DelimitedList(expr))
    optional_exprs = pp.Group(pp.Optional(pp.DelimitedList(expr)))
    ints = pp.Group(pp.DelimitedList(integer))

    cor_call = pp.Keyword("cor") + lpar + exprs + rpar
    cor_call.set_parse_action(lambda s, loc, t: _cor_action(s, loc, t[1:]))
    ii_call = pp.Keyword("II") + lpar + expr + semi + optional_exprs + semi + expr + rpar
    ii_call.set_parse_action(lambda t: IINode(t[1], tuple(t[2]), t[3]))
    li_call = pp.Keyword("Li") + lbrack + ints + pp.Optional(semi + ints) + rbrack + lpar + exprs + rpar
    li_call.set_parse_action(lambda s, loc, t: _li_action(s, loc, t[1:]))

    number = integer.copy().set_parse_action(lambda t: Num(int(t[0])))
    zeta = pp.Keyword("zeta").set_parse_action(lambda: Zeta())
    reserved = pp.Keyword("cor") | pp.Keyword("II") | pp.Keyword("Li") | pp.Keyword("zeta")
    name = pp.Word(pp.alphas + "_", pp.alphanums + "_").set_parse_action(lambda s, loc, t: Var(t[0], _position(s, loc)))
    ident = ~reserved + name
    operand = cor_call | ii_call | li_call | zeta | number | ident
    expr <<= pp.infix_notation(
        operand,
        [
            ("^", 2, pp.OpAssoc.RIGHT, _fold_power),
            ("-", 1, pp.OpAssoc.RIGHT, _fold_neg),
            (pp.one_of("* /"), 2, pp.OpAssoc.LEFT, _fold_left),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, _fold_left),
        ],
    )
    return expr


GRAMMAR = _build_grammar()


def parse(text: str) -> Ast:
    """Parse one expression; syntax errors carry line and column."""

    try:
        result = GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise ParseError(f"Syntax error: {exc.msg}", line=exc.lineno, column=exc.col) from None
    node: Ast = result[0]
    return node


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _precedence(node: Ast) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def format_ast(node: Ast) -> str:
    """Text that parses back to an equal tree."""

    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Zeta):
        return "zeta"
    if isinstance(node, Neg):
        inner = format_ast(node.operand)
        return f"-({inner})" if _precedence(node.operand) <= 3 else f"-{inner}"
    if isinstance(node, BinOp):
        own = _PRECEDENCE[node.op]
        left, right = format_ast(node.left), format_ast(node.right)
        if node.op == "^":
            left_paren, right_paren = _precedence(node.left) <= own, _precedence(node.right) < own
        else:
            left_paren, right_paren = _precedence(node.left) < own, _precedence(node.right) <= own
        left = f"({left})" if left_paren else left
        right = f"({right})" if right_paren else right
        return f"{left} {node.op} {right}" if own == 1 else f"{left}{node.op}{right}"
    if isinstance(node, CorNode):
        return "cor(" + ", ".join(format_ast(entry) for entry in node.entries) + ")"
    if isinstance(node, IINode):
        middle = ", ".join(format_ast(entry) for entry in node.middle)
        return f"II({format_ast(node.lower)}; {middle}; {format_ast(node.upper)})"
    indices = ",".join(str(n) for n in node.indices)
    head = f"{node.n0}; {indices}" if node.n0 else indices
    return f"Li[{head}](" + ", ".join(format_ast(arg) for arg in node.args) + ")"


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolSum:
    """Rational combination of correlator, iterated-integral and polylogarithm symbols."""

    terms: tuple[tuple[Any, Any], ...]

    def scaled(self, factor: Any) -> SymbolSum:
        return SymbolSum(tuple((coeff * factor, symbol) for coeff, symbol in self.terms))

    def __add__(self, other: SymbolSum) -> SymbolSum:
        return SymbolSum(self.terms + other.terms)


Value = Union[FieldElem, SymbolSum]


def _scalar_factor(value: FieldElem) -> Any:
    try:
        return value.rational_value()
    except FieldError:
        raise SymbolError(f"Symbols can only be scaled by rational constants, not {value}.") from None


def _scalar(value: Value, what: str) -> FieldElem:
    if isinstance(value, SymbolSum):
        raise SymbolError(f"{what} must be a scalar expression.")
    return value


def _combine_values(op: str, left: Value, right: Value) -> Value:
    if isinstance(left, FieldElem) and isinstance(right, FieldElem):
        if op == "/" and right.is_zero:
            raise FieldError("Division by zero.")
        operations: dict[str, Callable[[FieldElem, FieldElem], FieldElem]] = {
            "+": lambda a, b: a + b,
            "-": lambda a, b: a - b,
            "*": lambda a, b: a * b,
            "/": lambda a, b: a / b,
        }
        return operations[op](left, right)
    if op in "+-":
        if not (isinstance(left, SymbolSum) and isinstance(right, SymbolSum)):
            raise SymbolError("Cannot add a scalar to a symbol.")
        return left + (right if op == "+" else right.scaled(QQ(-1)))
    if op == "*":
        if isinstance(left, SymbolSum) and isinstance(right, SymbolSum):
            raise SymbolError("Products of symbols are not combinations; use the Hopf operations instead.")
        if isinstance(left, SymbolSum):
            return left.scaled(_scalar_factor(_scalar(right, "A factor")))
        assert isinstance(right, SymbolSum)
        return right.scaled(_scalar_factor(left))
    if isinstance(right, SymbolSum):
        raise SymbolError("Cannot divide by a symbol.")
    assert isinstance(left, SymbolSum)
    factor = _scalar_factor(right)
    if not factor:
        raise FieldError("Division by zero.")
    return left.scaled(1 / factor)


def evaluate(node: Ast, ctx: FieldContext) -> Value:
    """Scalar value or symbol combination of a parsed expression."""

    if isinstance(node, Num):
        return ctx.constant(node.value)
    if isinstance(node, Var):
        if node.name not in ctx.variables:
            line, column = node.position
            raise ParseError(f"Unknown identifier {node.name!r}.", line=line, column=column)
        return ctx.variable(node.name)
    if isinstance(node, Zeta):
        return ctx.zeta()
    if isinstance(node, Neg):
        value = evaluate(node.operand, ctx)
        return -value if isinstance(value, FieldElem) else value.scaled(QQ(-1))
    if isinstance(node, BinOp):
        left = evaluate(node.left, ctx)
        if node.op == "^":
            exponent = _scalar(evaluate(node.right, ctx), "An exponent").rational_value()
            if exponent.denominator != 1:
                raise SymbolError(f"Exponent {exponent} is not an integer.")
            return _scalar(left, "A power base") ** int(exponent.numerator)
        return _combine_values(node.op, left, evaluate(node.right, ctx))
    if isinstance(node, CorNode):
        entries = tuple(_scalar(evaluate(entry, ctx), "A correlator entry") for entry in node.entries)
        return SymbolSum(((QQ.one, entries),))
    if isinstance(node, IINode):
        lower = _scalar(evaluate(node.lower, ctx), "A boundary point")
        middle = tuple(_scalar(evaluate(entry, ctx), "An entry") for entry in node.middle)
        upper = _scalar(evaluate(node.upper, ctx), "A boundary point")
        return SymbolSum(((QQ.one, IISym(lower, middle, upper)),))
    args = tuple(_scalar(evaluate(arg, ctx), "A polylogarithm argument") for arg in node.args)
    return SymbolSum(((QQ.one, LiSym(node.n0, node.indices, args)),))


def _wrap(text: str, ctx: FieldContext) -> Value:
    return evaluate(parse(text), ctx)


def parse_scalar(text: str, ctx: FieldContext) -> FieldElem:
    return _scalar(_wrap(text, ctx), "The expression")


def parse_symbol(text: str, ctx: FieldContext) -> tuple[FieldElem, ...]:
    """Entries of a single ``cor(...)`` symbol."""

    value = _wrap(text, ctx)
    if not isinstance(value, SymbolSum) or len(value.terms) != 1 or not isinstance(value.terms[0][1], tuple):
        raise ParseError(f"Expected a single correlator, got {text!r}.")
    entries: tuple[FieldElem, ...] = value.terms[0][1]
    return entries


def parse_iisym(text: str, ctx: FieldContext) -> IISym:
    value = _wrap(text, ctx)
    if not isinstance(value, SymbolSum) or len(value.terms) != 1 or not isinstance(value.terms[0][1], IISym):
        raise ParseError(f"Expected a single iterated integral, got {text!r}.")
    symbol: IISym = value.terms[0][1]
    return symbol


def parse_lisym(text: str, ctx: FieldContext) -> LiSym:
    value = _wrap(text, ctx)
    if not isinstance(value, SymbolSum) or len(value.terms) != 1 or not isinstance(value.terms[0][1], LiSym):
        raise ParseError(f"Expected a single polylogarithm, got {text!r}.")
    symbol: LiSym = value.terms[0][1]
    return symbol


def _symbol_weight(symbol: Any) -> int:
    if isinstance(symbol, tuple):
        return len(symbol) - 1
    return int(symbol.weight)


def to_lincomb(value: Value, ctx: FieldContext) -> LinComb:
    """The element of A that a symbol combination stands for."""

    if isinstance(value, FieldElem):
        raise SymbolError("A scalar is not a correlator combination.")
    weights = {_symbol_weight(symbol) for _, symbol in value.terms}
    if len(weights) != 1:
        raise SymbolError("All symbols of a combination must have the same weight.", details={"weights": len(weights)})
    parts = []
    for coeff, symbol in value.terms:
        if isinstance(symbol, tuple):
            parts.append((coeff, normalize(symbol)))
        elif isinstance(symbol, IISym):
            parts.append((coeff, ii_to_lie(symbol)))
        else:
            parts.append((coeff, li_lie(symbol)))
    return combine(ctx, weights.pop(), parts).rebased()


def to_hopf(value: Value, ctx: FieldContext) -> HopfElem:
    """The Hopf normal form of a combination of iterated integrals and polylogarithms."""

    if isinstance(value, FieldElem):
        raise SymbolError("A scalar is not an iterated-integral combination.")
    result = HopfElem.zero(ctx)
    for coeff, symbol in value.terms:
        if isinstance(symbol, tuple):
            raise SymbolError("Correlators have no Hopf-level lift; write them with II(...) instead.")
        image = hopf_symbol(symbol) if isinstance(symbol, IISym) else li_hopf(symbol)
        result = result + image * coeff
    return result


def parse_element(text: str, ctx: FieldContext) -> LinComb:
    return to_lincomb(_wrap(text, ctx), ctx)


def parse_hopf(text: str, ctx: FieldContext) -> HopfElem:
    return to_hopf(_wrap(text, ctx), ctx)
