"""
Expression language for algebraic inputs.

Grammar (tightest first):
1. literals          perm[213]  tree[1[2,3]]  dtree[a[b]]  dpair[a[a]; 1]
                     qo{3; 1<2, 2~3}  dg{2; 1->2}  e3  X[1,0]  orb(tree[1[2]])
                     with an optional dual marker written directly after: e2*
2. calls             brace(p; args)  star_t(u; v)  star_s(u; v)
                     dend_l(u; v)  dend_r(u; v)  dual(x)
3. composition       p o_i q (or p ∘_i q), p bullet q (or •), left associative
4. juxtaposition     words: e2 e1 e1, optionally led by a coefficient: 2 e3
5. monomials         dtree[a]·dtree[a]
6. scalars           3/2 * (e2 o_1 e3)
7. tensors           a ⊗ b
8. sums              a + b - c

The printed form of every Element parses back to the same Element once the
carrier of bare keys (word or monomial) is fixed through EvalContext.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

import pyparsing as pp

from .algebra_core import Element, Monomial, Word, add_into, bilinear, concat, monomial_product, tensor
from .combinatorics import (
    ComGenerator,
    DecoratedPair,
    DecoratedTree,
    Exponent,
    LabelledTree,
    OrbitClass,
    Permutation,
    letter_color,
    orbit_canonical,
)
from .errors import FamilyMismatchError, OpforgeError, ParseError, UnsupportedOperationError
from .induced_structures import (
    BInfContext,
    BInfinityContext,
    CoinvariantBinfContext,
    GraftingContext,
    OperadBinfContext,
    OperadBraceContext,
    PairInsertionContext,
    TrivialContext,
    brace,
    dend_left,
    dend_right,
    graft,
    insert_pair,
    prelie,
    quasi_shuffle_context,
    star_sym,
    star_tensor,
)
from .operads import OperadDescriptor, compose_elements, get_operad
from .relations import QuasiOrder, SimpleDigraph

logger = logging.getLogger(__name__)

Value = Union[Element, Fraction]

OPERAD_OF_KEY = {
    Permutation: 'as',
    ComGenerator: 'com',
    LabelledTree: 'prelie',
    QuasiOrder: 'qo',
    SimpleDigraph: 'sg',
}

CALLS = ('brace', 'star_t', 'star_s', 'dend_l', 'dend_r', 'dual')


# ========== AST ==========

@dataclass(frozen=True)
class Expr:
    """Base node."""


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction


@dataclass(frozen=True)
class Atom(Expr):
    key: Hashable
    dual: bool = False


@dataclass(frozen=True)
class Compose(Expr):
    left: Expr
    index: int
    right: Expr


@dataclass(frozen=True)
class Bullet(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Juxtapose(Expr):
    parts: Tuple[Expr, ...]


@dataclass(frozen=True)
class MonomialExpr(Expr):
    parts: Tuple[Expr, ...]


@dataclass(frozen=True)
class Scale(Expr):
    coeff: Fraction
    expr: Expr


@dataclass(frozen=True)
class TensorExpr(Expr):
    parts: Tuple[Expr, ...]


@dataclass(frozen=True)
class SumExpr(Expr):
    terms: Tuple[Tuple[int, Expr], ...]


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: Tuple[Expr, ...]


def mentions_dual(expr: Expr) -> bool:
    """True when a dual marker or dual(...) occurs anywhere in the tree."""
    if isinstance(expr, Atom):
        return expr.dual
    if isinstance(expr, Call) and expr.name == 'dual':
        return True
    children: Sequence[Expr] = ()
    if isinstance(expr, (Compose, Bullet)):
        children = (expr.left, expr.right)
    elif isinstance(expr, (Juxtapose, MonomialExpr, TensorExpr)):
        children = expr.parts
    elif isinstance(expr, Scale):
        children = (expr.expr,)
    elif isinstance(expr, SumExpr):
        children = [e for _, e in expr.terms]
    elif isinstance(expr, Call):
        children = expr.args
    return any(mentions_dual(child) for child in children)


# ========== GRAMMAR ==========

@dataclass
class _Node:
    label: Hashable
    children: Tuple['_Node', ...]


def _node_action(tokens) -> _Node:
    children = tuple(tokens[1]) if len(tokens) > 1 else ()
    return _Node(tokens[0], children)


def _labelled_tree(root: _Node) -> LabelledTree:
    parents: List[Tuple[int, int]] = []

    def walk(node: _Node, parent: int) -> None:
        parents.append((node.label, parent))
        for child in node.children:
            walk(child, node.label)

    walk(root, 0)
    return LabelledTree(tuple(parents))


def _decorated_tree(root: _Node) -> DecoratedTree:
    def code(node: _Node) -> tuple:
        return (letter_color(node.label), tuple(sorted(code(c) for c in node.children)))
    return DecoratedTree(code(root))


def _ground(tokens) -> Tuple:
    head = tokens[0]
    if isinstance(head, int):
        return tuple(range(1, head + 1))
    return tuple(head)


def _quasi_order(tokens) -> QuasiOrder:
    ground = _ground(tokens)
    pairs = []
    for a, op, b in tokens[1:]:
        pairs.append((a, b))
        if op == '~':
            pairs.append((b, a))
    return QuasiOrder.from_pairs(ground, pairs)


def _digraph(tokens) -> SimpleDigraph:
    ground = _ground(tokens)
    return SimpleDigraph.from_edges(ground, [(a, b) for a, _, b in tokens[1:]])


def _fold_composite(tokens) -> Expr:
    result = tokens[0]
    for k in range(1, len(tokens), 2):
        op, right = tokens[k], tokens[k + 1]
        result = Bullet(result, right) if op == 'bullet' else Compose(result, op, right)
    return result


def _word_action(tokens) -> Expr:
    items = list(tokens)
    coeff = None
    while items and isinstance(items[0], Fraction):
        coeff = items.pop(0) * (1 if coeff is None else coeff)
    if not items:
        return Const(coeff)
    body = items[0] if len(items) == 1 else Juxtapose(tuple(items))
    return body if coeff is None else Scale(coeff, body)


def _sum_action(tokens) -> Expr:
    items = list(tokens)
    terms: List[Tuple[int, Expr]] = []
    sign = 1
    for item in items:
        if isinstance(item, str):
            sign = -1 if item in ('-', '−') else 1
        else:
            terms.append((sign, item))
            sign = 1
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return SumExpr(tuple(terms))


def _rational_action(source: str, loc: int, tokens) -> Fraction:
    try:
        return Fraction(tokens[0])
    except ZeroDivisionError:
        raise pp.ParseFatalException(source, loc, f"Zero denominator in {tokens[0]}") from None


@lru_cache(maxsize=None)
def _grammar() -> pp.ParserElement:
    pp.ParserElement.enable_packrat()
    LBRACK, RBRACK, LBRACE, RBRACE, LPAR, RPAR, COMMA, SEMI = map(pp.Suppress, '[]{}(),;')

    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    rational = pp.Regex(r"\d+(?:/\d+)?").set_parse_action(_rational_action)
    label = integer | pp.Word(pp.alphas)

    tree_node = pp.Forward()
    tree_node <<= (integer + pp.Optional(LBRACK + pp.Group(tree_node + pp.ZeroOrMore(COMMA + tree_node)) + RBRACK)
                   ).set_parse_action(_node_action)
    color_node = pp.Forward()
    color_node <<= (pp.Char(pp.alphas.lower())
                    + pp.Optional(LBRACK + pp.Group(color_node + pp.ZeroOrMore(COMMA + color_node)) + RBRACK)
                    ).set_parse_action(_node_action)

    perm = (pp.Keyword('perm') + LBRACK + pp.Word(pp.nums) + RBRACK).set_parse_action(
        lambda t: Permutation.parse(t[1]))
    tree = (pp.Keyword('tree') + LBRACK + tree_node + RBRACK).set_parse_action(lambda t: _labelled_tree(t[1]))
    dtree = (pp.Keyword('dtree') + LBRACK + color_node + RBRACK).set_parse_action(
        lambda t: _decorated_tree(t[1]))
    dpair = (pp.Keyword('dpair') + LBRACK + color_node + SEMI + integer + RBRACK).set_parse_action(
        lambda t: DecoratedPair(_decorated_tree(t[1]), t[2]))
    ground = integer | pp.Group(LBRACK + label + pp.ZeroOrMore(COMMA + label) + RBRACK)
    qo_item = pp.Group(label + pp.one_of('< ~') + label)
    qo = (pp.Suppress(pp.Keyword('qo')) + LBRACE + ground
          + pp.Optional(SEMI + qo_item + pp.ZeroOrMore(COMMA + qo_item)) + RBRACE).set_parse_action(_quasi_order)
    dg_item = pp.Group(label + pp.Literal('->') + label)
    dg = (pp.Suppress(pp.Keyword('dg')) + LBRACE + ground
          + pp.Optional(SEMI + dg_item + pp.ZeroOrMore(COMMA + dg_item)) + RBRACE).set_parse_action(_digraph)
    com = pp.Regex(r'e(\d+)\b').set_parse_action(lambda t: ComGenerator(int(t[0][1:])))
    exponent = (pp.Suppress(pp.Keyword('X')) + LBRACK + integer + pp.ZeroOrMore(COMMA + integer) + RBRACK
                ).set_parse_action(lambda t: Exponent(tuple(t)))

    plain = perm | dtree | dpair | tree | qo | dg | com | exponent
    orb = (pp.Suppress(pp.Keyword('orb')) + LPAR + plain + RPAR).set_parse_action(lambda t: orbit_canonical(t[0]))
    literal = orb | plain

    expr = pp.Forward()
    dual_mark = pp.Regex(r'\*(?![\w(\[])').leave_whitespace()
    call = (pp.one_of(' '.join(CALLS)) + LPAR + pp.Group(expr + pp.ZeroOrMore(SEMI + expr)) + RPAR
            ).set_parse_action(lambda t: Call(t[0], tuple(t[1])))
    atom = ((literal + pp.Optional(dual_mark)).set_parse_action(lambda t: Atom(t[0], len(t) > 1))
            | call
            | (LPAR + expr + RPAR + pp.Optional(dual_mark)).set_parse_action(
                lambda t: Call('dual', (t[0],)) if len(t) > 1 else t[0]))

    compose_op = pp.Regex(r'(?:o|∘)_(\d+)').set_parse_action(lambda t: int(t[0].split('_')[1]))
    bullet_op = (pp.Keyword('bullet') | pp.Literal('•')).set_parse_action(lambda: 'bullet')
    composite = (atom + pp.ZeroOrMore((compose_op | bullet_op) + atom)).set_parse_action(_fold_composite)

    word = ((pp.OneOrMore(rational) + pp.ZeroOrMore(composite)) | pp.OneOrMore(composite)).set_parse_action(_word_action)
    monomial = (word + pp.ZeroOrMore(pp.Suppress('·') + word)).set_parse_action(
        lambda t: t[0] if len(t) == 1 else MonomialExpr(tuple(t)))
    scaled = pp.Forward()
    scaled <<= ((rational + pp.Suppress('*') + scaled).set_parse_action(lambda t: Scale(t[0], t[1]))
                | monomial)
    tensor_op = pp.Suppress(pp.Literal('⊗') | pp.Keyword('otimes'))
    tensor_expr = (scaled + pp.ZeroOrMore(tensor_op + scaled)).set_parse_action(
        lambda t: t[0] if len(t) == 1 else TensorExpr(tuple(t)))
    sign = pp.one_of('+ - −')
    expr <<= (pp.Optional(sign) + tensor_expr + pp.ZeroOrMore(sign + tensor_expr)).set_parse_action(_sum_action)
    return expr


def parse(source: str) -> Expr:
    """
    Parse an expression into its AST.

    Raises:
        ParseError: syntax error or malformed literal, with line and column
        InvalidObjectError: a well-formed literal naming no valid object

    Examples:
        >>> parse("perm[12] o_1 perm[21]")
        Compose(left=Atom(key=Permutation(word=(1, 2)), dual=False), index=1, right=...)
    """
    try:
        return _grammar().parse_string(source, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise ParseError(f"Syntax error: {exc.msg}", exc.lineno, exc.col, exc.line) from None
    except OpforgeError:
        raise
    except (ValueError, ArithmeticError, TypeError) as exc:
        raise ParseError(f"Malformed literal: {exc}") from exc


# ========== EVALUATION ==========

@dataclass
class EvalContext:
    """
    Evaluation settings.

    Attributes:
        operad: Operad for compositions; None infers it from the key family
        mode: Composition mode
        colors: Number of tree colors
        carrier: 'word' or 'monomial' to lift bare keys of the result
    """

    operad: Optional[str] = None
    mode: str = 'circ'
    colors: int = 1
    carrier: Optional[str] = None
    _contexts: Dict[Tuple[str, str], object] = field(default_factory=dict, repr=False)

    def descriptor_for(self, key: Hashable) -> OperadDescriptor:
        if isinstance(key, OrbitClass):
            key = key.representative
        if self.operad is not None:
            descriptor = get_operad(self.operad, self.mode)
            if not descriptor.owns(key):
                raise FamilyMismatchError(f"{_show(key)} is not a basis element of {descriptor.label}")
            return descriptor
        name = OPERAD_OF_KEY.get(type(key))
        if name is None:
            raise FamilyMismatchError(f"{_show(key)} does not belong to any operad")
        return get_operad(name, self.mode)

    def context(self, kind: str, descriptor: Optional[OperadDescriptor], factory):
        cache_key = (kind, descriptor.label if descriptor is not None else '')
        if cache_key not in self._contexts:
            self._contexts[cache_key] = factory()
        return self._contexts[cache_key]


def _show(key: Hashable) -> str:
    return key.notation() if hasattr(key, 'notation') else str(key)


def _letters_of(element: Element) -> List[Hashable]:
    out = []
    for key in element.keys():
        if isinstance(key, (Word, Monomial)):
            out.extend(key.letters)
        elif isinstance(key, tuple):
            raise FamilyMismatchError("Tensors cannot be used as operands here")
        else:
            out.append(key)
    return out


def _descriptor_of(ctx: EvalContext, *elements: Element) -> OperadDescriptor:
    descriptors = {id(d): d for e in elements for d in (ctx.descriptor_for(k) for k in _letters_of(e))}
    if not descriptors:
        return ctx.descriptor_for(ComGenerator(1)) if ctx.operad is None else get_operad(ctx.operad, ctx.mode)
    if len(descriptors) > 1:
        raise FamilyMismatchError("Operands come from different operads")
    return next(iter(descriptors.values()))


def _unit_like(ctx: EvalContext, sample: Optional[Element]) -> Hashable:
    carrier = ctx.carrier
    if sample is not None:
        for key in sample.keys():
            if isinstance(key, Word):
                return Word(())
            if isinstance(key, Monomial):
                return Monomial(())
    if carrier == 'monomial':
        return Monomial(())
    if carrier == 'word':
        return Word(())
    raise FamilyMismatchError("A bare scalar needs a word or monomial carrier")


def _as_element(value: Value, ctx: EvalContext, sample: Optional[Element] = None) -> Element:
    if isinstance(value, Element):
        return value
    return Element.basis(_unit_like(ctx, sample), value)


def _to_words(element: Element) -> Element:
    def lift(key):
        if isinstance(key, Word):
            return key
        if isinstance(key, (Monomial, tuple)):
            raise FamilyMismatchError(f"Expected a word, got {_show(key)}")
        return Word((key,))
    return element.map(lift)


def _to_monomials(element: Element) -> Element:
    def lift(key):
        if isinstance(key, Monomial):
            return key
        if isinstance(key, (Word, tuple)):
            raise FamilyMismatchError(f"Expected a monomial, got {_show(key)}")
        return Monomial((key,))
    return element.map(lift)


def _lift_bare(element: Element, carrier: Optional[str]) -> Element:
    if carrier is None:
        return element

    def lift(key):
        if isinstance(key, tuple):
            return tuple(lift(k) for k in key)
        if isinstance(key, (Word, Monomial)):
            return key
        return Word((key,)) if carrier == 'word' else Monomial((key,))

    return element.map(lift)


def _word_context(ctx: EvalContext, u: Element, v: Element) -> BInfinityContext:
    letters = _letters_of(u) + _letters_of(v)
    if not letters:
        return TrivialContext()
    if isinstance(letters[0], Exponent):
        return ctx.context('qshuffle', None, quasi_shuffle_context)
    descriptor = _descriptor_of(ctx, u, v)
    return ctx.context('brace', descriptor, lambda: OperadBraceContext(descriptor))


def _monomial_context(ctx: EvalContext, u: Element, v: Element) -> BInfContext:
    letters = _letters_of(u) + _letters_of(v)
    if not letters:
        return ctx.context('grafting', None, GraftingContext)
    first = letters[0]
    if isinstance(first, DecoratedTree):
        return ctx.context('grafting', None, GraftingContext)
    if isinstance(first, DecoratedPair):
        return ctx.context('pairs', None, PairInsertionContext)
    descriptor = _descriptor_of(ctx, u, v)
    if isinstance(first, OrbitClass):
        return ctx.context('coinv', descriptor, lambda: CoinvariantBinfContext(descriptor))
    return ctx.context('binf', descriptor, lambda: OperadBinfContext(descriptor))


def _call(expr: Call, ctx: EvalContext) -> Value:
    if expr.name == 'dual':
        return _eval(expr.args[0], ctx)
    args = [_as_element(_eval(a, ctx), ctx) for a in expr.args]
    if expr.name == 'brace':
        head = args[0]
        if len(args) == 1:
            return head
        descriptor = _descriptor_of(ctx, *args)
        acc: Dict[Hashable, Fraction] = {}
        for word, c in _to_words(args[1]).items():
            add_into(acc, brace(head, [Element.basis(x) for x in word.letters], descriptor), c)
        return Element(acc)
    if len(args) != 2:
        raise UnsupportedOperationError(f"{expr.name} takes two arguments separated by ';'")
    if expr.name in ('star_t', 'dend_l', 'dend_r'):
        u, v = _to_words(args[0]), _to_words(args[1])
        context = _word_context(ctx, u, v)
        fn = {'star_t': star_tensor, 'dend_l': dend_left, 'dend_r': dend_right}[expr.name]
        return fn(context, u, v)
    u, v = _to_monomials(args[0]), _to_monomials(args[1])
    return star_sym(_monomial_context(ctx, u, v), u, v)


def _eval(expr: Expr, ctx: EvalContext) -> Value:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Atom):
        return Element.basis(expr.key)
    if isinstance(expr, Compose):
        left, right = (_as_element(_eval(e, ctx), ctx) for e in (expr.left, expr.right))
        return compose_elements(_descriptor_of(ctx, left, right), left, expr.index, right)
    if isinstance(expr, Bullet):
        left, right = (_as_element(_eval(e, ctx), ctx) for e in (expr.left, expr.right))
        if all(isinstance(k, DecoratedTree) for k in _letters_of(left) + _letters_of(right)):
            return bilinear(graft, left, right)
        if all(isinstance(k, DecoratedPair) for k in _letters_of(left) + _letters_of(right)):
            return bilinear(insert_pair, left, right)
        return prelie(left, right, _descriptor_of(ctx, left, right))
    if isinstance(expr, Juxtapose):
        result = Element.basis(Word(()))
        for part in expr.parts:
            result = concat(result, _to_words(_as_element(_eval(part, ctx), ctx)))
        return result
    if isinstance(expr, MonomialExpr):
        result = Element.basis(Monomial(()))
        for part in expr.parts:
            value = _eval(part, ctx)
            result = monomial_product(result, _to_monomials(_as_element(value, ctx, result)))
        return result
    if isinstance(expr, Scale):
        value = _eval(expr.expr, ctx)
        return value * expr.coeff
    if isinstance(expr, TensorExpr):
        values = [_eval(p, ctx) for p in expr.parts]
        samples = [v for v in values if isinstance(v, Element)]
        parts = [_as_element(v, ctx, samples[0] if samples else None) for v in values]
        return tensor(*parts)
    if isinstance(expr, SumExpr):
        values = [(sign, _eval(e, ctx)) for sign, e in expr.terms]
        if all(isinstance(v, Fraction) for _, v in values):
            return sum((sign * v for sign, v in values), Fraction(0))
        sample = next(v for _, v in values if isinstance(v, Element))
        acc: Dict[Hashable, Fraction] = {}
        for sign, value in values:
            add_into(acc, _as_element(value, ctx, sample), sign)
        return Element(acc)
    if isinstance(expr, Call):
        return _call(expr, ctx)
    raise UnsupportedOperationError(f"Cannot evaluate node {expr!r}")


def evaluate(expr: Union[Expr, str], ctx: Optional[EvalContext] = None) -> Element:
    """
    Evaluate an AST (or source text) to an exact Element.

    Raises:
        ParseError: source text does not parse
        FamilyMismatchError: operands from different families
        ArityError: composition slot out of range
        CapacityError: a size above the configured guard

    Examples:
        >>> str(evaluate("perm[12] o_1 perm[21]"))
        'perm[213]'
        >>> str(evaluate("e2 bullet e2"))
        '2 e3'
    """
    ctx = ctx or EvalContext()
    node = parse(expr) if isinstance(expr, str) else expr
    value = _as_element(_eval(node, ctx), ctx)
    return _lift_bare(value, ctx.carrier)


def parse_key(text: str, carrier: Optional[str] = None) -> Hashable:
    """
    Inverse of format_key: the single key printed as `text`.

    Examples:
        >>> parse_key('e2 ⊗ e1·e1', carrier='monomial')
        (Monomial(letters=(ComGenerator(n=2),)), Monomial(letters=(ComGenerator(n=1), ComGenerator(n=1))))
    """
    element = evaluate(text, EvalContext(carrier=carrier))
    if len(element) != 1 or element.items()[0][1] != 1:
        raise ParseError(f"Not a single key: {text}", 1, 1, text)
    return element.keys()[0]
