"""
Structures induced by an operad, and the Hopf products they generate.

Architecture:
1. Operadic brackets: brace <p; p1..pk>, pre-Lie p.q, b-infinity |p; p1..pk|
2. B-infinity contexts (brackets on words) and the product * on T(V),
   with its dendriform halves and the quasi-shuffle special case
3. b-infinity contexts (brackets on monomials) and the product on S(V):
   operadic, orbit classes, tree grafting, and the recursive extension
   of any pre-Lie product
4. Vertex substitution and grafting on decorated trees
5. Ideal products of quasi-orders / digraphs and the connected theta images
"""

import itertools
import logging
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_partitions

from .algebra_core import Element, Monomial, Word, add_into, as_element, bilinear
from .combinatorics import DecoratedPair, DecoratedTree, OrbitClass
from .config import check_guard
from .errors import ArityError, FamilyMismatchError, UnsupportedOperationError
from .operads import (
    OperadDescriptor,
    OperadElement,
    compose_keys_at,
    project_to_orbits,
)
from .relations import QuasiOrder, SimpleDigraph, is_connected, is_transitive

logger = logging.getLogger(__name__)

KeyFn = Callable[[Hashable, Hashable], Element]


def _expand(elements: Sequence[Element]) -> Iterable[Tuple[Tuple[Hashable, ...], object]]:
    """All key tuples of a multilinear argument list with their coefficient products."""
    if not elements:
        yield (), 1
        return
    for combo in itertools.product(*(e.items() for e in elements)):
        coeff = 1
        for _, c in combo:
            coeff *= c
        yield tuple(k for k, _ in combo), coeff


# ========== OPERADIC BRACKETS ==========

def brace_keys(descriptor: OperadDescriptor, p: Hashable, args: Sequence[Hashable]) -> Element:
    """<p; q1..qk> = sum over slots i1 < ... < ik of p o_{i1..ik}(q1..qk)."""
    n = descriptor.arity(p)
    if not args:
        return Element.basis(p)
    acc: Dict[Hashable, object] = {}
    for slots in itertools.combinations(range(1, n + 1), len(args)):
        add_into(acc, compose_keys_at(descriptor, p, slots, args))
    return Element(acc)


def binfty_bracket_keys(descriptor: OperadDescriptor, p: Hashable, args: Sequence[Hashable]) -> Element:
    """|p; q1..qk| = sum over injective slot tuples of p o_{i1..ik}(q1..qk)."""
    n = descriptor.arity(p)
    if not args:
        return Element.basis(p)
    acc: Dict[Hashable, object] = {}
    for slots in itertools.permutations(range(1, n + 1), len(args)):
        add_into(acc, compose_keys_at(descriptor, p, slots, args))
    return Element(acc)


def _operadic(fn, p, args, descriptor: Optional[OperadDescriptor]):
    if isinstance(p, OperadElement):
        for q in args:
            if not isinstance(q, OperadElement) or q.descriptor is not p.descriptor:
                raise FamilyMismatchError("All operands must be elements of the same operad")
        value = _operadic(fn, p.value, [q.value for q in args], p.descriptor)
        arity = p.arity + sum(q.arity - 1 for q in args)
        return OperadElement(p.descriptor, arity, value)

    if descriptor is None:
        raise FamilyMismatchError("A descriptor is required for bare elements")
    acc: Dict[Hashable, object] = {}
    for head, c in p.items():
        for keys, coeff in _expand(list(args)):
            add_into(acc, fn(descriptor, head, keys), c * coeff)
    return Element(acc)


def brace(p, args: Sequence, descriptor: Optional[OperadDescriptor] = None):
    """
    Brace bracket on an operad, multilinear.

    Accepts OperadElements (descriptor taken from p) or bare Elements with
    an explicit descriptor.

    Examples:
        Com: <e3; e2 e2> = 3 e5
    """
    return _operadic(brace_keys, p, args, descriptor)


def prelie(p, q, descriptor: Optional[OperadDescriptor] = None):
    """p . q = sum_i p o_i q."""
    return _operadic(brace_keys, p, [q], descriptor)


def binfty_bracket(p, args: Sequence, descriptor: Optional[OperadDescriptor] = None):
    """|p; p1..pk| = sum over injective slot tuples."""
    return _operadic(binfty_bracket_keys, p, args, descriptor)


# ========== B-INFINITY CONTEXTS ON WORDS ==========

class BInfinityContext:
    """
    Source of brackets <u, v> for non-empty words u, v.

    brace_type contexts vanish as soon as |u| >= 2, which is what makes the
    dendriform splitting of * available.
    """

    name = 'binf'
    brace_type = False

    def __init__(self):
        self._star_cache: Dict[Tuple[tuple, tuple], Element] = {}

    def bracket(self, u: Tuple[Hashable, ...], v: Tuple[Hashable, ...]) -> Element:
        raise NotImplementedError


class OperadBraceContext(BInfinityContext):
    """<x; y1..yk> from the brace structure of an operad."""

    brace_type = True

    def __init__(self, descriptor: OperadDescriptor):
        super().__init__()
        self.descriptor = descriptor
        self.name = f"brace[{descriptor.label}]"

    def bracket(self, u, v) -> Element:
        if len(u) != 1:
            return Element()
        return brace_keys(self.descriptor, u[0], v)


class TrivialContext(BInfinityContext):
    """All brackets zero: * is the shuffle product."""

    name = 'trivial'
    brace_type = True

    def bracket(self, u, v) -> Element:
        return Element()


class AssociativeContext(BInfinityContext):
    """Only <x, y> = x.y survives: * is the quasi-shuffle product of the letter product."""

    name = 'associative'

    def __init__(self, product: KeyFn):
        super().__init__()
        self.product = product

    def bracket(self, u, v) -> Element:
        if len(u) == 1 and len(v) == 1:
            return as_element(self.product(u[0], v[0]))
        return Element()


def exponent_product(a, b) -> Element:
    """X_alpha . X_beta = X_{alpha+beta}."""
    return Element.basis(a + b)


def quasi_shuffle_context() -> AssociativeContext:
    context = AssociativeContext(exponent_product)
    context.name = 'qshuffle'
    return context


def bracket_words(context: BInfinityContext, u: Word, v: Word) -> Element:
    """<u, v> on arbitrary words: <x, 1> = <1, x> = x, otherwise 0 when a side is empty."""
    if u.letters and v.letters:
        return context.bracket(u.letters, v.letters)
    if not u.letters and len(v.letters) == 1:
        return Element.basis(v.letters[0])
    if not v.letters and len(u.letters) == 1:
        return Element.basis(u.letters[0])
    return Element()


def _prefix(letters: Element, tail: Element, acc: Dict[Hashable, object], coeff=1) -> None:
    for letter, c in letters.items():
        for word, d in tail.items():
            key = Word((letter,) + word.letters)
            acc[key] = acc.get(key, 0) + coeff * c * d


def _star_words(context: BInfinityContext, u: Tuple, v: Tuple) -> Element:
    cache_key = (u, v)
    cached = context._star_cache.get(cache_key)
    if cached is not None:
        return cached

    if not u and not v:
        result = Element.basis(Word(()))
    else:
        acc: Dict[Hashable, object] = {}
        for a in range(len(u) + 1):
            for b in range(len(v) + 1):
                if a == 0 and b == 0:
                    continue
                if a == 0:
                    if b != 1:
                        continue
                    head = Element.basis(v[0])
                elif b == 0:
                    if a != 1:
                        continue
                    head = Element.basis(u[0])
                else:
                    head = context.bracket(u[:a], v[:b])
                if head:
                    _prefix(head, _star_words(context, u[a:], v[b:]), acc)
        result = Element(acc)

    context._star_cache[cache_key] = result
    return result


def _lift_words(fn, context, u, v) -> Element:
    left = u if isinstance(u, Element) else Element.basis(u)
    right = v if isinstance(v, Element) else Element.basis(v)
    return bilinear(lambda a, b: fn(context, a, b), left, right)


def star_tensor(context: BInfinityContext, u: Union[Word, Element], v: Union[Word, Element]) -> Element:
    """
    B-infinity product u * v on T(V).

    Recursive on the first block pair (u1, v1): it contributes u1 alone if
    v1 is empty, v1 alone if u1 is empty, and <u1, v1> otherwise.

    Examples:
        x * y = x y + y x + <x, y>
    """
    return _lift_words(lambda ctx, a, b: _star_words(ctx, a.letters, b.letters), context, u, v)


def _require_brace(context: BInfinityContext) -> None:
    if not context.brace_type:
        raise UnsupportedOperationError(
            f"Dendriform products need a brace-type context, not {context.name}")


def _dend_left_words(context: BInfinityContext, u: Word, v: Word) -> Element:
    if not u.letters:
        return Element()
    if not v.letters:
        return Element.basis(u)
    x1, rest = u.letters[0], u.letters[1:]
    acc: Dict[Hashable, object] = {}
    for p in range(len(v.letters) + 1):
        head = Element.basis(x1) if p == 0 else context.bracket((x1,), v.letters[:p])
        if head:
            _prefix(head, _star_words(context, rest, v.letters[p:]), acc)
    return Element(acc)


def _dend_right_words(context: BInfinityContext, u: Word, v: Word) -> Element:
    if not v.letters:
        return Element()
    if not u.letters:
        return Element.basis(v)
    acc: Dict[Hashable, object] = {}
    _prefix(Element.basis(v.letters[0]), _star_words(context, u.letters, v.letters[1:]), acc)
    return Element(acc)


def dend_left(context: BInfinityContext, u, v) -> Element:
    """u < v: the part of u * v whose first letter comes from u (or a bracket on it)."""
    _require_brace(context)
    return _lift_words(_dend_left_words, context, u, v)


def dend_right(context: BInfinityContext, u, v) -> Element:
    """u > v = y1 (u * y2..yl): the first letter comes from v."""
    _require_brace(context)
    return _lift_words(_dend_right_words, context, u, v)


def quasi_shuffle(u: Word, v: Word, product: KeyFn = exponent_product,
                  _memo: Optional[Dict] = None) -> Element:
    """
    Quasi-shuffle by the classical recursion
    au * bv = a(u * bv) + b(au * v) + [a.b](u * v).
    Independent of the B-infinity machinery; used as an oracle.
    """
    memo = {} if _memo is None else _memo
    key = (u.letters, v.letters)
    if key in memo:
        return memo[key]
    if not u.letters or not v.letters:
        result = Element.basis(Word(u.letters + v.letters))
    else:
        a, b = u.letters[0], v.letters[0]
        acc: Dict[Hashable, object] = {}
        _prefix(Element.basis(a), quasi_shuffle(u[1:], v, product, memo), acc)
        _prefix(Element.basis(b), quasi_shuffle(u, v[1:], product, memo), acc)
        _prefix(as_element(product(a, b)), quasi_shuffle(u[1:], v[1:], product, memo), acc)
        result = Element(acc)
    memo[key] = result
    return result


# ========== b-INFINITY CONTEXTS ON MONOMIALS ==========

class BInfContext:
    """
    Source of symmetric brackets |x; y1..yk| (k >= 1) for the product on S(V).

    Brackets with two or more letters on the left vanish for every context
    here (all are pre-Lie type).
    """

    name = 'b-infinity'

    def __init__(self):
        self._bracket_cache: Dict[Tuple[Hashable, tuple], Element] = {}

    def bracket(self, x: Hashable, ys: Tuple[Hashable, ...]) -> Element:
        key = (x, ys)
        cached = self._bracket_cache.get(key)
        if cached is None:
            cached = self._bracket(x, ys)
            self._bracket_cache[key] = cached
        return cached

    def _bracket(self, x: Hashable, ys: Tuple[Hashable, ...]) -> Element:
        raise NotImplementedError

    def prelie(self, x: Hashable, y: Hashable) -> Element:
        return self.bracket(x, (y,))


class OperadBinfContext(BInfContext):
    """Letters are basis keys of the operad."""

    def __init__(self, descriptor: OperadDescriptor):
        super().__init__()
        self.descriptor = descriptor
        self.name = f"binf[{descriptor.label}]"

    def _bracket(self, x, ys) -> Element:
        return binfty_bracket_keys(self.descriptor, x, ys)


class CoinvariantBinfContext(BInfContext):
    """Letters are orbit classes: compose representatives, project to orbits."""

    def __init__(self, descriptor: OperadDescriptor):
        super().__init__()
        self.descriptor = descriptor
        self.name = f"coinv[{descriptor.label}]"

    def _bracket(self, x: OrbitClass, ys) -> Element:
        raw = binfty_bracket_keys(self.descriptor, x.representative,
                                  [y.representative for y in ys])
        return project_to_orbits(self.descriptor, raw)


class GraftingContext(BInfContext):
    """Letters are decorated trees: |x; y1..yk| grafts every yj on any vertex of x."""

    name = 'grafting'

    def _bracket(self, x: DecoratedTree, ys) -> Element:
        return graft_many(x, ys)


class OudomGuinContext(BInfContext):
    """
    Brackets generated by a pre-Lie product alone:
        |x; y1..yk| = ||x; y1..y(k-1)|; yk| - sum_i |x; y1..(yi.yk)..y(k-1)|
    """

    name = 'oudom-guin'

    def __init__(self, product: KeyFn):
        super().__init__()
        self.product = product

    def prelie(self, x, y) -> Element:
        return as_element(self.product(x, y))

    def _bracket(self, x, ys) -> Element:
        if len(ys) == 1:
            return as_element(self.product(x, ys[0]))
        last = ys[-1]
        acc: Dict[Hashable, object] = {}
        for key, c in self.bracket(x, ys[:-1]).items():
            add_into(acc, as_element(self.product(key, last)), c)
        for i in range(len(ys) - 1):
            for key, c in as_element(self.product(ys[i], last)).items():
                shifted = ys[:i] + (key,) + ys[i + 1:-1]
                add_into(acc, self.bracket(x, shifted), -c)
        return Element(acc)


class TrivialBinfContext(BInfContext):
    name = 'trivial'

    def _bracket(self, x, ys) -> Element:
        return Element()


def _block_value(context: BInfContext, us: List[Hashable], vs: List[Hashable]) -> Element:
    if not us:
        return Element.basis(vs[0]) if len(vs) == 1 else Element()
    if not vs:
        return Element.basis(us[0]) if len(us) == 1 else Element()
    if len(us) >= 2:
        return Element()
    return context.bracket(us[0], tuple(vs))


def _star_monomials(context: BInfContext, u: Monomial, v: Monomial) -> Element:
    letters = list(u.letters) + list(v.letters)
    split = len(u.letters)
    if not letters:
        return Element.basis(Monomial(()))

    acc: Dict[Hashable, object] = {}
    for partition in multiset_partitions(list(range(len(letters)))):
        product = Element.basis(Monomial(()))
        for block in partition:
            us = [letters[j] for j in block if j < split]
            vs = [letters[j] for j in block if j >= split]
            value = _block_value(context, us, vs)
            if not value:
                product = Element()
                break
            product = bilinear(lambda m, x: Monomial(m.letters + (x,)), product, value)
        add_into(acc, product)
    return Element(acc)


def star_sym(context: BInfContext, u: Union[Monomial, Element], v: Union[Monomial, Element]) -> Element:
    """
    b-infinity product on S(V): sum over set partitions of the letters of u
    and v of the product of block brackets.

    Examples:
        x * y = x y + |x; y|
        grafting: dtree[a] * dtree[a] = dtree[a]·dtree[a] + dtree[a[a]]
    """
    left = u if isinstance(u, Element) else Element.basis(u)
    right = v if isinstance(v, Element) else Element.basis(v)
    return bilinear(lambda a, b: _star_monomials(context, a, b), left, right)


# ========== DECORATED TREES: GRAFTING AND SUBSTITUTION ==========

def graft_many(x: DecoratedTree, ys: Sequence[DecoratedTree]) -> Element:
    """Graft each tree of ys as a new child of any vertex of x (all choices)."""
    colors, parents = x.to_parent_lists()
    blocks = [y.to_parent_lists() for y in ys]
    acc: Dict[Hashable, object] = {}
    for targets in itertools.product(range(len(colors)), repeat=len(ys)):
        new_colors = list(colors)
        new_parents = list(parents)
        for (y_colors, y_parents), target in zip(blocks, targets):
            offset = len(new_colors)
            new_colors.extend(y_colors)
            new_parents.extend(offset + q if q >= 0 else target for q in y_parents)
        tree = DecoratedTree.from_parent_lists(new_colors, new_parents)
        acc[tree] = acc.get(tree, 0) + 1
    return Element(acc)


def graft(x: DecoratedTree, y: DecoratedTree) -> Element:
    """Pre-Lie product of the free pre-Lie algebra on colors."""
    return graft_many(x, [y])


def substitute_vertices(tree: DecoratedTree, assignment: Dict[int, DecoratedTree]) -> Element:
    """
    Replace each assigned vertex (preorder index) by a tree.

    The edge above a replaced vertex lands on the root of its substitute;
    every edge below it lands on any vertex of the substitute.
    """
    colors, parents = tree.to_parent_lists()
    new_colors: List[int] = []
    new_parents: List[int] = []
    representative: Dict[int, int] = {}
    members: Dict[int, List[int]] = {}
    for v, color in enumerate(colors):
        if v in assignment:
            sub_colors, sub_parents = assignment[v].to_parent_lists()
            offset = len(new_colors)
            new_colors.extend(sub_colors)
            new_parents.extend(offset + q if q >= 0 else -1 for q in sub_parents)
            representative[v] = offset
            members[v] = list(range(offset, offset + len(sub_colors)))
        else:
            representative[v] = len(new_colors)
            new_colors.append(color)
            new_parents.append(-1)
            members[v] = [representative[v]]

    edges = [(representative[w], members[p]) for w, p in enumerate(parents) if p >= 0]
    acc: Dict[Hashable, object] = {}
    for choice in itertools.product(*(candidates for _, candidates in edges)):
        linked = list(new_parents)
        for (child, _), target in zip(edges, choice):
            linked[child] = target
        result = DecoratedTree.from_parent_lists(new_colors, linked)
        acc[result] = acc.get(result, 0) + 1
    return Element(acc)


def _matched_targets(colors: Sequence[int], factors: Sequence[DecoratedPair],
                     exhaustive: bool) -> Iterable[Tuple[int, ...]]:
    """Injective factor -> vertex maps whose vertex color equals the factor's output color."""
    if len(factors) > len(colors) or (exhaustive and len(factors) != len(colors)):
        return
    for targets in itertools.permutations(range(len(colors)), len(factors)):
        if all(factors[k].color == colors[v] for k, v in enumerate(targets)):
            yield targets


def insert_pairs(tree: DecoratedTree, factors: Sequence[DecoratedPair], exhaustive: bool = False) -> Element:
    """
    Substitute the factors at distinct vertices of matching color, summed over
    all such placements. Unplaced vertices stay (the unit (•_c, c) sits there).
    exhaustive=True demands one factor per vertex.
    """
    colors, _ = tree.to_parent_lists()
    acc: Dict[Hashable, object] = {}
    for targets in _matched_targets(colors, factors, exhaustive):
        assignment = {v: factors[k].tree for k, v in enumerate(targets)}
        add_into(acc, substitute_vertices(tree, assignment))
    return Element(acc)


def full_insertion(tree: DecoratedTree, factors: Sequence[DecoratedPair]) -> Element:
    """One factor at every vertex: the transpose of extraction-contraction on a single pair."""
    return insert_pairs(tree, factors, exhaustive=True)


def insertion_product(x: DecoratedPair, factors: Monomial) -> Element:
    """Full insertion on pairs: (t, d) composed with a monomial of pairs keeps output color d."""
    inserted = full_insertion(x.tree, list(factors.letters))
    return inserted.map(lambda t: DecoratedPair(t, x.color))


def insert_pair(x: DecoratedPair, y: DecoratedPair) -> Element:
    """Pre-Lie product on pairs: y substituted at one vertex of x whose color is y.color."""
    return insert_pairs(x.tree, [y]).map(lambda t: DecoratedPair(t, x.color))


def insert_into_forest(forest: Monomial, factors: Sequence[DecoratedPair]) -> Element:
    """
    Right action of a monomial of pairs on a forest: every factor goes to a
    distinct vertex of matching color anywhere in the forest.
    """
    trees = list(forest.letters)
    parsed = [t.to_parent_lists() for t in trees]
    owners = [(index, v) for index, (colors, _) in enumerate(parsed) for v in range(len(colors))]
    flat_colors = [parsed[index][0][v] for index, v in owners]

    acc: Dict[Hashable, object] = {}
    for targets in _matched_targets(flat_colors, factors, exhaustive=False):
        per_tree: Dict[int, Dict[int, DecoratedTree]] = {}
        for k, position in enumerate(targets):
            index, v = owners[position]
            per_tree.setdefault(index, {})[v] = factors[k].tree
        product = Element.basis(Monomial(()))
        for index, tree in enumerate(trees):
            substituted = substitute_vertices(tree, per_tree[index]) if index in per_tree else Element.basis(tree)
            product = bilinear(lambda m, t: Monomial(m.letters + (t,)), product, substituted)
        add_into(acc, product)
    return Element(acc)


class PairInsertionContext(BInfContext):
    """Letters are decorated pairs: |x; y1..yk| inserts each yj at its own vertex of x."""

    name = 'pair-insertion'

    def _bracket(self, x: DecoratedPair, ys) -> Element:
        return insert_pairs(x.tree, list(ys)).map(lambda t: DecoratedPair(t, x.color))


# ========== IDEAL PRODUCTS AND THETA IMAGES ==========

Relational = Union[QuasiOrder, SimpleDigraph]


def _empty_like(x: Relational) -> Relational:
    if isinstance(x, QuasiOrder):
        return QuasiOrder((), frozenset())
    return SimpleDigraph((), frozenset())


def induced_standard(x: Relational, subset: Iterable) -> Relational:
    """Standardized induced object; the empty subset gives the empty object."""
    chosen = set(subset)
    if not chosen:
        return _empty_like(x)
    kept = frozenset((a, b) for a, b in x.relations if a in chosen and b in chosen)
    ground = tuple(v for v in x.ground if v in chosen)
    if isinstance(x, QuasiOrder):
        return QuasiOrder(ground, kept).standardize()
    return SimpleDigraph(ground, kept).standardize()


def _ideal_products_on(gamma: Relational, gamma2: Relational,
                       a_labels: Sequence[int], b_labels: Sequence[int]) -> Dict[Hashable, int]:
    a_map = {i: a_labels[i - 1] for i in range(1, gamma.arity + 1)}
    b_map = {i: b_labels[i - 1] for i in range(1, gamma2.arity + 1)}
    fixed = {(a_map[x], a_map[y]) for x, y in gamma.relations}
    fixed.update((b_map[x], b_map[y]) for x, y in gamma2.relations)
    cross = [(a, b) for a in a_labels for b in b_labels]
    ground = tuple(range(1, len(a_labels) + len(b_labels) + 1))

    acc: Dict[Hashable, int] = {}
    for mask in range(1 << len(cross)):
        relation = frozenset(fixed | {pair for bit, pair in enumerate(cross) if mask >> bit & 1})
        if isinstance(gamma, QuasiOrder):
            if not is_transitive(relation):
                continue
            candidate = QuasiOrder(ground, relation)
        else:
            candidate = SimpleDigraph(ground, relation)
        acc[candidate] = acc.get(candidate, 0) + 1
    return acc


def ideal_product(gamma: Relational, gamma2: Relational, shuffle: bool = False) -> Element:
    """
    Sum of the objects on A + B restricting to gamma on A and gamma2 on B
    in which B is an ideal.

    With shuffle=False, A = {1..k} and B = {k+1..k+l}. With shuffle=True the
    labels of A range over every k-subset (the form dual to ideal_coproduct).
    """
    if type(gamma) is not type(gamma2):
        raise FamilyMismatchError("Ideal product needs two objects of the same family")
    k, l = gamma.arity, gamma2.arity
    check_guard('qo' if isinstance(gamma, QuasiOrder) else 'digraph', k + l)
    labels = list(range(1, k + l + 1))
    placements = itertools.combinations(labels, k) if shuffle else [tuple(labels[:k])]
    acc: Dict[Hashable, object] = {}
    for a_labels in placements:
        b_labels = [v for v in labels if v not in a_labels]
        for key, count in _ideal_products_on(gamma, gamma2, list(a_labels), b_labels).items():
            acc[key] = acc.get(key, 0) + count
    return Element(acc)


def ideal_coproduct(x: Relational) -> Element:
    """sum over ideals I of x|(V - I) ⊗ x|I, both standardized."""
    acc: Dict[Hashable, object] = {}
    ground = list(x.ground)
    upward = {v: {b for a, b in x.relations if a == v} for v in ground}
    for size in range(len(ground) + 1):
        for combo in itertools.combinations(ground, size):
            chosen = set(combo)
            if any(not upward[v] <= chosen for v in chosen):
                continue
            rest = [v for v in ground if v not in chosen]
            key = (induced_standard(x, rest), induced_standard(x, chosen))
            acc[key] = acc.get(key, 0) + 1
    return Element(acc)


def theta_image(descriptor: OperadDescriptor, k: int, l: int) -> Element:
    """
    Image of the b-infinity generator |-,-|_{k,l}: the weakly connected part of
    the ideal product of two discrete objects on k and l vertices.

    Examples:
        theta_image(O, 1, 1) = qo{2; 1<2}
        theta_image(O, 2, 2) has 5 terms
    """
    if k < 0 or l < 0 or k + l < 1:
        raise ArityError(f"theta needs k, l >= 0 with k + l >= 1, got ({k}, {l})")
    if descriptor.name in ('qo', 'o'):
        left, right = QuasiOrder.on(k), QuasiOrder.on(l)
    elif descriptor.name in ('sg', 'ncsg'):
        left, right = SimpleDigraph.on(k), SimpleDigraph.on(l)
    else:
        raise UnsupportedOperationError(f"No theta image for operad {descriptor.label}")
    product = ideal_product(left, right)
    return product.filter(lambda x: is_connected(x))
