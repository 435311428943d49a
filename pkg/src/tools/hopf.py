"""
Bialgebras built from an operad and from decorated rooted trees.

Architecture:
1. Coproducts on basis keys: deconcatenation, unshuffle, Connes-Kreimer
   (admissible cuts), extraction-contraction, and the transposes of operadic
   composition (dual_star, its reduced form, dual_star_prime)
2. BialgebraHandle: carrier, product, coproduct kinds, counit and graded
   basis for every algebra of the registry (get_handle)
3. Psi isomorphism between the two dual coproducts
4. The action of D_PreLie(V) on decorated forests and its coaction rho,
   with the maps entering the cointeraction axioms
5. Antipode by the connected recursion

Tensor keys are pairs (left, right). In every contraction-type coproduct
the contracted pattern or trunk is LEFT and the extracted pieces are RIGHT.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from .algebra_core import (
    Element,
    Monomial,
    Word,
    add_into,
    as_element,
    bilinear,
    tensor,
    tensor_product,
)
from .combinatorics import (
    DecoratedPair,
    DecoratedTree,
    OrbitClass,
    Permutation,
    enumerate_decorated_pairs,
    enumerate_decorated_trees,
    standardize,
)
from .errors import InvalidObjectError, UnknownSuiteError, UnsupportedOperationError
from .induced_structures import (
    CoinvariantBinfContext,
    GraftingContext,
    OperadBraceContext,
    PairInsertionContext,
    brace_keys,
    insert_into_forest,
    star_sym,
    star_tensor,
)
from .operads import OperadDescriptor, compose_keys_at, get_operad, project_to_orbits

logger = logging.getLogger(__name__)

Carrier = Union[Word, Monomial]

COPRODUCT_KINDS = ('dec', 'sym', 'ck', 'ec', 'dual_star', 'dual_star_reduced', 'dual_star_prime')


# ========== SMALL HELPERS ==========

def _compositions(total: int, parts: int) -> Iterable[Tuple[int, ...]]:
    """Ordered tuples of `parts` positive integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _join(a: Carrier, b: Carrier) -> Carrier:
    return a * b


def _empty_like(key: Carrier) -> Carrier:
    return Word(()) if isinstance(key, Word) else Monomial(())


def _multiplicative(letter_coproduct: Callable[[Hashable], Element], key: Carrier) -> Element:
    """Extend a coproduct on letters to words / monomials as an algebra morphism."""
    empty = _empty_like(key)
    result = Element.basis((empty, empty))
    for letter in key.letters:
        result = tensor_product(result, letter_coproduct(letter), [_join, _join])
    return result


def _components(colors: Sequence[int], parents: Sequence[int], subset: Iterable[int]) -> List[DecoratedTree]:
    """Connected pieces of the vertex subset of a tree given by parent lists."""
    chosen = set(subset)
    groups: Dict[int, List[int]] = {}
    for v in sorted(chosen):
        top = v
        while parents[top] >= 0 and parents[top] in chosen:
            top = parents[top]
        groups.setdefault(top, []).append(v)
    trees = []
    for top, members in groups.items():
        index = {v: k for k, v in enumerate(members)}
        trees.append(DecoratedTree.from_parent_lists(
            [colors[v] for v in members],
            [index[parents[v]] if v != top else -1 for v in members],
        ))
    return trees


def epsilon_zero(letter: Hashable) -> int:
    """
    Value of a dual letter on the unit: 1 on I* (arity-1 letters), and
    delta_ij on a pair (•_i, j).
    """
    if isinstance(letter, DecoratedPair):
        return int(letter.size == 1 and letter.tree.root_color == letter.color)
    return int(letter.arity == 1)


# ========== DECONCATENATION / UNSHUFFLE ==========

def deconcatenation(word: Word) -> Element:
    """
    Examples:
        x1 x2 -> 1 ⊗ x1 x2 + x1 ⊗ x2 + x1 x2 ⊗ 1
    """
    return Element.from_terms(((word[:k], word[k:]), 1) for k in range(len(word) + 1))


def unshuffle(monomial: Monomial) -> Element:
    """sum over subsets I of the letter positions of x_I ⊗ x_(rest)."""
    letters = monomial.letters
    acc: Dict[Hashable, Fraction] = {}
    for mask in itertools.product((False, True), repeat=len(letters)):
        left = Monomial(tuple(x for x, bit in zip(letters, mask) if bit))
        right = Monomial(tuple(x for x, bit in zip(letters, mask) if not bit))
        acc[(left, right)] = acc.get((left, right), 0) + 1
    return Element(acc)


# ========== CONNES-KREIMER ==========

def _rooted_subsets(children: Dict[int, List[int]], v: int) -> List[frozenset]:
    options = [frozenset({v})]
    for child in children.get(v, []):
        below = [frozenset()] + _rooted_subsets(children, child)
        options = [s | extra for s in options for extra in below]
    return options


@lru_cache(maxsize=None)
def admissible_cuts(tree: DecoratedTree) -> Element:
    """
    Connes-Kreimer coproduct of one tree: the trunk (a root-containing
    subtree, possibly empty or everything) LEFT, the cut branches RIGHT.

    Examples:
        ladder(a;b) -> ladder ⊗ 1 + 1 ⊗ ladder + •a ⊗ •b
    """
    colors, parents = tree.to_parent_lists()
    children: Dict[int, List[int]] = {}
    for v, p in enumerate(parents):
        if p >= 0:
            children.setdefault(p, []).append(v)

    acc: Dict[Hashable, Fraction] = {(Monomial(()), Monomial((tree,))): Fraction(1)}
    every = set(range(len(colors)))
    for trunk in _rooted_subsets(children, 0):
        left = Monomial(tuple(_components(colors, parents, trunk)))
        rest = every - trunk
        right = Monomial(tuple(_components(colors, parents, rest))) if rest else Monomial(())
        acc[(left, right)] = acc.get((left, right), 0) + 1
    return Element(acc)


def connes_kreimer(forest: Monomial) -> Element:
    return _multiplicative(admissible_cuts, forest)


# ========== EXTRACTION-CONTRACTION ==========

@lru_cache(maxsize=None)
def _contractions(tree: DecoratedTree) -> Tuple[Tuple[Tuple[int, ...], Tuple[DecoratedTree, ...]], ...]:
    """
    Every partition of the vertices into connected blocks (one per subset of
    kept edges), as (pattern parent list, block trees), blocks ordered by top vertex.
    """
    colors, parents = tree.to_parent_lists()
    n = len(colors)
    out = []
    for kept in itertools.product((False, True), repeat=n - 1):
        top = [0] * n
        for v in range(1, n):
            top[v] = top[parents[v]] if kept[v - 1] else v
        tops = sorted(set(top))
        index = {t: k for k, t in enumerate(tops)}
        blocks = tuple(_components(colors, parents, [v for v in range(n) if top[v] == t])[0] for t in tops)
        pattern = tuple(-1 if t == 0 else index[top[parents[t]]] for t in tops)
        out.append((pattern, blocks))
    return tuple(out)


def _contraction_terms(tree: DecoratedTree, colors: int) -> Iterable[Tuple[DecoratedTree, Monomial]]:
    for pattern, blocks in _contractions(tree):
        for coloring in itertools.product(range(1, colors + 1), repeat=len(blocks)):
            contracted = DecoratedTree.from_parent_lists(list(coloring), list(pattern))
            extracted = Monomial(tuple(DecoratedPair(b, c) for b, c in zip(blocks, coloring)))
            yield contracted, extracted


def _check_colors(tree: DecoratedTree, colors: int) -> None:
    if tree.max_color() > colors:
        raise InvalidObjectError(f"{tree.notation()} uses colors beyond N={colors}")


def extraction_contraction_pair(pair: DecoratedPair, colors: int) -> Element:
    """
    ec on one pair (t, d): pattern (t / blocks, recolored by D, output d) LEFT,
    product of the extracted blocks (block, D(block)) RIGHT.
    """
    _check_colors(pair.tree, colors)
    acc: Dict[Hashable, Fraction] = {}
    for contracted, extracted in _contraction_terms(pair.tree, colors):
        key = (Monomial((DecoratedPair(contracted, pair.color),)), extracted)
        acc[key] = acc.get(key, 0) + 1
    return Element(acc)


def extraction_contraction(monomial: Monomial, colors: int = 1) -> Element:
    return _multiplicative(lambda x: extraction_contraction_pair(x, colors), monomial)


def _reduce_units(key: Carrier, degenerate: Callable[[Hashable], bool]) -> Element:
    """Quotient by letter -> epsilon_zero(letter) on the degenerate letters."""
    kept = []
    for letter in key.letters:
        if degenerate(letter):
            if not epsilon_zero(letter):
                return Element()
        else:
            kept.append(letter)
    return Element.basis(type(key)(tuple(kept)))


def _reduce_tensor(x: Element, degenerate: Callable[[Hashable], bool]) -> Element:
    return x.map(lambda key: tensor(_reduce_units(key[0], degenerate), _reduce_units(key[1], degenerate)))


def _is_unit_letter(letter: Hashable) -> bool:
    return letter.arity == 1


# ========== COACTION RHO ==========

def coaction_tree(tree: DecoratedTree, colors: int) -> Element:
    """rho on one tree: sum of contracted pattern ⊗ extracted blocks."""
    _check_colors(tree, colors)
    acc: Dict[Hashable, Fraction] = {}
    for contracted, extracted in _contraction_terms(tree, colors):
        key = (Monomial((contracted,)), extracted)
        acc[key] = acc.get(key, 0) + 1
    return Element(acc)


def coaction_rho(x: Union[Monomial, Element], colors: int = 1) -> Element:
    """
    Coaction of D*_PreLie(V) on A*_PreLie(V), multiplicative on forests.

    Examples:
        rho(•a) = sum_p •p ⊗ (•a, p)
    """
    element = as_element(x)
    return element.map(lambda forest: _multiplicative(lambda t: coaction_tree(t, colors), forest))


def action_D_on_A(forest: Union[Monomial, Element], q: Union[DecoratedPair, Monomial]) -> Element:
    """
    Right action of D_PreLie(V) on forests: every letter of q replaces a
    distinct vertex of matching color, children regrafted on the inserted tree.
    A single pair acts as a derivation.
    """
    factors = [q] if isinstance(q, DecoratedPair) else list(q.letters)
    return as_element(forest).map(lambda f: insert_into_forest(f, factors))


def counit_pairs(key: Monomial) -> Fraction:
    """epsilon_B on D*_PreLie(V): product over letters of [t = •_d]."""
    return Fraction(int(all(epsilon_zero(letter) for letter in key.letters)))


def merge_middle(x: Element) -> Element:
    """m^3_{2,4}: a ⊗ b ⊗ c ⊗ d -> a ⊗ c ⊗ bd."""
    return x.map(lambda key: (key[0], key[2], key[1] * key[3]))


# ========== TRANSPOSES OF COMPOSITION ==========

@lru_cache(maxsize=None)
def _dual_star_word_table(descriptor: OperadDescriptor, total: int) -> Dict[Hashable, Dict[Hashable, Fraction]]:
    """x -> {(p, q1..qn): coefficient of x in p o (q1..qn)} for arity(x) = total."""
    table: Dict[Hashable, Dict[Hashable, Fraction]] = {}
    for n in range(1, total + 1):
        for p in descriptor.basis(n):
            for arities in _compositions(total, n):
                for qs in itertools.product(*(descriptor.basis(a) for a in arities)):
                    composed = compose_keys_at(descriptor, p, tuple(range(1, n + 1)), qs)
                    for x, c in composed.items():
                        slot = table.setdefault(x, {})
                        key = (Word((p,)), Word(qs))
                        slot[key] = slot.get(key, 0) + c
    logger.debug(f"dual_star table {descriptor.label} arity {total}: {len(table)} keys")
    return table


def transpose_composition_letter(descriptor: OperadDescriptor, x: Hashable) -> Element:
    """Coefficient of x in every full composition p o (q1..qn), as p ⊗ q1..qn."""
    return Element(_dual_star_word_table(descriptor, descriptor.arity(x)).get(x, {}))


def dual_letter(letter: Hashable) -> Hashable:
    """
    Primal key a dual letter is the coordinate of.

    As duals are indexed by inverse permutations, so that dual_star is the
    interval-splitting coproduct of permutation_coproduct; other letters are
    their own index. Involutive.
    """
    return letter.inverse() if isinstance(letter, Permutation) else letter


def dual_coordinates(x: Element) -> Element:
    """Apply dual_letter to every letter of words, monomials and tensors of them."""
    def on_key(key):
        if isinstance(key, tuple):
            return tuple(on_key(k) for k in key)
        return type(key)(tuple(dual_letter(letter) for letter in key.letters))
    return x.map(on_key)


def permutation_coproduct(sigma: Permutation) -> Element:
    """
    Delta_*(sigma) over the splittings of [n] into consecutive position
    intervals I_1 < ... < I_k whose images sigma(I_p) are intervals too:
    sigma/(I) ⊗ Std(sigma|I_1) ... Std(sigma|I_k), where sigma/(I) is the
    permutation of the blocks ordered by their values.

    Examples:
        perm[231] -> (1)⊗(231) + (21)⊗(12)(1) + (231)⊗(1)(1)(1)
    """
    n = sigma.arity
    word = sigma.word
    acc: Dict[Hashable, Fraction] = {}
    for cuts in itertools.product((False, True), repeat=n - 1):
        bounds = [0] + [k + 1 for k, cut in enumerate(cuts) if cut] + [n]
        blocks = [word[a:b] for a, b in zip(bounds, bounds[1:])]
        if any(max(block) - min(block) + 1 != len(block) for block in blocks):
            continue
        by_value = sorted(range(1, len(blocks) + 1), key=lambda p: min(blocks[p - 1]))
        left = Permutation(tuple(by_value)).inverse()
        key = (Word((left,)), Word(tuple(standardize(block) for block in blocks)))
        acc[key] = acc.get(key, 0) + 1
    return Element(acc)


def dual_star_letter(descriptor: OperadDescriptor, x: Hashable) -> Element:
    if isinstance(x, Permutation):
        return permutation_coproduct(x)
    return transpose_composition_letter(descriptor, x)


def _multisets(pool: Sequence[Hashable], count: int, total: int, size: Callable[[Hashable], int]):
    for combo in itertools.combinations_with_replacement(pool, count):
        if sum(size(q) for q in combo) == total:
            yield combo


@lru_cache(maxsize=None)
def _dual_star_orbit_table(descriptor: OperadDescriptor, total: int) -> Dict[Hashable, Dict[Hashable, Fraction]]:
    """
    Orbit version: omega -> {(pi, Q): c * s_omega / (s_pi * prod mult! * prod s_q)}
    with c the coefficient of omega in the sum over all orderings of Q of pi o (Q).
    """
    pool = [w for a in range(1, total + 1) for w in descriptor.orbit_basis(a)]
    table: Dict[Hashable, Dict[Hashable, Fraction]] = {}
    for n in range(1, total + 1):
        for pi in descriptor.orbit_basis(n):
            for combo in _multisets(pool, n, total, lambda w: w.arity):
                raw: Dict[Hashable, Fraction] = {}
                for ordering in itertools.permutations(combo):
                    add_into(raw, compose_keys_at(descriptor, pi.representative, tuple(range(1, n + 1)),
                                                  [w.representative for w in ordering]))
                projected = project_to_orbits(descriptor, Element(raw))
                factor = pi.symmetry
                for mult in Monomial(combo).multiplicities().values():
                    factor *= math.factorial(mult)
                for w in combo:
                    factor *= w.symmetry
                key = (Monomial((pi,)), Monomial(combo))
                for omega, c in projected.items():
                    slot = table.setdefault(omega, {})
                    slot[key] = slot.get(key, 0) + c * omega.symmetry / factor
    return table


def dual_star_orbit_letter(descriptor: OperadDescriptor, omega: OrbitClass) -> Element:
    return Element(_dual_star_orbit_table(descriptor, omega.arity).get(omega, {}))


@lru_cache(maxsize=None)
def _dual_star_prime_table(descriptor: OperadDescriptor, total: int) -> Dict[Hashable, Dict[Hashable, Fraction]]:
    """x -> {(p, v): coefficient of x in <p; v>} over non-empty words v with |v| <= arity(p)."""
    table: Dict[Hashable, Dict[Hashable, Fraction]] = {}
    for n in range(1, total + 1):
        for p in descriptor.basis(n):
            for length in range(1, n + 1):
                for arities in _compositions(total - n + length, length):
                    for v in itertools.product(*(descriptor.basis(a) for a in arities)):
                        for x, c in brace_keys(descriptor, p, v).items():
                            slot = table.setdefault(x, {})
                            key = (Word((p,)), Word(v))
                            slot[key] = slot.get(key, 0) + c
    return table


def dual_star_prime_letter(descriptor: OperadDescriptor, x: Hashable) -> Element:
    """Delta'(x*) = x* ⊗ 1 + 1 ⊗ x* + sum coef_x(<p; v>) p* ⊗ v*."""
    index = dual_letter(x)
    acc = dict(_dual_star_prime_table(descriptor, descriptor.arity(x)).get(index, {}))
    for key in ((Word((index,)), Word(())), (Word(()), Word((index,)))):
        acc[key] = acc.get(key, 0) + 1
    return dual_coordinates(Element(acc))


# ========== HANDLES ==========

@dataclass(eq=False)
class BialgebraHandle:
    """
    One bialgebra of the registry.

    Attributes:
        name: Registry name
        carrier: 'word' or 'monomial'
        letters: Letter basis of a given size (arity or vertex count)
        product_keys: Product of two basis keys
        coproducts: Available coproduct kinds on basis keys
        default_kind: Kind used when none is requested
        connected: Degree 0 is spanned by the unit (antipode recursion applies)
        letter_counit: Counit on letters when it is not the unit coefficient
        letter_degree: Degree of a letter
        weight: Symmetry-factor weight for pairings, or None for Kronecker
    """

    name: str
    carrier: str
    letters: Callable[[int], List[Hashable]]
    product_keys: Callable[[Hashable, Hashable], Element]
    coproducts: Dict[str, Callable[[Hashable], Element]]
    default_kind: str
    connected: bool
    letter_counit: Optional[Callable[[Hashable], int]] = None
    letter_degree: Callable[[Hashable], int] = lambda letter: letter.arity - 1
    weight: Optional[Callable[[Hashable], int]] = None
    _coproduct_cache: Dict[Tuple[str, Hashable], Element] = field(default_factory=dict)
    _antipode_cache: Dict[Hashable, Element] = field(default_factory=dict)

    def unit_key(self) -> Carrier:
        return Word(()) if self.carrier == 'word' else Monomial(())

    def unit(self) -> Element:
        return Element.basis(self.unit_key())

    def wrap(self, letters: Sequence[Hashable]) -> Carrier:
        return Word(tuple(letters)) if self.carrier == 'word' else Monomial(tuple(letters))

    def product(self, a: Element, b: Element) -> Element:
        return bilinear(self.product_keys, a, b)

    def coproduct(self, x: Element, kind: Optional[str] = None) -> Element:
        kind = kind or self.default_kind
        if kind not in self.coproducts:
            raise UnsupportedOperationError(
                f"Coproduct '{kind}' is not available on {self.name} (has {sorted(self.coproducts)})")
        fn = self.coproducts[kind]

        def on_key(key: Hashable) -> Element:
            cached = self._coproduct_cache.get((kind, key))
            if cached is None:
                cached = fn(key)
                self._coproduct_cache[(kind, key)] = cached
            return cached

        return x.map(on_key)

    def counit(self, x: Element) -> Fraction:
        if self.letter_counit is None:
            return x.coefficient(self.unit_key())
        total = Fraction(0)
        for key, c in x.items():
            total += c * math.prod((self.letter_counit(letter) for letter in key.letters), start=1)
        return total

    def degree(self, key: Carrier) -> int:
        return sum(self.letter_degree(letter) for letter in key.letters)

    def tensor_product(self, x: Element, y: Element) -> Element:
        """Product of A ⊗ A, componentwise."""
        return tensor_product(x, y, [self.product_keys, self.product_keys])

    def basis(self, size: int) -> List[Carrier]:
        """Words / monomials whose letter sizes add up to `size`."""
        if size == 0:
            return [self.unit_key()]
        if self.carrier == 'word':
            out = []
            for count in range(1, size + 1):
                for sizes in _compositions(size, count):
                    pools = [self.letters(s) for s in sizes]
                    out.extend(Word(combo) for combo in itertools.product(*pools))
            return out
        pool = [x for s in range(1, size + 1) for x in self.letters(s)]
        out = []
        for count in range(1, size + 1):
            out.extend(Monomial(combo) for combo in _multisets(pool, count, size, lambda x: x.arity))
        return out


def _symmetry_weight(letter: Hashable) -> int:
    return letter.symmetry_factor()


def _operad_letters(descriptor: OperadDescriptor, minimum: int):
    return lambda n: descriptor.basis(n) if n >= minimum else []


def _orbit_letters(descriptor: OperadDescriptor, minimum: int):
    return lambda n: descriptor.orbit_basis(n) if n >= minimum else []


def _reduced_word_star(descriptor: OperadDescriptor):
    def fn(word: Word) -> Element:
        return _reduce_tensor(_multiplicative(lambda x: dual_star_letter(descriptor, x), word), _is_unit_letter)
    return fn


def _reduced_orbit_star(descriptor: OperadDescriptor):
    def fn(monomial: Monomial) -> Element:
        full = _multiplicative(lambda w: dual_star_orbit_letter(descriptor, w), monomial)
        return _reduce_tensor(full, _is_unit_letter)
    return fn


def _operad_handle(name: str, descriptor: OperadDescriptor) -> BialgebraHandle:
    if name in ('dt', 'bt'):
        context = OperadBraceContext(descriptor)
        return BialgebraHandle(
            name=f"{name}[{descriptor.label}]", carrier='word',
            letters=_operad_letters(descriptor, 1 if name == 'dt' else 2),
            product_keys=lambda a, b: star_tensor(context, a, b),
            coproducts={'dec': deconcatenation}, default_kind='dec',
            connected=(name == 'bt'),
        )
    if name in ('d', 'b'):
        context = CoinvariantBinfContext(descriptor)
        return BialgebraHandle(
            name=f"{name}[{descriptor.label}]", carrier='monomial',
            letters=_orbit_letters(descriptor, 1 if name == 'd' else 2),
            product_keys=lambda a, b: star_sym(context, a, b),
            coproducts={'sym': unshuffle}, default_kind='sym',
            connected=(name == 'b'), weight=_symmetry_weight,
        )
    if name == 'dt*':
        return BialgebraHandle(
            name=f"dt*[{descriptor.label}]", carrier='word',
            letters=_operad_letters(descriptor, 1),
            product_keys=lambda a, b: a * b,
            coproducts={
                'dual_star': lambda w: _multiplicative(lambda x: dual_star_letter(descriptor, x), w),
                'dual_star_prime': lambda w: _multiplicative(lambda x: dual_star_prime_letter(descriptor, x), w),
                'dual_star_reduced': _reduced_word_star(descriptor),
            },
            default_kind='dual_star', connected=False, letter_counit=epsilon_zero,
        )
    if name == 'bt*':
        return BialgebraHandle(
            name=f"bt*[{descriptor.label}]", carrier='word',
            letters=_operad_letters(descriptor, 2),
            product_keys=lambda a, b: a * b,
            coproducts={'dual_star_reduced': _reduced_word_star(descriptor)},
            default_kind='dual_star_reduced', connected=True,
        )
    if name == 'd*':
        return BialgebraHandle(
            name=f"d*[{descriptor.label}]", carrier='monomial',
            letters=_orbit_letters(descriptor, 1),
            product_keys=lambda a, b: a * b,
            coproducts={
                'dual_star': lambda m: _multiplicative(lambda w: dual_star_orbit_letter(descriptor, w), m),
                'dual_star_reduced': _reduced_orbit_star(descriptor),
            },
            default_kind='dual_star', connected=False, letter_counit=epsilon_zero,
            weight=_symmetry_weight,
        )
    if name == 'b*':
        return BialgebraHandle(
            name=f"b*[{descriptor.label}]", carrier='monomial',
            letters=_orbit_letters(descriptor, 2),
            product_keys=lambda a, b: a * b,
            coproducts={'dual_star_reduced': _reduced_orbit_star(descriptor)},
            default_kind='dual_star_reduced', connected=True, weight=_symmetry_weight,
        )
    raise UnknownSuiteError(f"Unknown operad handle: {name}")


def _tree_handle(name: str, colors: int) -> BialgebraHandle:
    trees = lambda n: enumerate_decorated_trees(n, colors)
    size_degree = lambda letter: letter.size
    if name == 'a':
        context = GraftingContext()
        return BialgebraHandle(
            name=f"a[N={colors}]", carrier='monomial', letters=trees,
            product_keys=lambda a, b: star_sym(context, a, b),
            coproducts={'sym': unshuffle}, default_kind='sym', connected=True,
            letter_degree=size_degree, weight=_symmetry_weight,
        )
    if name == 'a*':
        return BialgebraHandle(
            name=f"a*[N={colors}]", carrier='monomial', letters=trees,
            product_keys=lambda a, b: a * b,
            coproducts={'ck': connes_kreimer}, default_kind='ck', connected=True,
            letter_degree=size_degree, weight=_symmetry_weight,
        )
    pairs = lambda n: enumerate_decorated_pairs(n, colors)
    if name == 'dpl':
        context = PairInsertionContext()
        return BialgebraHandle(
            name=f"dpl[N={colors}]", carrier='monomial', letters=pairs,
            product_keys=lambda a, b: star_sym(context, a, b),
            coproducts={'sym': unshuffle}, default_kind='sym', connected=False,
            weight=_symmetry_weight,
        )
    if name == 'dpl*':
        return BialgebraHandle(
            name=f"dpl*[N={colors}]", carrier='monomial', letters=pairs,
            product_keys=lambda a, b: a * b,
            coproducts={'ec': lambda m: extraction_contraction(m, colors)},
            default_kind='ec', connected=False, letter_counit=epsilon_zero,
            weight=_symmetry_weight,
        )
    if name == 'bpl*':
        return BialgebraHandle(
            name=f"bpl*[N={colors}]", carrier='monomial',
            letters=lambda n: pairs(n) if n >= 2 else [],
            product_keys=lambda a, b: a * b,
            coproducts={'ec': lambda m: _reduce_tensor(extraction_contraction(m, colors), _is_unit_letter)},
            default_kind='ec', connected=True, weight=_symmetry_weight,
        )
    raise UnknownSuiteError(f"Unknown tree handle: {name}")


OPERAD_HANDLES = ('dt', 'bt', 'd', 'b', 'dt*', 'bt*', 'd*', 'b*')
TREE_HANDLES = ('a', 'a*', 'dpl', 'dpl*', 'bpl*')
HANDLE_NAMES = OPERAD_HANDLES + TREE_HANDLES


@lru_cache(maxsize=None)
def get_handle(name: str, operad: str = 'prelie', colors: int = 1, mode: str = 'circ') -> BialgebraHandle:
    """
    Shared handle instance (caches are per handle).

    Args:
        name: One of HANDLE_NAMES
        operad: Operad for the operad-based handles
        colors: Number of decoration colors for the tree-based handles
        mode: Composition mode of the operad

    Raises:
        UnknownSuiteError: unknown handle name

    Examples:
        >>> get_handle('a*', colors=2).default_kind
        'ck'
    """
    key = name.lower()
    if key in OPERAD_HANDLES:
        return _operad_handle(key, get_operad(operad, mode))
    if key in TREE_HANDLES:
        return _tree_handle(key, colors)
    raise UnknownSuiteError(f"Unknown algebra: {name} (expected one of {HANDLE_NAMES})")


def coproduct(handle: BialgebraHandle, x: Element, kind: Optional[str] = None) -> Element:
    """
    Coproduct of x in the handle's carrier.

    Raises:
        UnsupportedOperationError: kind not defined on this handle
    """
    if kind is not None and kind not in COPRODUCT_KINDS:
        raise UnsupportedOperationError(f"Unknown coproduct kind: {kind} (expected one of {COPRODUCT_KINDS})")
    return handle.coproduct(x, kind)


# ========== PSI ==========

def psi_isomorphism(x: Element, inverse: bool = False) -> Element:
    """
    Psi: f -> f - epsilon_zero(f) 1 on letters, extended multiplicatively.
    Inverse: f -> f + epsilon_zero(f) 1.

    Delta_* o Psi = (Psi ⊗ Psi) o Delta'_*.

    Examples:
        Com: Psi(e1) = e1 - 1, Psi(e2) = e2
    """
    sign = 1 if inverse else -1

    def on_key(key: Carrier) -> Element:
        empty = _empty_like(key)
        result = Element.basis(empty)
        for letter in key.letters:
            image = Element({type(key)((letter,)): 1, empty: sign * epsilon_zero(letter)})
            result = bilinear(_join, result, image)
        return result

    return x.map(on_key)


# ========== ANTIPODE ==========

def _antipode_key(handle: BialgebraHandle, key: Carrier) -> Element:
    cached = handle._antipode_cache.get(key)
    if cached is not None:
        return cached
    empty = handle.unit_key()
    if key == empty:
        result = Element.basis(empty)
    else:
        acc: Dict[Hashable, Fraction] = {}
        add_into(acc, Element.basis(key), -1)
        for (left, right), c in handle.coproduct(Element.basis(key)).items():
            if left == empty or right == empty:
                continue
            add_into(acc, handle.product(_antipode_key(handle, left), Element.basis(right)), -c)
        result = Element(acc)
    handle._antipode_cache[key] = result
    return result


def antipode(handle: BialgebraHandle, x: Element) -> Element:
    """
    S(1) = 1, S(x) = -x - sum S(x') x'' over the reduced coproduct.

    Raises:
        UnsupportedOperationError: handle is not connected

    Examples:
        CK: S(ladder) = -ladder + •·•
    """
    if not handle.connected:
        raise UnsupportedOperationError(f"Antipode recursion needs a connected bialgebra, {handle.name} is not")
    return x.map(lambda key: _antipode_key(handle, key))


def convolve_antipode_identity(handle: BialgebraHandle, x: Element) -> Element:
    """m (S ⊗ Id) Delta (x); equals counit(x) 1 when S is an antipode."""
    if not handle.connected:
        raise UnsupportedOperationError(f"Antipode recursion needs a connected bialgebra, {handle.name} is not")
    acc: Dict[Hashable, Fraction] = {}
    for (left, right), c in handle.coproduct(x).items():
        add_into(acc, handle.product(_antipode_key(handle, left), Element.basis(right)), c)
    return Element(acc)
