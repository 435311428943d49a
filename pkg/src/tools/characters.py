"""
Truncated character monoids.

A TruncatedSeries is an element of a completion (sum over all degrees)
cut at an explicit bound; its degree-d component lives on keys of arity
(vertex count) d. Every product is exact on the quotient by degrees above
the bound.

Carriers:
- OperadCoinvariants   orbit classes of an operad, unit I
- DecoratedTrees       free pre-Lie algebra on N colors (trees), no unit
- DecoratedPairs       pairs (t, j) of D_PreLie(V), unit sum_j (•_j, j)

Two normalizations:
- diamond         x ◊ y = sum_n x_n o (y, ..., y)                (unit I)
- diamond_prime   x ◊' y = (x + I) ◊ (y + I) - I
                         = y + sum over slot subsets of x_n o_S (y, ..., y)
"""

import logging
import math
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra_core import Element, add_into, format_key, to_fraction
from .combinatorics import DecoratedPair, DecoratedTree
from .errors import FamilyMismatchError, NonInvertibleError, UnsupportedOperationError
from .induced_structures import CoinvariantBinfContext, OudomGuinContext, graft, graft_many, substitute_vertices
from .operads import OperadDescriptor, compose_keys_at

logger = logging.getLogger(__name__)


# ========== TRUNCATED SERIES ==========

class TruncatedSeries:
    """
    Components degree -> Element up to `bound`; higher degrees are dropped
    on construction. Equality is componentwise.
    """

    __slots__ = ('bound', '_components')

    def __init__(self, bound: int, components: Optional[Mapping[int, Element]] = None):
        self.bound = bound
        cleaned: Dict[int, Element] = {}
        for degree, element in (components or {}).items():
            if 1 <= degree <= bound and element:
                cleaned[degree] = element
        self._components = cleaned

    @classmethod
    def from_element(cls, element: Element, bound: int) -> 'TruncatedSeries':
        """Split an element by key arity."""
        parts: Dict[int, Dict[Hashable, Fraction]] = {}
        for key, coeff in element.items():
            parts.setdefault(key.arity, {})[key] = coeff
        return cls(bound, {d: Element(terms) for d, terms in parts.items()})

    @classmethod
    def zero(cls, bound: int) -> 'TruncatedSeries':
        return cls(bound)

    def component(self, degree: int) -> Element:
        return self._components.get(degree, Element())

    def degrees(self) -> List[int]:
        return sorted(self._components)

    def total(self) -> Element:
        result = Element()
        for degree in self.degrees():
            result = result + self._components[degree]
        return result

    def truncate(self, bound: int) -> 'TruncatedSeries':
        return TruncatedSeries(min(bound, self.bound), self._components)

    def below(self, degree: int) -> 'TruncatedSeries':
        """Components of degree < `degree` (same bound)."""
        return TruncatedSeries(self.bound, {d: e for d, e in self._components.items() if d < degree})

    def terms(self) -> List[Tuple[Hashable, Fraction, int]]:
        return [(key, coeff, d) for d in self.degrees() for key, coeff in self._components[d].items()]

    def __add__(self, other: 'TruncatedSeries') -> 'TruncatedSeries':
        bound = min(self.bound, other.bound)
        degrees = set(self._components) | set(other._components)
        return TruncatedSeries(bound, {d: self.component(d) + other.component(d) for d in degrees})

    def __neg__(self) -> 'TruncatedSeries':
        return TruncatedSeries(self.bound, {d: -e for d, e in self._components.items()})

    def __sub__(self, other: 'TruncatedSeries') -> 'TruncatedSeries':
        return self + (-other)

    def __mul__(self, scalar) -> 'TruncatedSeries':
        return TruncatedSeries(self.bound, {d: e * scalar for d, e in self._components.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        bound = min(self.bound, other.bound)
        return all(self.component(d) == other.component(d) for d in range(1, bound + 1))

    def __hash__(self) -> int:
        return hash((self.bound, tuple((d, self._components[d]) for d in self.degrees())))

    def is_zero(self) -> bool:
        return not self._components

    def shift_unit(self, unit: Element) -> 'TruncatedSeries':
        """x -> x + I."""
        return self + TruncatedSeries.from_element(unit, self.bound)

    def __str__(self) -> str:
        if not self._components:
            return '0'
        return ' + '.join(f"({self._components[d]})" for d in self.degrees())

    def __repr__(self) -> str:
        return f"TruncatedSeries(bound={self.bound}, {self})"

    def to_json(self) -> Dict[str, Any]:
        return {
            'bound': self.bound,
            'components': {str(d): self._components[d].to_json() for d in self.degrees()},
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], parse_key: Callable[[str], Hashable]) -> 'TruncatedSeries':
        components = {
            int(d): Element.from_json(payload, parse_key)
            for d, payload in data.get('components', {}).items()
        }
        return cls(int(data['bound']), components)


def _tuples(terms: Sequence[Tuple[Hashable, Fraction, int]], count: int,
            budget: int) -> Iterable[Tuple[Tuple[Hashable, ...], Fraction]]:
    """Ordered tuples of `count` series terms with sum of (degree - 1) <= budget."""
    if count == 0:
        yield (), Fraction(1)
        return
    for key, coeff, degree in terms:
        extra = degree - 1
        if extra > budget:
            continue
        for rest, rest_coeff in _tuples(terms, count - 1, budget - extra):
            yield (key,) + rest, coeff * rest_coeff


def _slot_subsets(n: int) -> Iterable[Tuple[int, ...]]:
    for mask in range(1 << n):
        yield tuple(i + 1 for i in range(n) if mask >> i & 1)


# ========== CARRIERS ==========

class SeriesCarrier:
    """Completed space together with its monoid products."""

    name = 'carrier'

    def unit(self) -> Element:
        raise UnsupportedOperationError(f"{self.name} has no unit")

    def owns(self, key: Hashable) -> bool:
        raise NotImplementedError

    def check(self, *series: TruncatedSeries) -> None:
        for s in series:
            for key, _, _ in s.terms():
                if not self.owns(key):
                    raise FamilyMismatchError(f"{format_key(key)} does not belong to {self.name}")

    def diamond(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        raise UnsupportedOperationError(f"The composition product is not defined on {self.name}")

    def diamond_prime(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        raise NotImplementedError

    def exp_bracket_diamond(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        raise UnsupportedOperationError(f"No b-infinity brackets on {self.name}")

    def linear_factor(self, x: TruncatedSeries) -> Fraction:
        """Coefficient of y_n in [x ◊' y]_n."""
        return Fraction(1)


class SlotCarrier(SeriesCarrier):
    """Carriers whose keys have input slots substituted by other keys."""

    def compose(self, p: Hashable, slots: Sequence[int], qs: Sequence[Hashable]) -> Element:
        raise NotImplementedError

    def _substitute(self, x: TruncatedSeries, y: TruncatedSeries, every_slot: bool) -> TruncatedSeries:
        bound = min(x.bound, y.bound)
        y_terms = y.terms()
        acc: Dict[Hashable, Fraction] = {}
        for p, c, n in x.terms():
            if n > bound:
                continue
            subsets = [tuple(range(1, n + 1))] if every_slot else _slot_subsets(n)
            for slots in subsets:
                for qs, coeff in _tuples(y_terms, len(slots), bound - n):
                    add_into(acc, self.compose(p, slots, qs), c * coeff)
        return TruncatedSeries.from_element(Element(acc), bound)

    def diamond(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        self.check(x, y)
        return self._substitute(x, y, every_slot=True)

    def diamond_prime(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        self.check(x, y)
        return y.truncate(x.bound) + self._substitute(x, y, every_slot=False)

    def linear_factor(self, x: TruncatedSeries) -> Fraction:
        return 1 + sum((x.component(1).coefficient(k) for k in self.unit().keys()), Fraction(0))


class OperadCoinvariants(SlotCarrier):
    """
    Orbit classes of an operad (the character monoid of D*_P).

    Compositions act on representatives and are projected back to orbits.
    """

    def __init__(self, descriptor: OperadDescriptor):
        self.descriptor = descriptor
        self.name = f"coinv[{descriptor.label}]"
        self._context = CoinvariantBinfContext(descriptor)

    def unit(self) -> Element:
        return Element.basis(self.descriptor.orbit(self.descriptor.unit()))

    def owns(self, key: Hashable) -> bool:
        return hasattr(key, 'representative') and self.descriptor.owns(key.representative)

    def compose(self, p, slots, qs) -> Element:
        raw = compose_keys_at(self.descriptor, p.representative, slots, [q.representative for q in qs])
        return raw.map(self.descriptor.orbit)

    def exp_bracket_diamond(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        """y + sum_k (1/k!) |x, y^k| with the operadic b-infinity brackets."""
        self.check(x, y)
        bound = min(x.bound, y.bound)
        y_terms = y.terms()
        acc: Dict[Hashable, Fraction] = {}
        add_into(acc, y.total())
        for p, c, n in x.terms():
            for k in range(0, n + 1):
                for qs, coeff in _tuples(y_terms, k, bound - n):
                    value = Element.basis(p) if k == 0 else self._context.bracket(p, qs)
                    add_into(acc, value, c * coeff / math.factorial(k))
        return TruncatedSeries.from_element(Element(acc), bound)


class DecoratedTrees(SeriesCarrier):
    """
    Completed free pre-Lie algebra on N colors; ◊' = y + x • e^y with
    x • y^k the grafting of the k factors on vertices of x.
    """

    def __init__(self, colors: int = 1):
        self.colors = colors
        self.name = f"trees[N={colors}]"
        self._context = OudomGuinContext(graft)

    def owns(self, key: Hashable) -> bool:
        return isinstance(key, DecoratedTree) and key.max_color() <= self.colors

    def _exp_sum(self, x: TruncatedSeries, y: TruncatedSeries, bracket) -> TruncatedSeries:
        bound = min(x.bound, y.bound)
        y_terms = y.terms()
        acc: Dict[Hashable, Fraction] = {}
        add_into(acc, y.total())
        for t, c, n in x.terms():
            for k in range(0, bound - n + 1):
                for qs, coeff in _tuples(y_terms, k, bound - n - k):
                    value = Element.basis(t) if k == 0 else bracket(t, qs)
                    add_into(acc, value, c * coeff / math.factorial(k))
        return TruncatedSeries.from_element(Element(acc), bound)

    def diamond_prime(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        self.check(x, y)
        return self._exp_sum(x, y, graft_many)

    def exp_bracket_diamond(self, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
        """Same sum with brackets rebuilt from the pre-Lie product alone."""
        self.check(x, y)
        return self._exp_sum(x, y, self._context.bracket)


class DecoratedPairs(SlotCarrier):
    """
    Pairs (t, j): composition substitutes pairs at vertices whose color
    matches the pair's output color.
    """

    def __init__(self, colors: int = 1):
        self.colors = colors
        self.name = f"pairs[N={colors}]"

    def unit(self) -> Element:
        return Element({DecoratedPair(DecoratedTree.single(j), j): 1 for j in range(1, self.colors + 1)})

    def owns(self, key: Hashable) -> bool:
        return (isinstance(key, DecoratedPair) and key.tree.max_color() <= self.colors
                and key.color <= self.colors)

    def compose(self, p: DecoratedPair, slots, qs) -> Element:
        colors, _ = p.tree.to_parent_lists()
        assignment: Dict[int, DecoratedTree] = {}
        for slot, q in zip(slots, qs):
            if q.color != colors[slot - 1]:
                return Element()
            assignment[slot - 1] = q.tree
        return substitute_vertices(p.tree, assignment).map(lambda t: DecoratedPair(t, p.color))

    def linear_factor(self, x: TruncatedSeries) -> Fraction:
        if self.colors > 1 and x.component(1):
            raise UnsupportedOperationError(
                "Inverting a series with a non-zero arity-1 part needs an N x N matrix inverse; only N=1 is supported")
        return super().linear_factor(x)


# ========== MODULE-LEVEL OPERATIONS ==========

def diamond(carrier: SeriesCarrier, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    """
    x ◊ y = sum_n x_n o (y, ..., y), truncated.

    Examples:
        Com: (e1 + e2) ◊ (e1 + e2) = e1 + 2 e2 + 2 e3 + e4
    """
    return carrier.diamond(x, y)


def diamond_prime(carrier: SeriesCarrier, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    return carrier.diamond_prime(x, y)


def exp_bracket_diamond(carrier: SeriesCarrier, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    """|e^x, e^y| = y + sum_k (1/k!) |x, y^k|; agrees with diamond_prime."""
    return carrier.exp_bracket_diamond(x, y)


def group_inverse(carrier: SeriesCarrier, x: TruncatedSeries) -> TruncatedSeries:
    """
    y with x ◊' y = 0, solved degree by degree:
        y_n = -[x ◊' y_(<n)]_n / (1 + c)
    where c is the unit coefficient of x in degree 1.

    Raises:
        NonInvertibleError: 1 + c = 0
        UnsupportedOperationError: matrix-valued degree 1 (pairs with N > 1)
    """
    carrier.check(x)
    factor = carrier.linear_factor(x)
    if factor == 0:
        raise NonInvertibleError(f"Degree-1 part of {x} is -I: not invertible for ◊'")
    y = TruncatedSeries.zero(x.bound)
    for n in range(1, x.bound + 1):
        defect = carrier.diamond_prime(x, y.below(n)).component(n)
        if defect:
            y = y + TruncatedSeries(x.bound, {n: defect * (-1 / factor)})
    logger.debug(f"inverse in {carrier.name} solved to degree {x.bound}")
    return y


def endo_action(x: TruncatedSeries, y: TruncatedSeries, prime: bool = False,
                colors: Optional[int] = None) -> TruncatedSeries:
    """
    Action of a pair series y on a tree series x.

    x ◁ y replaces every vertex of every tree of x by a term of y of matching
    output color; x ◁' y = x ◁ (y + sum_j (•_j, j)) replaces any subset of
    vertices.

    Examples:
        •a ◁ (q, p) = delta_ap q
    """
    pairs = DecoratedPairs(colors or max([1] + [k.color for k, _, _ in y.terms()]
                                         + [k.max_color() for k, _, _ in x.terms()]))
    bound = min(x.bound, y.bound)
    y_terms = y.terms()
    acc: Dict[Hashable, Fraction] = {}
    for t, c, n in x.terms():
        as_pair = DecoratedPair(t, t.root_color)
        subsets = _slot_subsets(n) if prime else [tuple(range(1, n + 1))]
        for slots in subsets:
            for qs, coeff in _tuples(y_terms, len(slots), bound - n):
                add_into(acc, pairs.compose(as_pair, slots, qs).map(lambda p: p.tree), c * coeff)
    return TruncatedSeries.from_element(Element(acc), bound)


CARRIER_NAMES = ('coinv', 'trees', 'pairs')


def series_of(terms: Mapping[Hashable, Any], bound: int) -> TruncatedSeries:
    """Convenience constructor from {key: coefficient}."""
    return TruncatedSeries.from_element(Element({k: to_fraction(v) for k, v in terms.items()}), bound)
