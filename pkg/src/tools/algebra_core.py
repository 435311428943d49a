"""
Exact free-module arithmetic.

Everything opforge computes is an Element: a finite linear combination of
canonical keys with Fraction coefficients. Keys are hashable objects with a
`sort_key()` (combinatorial objects), tuples of keys (tensors), or the two
word types defined here:

- Word: ordered letters, a basis tensor of T(V)
- Monomial: unordered letters, a basis monomial of S(V)

Architecture:
1. Keys order themselves through key_order(), which fixes term iteration,
   text output and JSON output.
2. Element normalizes on construction (zero coefficients dropped) and is
   never mutated afterwards.
3. Multilinear maps are written on keys and lifted with Element.map /
   bilinear / tensor_map.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import FamilyMismatchError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]

# Separators used in text notation
WORD_SEPARATOR = ' '
MONOMIAL_SEPARATOR = '·'
TENSOR_SEPARATOR = ' ⊗ '
UNIT_NOTATION = '1'


# ========== KEY ORDER AND NOTATION ==========

def to_fraction(value: Any) -> Fraction:
    """Coerce int/str/Fraction to Fraction. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"Inexact or boolean coefficient refused: {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"Cannot use {value!r} as a coefficient")


def key_order(key: Hashable) -> tuple:
    """
    Total order on keys of one family.

    The type name leads every tuple so keys of different families never get
    compared field by field.
    """
    if isinstance(key, tuple):
        return ('~tensor', len(key), tuple(key_order(k) for k in key))
    if hasattr(key, 'sort_key'):
        return (type(key).__name__, key.sort_key())
    if isinstance(key, int):
        return ('int', key)
    return (type(key).__name__, str(key))


def format_key(key: Hashable) -> str:
    """Canonical text notation of a key."""
    if isinstance(key, tuple):
        return TENSOR_SEPARATOR.join(format_key(k) for k in key)
    if hasattr(key, 'notation'):
        return key.notation()
    return str(key)


def format_coefficient(coeff: Fraction) -> str:
    """Rational as 'p/q' ('p' when the denominator is 1)."""
    return str(coeff)


# ========== WORDS AND MONOMIALS ==========

@dataclass(frozen=True)
class Word:
    """Ordered sequence of letters; the empty word is the unit of T(V)."""

    letters: Tuple[Hashable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'letters', tuple(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.letters)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word(self.letters[index])
        return self.letters[index]

    def __mul__(self, other: 'Word') -> 'Word':
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(key_order(x) for x in self.letters))

    def notation(self) -> str:
        if not self.letters:
            return UNIT_NOTATION
        return WORD_SEPARATOR.join(format_key(x) for x in self.letters)


@dataclass(frozen=True)
class Monomial:
    """Multiset of letters; the empty monomial is the unit of S(V)."""

    letters: Tuple[Hashable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'letters', tuple(sorted(self.letters, key=key_order)))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.letters)

    def __mul__(self, other: 'Monomial') -> 'Monomial':
        if not isinstance(other, Monomial):
            return NotImplemented
        return Monomial(self.letters + other.letters)

    def multiplicities(self) -> Counter:
        return Counter(self.letters)

    def without(self, index: int) -> 'Monomial':
        return Monomial(self.letters[:index] + self.letters[index + 1:])

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(key_order(x) for x in self.letters))

    def notation(self) -> str:
        if not self.letters:
            return UNIT_NOTATION
        return MONOMIAL_SEPARATOR.join(format_key(x) for x in self.letters)


# ========== ELEMENT ==========

class Element:
    """
    Finite linear combination of keys with exact rational coefficients.

    Immutable: arithmetic returns new elements. Equality is term-map equality,
    and `element == 0` tests for the zero element.
    """

    __slots__ = ('_terms',)

    def __init__(self, terms: Optional[Mapping[Hashable, Scalar]] = None):
        cleaned: Dict[Hashable, Fraction] = {}
        for key, coeff in (terms or {}).items():
            value = to_fraction(coeff)
            if value:
                cleaned[key] = value
        self._terms = cleaned

    # ----- constructors -----

    @classmethod
    def zero(cls) -> 'Element':
        return cls()

    @classmethod
    def basis(cls, key: Hashable, coeff: Scalar = 1) -> 'Element':
        return cls({key: coeff})

    @classmethod
    def from_terms(cls, pairs: Iterable[Tuple[Hashable, Scalar]]) -> 'Element':
        """Sum of (key, coeff) pairs; repeated keys accumulate."""
        acc: Dict[Hashable, Fraction] = {}
        for key, coeff in pairs:
            acc[key] = acc.get(key, Fraction(0)) + to_fraction(coeff)
        return cls(acc)

    # ----- access -----

    def coefficient(self, key: Hashable) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def keys(self) -> List[Hashable]:
        return sorted(self._terms, key=key_order)

    def items(self) -> List[Tuple[Hashable, Fraction]]:
        return [(k, self._terms[k]) for k in self.keys()]

    def terms(self) -> Dict[Hashable, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self.keys())

    def __contains__(self, key: Hashable) -> bool:
        return key in self._terms

    # ----- arithmetic -----

    def __add__(self, other: 'Element') -> 'Element':
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Element):
            return NotImplemented
        acc = dict(self._terms)
        for key, coeff in other._terms.items():
            acc[key] = acc.get(key, Fraction(0)) + coeff
        return Element(acc)

    __radd__ = __add__

    def __neg__(self) -> 'Element':
        return Element({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: 'Element') -> 'Element':
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> 'Element':
        if isinstance(scalar, Element):
            return NotImplemented
        factor = to_fraction(scalar)
        if not factor:
            return Element()
        return Element({k: c * factor for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> 'Element':
        return self * (1 / to_fraction(scalar))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # ----- linear maps -----

    def map(self, fn: Callable[[Hashable], Union['Element', Hashable]]) -> 'Element':
        """
        Linear extension of a key-level map.

        fn may return an Element or a single key (taken with coefficient 1).
        """
        acc: Dict[Hashable, Fraction] = {}
        for key, coeff in self._terms.items():
            add_into(acc, as_element(fn(key)), coeff)
        return Element(acc)

    def filter(self, predicate: Callable[[Hashable], bool]) -> 'Element':
        return Element({k: c for k, c in self._terms.items() if predicate(k)})

    # ----- text and JSON -----

    def __str__(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for index, (key, coeff) in enumerate(self.items()):
            magnitude = abs(coeff)
            body = format_key(key)
            if magnitude != 1:
                body = f"{format_coefficient(magnitude)} {body}"
            if index == 0:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f" - {body}" if coeff < 0 else f" + {body}")
        return ''.join(parts)

    def __repr__(self) -> str:
        return f"Element({self})"

    def to_json(self) -> Dict[str, list]:
        """{"terms": [{"key": ..., "coeff": "p/q"}, ...]} in canonical order."""
        return {
            'terms': [
                {'key': format_key(key), 'coeff': format_coefficient(coeff)}
                for key, coeff in self.items()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], parse_key: Callable[[str], Hashable]) -> 'Element':
        return cls.from_terms(
            (parse_key(term['key']), Fraction(term['coeff'])) for term in data.get('terms', [])
        )


# ========== HELPERS ==========

def as_element(value: Union[Element, Hashable]) -> Element:
    if isinstance(value, Element):
        return value
    return Element.basis(value)


def add_into(acc: Dict[Hashable, Fraction], element: Element, coeff: Scalar = 1) -> None:
    """Accumulate coeff * element into a plain dict (hot-path builder)."""
    factor = to_fraction(coeff)
    if not factor:
        return
    for key, value in element._terms.items():
        acc[key] = acc.get(key, Fraction(0)) + factor * value


def combine(pairs: Iterable[Tuple[Scalar, Element]]) -> Element:
    """
    Normalized linear combination.

    Examples:
        >>> a = Element({'a': 1})
        >>> combine([(1, a), (-1, a)]) == 0
        True
    """
    acc: Dict[Hashable, Fraction] = {}
    for coeff, element in pairs:
        add_into(acc, element, coeff)
    return Element(acc)


def bilinear(fn: Callable[[Hashable, Hashable], Union[Element, Hashable]], a: Element, b: Element) -> Element:
    """Bilinear extension of a map defined on pairs of keys."""
    acc: Dict[Hashable, Fraction] = {}
    for ka, ca in a._terms.items():
        for kb, cb in b._terms.items():
            add_into(acc, as_element(fn(ka, kb)), ca * cb)
    return Element(acc)


def symmetrize(word: Union[Word, Element]) -> Union[Monomial, Element]:
    """Quotient map T(V) -> S(V): forget letter order."""
    if isinstance(word, Element):
        return word.map(lambda w: Monomial(w.letters))
    return Monomial(word.letters)


def word_of(letters: Sequence[Element]) -> Element:
    """Multilinear word x1 x2 ... xk from elements of V."""
    result = Element.basis(Word(()))
    for letter in letters:
        result = bilinear(lambda w, x: Word(w.letters + (x,)), result, letter)
    return result


def monomial_of(letters: Sequence[Element]) -> Element:
    """Multilinear monomial x1 x2 ... xk from elements of V."""
    return symmetrize(word_of(letters))


def concat(a: Element, b: Element) -> Element:
    """Product of T(V): concatenation."""
    return bilinear(lambda u, v: u * v, a, b)


def monomial_product(a: Element, b: Element) -> Element:
    """Product of S(V)."""
    return bilinear(lambda u, v: u * v, a, b)


# ========== TENSORS ==========

def tensor(*factors: Element) -> Element:
    """Tensor product; keys become tuples, one component per factor."""
    acc: Dict[Hashable, Fraction] = {(): Fraction(1)}
    for factor in factors:
        nxt: Dict[Hashable, Fraction] = {}
        for key, coeff in acc.items():
            for fkey, fcoeff in factor._terms.items():
                new_key = key + (fkey,)
                nxt[new_key] = nxt.get(new_key, Fraction(0)) + coeff * fcoeff
        acc = nxt
    return Element(acc)


def tensor_map(x: Element, *fns: Callable[[Hashable], Union[Element, Hashable]]) -> Element:
    """Apply fns[i] to the i-th tensor component; each fn is linear."""
    def on_key(key: tuple) -> Element:
        if len(key) != len(fns):
            raise FamilyMismatchError(f"Tensor of length {len(key)} given {len(fns)} maps")
        return tensor(*(as_element(fn(component)) for fn, component in zip(fns, key)))
    return x.map(on_key)


def flatten_tensor(x: Element) -> Element:
    """((a, b), c) -> (a, b, c); components that are not tuples stay."""
    def flat(key: tuple) -> tuple:
        out: Tuple = ()
        for component in key:
            out += component if isinstance(component, tuple) else (component,)
        return out
    return x.map(flat)


def tensor_product(x: Element, y: Element,
                   products: Sequence[Callable[[Hashable, Hashable], Union[Element, Hashable]]]) -> Element:
    """(a1 ⊗ ... ⊗ an)(b1 ⊗ ... ⊗ bn) = a1b1 ⊗ ... ⊗ anbn with per-component products."""
    def on_pair(kx: tuple, ky: tuple) -> Element:
        return tensor(*(as_element(prod(a, b)) for prod, a, b in zip(products, kx, ky)))
    return bilinear(on_pair, x, y)


def swap_tensor(x: Element) -> Element:
    return x.map(lambda key: (key[1], key[0]))


# ========== PAIRING ==========

def _same_family(a: Hashable, b: Hashable) -> bool:
    if isinstance(a, tuple) or isinstance(b, tuple):
        return (isinstance(a, tuple) and isinstance(b, tuple) and len(a) == len(b)
                and all(_same_family(x, y) for x, y in zip(a, b)))
    if isinstance(a, (Word, Monomial)) or isinstance(b, (Word, Monomial)):
        if type(a) is not type(b):
            return False
        if not a.letters or not b.letters:
            return True
        return _same_family(a.letters[0], b.letters[0])
    return type(a) is type(b)


def key_norm(key: Hashable, weight: Optional[Callable[[Hashable], Scalar]] = None) -> Fraction:
    """
    Self-pairing of a basis key.

    Words pair letterwise; monomials pick up multiplicity factorials from the
    sum over bijections; weight multiplies the pairing of each atomic key.
    """
    if isinstance(key, tuple):
        return math.prod((key_norm(k, weight) for k in key), start=Fraction(1))
    if isinstance(key, Word):
        return math.prod((key_norm(x, weight) for x in key.letters), start=Fraction(1))
    if isinstance(key, Monomial):
        total = Fraction(1)
        for letter, mult in key.multiplicities().items():
            total *= math.factorial(mult) * key_norm(letter, weight) ** mult
        return total
    return to_fraction(weight(key)) if weight is not None else Fraction(1)


def pair(dual: Element, primal: Element, weight: Optional[Callable[[Hashable], Scalar]] = None) -> Fraction:
    """
    Duality pairing between an element of a dual space and a primal element.

    Dual basis keys are written with the same key as their primal partner.
    Distinct canonical keys pair to zero; equal keys pair to key_norm(key).

    Args:
        dual: Element of the dual space
        primal: Element of the primal space
        weight: Optional symmetry-factor weight on atomic keys

    Returns:
        Exact rational value

    Raises:
        FamilyMismatchError: keys of the two sides belong to different families

    Examples:
        >>> pair(Element({Monomial(('x', 'x')): 1}), Element({Monomial(('x', 'x')): 1}))
        Fraction(2, 1)
    """
    if not dual or not primal:
        return Fraction(0)
    first_dual = next(iter(dual._terms))
    first_primal = next(iter(primal._terms))
    if not _same_family(first_dual, first_primal):
        raise FamilyMismatchError(
            f"Cannot pair {format_key(first_dual)} with {format_key(first_primal)}"
        )

    total = Fraction(0)
    for key, coeff in dual._terms.items():
        other = primal._terms.get(key)
        if other:
            total += coeff * other * key_norm(key, weight)
    return total
