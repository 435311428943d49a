"""
Free-module arithmetic tests.

Coverage:
- Element normalization, arithmetic and canonical text
- Words, monomials, tensors and their products
- Duality pairing and symmetry weights
- JSON round trip through a key parser
"""

import pytest
import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import given, strategies as st

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from tools.algebra_core import (
    Element,
    Monomial,
    Word,
    bilinear,
    combine,
    concat,
    flatten_tensor,
    format_key,
    key_norm,
    monomial_of,
    monomial_product,
    pair,
    swap_tensor,
    symmetrize,
    tensor,
    tensor_map,
    to_fraction,
    word_of,
)
from tools.combinatorics import ComGenerator
from tools.errors import FamilyMismatchError

E1, E2, E3 = ComGenerator(1), ComGenerator(2), ComGenerator(3)

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def elements():
    return st.dictionaries(st.sampled_from([E1, E2, E3]), coefficients, max_size=3).map(Element)


# ========== ELEMENT ==========

class TestElement:
    """Normalization and arithmetic."""

    def test_zero_coefficients_dropped(self):
        """Zero terms never survive construction"""
        x = Element({E1: 0, E2: 3})
        assert x.keys() == [E2]
        assert len(x) == 1

    def test_floats_refused(self):
        """Coefficients stay exact"""
        with pytest.raises(TypeError):
            Element({E1: 0.5})
        assert to_fraction('3/4') == Fraction(3, 4)

    def test_equality_with_zero(self):
        """element == 0 tests for the zero element"""
        x = Element.basis(E2, 2)
        assert x - x == 0
        assert x != 0

    def test_text_format(self):
        """Canonical order, coefficient before key, signs between terms"""
        x = Element({E3: -1, E1: Fraction(1, 2), E2: 2})
        assert str(x) == '1/2 e1 + 2 e2 - e3'
        assert str(Element()) == '0'

    def test_from_terms_accumulates(self):
        """Repeated keys add up"""
        x = Element.from_terms([(E1, 1), (E1, 2), (E2, -1)])
        assert x.coefficient(E1) == 3
        assert x.coefficient(E2) == -1

    def test_combine_cancels(self):
        """Linear combination of elements"""
        a = Element.basis(E1)
        assert combine([(1, a), (-1, a)]) == 0

    @given(elements(), elements(), coefficients)
    def test_scalar_distributes(self, x, y, c):
        """c (x + y) = c x + c y"""
        assert (x + y) * c == x * c + y * c

    @given(elements(), elements())
    def test_addition_commutes(self, x, y):
        """x + y = y + x"""
        assert x + y == y + x

    @given(elements(), elements(), elements(), coefficients)
    def test_pairing_bilinear(self, f, x, y, c):
        """<f, c x + y> = c <f, x> + <f, y>"""
        assert pair(f, x * c + y) == c * pair(f, x) + pair(f, y)

    def test_map_is_linear(self):
        """map extends key-level functions linearly"""
        x = Element({E1: 2, E2: 1})
        doubled = x.map(lambda k: Element.basis(ComGenerator(k.n + 1), 2))
        assert doubled == Element({E2: 4, E3: 2})


# ========== WORDS AND MONOMIALS ==========

class TestWordsAndMonomials:
    """Tensor and symmetric algebra bases."""

    def test_word_notation(self):
        """Letters joined by spaces, empty word is 1"""
        assert Word((E2, E1)).notation() == 'e2 e1'
        assert Word(()).notation() == '1'

    def test_monomial_sorted(self):
        """Monomials forget letter order"""
        assert Monomial((E2, E1)) == Monomial((E1, E2))
        assert Monomial((E2, E1)).notation() == 'e1·e2'

    def test_word_slicing(self):
        """Slices of words are words"""
        w = Word((E1, E2, E3))
        assert w[1:] == Word((E2, E3))
        assert w[0] == E1

    def test_concat(self):
        """Concatenation is the product of T(V)"""
        a = Element.basis(Word((E1,)))
        b = Element({Word((E2,)): 1, Word(()): 1})
        assert concat(a, b) == Element({Word((E1, E2)): 1, Word((E1,)): 1})

    def test_monomial_product_commutes(self):
        """S(V) is commutative"""
        a = Element.basis(Monomial((E1,)))
        b = Element.basis(Monomial((E2,)))
        assert monomial_product(a, b) == monomial_product(b, a)

    def test_word_of_multilinear(self):
        """word_of expands letters multilinearly"""
        x = Element({E1: 1, E2: 1})
        w = word_of([x, x])
        assert len(w) == 4
        assert symmetrize(w) == Element({Monomial((E1, E1)): 1, Monomial((E1, E2)): 2, Monomial((E2, E2)): 1})
        assert monomial_of([x, x]) == symmetrize(w)


# ========== TENSORS ==========

class TestTensors:
    """Tensor keys are tuples."""

    def test_tensor_notation(self):
        """Components are separated by ⊗"""
        t = tensor(Element.basis(Word((E1,))), Element.basis(Word(())))
        assert str(t) == 'e1 ⊗ 1'

    def test_swap(self):
        """swap exchanges the two components"""
        t = tensor(Element.basis(E1), Element.basis(E2))
        assert swap_tensor(t) == tensor(Element.basis(E2), Element.basis(E1))

    def test_tensor_map(self):
        """tensor_map applies one map per component"""
        t = tensor(Element.basis(E1), Element.basis(E2))
        bumped = tensor_map(t, lambda k: ComGenerator(k.n + 1), lambda k: Element.basis(k, 3))
        assert bumped == Element({(E2, E2): 3})

    def test_tensor_map_length_mismatch(self):
        """A wrong number of maps is a family mismatch"""
        t = tensor(Element.basis(E1), Element.basis(E2))
        with pytest.raises(FamilyMismatchError):
            tensor_map(t, lambda k: k)

    def test_flatten(self):
        """Nested tensor keys flatten"""
        nested = Element.basis(((E1, E2), E3))
        assert flatten_tensor(nested) == Element.basis((E1, E2, E3))

    def test_format_key_of_tuple(self):
        """Tuple keys print their components"""
        assert format_key((E1, E2)) == 'e1 ⊗ e2'

    def test_bilinear(self):
        """bilinear expands both arguments"""
        x = Element({E1: 1, E2: 2})
        result = bilinear(lambda a, b: ComGenerator(a.n + b.n), x, Element.basis(E1, 3))
        assert result == Element({E2: 3, E3: 6})


# ========== PAIRING ==========

class TestPairing:
    """Duality pairing between dual and primal elements."""

    def test_kronecker_on_words(self):
        """Distinct words pair to zero, equal words to one"""
        a = Element.basis(Word((E1, E2)))
        b = Element.basis(Word((E2, E1)))
        assert pair(a, a) == 1
        assert pair(a, b) == 0

    def test_monomial_multiplicity(self):
        """Repeated letters contribute a factorial"""
        x = Element.basis(Monomial((E1, E1, E2)))
        assert pair(x, x) == 2

    def test_weighted(self):
        """Weights multiply atomic pairings"""
        key = Monomial((E2, E2))
        assert key_norm(key, weight=lambda k: k.n) == 2 * 2 * 2

    def test_family_mismatch(self):
        """Words cannot pair with monomials"""
        with pytest.raises(FamilyMismatchError):
            pair(Element.basis(Word((E1,))), Element.basis(Monomial((E1,))))


# ========== JSON ==========

class TestJson:
    """Serialization."""

    def test_round_trip(self):
        """to_json / from_json with a key parser"""
        x = Element({E1: Fraction(-1, 3), E3: 2})
        data = x.to_json()
        assert data == {'terms': [{'key': 'e1', 'coeff': '-1/3'}, {'key': 'e3', 'coeff': '2'}]}
        parsed = Element.from_json(data, lambda text: ComGenerator(int(text[1:])))
        assert parsed == x


if __name__ == '__main__':
    pytest.main([__file__, '-v', '--tb=short'])
