"""
Truncated character monoids.

Coverage:
- TruncatedSeries construction, truncation and equality
- Composition products on operad coinvariants, decorated trees and pairs
- The two normalizations and the bracket formula
- Inverses (solved degree by degree) and non-invertible inputs
- Action of pair series on tree series
"""

import pytest
import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import given, settings, strategies as st

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from tools.algebra_core import Element
from tools.characters import (
    DecoratedPairs,
    DecoratedTrees,
    OperadCoinvariants,
    TruncatedSeries,
    diamond,
    diamond_prime,
    endo_action,
    exp_bracket_diamond,
    group_inverse,
    series_of,
)
from tools.combinatorics import ComGenerator, DecoratedPair, DecoratedTree, LabelledTree, orbit_canonical
from tools.errors import FamilyMismatchError, NonInvertibleError, UnsupportedOperationError
from tools.operads import get_operad

coefficients = st.fractions(min_value=-3, max_value=3, max_denominator=4)

DOT = DecoratedTree.single(1)
DOT_B = DecoratedTree.single(2)
LADDER = DecoratedTree.from_parent_lists([1, 1], [-1, 0])
CHERRY = DecoratedTree.from_parent_lists([1, 1, 1], [-1, 0, 0])


def e(n: int):
    return orbit_canonical(ComGenerator(n))


def com_series(terms, bound=4) -> TruncatedSeries:
    return series_of({e(n): c for n, c in terms.items()}, bound)


def prelie_orbit(parents):
    return orbit_canonical(LabelledTree.from_map(parents))


# ========== SERIES ==========

class TestTruncatedSeries:
    """Components by degree."""

    def test_drops_high_degrees(self):
        """Terms above the bound never enter"""
        s = com_series({1: 1, 5: 3}, bound=4)
        assert s.degrees() == [1]

    def test_arithmetic(self):
        """Addition keeps the smaller bound"""
        a = com_series({1: 1, 3: 2}, bound=4)
        b = com_series({3: -2}, bound=3)
        total = a + b
        assert total.bound == 3
        assert total == com_series({1: 1}, bound=3)

    def test_below(self):
        """Components strictly below a degree"""
        s = com_series({1: 1, 2: 1, 3: 1})
        assert s.below(3).degrees() == [1, 2]

    def test_json_shape(self):
        """Components keyed by degree"""
        data = com_series({2: Fraction(1, 2)}).to_json()
        assert data['bound'] == 4
        assert data['components']['2'] == {'terms': [{'key': 'orb(e2)', 'coeff': '1/2'}]}


# ========== COMPOSITION PRODUCTS ==========

class TestOperadCoinvariants:
    """Character monoid of a dual operad Hopf algebra."""

    def test_com_diamond(self):
        """(e1 + e2) ◊ (e1 + e2) = e1 + 2 e2 + 2 e3 + e4"""
        carrier = OperadCoinvariants(get_operad('com'))
        x = com_series({1: 1, 2: 1})
        assert diamond(carrier, x, x) == com_series({1: 1, 2: 2, 3: 2, 4: 1})

    def test_diamond_associative(self):
        """(x ◊ y) ◊ z = x ◊ (y ◊ z)"""
        carrier = OperadCoinvariants(get_operad('com'))
        x = com_series({1: 2, 2: 1})
        y = com_series({1: 1, 3: -1})
        z = com_series({1: 1, 2: Fraction(1, 2)})
        assert diamond(carrier, diamond(carrier, x, y), z) == diamond(carrier, x, diamond(carrier, y, z))

    @settings(max_examples=25, deadline=None)
    @given(st.lists(coefficients, min_size=9, max_size=9))
    def test_diamond_associative_random(self, cs):
        """Associativity on random Com series"""
        carrier = OperadCoinvariants(get_operad('com'))
        x, y, z = (com_series({1: cs[k], 2: cs[k + 1], 3: cs[k + 2]}) for k in (0, 3, 6))
        assert diamond(carrier, diamond(carrier, x, y), z) == diamond(carrier, x, diamond(carrier, y, z))

    def test_prime_is_shifted(self):
        """x ◊' y = (x + I) ◊ (y + I) - I"""
        carrier = OperadCoinvariants(get_operad('com'))
        x = com_series({2: 1, 3: 1})
        y = com_series({1: 1, 2: -1})
        unit = carrier.unit()
        shifted = diamond(carrier, x.shift_unit(unit), y.shift_unit(unit))
        expected = shifted - TruncatedSeries.from_element(unit, 4)
        assert diamond_prime(carrier, x, y) == expected

    def test_bracket_formula(self):
        """|e^x, e^y| agrees with ◊' on PreLie coinvariants"""
        carrier = OperadCoinvariants(get_operad('prelie'))
        ladder = prelie_orbit({1: 0, 2: 1})
        x = series_of({ladder: 1}, 4)
        y = series_of({ladder: 2, prelie_orbit({1: 0, 2: 1, 3: 1}): -1}, 4)
        assert exp_bracket_diamond(carrier, x, y) == diamond_prime(carrier, x, y)

    def test_inverse(self):
        """x ◊' x^-1 = 0 = x^-1 ◊' x"""
        carrier = OperadCoinvariants(get_operad('com'))
        x = com_series({1: 1, 2: 1})
        y = group_inverse(carrier, x)
        assert diamond_prime(carrier, x, y).is_zero()
        assert diamond_prime(carrier, y, x).is_zero()

    def test_inverse_of_unit_shift(self):
        """The degree-one coefficient enters the linear factor"""
        carrier = OperadCoinvariants(get_operad('com'))
        y = group_inverse(carrier, com_series({1: 1}))
        assert y.component(1) == Element.basis(e(1), Fraction(-1, 2))

    def test_not_invertible(self):
        """-I has no inverse"""
        carrier = OperadCoinvariants(get_operad('com'))
        with pytest.raises(NonInvertibleError):
            group_inverse(carrier, com_series({1: -1, 2: 1}))

    def test_foreign_keys_rejected(self):
        """Keys of another operad do not belong"""
        carrier = OperadCoinvariants(get_operad('com'))
        with pytest.raises(FamilyMismatchError):
            diamond(carrier, series_of({DOT: 1}, 3), com_series({1: 1}))


class TestDecoratedTrees:
    """Completed free pre-Lie algebra."""

    def test_dot_prime_dot(self):
        """• ◊' • = 2• + ladder + 1/2 cherry"""
        carrier = DecoratedTrees(1)
        dot = series_of({DOT: 1}, 3)
        result = diamond_prime(carrier, dot, dot)
        assert result == series_of({DOT: 2, LADDER: 1, CHERRY: Fraction(1, 2)}, 3)

    def test_recursive_brackets_agree(self):
        """Brackets rebuilt from grafting give the same product"""
        carrier = DecoratedTrees(2)
        x = series_of({DOT: 1, LADDER: -1}, 4)
        y = series_of({DOT_B: 1, DOT: Fraction(1, 3)}, 4)
        assert exp_bracket_diamond(carrier, x, y) == diamond_prime(carrier, x, y)

    def test_associative(self):
        """(x ◊' y) ◊' z = x ◊' (y ◊' z)"""
        carrier = DecoratedTrees(1)
        x = series_of({DOT: 1}, 4)
        y = series_of({LADDER: 1}, 4)
        z = series_of({DOT: -1, CHERRY: 2}, 4)
        lhs = diamond_prime(carrier, diamond_prime(carrier, x, y), z)
        rhs = diamond_prime(carrier, x, diamond_prime(carrier, y, z))
        assert lhs == rhs

    def test_inverse(self):
        """Two-sided inverse of •"""
        carrier = DecoratedTrees(1)
        x = series_of({DOT: 1}, 4)
        y = group_inverse(carrier, x)
        assert y.component(1) == Element.basis(DOT, -1)
        assert diamond_prime(carrier, x, y).is_zero()
        assert diamond_prime(carrier, y, x).is_zero()

    def test_no_plain_diamond(self):
        """Trees have no unit, so no ◊"""
        with pytest.raises(UnsupportedOperationError):
            diamond(DecoratedTrees(1), series_of({DOT: 1}, 2), series_of({DOT: 1}, 2))

    def test_colors_checked(self):
        """Colors above N are foreign"""
        with pytest.raises(FamilyMismatchError):
            diamond_prime(DecoratedTrees(1), series_of({DOT_B: 1}, 2), series_of({DOT: 1}, 2))


class TestDecoratedPairs:
    """Pairs (t, j) with vertex substitution."""

    def test_unit(self):
        """(•, 1) is a two-sided unit for ◊ at N = 1"""
        carrier = DecoratedPairs(1)
        unit = TruncatedSeries.from_element(carrier.unit(), 3)
        x = series_of({DecoratedPair(LADDER, 1): 1, DecoratedPair(DOT, 1): 2}, 3)
        assert diamond(carrier, x, unit) == x
        assert diamond(carrier, unit, x) == x

    def test_substitution(self):
        """(ladder, 1) ◊ (•, 1) keeps the ladder, (ladder, 1) at one slot grafts on any vertex"""
        carrier = DecoratedPairs(1)
        x = series_of({DecoratedPair(LADDER, 1): 1}, 3)
        y = series_of({DecoratedPair(LADDER, 1): 1}, 3)
        result = diamond_prime(carrier, x, y)
        assert result.component(2) == Element.basis(DecoratedPair(LADDER, 1), 2)
        assert result.component(3).coefficient(DecoratedPair(CHERRY, 1)) == 1

    def test_matrix_inverse_refused(self):
        """Degree-one parts with N > 1 are not inverted"""
        carrier = DecoratedPairs(2)
        x = series_of({DecoratedPair(DOT_B, 1): 1}, 2)
        with pytest.raises(UnsupportedOperationError):
            group_inverse(carrier, x)


# ========== ACTION ==========

class TestEndoAction:
    """Pair series acting on tree series."""

    def test_dot_selects_color(self):
        """•a ◁ (q, p) = delta_ap q"""
        x = series_of({DOT: 1}, 3)
        y = series_of({DecoratedPair(LADDER, 1): 1, DecoratedPair(CHERRY, 2): 1}, 3)
        assert endo_action(x, y, colors=2) == series_of({LADDER: 1}, 3)

    def test_prime_keeps_vertices(self):
        """◁' lets any vertex keep its place"""
        x = series_of({LADDER: 1}, 3)
        y = series_of({DecoratedPair(LADDER, 1): 1}, 3)
        result = endo_action(x, y, prime=True, colors=1)
        assert result.component(2) == Element.basis(LADDER)
        assert result.component(3).coefficient(CHERRY) == 1


if __name__ == '__main__':
    pytest.main([__file__, '-v', '--tb=short'])
