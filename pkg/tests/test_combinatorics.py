"""
Combinatorial objects and enumeration.

Coverage:
- Permutations: parsing, inverse, standardization, action
- Labelled trees and decorated tree isoclasses (codes, symmetry factors)
- Enumeration counts per family (OEIS-checked small values)
- Orbit classes and symmetry factors
"""

import math
import pytest
import sys
from pathlib import Path

from hypothesis import given, strategies as st

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from tools.combinatorics import (
    ComGenerator,
    DecoratedPair,
    DecoratedTree,
    Exponent,
    LabelledTree,
    Permutation,
    act,
    all_permutations,
    enumerate_decorated_trees,
    enumerate_forests,
    enumerate_labelled_trees,
    enumerate_objects,
    orbit_canonical,
    standardize,
)
from tools.errors import InvalidObjectError, UnknownSuiteError
from tools.relations import QuasiOrder


# ========== PERMUTATIONS ==========

class TestPermutation:
    """One-line permutations."""

    def test_parse_and_notation(self):
        """perm[...] notation round trip"""
        sigma = Permutation.parse('312')
        assert sigma.notation() == 'perm[312]'
        assert sigma(1) == 3
        assert sigma.arity == 3

    def test_inverse(self):
        """sigma o sigma^-1 is the identity"""
        sigma = Permutation.parse('2431')
        assert sigma.compose(sigma.inverse()) == Permutation.identity(4)

    def test_rejects_repeats(self):
        """Repeated letters are not a permutation"""
        with pytest.raises(InvalidObjectError):
            Permutation((1, 1, 2))

    def test_standardize(self):
        """Order-isomorphic standard permutation"""
        assert standardize((5, 2, 9)) == Permutation.parse('213')
        with pytest.raises(InvalidObjectError):
            standardize((3, 3))

    def test_action(self):
        """x^sigma relabels by sigma^-1"""
        assert act(Permutation.parse('12'), Permutation.parse('21')) == Permutation.parse('21')
        rho = Permutation.parse('231')
        assert act(Permutation.identity(3), rho) == rho.inverse()

    @given(st.permutations([1, 2, 3, 4]), st.permutations([1, 2, 3, 4]))
    def test_action_is_right_action(self, a, b):
        """(x^s)^t = x^(s o t)"""
        s, t = Permutation(tuple(a)), Permutation(tuple(b))
        x = Permutation.parse('2143')
        assert act(act(x, s), t) == act(x, s.compose(t))


# ========== TREES ==========

class TestTrees:
    """Labelled trees and isoclasses."""

    def test_labelled_notation(self):
        """Root first, children bracketed and sorted"""
        tree = LabelledTree.from_map({1: 0, 3: 1, 2: 1})
        assert tree.notation() == 'tree[1[2,3]]'
        assert tree.arity == 3
        assert tree.children(1) == [2, 3]

    def test_single_root_required(self):
        """A forest is not a tree"""
        with pytest.raises(InvalidObjectError):
            LabelledTree(((1, 0), (2, 0)))

    def test_shape(self):
        """Forgetting labels gives the isoclass"""
        tree = LabelledTree.from_map({2: 0, 1: 2, 3: 1})
        assert tree.shape().notation() == 'dtree[a[a[a]]]'

    def test_decorated_canonical(self):
        """Children are sorted canonically"""
        t1 = DecoratedTree((1, ((2, ()), (1, ()))))
        t2 = DecoratedTree.from_parent_lists([1, 1, 2], [-1, 0, 0])
        assert DecoratedTree((1, tuple(sorted(t1.code[1])))) == t2
        assert t2.notation() == 'dtree[a[a,b]]'

    def test_parent_lists_round_trip(self):
        """Preorder parent lists rebuild the same isoclass"""
        for tree in enumerate_decorated_trees(4, 2):
            colors, parents = tree.to_parent_lists()
            assert DecoratedTree.from_parent_lists(colors, parents) == tree
            assert parents[0] == -1

    def test_symmetry_factors(self):
        """Automorphism group orders"""
        corolla = DecoratedTree.from_parent_lists([1, 1, 1, 1], [-1, 0, 0, 0])
        ladder = DecoratedTree.from_parent_lists([1, 1, 1], [-1, 0, 1])
        mixed = DecoratedTree.from_parent_lists([1, 1, 2], [-1, 0, 0])
        assert corolla.symmetry_factor() == 6
        assert ladder.symmetry_factor() == 1
        assert mixed.symmetry_factor() == 1

    def test_pair_notation(self):
        """Pairs print their tree body and output color"""
        pair = DecoratedPair(DecoratedTree.from_parent_lists([1, 1], [-1, 0]), 2)
        assert pair.notation() == 'dpair[a[a]; 2]'
        assert pair.size == 2


# ========== ENUMERATION ==========

class TestEnumeration:
    """Complete, duplicate-free enumeration."""

    @pytest.mark.parametrize('n, count', [(1, 1), (2, 2), (3, 9), (4, 64)])
    def test_labelled_trees(self, n, count):
        """n^(n-1) rooted labelled trees"""
        trees = enumerate_labelled_trees(n)
        assert len(trees) == count
        assert len(set(trees)) == count

    @pytest.mark.parametrize('n, colors, count', [(1, 1, 1), (3, 1, 2), (4, 1, 4), (5, 1, 9), (2, 2, 4), (3, 2, 14)])
    def test_decorated_trees(self, n, colors, count):
        """Rooted tree isoclasses, colored"""
        assert len(enumerate_decorated_trees(n, colors)) == count

    @pytest.mark.parametrize('family, n, count', [
        ('perm', 3, 6), ('com', 4, 1), ('qo', 3, 29), ('order', 3, 19),
        ('dg', 2, 4), ('ncdg', 2, 3), ('ncdg', 3, 25), ('dpair', 2, 1),
    ])
    def test_family_counts(self, family, n, count):
        """Known counts per family"""
        objects = enumerate_objects(family, n)
        assert len(objects) == count
        assert len(set(objects)) == count

    def test_sorted_output(self):
        """Enumeration is canonically sorted"""
        perms = enumerate_objects('perm', 3)
        assert perms == sorted(perms, key=Permutation.sort_key)
        assert perms[0] == Permutation.identity(3)

    def test_forests(self):
        """Forests with 3 vertices, one color: •••, •ladder, ladder3, corolla3"""
        assert len(enumerate_forests(3)) == 4

    def test_unknown_family(self):
        """Unknown family names are rejected"""
        with pytest.raises(UnknownSuiteError):
            enumerate_objects('graphs', 2)


# ========== ORBITS ==========

class TestOrbits:
    """Orbit classes under relabeling."""

    def test_tree_orbits(self):
        """Labelled trees on 3 vertices form two orbits"""
        orbits = {orbit_canonical(t) for t in enumerate_labelled_trees(3)}
        assert len(orbits) == 2
        corolla = orbit_canonical(LabelledTree.from_map({1: 0, 2: 1, 3: 1}))
        assert corolla.symmetry == 2

    def test_orbit_stabilizer(self):
        """|orbit| * symmetry = n!"""
        trees = enumerate_labelled_trees(4)
        for orbit in {orbit_canonical(t) for t in trees}:
            size = sum(1 for t in trees if orbit_canonical(t) == orbit)
            assert size * orbit.symmetry == math.factorial(4)

    def test_poset_orbits(self):
        """Five unlabelled posets on three elements"""
        orders = enumerate_objects('order', 3)
        assert len({orbit_canonical(p) for p in orders}) == 5

    def test_antichain_symmetry(self):
        """The antichain is fixed by every relabeling"""
        assert orbit_canonical(QuasiOrder.antichain(3)).symmetry == 6

    def test_orbit_notation(self):
        """orb(...) wraps the canonical representative"""
        assert orbit_canonical(ComGenerator(3)).notation() == 'orb(e3)'


class TestExponent:
    """Quasi-shuffle letters."""

    def test_addition(self):
        """Exponents add componentwise"""
        assert Exponent((1, 0)) + Exponent((0, 2)) == Exponent((1, 2))
        assert Exponent((1, 2)).notation() == 'X[1,2]'

    def test_length_mismatch(self):
        """Different lengths cannot be added"""
        with pytest.raises(InvalidObjectError):
            Exponent((1,)) + Exponent((1, 0))


if __name__ == '__main__':
    pytest.main([__file__, '-v', '--tb=short'])
