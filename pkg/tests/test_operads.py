"""
Operad descriptors and composition.

Coverage:
- Composition tables of Com, As, PreLie, qO/O and SG
- Operad axioms (unit, sequential and parallel associativity) on small arities
- Symmetric action, species relabeling and orbit projection
- Registry, modes and the sign mutation
"""

import pytest
import sys
from pathlib import Path

from hypothesis import given, settings, strategies as st

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from tools.algebra_core import Element
from tools.combinatorics import ComGenerator, LabelledTree, OrbitClass, Permutation
from tools.errors import ArityError, FamilyMismatchError, InvalidObjectError, UnknownSuiteError, UnsupportedOperationError
from tools.operads import (
    OperadElement,
    compose_at,
    compose_keys_at,
    full_compose,
    get_operad,
    mutated,
    partial_compose,
    project_to_orbits,
    slot_relabeling,
    species_relabel,
    sym_action,
    unit_element,
)
from tools.relations import QuasiOrder, SimpleDigraph


def P(digits: str) -> Permutation:
    return Permutation.parse(digits)


def tree(parents) -> LabelledTree:
    return LabelledTree.from_map(parents)


# ========== COMPOSITION TABLES ==========

class TestCompositionTables:
    """Worked compositions."""

    @pytest.mark.parametrize('p, i, q, expected', [
        ('12', 1, '12', '123'), ('12', 1, '21', '213'), ('12', 2, '12', '123'), ('12', 2, '21', '132'),
        ('21', 1, '12', '312'), ('21', 1, '21', '321'), ('21', 2, '12', '231'), ('21', 2, '21', '321'),
    ])
    def test_as(self, p, i, q, expected):
        """All eight arity-2 compositions of As"""
        assert get_operad('as').compose_keys(P(p), i, P(q)) == Element.basis(P(expected))

    def test_com(self):
        """e_m o_i e_n = e_(m+n-1)"""
        com = get_operad('com')
        assert com.compose_keys(ComGenerator(2), 1, ComGenerator(3)) == Element.basis(ComGenerator(4))

    def test_prelie(self):
        """1[2] o_1 1[2] = 1[2,3] + 1[2[3]]"""
        prelie = get_operad('prelie')
        ladder = tree({1: 0, 2: 1})
        expected = Element({tree({1: 0, 2: 1, 3: 1}): 1, tree({1: 0, 2: 1, 3: 2}): 1})
        assert prelie.compose_keys(ladder, 1, ladder) == expected

    def test_prelie_root_slot_grafts_children(self):
        """Children of the replaced vertex regraft anywhere on the inserted tree"""
        prelie = get_operad('prelie')
        corolla = tree({1: 0, 2: 1, 3: 1})
        result = prelie.compose_keys(corolla, 1, tree({1: 0, 2: 1}))
        assert sum(result.terms().values()) == 4

    def test_quasi_order_chain(self):
        """(1<2) o_1 (1<2) in O gives the chain and the fork"""
        o = get_operad('o')
        chain = QuasiOrder.chain(2)
        result = o.compose_keys(chain, 1, chain)
        assert result == Element({QuasiOrder.chain(3): 1, QuasiOrder.on(3, [(1, 2), (1, 3)]): 1})

    def test_quasi_order_equivalence_outer_vanishes(self):
        """An outer equivalence class containing the slot gives 0"""
        qo = get_operad('qo')
        eq = QuasiOrder.on(2, [(1, 2), (2, 1)])
        assert qo.compose_keys(eq, 1, QuasiOrder.chain(2)) == 0

    def test_quasi_order_inner_equivalence(self):
        """(1<2) o_1 (1~2) keeps the class below 3"""
        qo = get_operad('qo')
        eq = QuasiOrder.on(2, [(1, 2), (2, 1)])
        result = qo.compose_keys(QuasiOrder.chain(2), 1, eq)
        assert [k.notation() for k in result.keys()] == ['qo{3; 1~2, 1<3}']
        assert get_operad('o').compose_keys(QuasiOrder.chain(2), 1, eq) == 0

    def test_quasi_order_antichain(self):
        """(1<2) o_2 (antichain) has three terms"""
        qo = get_operad('qo')
        assert len(qo.compose_keys(QuasiOrder.chain(2), 2, QuasiOrder.antichain(2))) == 3

    def test_digraph_modes(self):
        """circ asks for a convex block, nabla does not"""
        cycle = SimpleDigraph.on(2, [(1, 2), (2, 1)])
        empty = SimpleDigraph.on(2)
        assert get_operad('sg', 'circ').compose_keys(cycle, 1, empty) == 0
        assert len(get_operad('sg', 'nabla').compose_keys(cycle, 1, empty)) == 9

    def test_unit_inside_classes_and_cycles(self):
        """p o_i I = p when i shares a class or lies on a cycle"""
        qo = get_operad('qo')
        eq = QuasiOrder.on(2, [(1, 2), (2, 1)])
        assert qo.compose_keys(eq, 1, qo.unit()) == Element.basis(eq)
        assert qo.compose_keys(eq, 2, qo.unit()) == Element.basis(eq)
        big = QuasiOrder.on(3, [(1, 2), (2, 1), (2, 3)])
        for i in (1, 2, 3):
            assert qo.compose_keys(big, i, qo.unit()) == Element.basis(big)
        cycle = SimpleDigraph.on(2, [(1, 2), (2, 1)])
        sg = get_operad('sg', 'circ')
        assert sg.compose_keys(cycle, 1, sg.unit()) == Element.basis(cycle)

    def test_acyclic_digraphs(self):
        """NcSG drops composites with cycles"""
        ncsg = get_operad('ncsg', 'nabla')
        edge = SimpleDigraph.on(2, [(1, 2)])
        for key in ncsg.compose_keys(edge, 1, edge).keys():
            assert key.is_acyclic()


# ========== AXIOMS ==========

SMALL_TREES = [t for n in (1, 2, 3) for t in get_operad('prelie').basis(n)]


class TestAxioms:
    """Unit and associativity on small inputs."""

    @pytest.mark.parametrize('name, mode', [
        ('com', 'circ'), ('as', 'circ'), ('prelie', 'circ'), ('qo', 'circ'), ('o', 'circ'),
        ('sg', 'circ'), ('sg', 'nabla'), ('ncsg', 'circ'),
    ])
    def test_unit(self, name, mode):
        """I o p = p = p o_i I"""
        descriptor = get_operad(name, mode)
        unit = descriptor.unit()
        for p in descriptor.basis(2):
            assert descriptor.compose_keys(unit, 1, p) == Element.basis(p)
            for i in (1, 2):
                assert descriptor.compose_keys(p, i, unit) == Element.basis(p)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from(SMALL_TREES), st.sampled_from(SMALL_TREES), st.sampled_from(SMALL_TREES), st.data())
    def test_sequential_prelie(self, p, q, r, data):
        """(p o_i q) o_(i+j-1) r = p o_i (q o_j r)"""
        prelie = get_operad('prelie')
        i = data.draw(st.integers(1, p.arity))
        j = data.draw(st.integers(1, q.arity))
        lhs = Element.basis(p)
        lhs = lhs.map(lambda k: prelie.compose_keys(k, i, q))
        lhs = lhs.map(lambda k: prelie.compose_keys(k, i + j - 1, r))
        inner = prelie.compose_keys(q, j, r)
        rhs = inner.map(lambda k: prelie.compose_keys(p, i, k))
        assert lhs == rhs

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([t for t in SMALL_TREES if t.arity >= 2]),
           st.sampled_from(SMALL_TREES), st.sampled_from(SMALL_TREES))
    def test_parallel_prelie(self, p, q, r):
        """(p o_2 q) o_1 r = (p o_1 r) o_(2+|r|-1) q"""
        prelie = get_operad('prelie')
        lhs = prelie.compose_keys(p, 2, q).map(lambda k: prelie.compose_keys(k, 1, r))
        rhs = prelie.compose_keys(p, 1, r).map(lambda k: prelie.compose_keys(k, 1 + r.arity, q))
        assert lhs == rhs

    def test_quasi_order_sequential(self):
        """Sequential associativity in qO on arity 2"""
        qo = get_operad('qo')
        for p in qo.basis(2):
            for q in qo.basis(2):
                for r in qo.basis(2):
                    lhs = qo.compose_keys(p, 1, q).map(lambda k: qo.compose_keys(k, 2, r))
                    rhs = qo.compose_keys(q, 2, r).map(lambda k: qo.compose_keys(p, 1, k))
                    assert lhs == rhs

    def test_full_compose_matches_partials(self):
        """p o (q1, q2) = (p o_2 q2) o_1 q1"""
        as_op = get_operad('as')
        p = OperadElement.of(as_op, P('21'))
        q1 = OperadElement.of(as_op, P('12'))
        q2 = OperadElement.of(as_op, P('21'))
        full = full_compose(p, [q1, q2])
        assert full.value == Element.basis(P('4312'))
        assert full.arity == 4
        assert compose_at(p, [1, 2], [q1, q2]).value == full.value


# ========== ELEMENTS AND ACTION ==========

class TestElementsAndAction:
    """Operad elements, symmetric action, relabeling."""

    def test_relabeling_formula(self):
        """Outer labels above the slot shift by n-1"""
        assert slot_relabeling(3, 2, 2) == ({1: 1, 3: 4}, {1: 2, 2: 3})

    def test_partial_compose_checks_slot(self):
        """Slots out of range raise ArityError"""
        com = get_operad('com')
        p = OperadElement.of(com, ComGenerator(2))
        with pytest.raises(ArityError):
            partial_compose(p, 3, p)

    def test_descriptor_mismatch(self):
        """Elements of different operads cannot be composed"""
        a = OperadElement.of(get_operad('com'), ComGenerator(2))
        b = OperadElement.of(get_operad('as'), P('12'))
        with pytest.raises(FamilyMismatchError):
            partial_compose(a, 1, b)

    def test_homogeneous_arity(self):
        """Mixed arities are refused"""
        with pytest.raises(ArityError):
            OperadElement(get_operad('as'), 2, Element({P('12'): 1, P('123'): 1}))

    def test_sym_action(self):
        """(p^s)^t = p^(s o t)"""
        prelie = get_operad('prelie')
        p = OperadElement.of(prelie, tree({1: 0, 2: 1, 3: 2}))
        s, t = P('231'), P('213')
        assert sym_action(sym_action(p, s), t).value == sym_action(p, s.compose(t)).value

    def test_action_on_as(self):
        """The identity acted on by sigma is sigma^-1"""
        as_op = get_operad('as')
        p = OperadElement.of(as_op, Permutation.identity(3))
        assert sym_action(p, P('231')).value == Element.basis(P('312'))

    def test_com_is_invariant(self):
        """e_n is fixed by every permutation"""
        p = OperadElement.of(get_operad('com'), ComGenerator(3))
        assert sym_action(p, P('312')).value == p.value
        with pytest.raises(ArityError):
            sym_action(p, P('21'))

    def test_species_relabel(self):
        """Relabeling along a bijection, refusing non-injective maps"""
        q = QuasiOrder.chain(2)
        assert species_relabel(q, {1: 'a', 2: 'b'}).leq('a', 'b')
        with pytest.raises(InvalidObjectError):
            species_relabel(q, {1: 'a', 2: 'a'})

    def test_project_to_orbits(self):
        """All labelled ladders on 2 vertices share one orbit"""
        prelie = get_operad('prelie')
        value = Element({t: 1 for t in prelie.basis(2)})
        projected = project_to_orbits(prelie, value)
        assert len(projected) == 1
        orbit = projected.keys()[0]
        assert isinstance(orbit, OrbitClass)
        assert projected.coefficient(orbit) == 2

    def test_compose_keys_at_pads_units(self):
        """Multi-slot composition on keys"""
        com = get_operad('com')
        result = compose_keys_at(com, ComGenerator(3), (1, 3), (ComGenerator(2), ComGenerator(2)))
        assert result == Element.basis(ComGenerator(5))
        with pytest.raises(ArityError):
            compose_keys_at(com, ComGenerator(3), (1, 1), (ComGenerator(2), ComGenerator(2)))

    def test_unit_element(self):
        """The unit lives in arity 1"""
        assert unit_element(get_operad('o')).value == Element.basis(QuasiOrder.on(1))


# ========== REGISTRY ==========

class TestRegistry:
    """Names, modes and mutation."""

    def test_shared_instances(self):
        """Descriptors are shared so memos are reused"""
        assert get_operad('prelie') is get_operad('prelie')

    def test_unknown_operad(self):
        """Unknown names are rejected"""
        with pytest.raises(UnknownSuiteError):
            get_operad('lie')

    def test_nabla_restrictions(self):
        """Quasi-orders and Com have no nabla composition"""
        with pytest.raises(UnsupportedOperationError):
            get_operad('qo', 'nabla')
        with pytest.raises(UnsupportedOperationError):
            get_operad('com', 'nabla')

    def test_sign_mutation(self):
        """The mutation negates o_1 in arity >= 2"""
        base = get_operad('prelie')
        broken = mutated(base)
        ladder = tree({1: 0, 2: 1})
        assert broken.compose_keys(ladder, 1, ladder) == -base.compose_keys(ladder, 1, ladder)
        assert broken.compose_keys(ladder, 2, ladder) == base.compose_keys(ladder, 2, ladder)

    def test_other_mutations_refused(self):
        """Only 'sign' mutates an operad"""
        with pytest.raises(UnsupportedOperationError):
            mutated(get_operad('com'), 'swap')


if __name__ == '__main__':
    pytest.main([__file__, '-v', '--tb=short'])
