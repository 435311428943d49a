"""
Finitely-based symmetric operads.

Each descriptor knows its basis in every arity, its unit, and the partial
composition p o_i q of two basis keys. Everything else (full and multi-slot
composition, the symmetric action, orbit projection) is generic and lives in
module-level functions working on Elements.

Descriptors:
- com            Com:    e_m o_i e_n = e_{m+n-1}
- as             As:     word substitution
- prelie         PreLie: insertion of a tree at a vertex
- qo / o         quasi-orders / orders: sum over admissible composites
- sg / ncsg      simple (acyclic) digraphs, modes 'circ' and 'nabla'

Composites of arity m+n-1 are labelled through the slot relabeling:
outer label j < i stays j, j > i becomes j+n-1, inner label k becomes i+k-1.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .algebra_core import Element, add_into, bilinear, format_key
from .combinatorics import (
    ComGenerator,
    LabelledTree,
    OrbitClass,
    Permutation,
    act,
    all_permutations,
    enumerate_labelled_trees,
    orbit_canonical,
)
from .config import check_guard
from .errors import ArityError, FamilyMismatchError, InvalidObjectError, UnknownSuiteError, UnsupportedOperationError
from .relations import QuasiOrder, SimpleDigraph, enumerate_digraphs, enumerate_quasi_orders, is_convex, is_transitive

logger = logging.getLogger(__name__)

MODES = ('circ', 'nabla')


def slot_relabeling(m: int, n: int, i: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """
    Relabeling of outer labels [m] minus {i} and inner labels [n] onto [m+n-1].

    Examples:
        >>> slot_relabeling(2, 2, 1)
        ({2: 3}, {1: 1, 2: 2})
    """
    outer = {j: (j if j < i else j + n - 1) for j in range(1, m + 1) if j != i}
    inner = {k: i + k - 1 for k in range(1, n + 1)}
    return outer, inner


def object_labels(key: Hashable) -> Tuple:
    """Labels carried by a labelled key."""
    if isinstance(key, Permutation):
        return key.word
    if isinstance(key, LabelledTree):
        return key.vertices
    if isinstance(key, (QuasiOrder, SimpleDigraph)):
        return key.ground
    if isinstance(key, ComGenerator):
        return tuple(range(1, key.n + 1))
    raise FamilyMismatchError(f"Not a labelled object: {format_key(key)}")


# ========== DESCRIPTORS ==========

class OperadDescriptor:
    """Base class: subclasses provide basis(), unit() and _compose()."""

    name = 'operad'
    family = 'perm'
    key_type: type = object

    def __init__(self, mode: str = 'circ'):
        self.mode = mode
        self._compose_cache: Dict[Tuple[Hashable, int, Hashable], Element] = {}

    @property
    def label(self) -> str:
        return self.name if self.mode == 'circ' else f"{self.name}[{self.mode}]"

    def __repr__(self) -> str:
        return f"<operad {self.label}>"

    # ----- basis -----

    def basis(self, n: int) -> List[Hashable]:
        raise NotImplementedError

    def unit(self) -> Hashable:
        raise NotImplementedError

    def arity(self, key: Hashable) -> int:
        return key.arity

    def owns(self, key: Hashable) -> bool:
        return isinstance(key, self.key_type)

    # ----- composition -----

    def compose_keys(self, p: Hashable, i: int, q: Hashable) -> Element:
        """Memoized basis-level p o_i q."""
        m = self.arity(p)
        if not 1 <= i <= m:
            raise ArityError(f"Slot {i} out of range for arity {m} in {self.label}")
        cache_key = (p, i, q)
        cached = self._compose_cache.get(cache_key)
        if cached is None:
            cached = self._compose(p, i, q)
            self._compose_cache[cache_key] = cached
        return cached

    def _compose(self, p: Hashable, i: int, q: Hashable) -> Element:
        raise NotImplementedError

    # ----- symmetric structure -----

    def relabel(self, key: Hashable, mapping: Mapping) -> Hashable:
        return key.relabel(mapping)

    def orbit(self, key: Hashable) -> OrbitClass:
        return orbit_canonical(key)

    def orbit_basis(self, n: int) -> List[OrbitClass]:
        classes = {self.orbit(key) for key in self.basis(n)}
        return sorted(classes, key=OrbitClass.sort_key)


class ComOperad(OperadDescriptor):
    name = 'com'
    family = 'perm'
    key_type = ComGenerator

    def basis(self, n: int) -> List[Hashable]:
        return [ComGenerator(n)] if n >= 1 else []

    def unit(self) -> Hashable:
        return ComGenerator(1)

    def _compose(self, p: ComGenerator, i: int, q: ComGenerator) -> Element:
        return Element.basis(ComGenerator(p.n + q.n - 1))

    def orbit(self, key: Hashable) -> OrbitClass:
        return OrbitClass(key, math.factorial(key.n))


class AssociativeOperad(OperadDescriptor):
    name = 'as'
    family = 'perm'
    key_type = Permutation

    def basis(self, n: int) -> List[Hashable]:
        if n < 1:
            return []
        return sorted(all_permutations(n), key=Permutation.sort_key)

    def unit(self) -> Hashable:
        return Permutation.identity(1)

    def _compose(self, p: Permutation, i: int, q: Permutation) -> Element:
        outer, inner = slot_relabeling(p.arity, q.arity, i)
        word: List[int] = []
        for letter in p.word:
            if letter == i:
                word.extend(inner[k] for k in q.word)
            else:
                word.append(outer[letter])
        return Element.basis(Permutation(tuple(word)))

    def orbit(self, key: Hashable) -> OrbitClass:
        # one orbit per arity, free action
        return OrbitClass(Permutation.identity(key.arity), 1)


class PreLieOperad(OperadDescriptor):
    """Rooted trees; p o_i q replaces vertex i by q and regrafts its children anywhere on q."""

    name = 'prelie'
    family = 'tree'
    key_type = LabelledTree

    def basis(self, n: int) -> List[Hashable]:
        return enumerate_labelled_trees(n)

    def unit(self) -> Hashable:
        return LabelledTree.single(1)

    def _compose(self, p: LabelledTree, i: int, q: LabelledTree) -> Element:
        outer, inner = slot_relabeling(p.arity, q.arity, i)
        p_parent = p.parent_map()
        anchor = p_parent[i]

        base: Dict[int, int] = {}
        grafted: List[int] = []
        for v, par in p_parent.items():
            if v == i:
                continue
            if par == i:
                grafted.append(outer[v])
            else:
                base[outer[v]] = outer[par] if par else 0
        for k, par in q.parent_map().items():
            if par:
                base[inner[k]] = inner[par]
            else:
                base[inner[k]] = outer[anchor] if anchor else 0

        targets = [inner[k] for k in q.vertices]
        acc: Dict[Hashable, int] = {}
        for choice in itertools.product(targets, repeat=len(grafted)):
            parent_of = dict(base)
            parent_of.update(zip(grafted, choice))
            tree = LabelledTree.from_map(parent_of)
            acc[tree] = acc.get(tree, 0) + 1
        return Element(acc)


class QuasiOrderOperad(OperadDescriptor):
    """
    qO (and its quotient O when orders_only).

    p o_i q sums the quasi-orders R on the composite ground set with
    R restricted to the inserted block equal to q, R contracted along the
    block equal to p, and the block R-convex. Inserting the unit gives p back,
    also when the slot shares its class with other elements.
    """

    family = 'qo'
    key_type = QuasiOrder

    def __init__(self, orders_only: bool = False, mode: str = 'circ'):
        if mode != 'circ':
            raise UnsupportedOperationError("Quasi-order operads only compose with 'circ'")
        super().__init__(mode)
        self.orders_only = orders_only
        self.name = 'o' if orders_only else 'qo'

    def basis(self, n: int) -> List[Hashable]:
        if n < 1:
            return []
        return enumerate_quasi_orders(n, orders_only=self.orders_only)

    def unit(self) -> Hashable:
        return QuasiOrder.on(1)

    def _compose(self, p: QuasiOrder, i: int, q: QuasiOrder) -> Element:
        if q.arity == 1:
            return Element.basis(p)
        terms = compose_quasi_orders(p, i, q)
        if self.orders_only:
            terms = [r for r in terms if r.is_order()]
        return Element({r: 1 for r in terms})


def _closed_choices(block: Sequence[int], relation: FrozenSet[Tuple[int, int]],
                    upward: bool, nonempty: bool) -> List[FrozenSet[int]]:
    """Subsets of block closed upward (or downward) in relation; empty set alone if not nonempty."""
    if not nonempty:
        return [frozenset()]
    choices = []
    for size in range(1, len(block) + 1):
        for combo in itertools.combinations(block, size):
            chosen = frozenset(combo)
            if upward:
                ok = all(b in chosen for a, b in relation if a in chosen)
            else:
                ok = all(a in chosen for a, b in relation if b in chosen)
            if ok:
                choices.append(chosen)
    return choices


def compose_quasi_orders(p: QuasiOrder, i: int, q: QuasiOrder) -> List[QuasiOrder]:
    """All admissible composites R for p o_i q in qO (labelled on [m+n-1])."""
    m, n = p.arity, q.arity
    outer, inner = slot_relabeling(m, n, i)
    block = [inner[k] for k in range(1, n + 1)]
    inner_rel = frozenset((inner[a], inner[b]) for a, b in q.relations)

    others = [j for j in range(1, m + 1) if j != i]
    # an outside element equivalent to the slot breaks convexity of the block
    if any(p.leq(j, i) and p.leq(i, j) for j in others):
        return []

    option_lists = []
    for j in others:
        downs = _closed_choices(block, inner_rel, upward=True, nonempty=p.leq(j, i))
        ups = _closed_choices(block, inner_rel, upward=False, nonempty=p.leq(i, j))
        option_lists.append([(d, u) for d in downs for u in ups])

    forced: Set[Tuple[int, int]] = set()
    optional: List[Tuple[int, int]] = []
    for a, b in p.relations:
        if i in (a, b):
            continue
        if p.leq(a, i) and p.leq(i, b):
            optional.append((outer[a], outer[b]))
        else:
            forced.add((outer[a], outer[b]))

    ground = tuple(range(1, m + n))
    results = []
    for assignment in itertools.product(*option_lists):
        base = set(inner_rel) | forced
        for j, (downs, ups) in zip(others, assignment):
            x = outer[j]
            base.update((x, b) for b in downs)
            base.update((b, x) for b in ups)
        for size in range(len(optional) + 1):
            for extra in itertools.combinations(optional, size):
                relation = frozenset(base.union(extra))
                if not is_transitive(relation):
                    continue
                candidate = QuasiOrder(ground, relation)
                if is_convex(candidate, block):
                    results.append(candidate)
    return results


class DigraphOperad(OperadDescriptor):
    """
    SG (all simple digraphs) or NcSG (acyclic ones).

    p o_i q keeps q on the inserted block and the edges of p away from i;
    each edge x->i (resp. i->x) of p becomes a non-empty family of edges into
    (resp. out of) the block. Mode 'circ' also asks the block to be convex.
    Inserting the unit gives p back, also on a cycle through the slot.
    """

    family = 'digraph'
    key_type = SimpleDigraph

    def __init__(self, acyclic: bool = False, mode: str = 'circ'):
        if mode not in MODES:
            raise UnsupportedOperationError(f"Unknown composition mode: {mode}")
        super().__init__(mode)
        self.acyclic = acyclic
        self.name = 'ncsg' if acyclic else 'sg'

    def basis(self, n: int) -> List[Hashable]:
        if n < 1:
            return []
        return enumerate_digraphs(n, acyclic=self.acyclic)

    def unit(self) -> Hashable:
        return SimpleDigraph.on(1)

    def _compose(self, p: SimpleDigraph, i: int, q: SimpleDigraph) -> Element:
        if q.arity == 1:
            return Element.basis(p)
        m, n = p.arity, q.arity
        outer, inner = slot_relabeling(m, n, i)
        block = [inner[k] for k in range(1, n + 1)]
        fixed = {(inner[a], inner[b]) for a, b in q.edges}
        fixed.update((outer[a], outer[b]) for a, b in p.edges if i not in (a, b))

        nonempty_subsets = [frozenset(c) for size in range(1, n + 1)
                            for c in itertools.combinations(block, size)]
        option_lists = []
        for j in (j for j in range(1, m + 1) if j != i):
            ins = nonempty_subsets if (j, i) in p.edges else [frozenset()]
            outs = nonempty_subsets if (i, j) in p.edges else [frozenset()]
            option_lists.append([(outer[j], a, b) for a in ins for b in outs])

        ground = tuple(range(1, m + n))
        acc: Dict[Hashable, int] = {}
        for assignment in itertools.product(*option_lists):
            edges = set(fixed)
            for x, ins, outs in assignment:
                edges.update((x, b) for b in ins)
                edges.update((b, x) for b in outs)
            graph = SimpleDigraph(ground, frozenset(edges))
            if self.mode == 'circ' and not is_convex(graph, block):
                continue
            if self.acyclic and not graph.is_acyclic():
                continue
            acc[graph] = acc.get(graph, 0) + 1
        return Element(acc)


class MutatedOperad(OperadDescriptor):
    """
    Deliberately broken composition, used to check that suites can fail.

    kind 'sign': p o_1 q is negated whenever p has arity >= 2.
    """

    def __init__(self, base: OperadDescriptor, kind: str = 'sign'):
        if kind != 'sign':
            raise UnsupportedOperationError(f"Operads only support the 'sign' mutation, got {kind}")
        super().__init__(base.mode)
        self.base = base
        self.kind = kind
        self.name = f"{base.name}~{kind}"
        self.family = base.family
        self.key_type = base.key_type

    def basis(self, n: int) -> List[Hashable]:
        return self.base.basis(n)

    def unit(self) -> Hashable:
        return self.base.unit()

    def orbit(self, key: Hashable) -> OrbitClass:
        return self.base.orbit(key)

    def _compose(self, p: Hashable, i: int, q: Hashable) -> Element:
        result = self.base.compose_keys(p, i, q)
        if i == 1 and self.arity(p) >= 2:
            return -result
        return result


# ========== REGISTRY ==========

OPERAD_NAMES = ('com', 'as', 'prelie', 'qo', 'o', 'sg', 'ncsg')


@lru_cache(maxsize=None)
def get_operad(name: str, mode: str = 'circ') -> OperadDescriptor:
    """
    Shared descriptor instance (so composition memos are reused).

    Raises:
        UnknownSuiteError: unknown operad name
        UnsupportedOperationError: 'nabla' on an operad without it
    """
    key = name.lower()
    if mode not in MODES:
        raise UnsupportedOperationError(f"Unknown composition mode: {mode}")
    if key in ('com', 'as', 'prelie') and mode != 'circ':
        raise UnsupportedOperationError(f"Operad {key} has no '{mode}' composition")
    if key == 'com':
        return ComOperad()
    if key == 'as':
        return AssociativeOperad()
    if key == 'prelie':
        return PreLieOperad()
    if key in ('qo', 'o'):
        if mode != 'circ':
            raise UnsupportedOperationError(
                "Quasi-orders are not closed under 'nabla' (the image is not a suboperad)")
        return QuasiOrderOperad(orders_only=(key == 'o'))
    if key in ('sg', 'ncsg'):
        return DigraphOperad(acyclic=(key == 'ncsg'), mode=mode)
    raise UnknownSuiteError(f"Unknown operad: {name} (expected one of {OPERAD_NAMES})")


def mutated(descriptor: OperadDescriptor, kind: str = 'sign') -> OperadDescriptor:
    return MutatedOperad(descriptor, kind)


# ========== ELEMENTS ==========

@dataclass(frozen=True)
class OperadElement:
    """Homogeneous element of P(n)."""

    descriptor: OperadDescriptor
    arity: int
    value: Element

    def __post_init__(self):
        for key in self.value.keys():
            if not self.descriptor.owns(key):
                raise FamilyMismatchError(f"{format_key(key)} is not a basis key of {self.descriptor.label}")
            if self.descriptor.arity(key) != self.arity:
                raise ArityError(f"{format_key(key)} has arity {self.descriptor.arity(key)}, expected {self.arity}")

    @classmethod
    def of(cls, descriptor: OperadDescriptor, value) -> 'OperadElement':
        """Wrap a key or a homogeneous non-zero Element."""
        element = value if isinstance(value, Element) else Element.basis(value)
        keys = element.keys()
        if not keys:
            raise ArityError("Cannot infer the arity of the zero element")
        return cls(descriptor, descriptor.arity(keys[0]), element)

    def __add__(self, other: 'OperadElement') -> 'OperadElement':
        _check_same(self, other)
        if self.arity != other.arity:
            raise ArityError(f"Cannot add arities {self.arity} and {other.arity}")
        return OperadElement(self.descriptor, self.arity, self.value + other.value)

    def __mul__(self, scalar) -> 'OperadElement':
        return OperadElement(self.descriptor, self.arity, self.value * scalar)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return str(self.value)


def _check_same(a: OperadElement, b: OperadElement) -> None:
    if a.descriptor is not b.descriptor:
        raise FamilyMismatchError(f"Descriptor mismatch: {a.descriptor.label} vs {b.descriptor.label}")


def unit_element(descriptor: OperadDescriptor) -> OperadElement:
    return OperadElement(descriptor, 1, Element.basis(descriptor.unit()))


# ----- Element-level composition (used by induced structures) -----

def compose_elements(descriptor: OperadDescriptor, p: Element, i: int, q: Element) -> Element:
    return bilinear(lambda a, b: descriptor.compose_keys(a, i, b), p, q)


def compose_keys_at(descriptor: OperadDescriptor, p: Hashable,
                    slots: Sequence[int], qs: Sequence[Hashable]) -> Element:
    """p o_{i1..ik}(q1..qk) on basis keys, slots distinct, other slots get the unit."""
    if len(slots) != len(qs):
        raise ArityError(f"{len(slots)} slots given {len(qs)} operands")
    if len(set(slots)) != len(slots):
        raise ArityError(f"Slots must be distinct: {tuple(slots)}")
    order = sorted(range(len(slots)), key=lambda k: slots[k], reverse=True)
    result = Element.basis(p)
    for k in order:
        q = qs[k]
        result = result.map(lambda key, s=slots[k], q=q: descriptor.compose_keys(key, s, q))
    return result


# ========== OPERATIONS ==========

def partial_compose(p: OperadElement, i: int, q: OperadElement) -> OperadElement:
    """
    p o_i q, bilinear.

    Raises:
        ArityError: i outside 1..arity(p)
        FamilyMismatchError: different descriptors

    Examples:
        As: perm[12] o_1 perm[21] = perm[213]
    """
    _check_same(p, q)
    if not 1 <= i <= p.arity:
        raise ArityError(f"Slot {i} out of range for arity {p.arity}")
    value = compose_elements(p.descriptor, p.value, i, q.value)
    return OperadElement(p.descriptor, p.arity + q.arity - 1, value)


def full_compose(p: OperadElement, qs: Sequence[OperadElement]) -> OperadElement:
    """p o (q1, ..., qn), composing from the last slot down."""
    if len(qs) != p.arity:
        raise ArityError(f"Arity {p.arity} element given {len(qs)} operands")
    result = p
    for slot in range(p.arity, 0, -1):
        result = partial_compose(result, slot, qs[slot - 1])
    return result


def compose_at(p: OperadElement, slots: Sequence[int], qs: Sequence[OperadElement]) -> OperadElement:
    """p o_{i1..ik}(q1..qk): unit padding at the other slots."""
    if len(slots) != len(qs):
        raise ArityError(f"{len(slots)} slots given {len(qs)} operands")
    if len(set(slots)) != len(slots) or any(not 1 <= s <= p.arity for s in slots):
        raise ArityError(f"Invalid slots {tuple(slots)} for arity {p.arity}")
    result = p
    for slot, q in sorted(zip(slots, qs), key=lambda pair: pair[0], reverse=True):
        result = partial_compose(result, slot, q)
    return result


def sym_action(p: OperadElement, sigma: Permutation) -> OperadElement:
    """
    Right action p^sigma (relabel by sigma^{-1}); (p^s)^t = p^{st}.

    Raises:
        ArityError: sigma not in S_arity
    """
    if sigma.arity != p.arity or not sigma.is_standard():
        raise ArityError(f"Permutation {sigma.notation()} does not act on arity {p.arity}")
    value = p.value.map(lambda key: act(key, sigma))
    return OperadElement(p.descriptor, p.arity, value)


def species_relabel(x: Hashable, phi: Mapping) -> Hashable:
    """
    Functorial relabeling of a labelled object along a bijection.

    Raises:
        InvalidObjectError: phi is not a bijection on the labels of x
    """
    labels = object_labels(x)
    missing = [v for v in labels if v not in phi]
    if missing:
        raise InvalidObjectError(f"Relabeling undefined on {missing}")
    images = [phi[v] for v in labels]
    if len(set(images)) != len(images):
        raise InvalidObjectError(f"Relabeling is not injective on {list(labels)}")
    return x.relabel(phi)


def project_to_orbits(descriptor: OperadDescriptor, value: Element) -> Element:
    """Linear map P(n) -> coinvariants, key -> its orbit class."""
    return value.map(descriptor.orbit)
