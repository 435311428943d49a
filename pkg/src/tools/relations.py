"""
Quasi-orders and simple digraphs on finite label sets.

Both types store their full relation (quasi-orders as the transitive
relation minus the diagonal, digraphs as the edge set), so restriction and
contraction stay local set computations. Labels are positive integers,
plus string labels for contracted vertices (e.g. 'a').

Architecture:
1. QuasiOrder / SimpleDigraph: frozen value types, canonical text notation
2. Enumerators: recursive extension for quasi-orders, subsets for digraphs
3. Restriction / contraction / convexity / ideal / connectivity toolkit,
   with networkx doing reachability and weak connectivity
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from .config import check_guard
from .errors import InvalidObjectError

logger = logging.getLogger(__name__)

Label = Union[int, str]
Pair = Tuple[Label, Label]


def label_key(label: Label) -> tuple:
    """Integers before strings, each in natural order."""
    return (isinstance(label, str), label)


def _sorted_labels(labels: Iterable[Label]) -> Tuple[Label, ...]:
    return tuple(sorted(labels, key=label_key))


def _pair_key(pair: Pair) -> tuple:
    return (label_key(pair[0]), label_key(pair[1]))


def transitive_closure(ground: Sequence[Label], pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    """Smallest transitive relation containing pairs, diagonal dropped."""
    above: Dict[Label, Set[Label]] = {x: set() for x in ground}
    for x, y in pairs:
        if x != y:
            above[x].add(y)
    for k in ground:
        for x in ground:
            if k in above[x]:
                above[x] |= above[k]
    return frozenset((x, y) for x in ground for y in above[x] if x != y)


def is_transitive(pairs: FrozenSet[Pair]) -> bool:
    """Transitivity of a diagonal-free relation (reflexivity implied)."""
    successors: Dict[Label, Set[Label]] = {}
    for x, y in pairs:
        successors.setdefault(x, set()).add(y)
    for x, y in pairs:
        for z in successors.get(y, ()):
            if z != x and (x, z) not in pairs:
                return False
    return True


def _format_ground(ground: Tuple[Label, ...]) -> str:
    if ground == tuple(range(1, len(ground) + 1)):
        return str(len(ground))
    return '[' + ','.join(str(v) for v in ground) + ']'


# ========== QUASI-ORDERS ==========

@dataclass(frozen=True)
class QuasiOrder:
    """
    Reflexive transitive relation on a finite ground set.

    `relations` holds the pairs (x, y) with x <= y and x != y. An order is a
    quasi-order with no pair in both directions.
    """

    ground: Tuple[Label, ...]
    relations: FrozenSet[Pair]

    @classmethod
    def on(cls, n: int, pairs: Iterable[Pair] = ()) -> 'QuasiOrder':
        """Transitive closure of pairs on [n]."""
        ground = tuple(range(1, n + 1))
        return cls(ground, transitive_closure(ground, pairs))

    @classmethod
    def from_pairs(cls, ground: Iterable[Label], pairs: Iterable[Pair]) -> 'QuasiOrder':
        ordered = _sorted_labels(ground)
        return cls(ordered, transitive_closure(ordered, pairs))

    @classmethod
    def chain(cls, n: int) -> 'QuasiOrder':
        return cls.on(n, [(i, i + 1) for i in range(1, n)])

    @classmethod
    def antichain(cls, n: int) -> 'QuasiOrder':
        return cls.on(n)

    @property
    def arity(self) -> int:
        return len(self.ground)

    def leq(self, x: Label, y: Label) -> bool:
        return x == y or (x, y) in self.relations

    def equivalent(self, x: Label, y: Label) -> bool:
        return self.leq(x, y) and self.leq(y, x)

    def is_order(self) -> bool:
        return all((y, x) not in self.relations for x, y in self.relations)

    def relabel(self, mapping: Mapping[Label, Label]) -> 'QuasiOrder':
        return QuasiOrder(
            _sorted_labels(mapping[v] for v in self.ground),
            frozenset((mapping[x], mapping[y]) for x, y in self.relations),
        )

    def standardize(self) -> 'QuasiOrder':
        """Order-preserving relabel onto [n]."""
        return self.relabel({v: i for i, v in enumerate(self.ground, start=1)})

    def to_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.ground)
        graph.add_edges_from(self.relations)
        return graph

    def sort_key(self) -> tuple:
        return (len(self.ground), tuple(label_key(v) for v in self.ground),
                tuple(sorted(_pair_key(p) for p in self.relations)))

    def generators(self) -> List[Tuple[Label, str, Label]]:
        """Cover relations between classes ('<') and class chains ('~')."""
        classes: List[List[Label]] = []
        seen: Set[Label] = set()
        for v in self.ground:
            if v in seen:
                continue
            members = [w for w in self.ground if self.equivalent(v, w)]
            seen.update(members)
            classes.append(members)

        items: List[Tuple[Label, str, Label]] = []
        for members in classes:
            for a, b in zip(members, members[1:]):
                items.append((a, '~', b))

        heads = [members[0] for members in classes]
        for a in heads:
            for b in heads:
                if a == b or not self.leq(a, b) or self.leq(b, a):
                    continue
                between = any(
                    c not in (a, b) and self.leq(a, c) and self.leq(c, b)
                    and not self.leq(c, a) and not self.leq(b, c)
                    for c in heads
                )
                if not between:
                    items.append((a, '<', b))

        items.sort(key=lambda item: (label_key(item[0]), label_key(item[2]), item[1]))
        return items

    def notation(self) -> str:
        """
        Canonical text: "qo{n; 1<2, 2~3}".

        Examples:
            >>> QuasiOrder.chain(3).notation()
            'qo{3; 1<2, 2<3}'
        """
        head = _format_ground(self.ground)
        items = self.generators()
        if not items:
            return f"qo{{{head}}}"
        body = ', '.join(f"{a}{op}{b}" for a, op, b in items)
        return f"qo{{{head}; {body}}}"


# ========== SIMPLE DIGRAPHS ==========

@dataclass(frozen=True)
class SimpleDigraph:
    """Directed graph without loops or parallel edges."""

    ground: Tuple[Label, ...]
    edges: FrozenSet[Pair]

    def __post_init__(self):
        if any(x == y for x, y in self.edges):
            raise InvalidObjectError(f"Simple digraphs have no loops: {sorted(self.edges)}")

    @classmethod
    def on(cls, n: int, edges: Iterable[Pair] = ()) -> 'SimpleDigraph':
        return cls(tuple(range(1, n + 1)), frozenset(edges))

    @classmethod
    def from_edges(cls, ground: Iterable[Label], edges: Iterable[Pair]) -> 'SimpleDigraph':
        return cls(_sorted_labels(ground), frozenset(edges))

    @property
    def arity(self) -> int:
        return len(self.ground)

    @property
    def relations(self) -> FrozenSet[Pair]:
        return self.edges

    def relabel(self, mapping: Mapping[Label, Label]) -> 'SimpleDigraph':
        return SimpleDigraph(
            _sorted_labels(mapping[v] for v in self.ground),
            frozenset((mapping[x], mapping[y]) for x, y in self.edges),
        )

    def standardize(self) -> 'SimpleDigraph':
        return self.relabel({v: i for i, v in enumerate(self.ground, start=1)})

    def to_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.ground)
        graph.add_edges_from(self.edges)
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_graph())

    def sort_key(self) -> tuple:
        return (len(self.ground), tuple(label_key(v) for v in self.ground),
                tuple(sorted(_pair_key(p) for p in self.edges)))

    def notation(self) -> str:
        head = _format_ground(self.ground)
        if not self.edges:
            return f"dg{{{head}}}"
        body = ', '.join(f"{x}->{y}" for x, y in sorted(self.edges, key=_pair_key))
        return f"dg{{{head}; {body}}}"


Relational = Union[QuasiOrder, SimpleDigraph]


# ========== ENUMERATION ==========

def _closed_subsets(elements: Sequence[int], closed) -> List[FrozenSet[int]]:
    subsets = []
    for size in range(len(elements) + 1):
        for combo in itertools.combinations(elements, size):
            candidate = frozenset(combo)
            if closed(candidate):
                subsets.append(candidate)
    return subsets


@lru_cache(maxsize=None)
def _quasi_order_relations(n: int) -> Tuple[FrozenSet[Pair], ...]:
    if n == 0:
        return (frozenset(),)

    results = []
    new = n
    elements = list(range(1, n))
    for rel in _quasi_order_relations(n - 1):
        # new element sits above the down-set D and below the up-set U
        downsets = _closed_subsets(
            elements, lambda s: all(x in s for (x, y) in rel if y in s))
        upsets = _closed_subsets(
            elements, lambda s: all(y in s for (x, y) in rel if x in s))
        for down in downsets:
            for up in upsets:
                if all(d == u or (d, u) in rel for d in down for u in up):
                    extended = set(rel)
                    extended.update((d, new) for d in down)
                    extended.update((new, u) for u in up)
                    results.append(frozenset(extended))
    return tuple(results)


def enumerate_quasi_orders(n: int, orders_only: bool = False) -> List[QuasiOrder]:
    """
    All quasi-orders (or orders) on [n], canonically sorted.

    Examples:
        >>> len(enumerate_quasi_orders(2)), len(enumerate_quasi_orders(2, orders_only=True))
        (4, 3)
    """
    check_guard('qo', n)
    ground = tuple(range(1, n + 1))
    objects = [QuasiOrder(ground, rel) for rel in _quasi_order_relations(n)]
    if orders_only:
        objects = [q for q in objects if q.is_order()]
    return sorted(objects, key=QuasiOrder.sort_key)


def enumerate_digraphs(n: int, acyclic: bool = False) -> List[SimpleDigraph]:
    """All simple digraphs on [n] (2^{n(n-1)} of them), optionally only acyclic ones."""
    check_guard('digraph', n)
    ground = tuple(range(1, n + 1))
    pairs = [(x, y) for x in ground for y in ground if x != y]
    graphs = []
    for mask in range(1 << len(pairs)):
        edges = frozenset(p for bit, p in enumerate(pairs) if mask >> bit & 1)
        graph = SimpleDigraph(ground, edges)
        if acyclic and not graph.is_acyclic():
            continue
        graphs.append(graph)
    return sorted(graphs, key=SimpleDigraph.sort_key)


# ========== RESTRICTION / CONTRACTION TOOLKIT ==========

def _check_subset(x: Relational, subset: Iterable[Label]) -> FrozenSet[Label]:
    chosen = frozenset(subset)
    if not chosen:
        raise InvalidObjectError("Vertex subset must be non-empty")
    missing = chosen - set(x.ground)
    if missing:
        raise InvalidObjectError(f"Vertices {sorted(missing, key=label_key)} not in ground set")
    return chosen


def restrict(x: Relational, subset: Iterable[Label]) -> Relational:
    """Induced relation (or induced subgraph) on subset, labels kept."""
    chosen = _check_subset(x, subset)
    kept = frozenset((a, b) for a, b in x.relations if a in chosen and b in chosen)
    if isinstance(x, QuasiOrder):
        return QuasiOrder(_sorted_labels(chosen), kept)
    return SimpleDigraph(_sorted_labels(chosen), kept)


def contract(x: Relational, subset: Iterable[Label], label: Label) -> Relational:
    """
    Merge subset into the single vertex `label`.

    Quasi-orders: for outside x, y
      x <= y   iff x <= y, or x <= i and j <= y for some i, j in the subset
      x <= a   iff x <= i for some i in the subset
      a <= y   iff i <= y for some i in the subset
    Digraphs: outside edges kept, edges into/out of the subset redirected to
    the new vertex, loops dropped.
    """
    chosen = _check_subset(x, subset)
    if label in x.ground and label not in chosen:
        raise InvalidObjectError(f"Contraction label {label!r} already names an outside vertex")

    outside = [v for v in x.ground if v not in chosen]
    ground = _sorted_labels(outside + [label])

    if isinstance(x, QuasiOrder):
        below = {v for v in outside if any(x.leq(v, i) for i in chosen)}
        above = {v for v in outside if any(x.leq(i, v) for i in chosen)}
        pairs = set()
        for a in outside:
            for b in outside:
                if a != b and (x.leq(a, b) or (a in below and b in above)):
                    pairs.add((a, b))
        pairs.update((v, label) for v in below)
        pairs.update((label, v) for v in above)
        return QuasiOrder(ground, frozenset(pairs))

    edges = set()
    for a, b in x.edges:
        src = label if a in chosen else a
        dst = label if b in chosen else b
        if src != dst:
            edges.add((src, dst))
    return SimpleDigraph(ground, frozenset(edges))


def is_convex(x: Relational, subset: Iterable[Label]) -> bool:
    """
    x, z in the subset and x <= y <= z force y in the subset.

    For digraphs "<=" is reachability along directed paths.
    """
    chosen = _check_subset(x, subset)
    if isinstance(x, QuasiOrder):
        for y in x.ground:
            if y in chosen:
                continue
            if any(x.leq(a, y) for a in chosen) and any(x.leq(y, b) for b in chosen):
                return False
        return True

    graph = x.to_graph()
    reachable_from: Set[Label] = set()
    reaching: Set[Label] = set()
    for v in chosen:
        reachable_from |= nx.descendants(graph, v)
        reaching |= nx.ancestors(graph, v)
    return not ((reachable_from & reaching) - chosen)


def is_ideal(x: Relational, subset: Iterable[Label]) -> bool:
    """Upward closure: i in the subset and i <= y force y in the subset."""
    chosen = _check_subset(x, subset)
    if isinstance(x, QuasiOrder):
        return all(b in chosen for a, b in x.relations if a in chosen)
    graph = x.to_graph()
    return all(nx.descendants(graph, v) <= chosen for v in chosen)


def is_connected(x: Relational, subset: Optional[Iterable[Label]] = None) -> bool:
    """Weak connectivity of the induced relation on subset (default: everything)."""
    target = x if subset is None else restrict(x, subset)
    if not target.ground:
        return False
    return nx.is_weakly_connected(target.to_graph())


SUB_QUOTIENT_MODES = ('restrict', 'contract', 'is_convex', 'is_ideal', 'is_connected')


def sub_quotient(x: Relational, subset: Iterable[Label], mode: str,
                 label: Label = 'a') -> Union[Relational, bool]:
    """
    Single entry point for the restriction/contraction toolkit.

    Args:
        x: Quasi-order or simple digraph
        subset: Non-empty vertex subset
        mode: One of restrict, contract, is_convex, is_ideal, is_connected
        label: New vertex name for contract

    Examples:
        >>> sub_quotient(QuasiOrder.chain(3), {2, 3}, 'contract').notation()
        'qo{[1,a]; 1<a}'
    """
    if mode == 'restrict':
        return restrict(x, subset)
    if mode == 'contract':
        return contract(x, subset, label)
    if mode == 'is_convex':
        return is_convex(x, subset)
    if mode == 'is_ideal':
        return is_ideal(x, subset)
    if mode == 'is_connected':
        return is_connected(x, subset)
    raise InvalidObjectError(f"Unknown sub_quotient mode: {mode} (expected one of {SUB_QUOTIENT_MODES})")
