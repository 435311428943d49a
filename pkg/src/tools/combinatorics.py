"""
Canonical combinatorial keys.

Key families (all frozen, hashable, with sort_key() and notation()):
- Permutation       "perm[213]"        basis of As(n)
- ComGenerator      "e3"               basis of Com(n)
- LabelledTree      "tree[1[2,3]]"     basis of PreLie(n)
- DecoratedTree     "dtree[a[b,c]]"    rooted-tree isoclass, vertices colored in [N]
- DecoratedPair     "dpair[a[b]; 1]"   decorated tree with an output color
- Exponent          "X[1,0]"           quasi-shuffle letter X_alpha
- OrbitClass        "orb(tree[1[2]])"  symmetric-group orbit with symmetry factor
Quasi-orders and digraphs live in relations.py.

Colors are integers 1..N written as letters a, b, c, ...; N=1 is the
undecorated case.
"""

import itertools
import logging
import math
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .config import check_guard
from .errors import InvalidObjectError, UnknownSuiteError
from .relations import QuasiOrder, SimpleDigraph, enumerate_digraphs, enumerate_quasi_orders

logger = logging.getLogger(__name__)

COLOR_LETTERS = string.ascii_lowercase


def color_letter(color: int) -> str:
    return COLOR_LETTERS[color - 1]


def letter_color(letter: str) -> int:
    return COLOR_LETTERS.index(letter) + 1


# ========== PERMUTATIONS ==========

@dataclass(frozen=True)
class Permutation:
    """
    Word of distinct labels, read as the total order of the As species.

    On [n] this is the one-line notation sigma(1)...sigma(n).
    """

    word: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'word', tuple(self.word))
        if len(set(self.word)) != len(self.word) or any(v < 1 for v in self.word):
            raise InvalidObjectError(f"Not a permutation word: {self.word}")

    @classmethod
    def identity(cls, n: int) -> 'Permutation':
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, digits: str) -> 'Permutation':
        return cls(tuple(int(c) for c in digits))

    @property
    def arity(self) -> int:
        return len(self.word)

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    def is_standard(self) -> bool:
        return sorted(self.word) == list(range(1, len(self.word) + 1))

    def inverse(self) -> 'Permutation':
        inv = [0] * len(self.word)
        for position, value in enumerate(self.word, start=1):
            inv[value - 1] = position
        return Permutation(tuple(inv))

    def compose(self, other: 'Permutation') -> 'Permutation':
        """(self o other)(i) = self(other(i))."""
        return Permutation(tuple(self(other(i)) for i in range(1, other.arity + 1)))

    def as_mapping(self) -> Dict[int, int]:
        return {i: v for i, v in enumerate(self.word, start=1)}

    def relabel(self, mapping: Mapping[int, int]) -> 'Permutation':
        return Permutation(tuple(mapping[v] for v in self.word))

    def sort_key(self) -> tuple:
        return (len(self.word), self.word)

    def notation(self) -> str:
        return f"perm[{''.join(str(v) for v in self.word)}]"


def all_permutations(n: int) -> List[Permutation]:
    check_guard('perm', n)
    return [Permutation(w) for w in itertools.permutations(range(1, n + 1))]


def standardize(word: Sequence[int]) -> Permutation:
    """
    Order-isomorphic permutation of a word of distinct integers.

    Raises:
        InvalidObjectError: repeated letters

    Examples:
        >>> standardize((5, 2, 9)).notation()
        'perm[213]'
    """
    if len(set(word)) != len(word):
        raise InvalidObjectError(f"Cannot standardize a word with repeated letters: {tuple(word)}")
    ranks = {value: rank for rank, value in enumerate(sorted(word), start=1)}
    return Permutation(tuple(ranks[v] for v in word))


# ========== COM GENERATORS ==========

@dataclass(frozen=True)
class ComGenerator:
    """e_n, the single basis element of Com(n)."""

    n: int

    @property
    def arity(self) -> int:
        return self.n

    def relabel(self, mapping: Mapping[int, int]) -> 'ComGenerator':
        return self

    def sort_key(self) -> tuple:
        return (self.n,)

    def notation(self) -> str:
        return f"e{self.n}"


# ========== LABELLED TREES ==========

@dataclass(frozen=True)
class LabelledTree:
    """
    Rooted tree whose vertices are distinct positive labels.

    `parents` lists (vertex, parent) sorted by vertex; the root has parent 0.
    """

    parents: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, 'parents', tuple(sorted(self.parents)))
        roots = [v for v, p in self.parents if p == 0]
        if len(roots) != 1:
            raise InvalidObjectError(f"A rooted tree needs exactly one root: {self.parents}")

    @classmethod
    def from_map(cls, parent_of: Mapping[int, int]) -> 'LabelledTree':
        return cls(tuple(parent_of.items()))

    @classmethod
    def single(cls, label: int = 1) -> 'LabelledTree':
        return cls(((label, 0),))

    @property
    def arity(self) -> int:
        return len(self.parents)

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(v for v, _ in self.parents)

    @property
    def root(self) -> int:
        return next(v for v, p in self.parents if p == 0)

    def parent_map(self) -> Dict[int, int]:
        return dict(self.parents)

    def children(self, vertex: int) -> List[int]:
        return sorted(v for v, p in self.parents if p == vertex)

    def relabel(self, mapping: Mapping[int, int]) -> 'LabelledTree':
        return LabelledTree(tuple(
            (mapping[v], mapping[p] if p else 0) for v, p in self.parents))

    def shape(self, colors: Optional[Mapping[int, int]] = None) -> 'DecoratedTree':
        """Isoclass, with vertex colors (default: all 1)."""
        colors = colors or {}
        kids: Dict[int, List[int]] = {}
        for v, p in self.parents:
            kids.setdefault(p, []).append(v)

        def code(v: int) -> tuple:
            return (colors.get(v, 1), tuple(sorted(code(c) for c in kids.get(v, []))))

        return DecoratedTree(code(self.root))

    def sort_key(self) -> tuple:
        return (len(self.parents), self.parents)

    def code(self, vertex: Optional[int] = None) -> str:
        v = self.root if vertex is None else vertex
        kids = self.children(v)
        if not kids:
            return str(v)
        return f"{v}[{','.join(self.code(c) for c in kids)}]"

    def notation(self) -> str:
        return f"tree[{self.code()}]"


@lru_cache(maxsize=None)
def _labelled_trees(n: int) -> Tuple[LabelledTree, ...]:
    if n == 1:
        return (LabelledTree.single(1),)
    trees = []
    for sequence in itertools.product(range(n), repeat=n - 2):
        unrooted = nx.from_prufer_sequence(list(sequence))
        for root in range(n):
            parent_of = {root + 1: 0}
            for parent, child in nx.bfs_edges(unrooted, root):
                parent_of[child + 1] = parent + 1
            trees.append(LabelledTree.from_map(parent_of))
    return tuple(sorted(trees, key=LabelledTree.sort_key))


def enumerate_labelled_trees(n: int) -> List[LabelledTree]:
    """All n^{n-1} rooted trees on [n]."""
    check_guard('tree', n)
    if n < 1:
        return []
    return list(_labelled_trees(n))


# ========== DECORATED TREES ==========

TreeCode = Tuple[int, tuple]


def _code_size(code: TreeCode) -> int:
    return 1 + sum(_code_size(child) for child in code[1])


def _code_symmetry(code: TreeCode) -> int:
    counts: Dict[TreeCode, int] = {}
    total = 1
    for child in code[1]:
        counts[child] = counts.get(child, 0) + 1
        total *= _code_symmetry(child)
    for mult in counts.values():
        total *= math.factorial(mult)
    return total


@dataclass(frozen=True)
class DecoratedTree:
    """
    Rooted-tree isoclass with vertex colors.

    `code` is (root color, sorted tuple of child codes), which is canonical.
    """

    code: TreeCode

    @classmethod
    def single(cls, color: int = 1) -> 'DecoratedTree':
        return cls((color, ()))

    @classmethod
    def from_parent_lists(cls, colors: Sequence[int], parents: Sequence[int]) -> 'DecoratedTree':
        """Vertices 0..k-1 with colors[v]; parents[v] = parent index or -1 at the root."""
        kids: Dict[int, List[int]] = {}
        root = None
        for v, p in enumerate(parents):
            if p < 0:
                root = v
            else:
                kids.setdefault(p, []).append(v)

        def build(v: int) -> TreeCode:
            return (colors[v], tuple(sorted(build(c) for c in kids.get(v, []))))

        return cls(build(root))

    def to_parent_lists(self) -> Tuple[List[int], List[int]]:
        """Preorder vertex numbering: (colors, parents) with the root at index 0."""
        colors: List[int] = []
        parents: List[int] = []

        def walk(code: TreeCode, parent: int) -> None:
            index = len(colors)
            colors.append(code[0])
            parents.append(parent)
            for child in code[1]:
                walk(child, index)

        walk(self.code, -1)
        return colors, parents

    @property
    def size(self) -> int:
        return _code_size(self.code)

    arity = size

    @property
    def root_color(self) -> int:
        return self.code[0]

    def symmetry_factor(self) -> int:
        """Order of the automorphism group (color-preserving)."""
        return _code_symmetry(self.code)

    def max_color(self) -> int:
        colors, _ = self.to_parent_lists()
        return max(colors)

    def sort_key(self) -> tuple:
        return (self.size, self.code)

    def body(self, code: Optional[TreeCode] = None) -> str:
        code = self.code if code is None else code
        label = color_letter(code[0])
        if not code[1]:
            return label
        return f"{label}[{','.join(self.body(c) for c in code[1])}]"

    def notation(self) -> str:
        return f"dtree[{self.body()}]"


@lru_cache(maxsize=None)
def _decorated_codes(n: int, colors: int) -> Tuple[TreeCode, ...]:
    if n == 1:
        return tuple((c, ()) for c in range(1, colors + 1))

    smaller = sorted(
        (code for k in range(1, n) for code in _decorated_codes(k, colors)),
        key=lambda code: code,
    )

    def child_multisets(start: int, remaining: int):
        if remaining == 0:
            yield ()
            return
        for index in range(start, len(smaller)):
            size = _code_size(smaller[index])
            if size <= remaining:
                for rest in child_multisets(index, remaining - size):
                    yield (smaller[index],) + rest

    codes = []
    for children in child_multisets(0, n - 1):
        ordered = tuple(sorted(children))
        for c in range(1, colors + 1):
            codes.append((c, ordered))
    return tuple(sorted(set(codes)))


def enumerate_decorated_trees(n: int, colors: int = 1) -> List[DecoratedTree]:
    """Rooted-tree isoclasses on n vertices colored in [colors]."""
    check_guard('tree', n)
    if n < 1:
        return []
    trees = [DecoratedTree(code) for code in _decorated_codes(n, colors)]
    return sorted(trees, key=DecoratedTree.sort_key)


# ========== DECORATED PAIRS ==========

@dataclass(frozen=True)
class DecoratedPair:
    """(tree, output color): a basis letter of D_PreLie(V)."""

    tree: DecoratedTree
    color: int

    @property
    def size(self) -> int:
        return self.tree.size

    arity = size

    def symmetry_factor(self) -> int:
        return self.tree.symmetry_factor()

    def sort_key(self) -> tuple:
        return (self.tree.sort_key(), self.color)

    def notation(self) -> str:
        return f"dpair[{self.tree.body()}; {self.color}]"


def enumerate_decorated_pairs(n: int, colors: int = 1) -> List[DecoratedPair]:
    return [DecoratedPair(t, c) for t in enumerate_decorated_trees(n, colors)
            for c in range(1, colors + 1)]


def enumerate_forests(n: int, colors: int = 1, letters: Optional[List[Hashable]] = None):
    """
    Multisets of decorated trees with n vertices in total, as letter tuples.

    Callers wrap the tuples into Monomials (kept here as tuples so this
    module stays independent of algebra_core).
    """
    check_guard('tree', max(n, 1))
    pool = letters
    if pool is None:
        pool = [t for k in range(1, n + 1) for t in enumerate_decorated_trees(k, colors)]
    pool = sorted(pool, key=lambda t: t.sort_key())

    def build(start: int, remaining: int):
        if remaining == 0:
            yield ()
            return
        for index in range(start, len(pool)):
            size = pool[index].size
            if size <= remaining:
                for rest in build(index, remaining - size):
                    yield (pool[index],) + rest

    return list(build(0, n))


# ========== QUASI-SHUFFLE LETTERS ==========

@dataclass(frozen=True)
class Exponent:
    """Monomial X_alpha in commuting variables; letters of the quasi-shuffle algebra."""

    alpha: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'alpha', tuple(self.alpha))

    def __add__(self, other: 'Exponent') -> 'Exponent':
        if len(self.alpha) != len(other.alpha):
            raise InvalidObjectError(f"Exponent lengths differ: {self.alpha} vs {other.alpha}")
        return Exponent(tuple(a + b for a, b in zip(self.alpha, other.alpha)))

    @property
    def degree(self) -> int:
        return sum(self.alpha)

    def sort_key(self) -> tuple:
        return (sum(self.alpha), self.alpha)

    def notation(self) -> str:
        return f"X[{','.join(str(a) for a in self.alpha)}]"


# ========== ORBITS ==========

@dataclass(frozen=True)
class OrbitClass:
    """Symmetric-group orbit: canonical-minimum representative and s = n!/|orbit|."""

    representative: Hashable
    symmetry: int

    @property
    def arity(self) -> int:
        return self.representative.arity

    def symmetry_factor(self) -> int:
        return self.symmetry

    def sort_key(self) -> tuple:
        return self.representative.sort_key()

    def notation(self) -> str:
        return f"orb({self.representative.notation()})"


def act(x: Hashable, sigma: Permutation) -> Hashable:
    """Right action x^sigma: relabel every label j by sigma^{-1}(j)."""
    return x.relabel(sigma.inverse().as_mapping())


@lru_cache(maxsize=None)
def orbit_canonical(x: Hashable) -> OrbitClass:
    """
    Orbit of a labelled object on [n] under relabeling.

    Sweeps all of S_n, so n stays within the family guards.

    Examples:
        >>> orbit_canonical(QuasiOrder.antichain(2)).symmetry
        2
    """
    n = x.arity
    best = x
    stabilizer = 0
    for word in itertools.permutations(range(1, n + 1)):
        mapping = {i: v for i, v in enumerate(word, start=1)}
        image = x.relabel(mapping)
        if image == x:
            stabilizer += 1
        if image.sort_key() < best.sort_key():
            best = image
    return OrbitClass(best, stabilizer)


# ========== ENUMERATION ENTRY POINT ==========

FAMILIES = ('perm', 'com', 'tree', 'qo', 'order', 'dg', 'ncdg', 'dtree', 'dpair')


def enumerate_objects(family: str, n: int, colors: int = 1) -> List[Hashable]:
    """
    Complete, duplicate-free, canonically sorted list of objects of size n.

    Args:
        family: One of FAMILIES
        n: Size (arity / vertex count)
        colors: Number of colors for decorated families

    Raises:
        CapacityError: n above the family guard
        UnknownSuiteError: unknown family

    Examples:
        >>> len(enumerate_objects('tree', 3))
        9
    """
    if family == 'perm':
        return sorted(all_permutations(n), key=Permutation.sort_key)
    if family == 'com':
        return [ComGenerator(n)] if n >= 1 else []
    if family == 'tree':
        return enumerate_labelled_trees(n)
    if family == 'qo':
        return enumerate_quasi_orders(n)
    if family == 'order':
        return enumerate_quasi_orders(n, orders_only=True)
    if family == 'dg':
        return enumerate_digraphs(n)
    if family == 'ncdg':
        return enumerate_digraphs(n, acyclic=True)
    if family == 'dtree':
        return enumerate_decorated_trees(n, colors)
    if family == 'dpair':
        return enumerate_decorated_pairs(n, colors)
    raise UnknownSuiteError(f"Unknown family: {family} (expected one of {FAMILIES})")
