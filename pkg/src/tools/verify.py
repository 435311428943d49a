"""
Property suites: exhaustive axiom checks with counterexample reporting.

Architecture:
1. SuiteParams parses and validates the k=v parameters of a run
2. Each suite enumerates its input tuples (exhaustive up to a bound, or
   seeded random sampling where noted) and hands (inputs, lhs, rhs) to a
   CaseRecorder, which counts cases and keeps the failing ones
3. run_suite looks a suite up in SUITES and returns a SuiteReport

Mutation hooks deliberately break a structure so that the suites can be
seen to fail:
- sign   negates p o_1 q for arity(p) >= 2 (operad-based suites)
- drop   removes the x ⊗ 1 term from every coproduct
- swap   exchanges the tensor factors of every coproduct
"""

import itertools
import logging
import random
import time
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import sympy

from .algebra_core import Element, Monomial, Word, add_into, flatten_tensor, format_key, pair, swap_tensor, tensor, tensor_map
from .characters import (
    DecoratedPairs,
    DecoratedTrees,
    OperadCoinvariants,
    TruncatedSeries,
    diamond,
    diamond_prime,
    endo_action,
    exp_bracket_diamond,
    group_inverse,
)
from .combinatorics import (
    Exponent,
    Permutation,
    act,
    all_permutations,
    enumerate_decorated_pairs,
    enumerate_decorated_trees,
)
from .errors import UnknownSuiteError, UnsupportedOperationError
from .hopf import (
    HANDLE_NAMES,
    BialgebraHandle,
    coaction_rho,
    convolve_antipode_identity,
    counit_pairs,
    deconcatenation,
    dual_coordinates,
    get_handle,
    merge_middle,
)
from .induced_structures import (
    CoinvariantBinfContext,
    OperadBraceContext,
    brace,
    dend_left,
    dend_right,
    ideal_coproduct,
    ideal_product,
    insertion_product,
    prelie,
    quasi_shuffle,
    quasi_shuffle_context,
    star_sym,
    star_tensor,
)
from .operads import OperadDescriptor, compose_elements, get_operad, mutated
from .relations import QuasiOrder, SimpleDigraph, enumerate_digraphs, enumerate_quasi_orders

logger = logging.getLogger(__name__)

MUTATIONS = ('sign', 'drop', 'swap')
PAIRINGS = ('dt-prime', 'b-star', 'ck-gl', 'ec-insert', 'ideal')
TRANSPOSE_PAIRINGS = {
    'dt-prime': ('dt*', 'dt', 'dual_star_prime'),
    'b-star': ('b*', 'b', None),
    'ck-gl': ('a*', 'a', None),
}
CONNECTED_HANDLES = ('bt', 'b', 'bt*', 'b*', 'a', 'a*', 'bpl*')


# ========== PARAMETERS AND REPORTS ==========

@dataclass(frozen=True)
class SuiteParams:
    """
    Parameters of a suite run. Every suite reads only the fields it needs.

    Attributes:
        operad: Operad name for operad-based suites
        mode: Composition mode of the operad
        bound: Size bound (total arity, vertex count or series degree)
        colors: Number of decoration colors N
        seed: Seed of the sampled checks
        samples: Number of random inputs for sampled checks
        max_letters: Bound on the number of letters in word-based suites
        mutation: None or one of MUTATIONS
        handle: Restrict to one handle / pairing
        family: 'qo' or 'dg' for the ideal suite
    """

    operad: str = 'prelie'
    mode: str = 'circ'
    bound: int = 3
    colors: int = 1
    seed: int = 0
    samples: int = 3
    max_letters: int = 3
    mutation: Optional[str] = None
    handle: Optional[str] = None
    family: str = 'qo'

    @classmethod
    def from_mapping(cls, values: Optional[Mapping[str, Any]], defaults: Mapping[str, Any]) -> 'SuiteParams':
        """
        Build from CLI-style values (strings allowed) over suite defaults.

        Raises:
            UnsupportedOperationError: unknown parameter or mutation
        """
        known = {f.name: f for f in fields(cls)}
        merged: Dict[str, Any] = dict(defaults)
        for name, value in (values or {}).items():
            name = name.replace('-', '_')
            if name == 'max_vertices' or name == 'max_arity':
                name = 'bound'
            if name not in known:
                raise UnsupportedOperationError(f"Unknown suite parameter: {name} (expected one of {sorted(known)})")
            merged[name] = value
        for name in ('bound', 'colors', 'seed', 'samples', 'max_letters'):
            if name in merged:
                merged[name] = int(merged[name])
        if merged.get('mutation') not in (None, *MUTATIONS):
            raise UnsupportedOperationError(f"Unknown mutation: {merged['mutation']} (expected one of {MUTATIONS})")
        return cls(**merged)

    def to_json(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class Failure:
    inputs: List[str]
    lhs: str
    rhs: str

    def to_json(self) -> Dict[str, Any]:
        return {'inputs': self.inputs, 'lhs': self.lhs, 'rhs': self.rhs}


@dataclass
class SuiteReport:
    """
    Outcome of one suite run. `failures` keeps at most `keep` counterexamples
    (the first ones in enumeration order); `failed` counts all of them.
    """

    suite: str
    params: SuiteParams
    cases: int = 0
    failed: int = 0
    failures: List[Failure] = field(default_factory=list)
    seconds: float = 0.0
    scope: str = ''

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def to_json(self) -> Dict[str, Any]:
        return {
            'suite': self.suite,
            'params': self.params.to_json(),
            'passed': self.passed,
            'cases': self.cases,
            'failed': self.failed,
            'scope': self.scope,
            'failures': [f.to_json() for f in self.failures],
        }

    def to_text(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        lines = [f"{self.suite}: {status} ({self.cases} cases, {self.failed} failed)"]
        if self.scope:
            lines.append(f"  scope: {self.scope}")
        for failure in self.failures:
            lines.append(f"  inputs: {', '.join(failure.inputs)}")
            lines.append(f"    lhs: {failure.lhs}")
            lines.append(f"    rhs: {failure.rhs}")
        return '\n'.join(lines)


def _show(value: Any) -> str:
    if isinstance(value, (Element, TruncatedSeries)):
        return str(value)
    if isinstance(value, str):
        return value
    return format_key(value)


class CaseRecorder:
    """Counts cases and stores counterexamples on a report."""

    def __init__(self, report: SuiteReport, keep: int = 20):
        self.report = report
        self.keep = keep

    def describe(self, scope: str) -> None:
        """Say what the cases range over."""
        self.report.scope = scope

    def check(self, label: str, inputs: Sequence[Any], lhs: Any, rhs: Any) -> bool:
        self.report.cases += 1
        if lhs == rhs:
            return True
        self.report.failed += 1
        if len(self.report.failures) < self.keep:
            self.report.failures.append(
                Failure([label] + [_show(x) for x in inputs], _show(lhs), _show(rhs)))
        return False


# ========== SHARED HELPERS ==========

def _basis(key: Hashable) -> Element:
    return Element.basis(key)


def _descriptor(params: SuiteParams) -> OperadDescriptor:
    descriptor = get_operad(params.operad, params.mode)
    if params.mutation == 'sign':
        return mutated(descriptor, 'sign')
    if params.mutation is not None:
        raise UnsupportedOperationError(f"Mutation '{params.mutation}' does not apply to operad suites")
    return descriptor


def _size(key: Hashable) -> int:
    return len(key.letters) if hasattr(key, 'letters') else key.arity


def _mutate_coproduct(x: Element, mutation: Optional[str]) -> Element:
    if mutation == 'swap':
        return swap_tensor(x)
    if mutation == 'drop':
        return x.filter(lambda key: not (_size(key[1]) == 0 and _size(key[0]) > 0))
    return x


def _mutated_handle(handle: BialgebraHandle, mutation: Optional[str]) -> BialgebraHandle:
    if mutation is None:
        return handle
    if mutation == 'sign':
        raise UnsupportedOperationError("The 'sign' mutation applies to operads, not coproducts")
    wrapped = {
        kind: (lambda key, fn=fn: _mutate_coproduct(fn(key), mutation))
        for kind, fn in handle.coproducts.items()
    }
    return replace(handle, name=f"{handle.name}~{mutation}", coproducts=wrapped,
                   _coproduct_cache={}, _antipode_cache={})


def _by_arity(descriptor: OperadDescriptor, bound: int) -> List[Tuple[Hashable, int]]:
    return [(key, n) for n in range(1, bound + 1) for key in descriptor.basis(n)]


def _words(pool: Sequence[Tuple[Hashable, int]], max_len: int, budget: int,
           min_len: int = 0) -> Iterator[Tuple[Tuple[Hashable, ...], int]]:
    """Letter tuples of length min_len..max_len whose costs add up to <= budget."""
    def build(prefix, spent):
        if len(prefix) >= min_len:
            yield prefix, spent
        if len(prefix) == max_len:
            return
        for letter, cost in pool:
            if spent + cost <= budget:
                yield from build(prefix + (letter,), spent + cost)
    yield from build((), 0)


def _counit_side(handle: BialgebraHandle, x: Element, side: int) -> Element:
    """(eps ⊗ Id) for side=0, (Id ⊗ eps) for side=1."""
    acc: Dict[Hashable, Fraction] = {}
    for key, c in x.items():
        weight = handle.counit(_basis(key[side]))
        if weight:
            add_into(acc, _basis(key[1 - side]), c * weight)
    return Element(acc)


def _random_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-3, 3), rng.randint(1, 3))


def _random_series(rng: random.Random, keys_by_degree: Mapping[int, Sequence[Hashable]], bound: int,
                   skip: Iterable[int] = ()) -> TruncatedSeries:
    skipped = set(skip)
    components = {}
    for degree, keys in keys_by_degree.items():
        if degree in skipped or degree > bound:
            continue
        components[degree] = Element({k: _random_coeff(rng) for k in keys})
    return TruncatedSeries(bound, components)


# ========== OPERAD SUITES ==========

def _block_permutation(tau: Permutation, i: int, m: int) -> Permutation:
    """tau acting on the block i..i+n-1 of [m + n - 1], identity elsewhere."""
    n = tau.arity
    word = []
    for j in range(1, m + n):
        word.append(i + tau(j - i + 1) - 1 if i <= j <= i + n - 1 else j)
    return Permutation(tuple(word))


def suite_operad_assoc(params: SuiteParams, recorder: CaseRecorder) -> None:
    """
    Unit, sequential and parallel associativity, and equivariance in the
    inserted operand.
    """
    descriptor = _descriptor(params)
    bound = params.bound
    keys = _by_arity(descriptor, bound)
    unit = descriptor.unit()

    for p, m in keys:
        recorder.check('left unit', [p], descriptor.compose_keys(unit, 1, p), _basis(p))
        for i in range(1, m + 1):
            recorder.check('right unit', [p, i], descriptor.compose_keys(p, i, unit), _basis(p))

    for (p, m), (q, n), (r, k) in itertools.product(keys, repeat=3):
        if m + n + k - 2 > bound:
            continue
        for i in range(1, m + 1):
            pq = descriptor.compose_keys(p, i, q)
            for j in range(1, n + 1):
                lhs = compose_elements(descriptor, pq, i + j - 1, _basis(r))
                rhs = compose_elements(descriptor, _basis(p), i, descriptor.compose_keys(q, j, r))
                recorder.check('sequential', [p, i, q, j, r], lhs, rhs)
            for j in range(i + 1, m + 1):
                lhs = compose_elements(descriptor, pq, j + n - 1, _basis(r))
                rhs = compose_elements(descriptor, descriptor.compose_keys(p, j, r), i, _basis(q))
                recorder.check('parallel', [p, i, q, j, r], lhs, rhs)

    for (p, m), (q, n) in itertools.product(keys, repeat=2):
        if m + n - 1 > bound:
            continue
        for tau in all_permutations(n):
            for i in range(1, m + 1):
                block = _block_permutation(tau, i, m)
                lhs = descriptor.compose_keys(p, i, act(q, tau))
                rhs = descriptor.compose_keys(p, i, q).map(lambda key: act(key, block))
                recorder.check('equivariance', [p, i, q, tau], lhs, rhs)


def _associator(descriptor: OperadDescriptor, x: Element, y: Element, z: Element) -> Element:
    return prelie(prelie(x, y, descriptor), z, descriptor) - prelie(x, prelie(y, z, descriptor), descriptor)


def suite_prelie(params: SuiteParams, recorder: CaseRecorder) -> None:
    """(x, y, z) = (x, z, y) for the associator of p . q = sum_i p o_i q, all triples."""
    descriptor = _descriptor(params)
    keys = _by_arity(descriptor, params.bound)
    recorder.describe(f"every labelled triple of {descriptor.label} with arity(x) + arity(y) + arity(z) - 2 <= {params.bound}")
    for (x, a), (y, b), (z, c) in itertools.product(keys, repeat=3):
        if a + b + c - 2 > params.bound:
            continue
        lhs = _associator(descriptor, _basis(x), _basis(y), _basis(z))
        rhs = _associator(descriptor, _basis(x), _basis(z), _basis(y))
        recorder.check('associator symmetry', [x, y, z], lhs, rhs)


def _nested_brace(descriptor: OperadDescriptor, x: Hashable, ys: Tuple, zs: Tuple) -> Element:
    """
    sum over cuts Z = Z0 Z1 ... Z2m of <x; Z0, <y1; Z1>, Z2, ..., <ym; Z2m-1>, Z2m>.
    """
    m = len(ys)
    acc: Dict[Hashable, Fraction] = {}
    for cuts in itertools.combinations_with_replacement(range(len(zs) + 1), 2 * m):
        bounds = (0,) + cuts + (len(zs),)
        pieces = [zs[bounds[k]:bounds[k + 1]] for k in range(2 * m + 1)]
        args: List[Element] = [_basis(z) for z in pieces[0]]
        for index, y in enumerate(ys):
            args.append(brace(_basis(y), [_basis(z) for z in pieces[2 * index + 1]], descriptor))
            args.extend(_basis(z) for z in pieces[2 * index + 2])
        add_into(acc, brace(_basis(x), args, descriptor))
    return Element(acc)


def suite_brace(params: SuiteParams, recorder: CaseRecorder) -> None:
    """<<x; Y>; Z> against the nested-insertion expansion."""
    descriptor = _descriptor(params)
    keys = _by_arity(descriptor, params.bound)
    extra = [(key, n - 1) for key, n in keys]
    for x, a in keys:
        budget = params.bound - a
        for ys, spent in _words(extra, min(a, params.max_letters), budget):
            for zs, _ in _words(extra, params.max_letters - len(ys), budget - spent):
                inner = brace(_basis(x), [_basis(y) for y in ys], descriptor)
                lhs = brace(inner, [_basis(z) for z in zs], descriptor)
                rhs = _nested_brace(descriptor, x, ys, zs)
                recorder.check('nested brace', [x, Word(ys), Word(zs)], lhs, rhs)


def _triples(pool, max_letters: int, budget: int):
    words = [w for w, _ in _words(pool, max_letters, budget, min_len=1)]
    for u, v, w in itertools.product(words, repeat=3):
        if len(u) + len(v) + len(w) > max_letters:
            continue
        if sum(c for word in (u, v, w) for c in _costs(pool, word)) > budget:
            continue
        yield Word(u), Word(v), Word(w)


def _costs(pool, word) -> List[int]:
    cost = dict(pool)
    return [cost[letter] for letter in word]


def suite_binf(params: SuiteParams, recorder: CaseRecorder) -> None:
    """Associativity and unit of the induced products on T(V) and on S(V) of coinvariants."""
    descriptor = _descriptor(params)
    keys = _by_arity(descriptor, params.bound)
    context = OperadBraceContext(descriptor)
    empty = Word(())
    for u, v, w in _triples(keys, params.max_letters, params.bound):
        lhs = star_tensor(context, star_tensor(context, u, v), w)
        rhs = star_tensor(context, u, star_tensor(context, v, w))
        recorder.check('tensor associativity', [u, v, w], lhs, rhs)
    for u, _ in _words(keys, params.max_letters, params.bound, min_len=1):
        recorder.check('tensor unit', [Word(u)], star_tensor(context, empty, Word(u)), _basis(Word(u)))

    orbit_context = CoinvariantBinfContext(descriptor)
    orbits = [(omega, n) for n in range(1, params.bound + 1) for omega in descriptor.orbit_basis(n)]
    words = [Monomial(u) for u, _ in _words(orbits, params.max_letters, params.bound, min_len=1)]
    for u, v, w in itertools.product(words, repeat=3):
        if sum(x.arity for m in (u, v, w) for x in m.letters) > params.bound:
            continue
        lhs = star_sym(orbit_context, star_sym(orbit_context, u, v), w)
        rhs = star_sym(orbit_context, u, star_sym(orbit_context, v, w))
        recorder.check('symmetric associativity', [u, v, w], lhs, rhs)


def _prec(context, u: Word, v: Word) -> Element:
    """u < v with u < 1 = u."""
    return _basis(u) if not v.letters else dend_left(context, u, v)


def _succ(context, u: Word, v: Word) -> Element:
    """u > v with 1 > v = v."""
    return _basis(v) if not u.letters else dend_right(context, u, v)


def _dend_coproduct(context, u: Word, v: Word, half, left_nonempty: bool) -> Element:
    """1 ⊗ (u half v) + sum (u' half v') ⊗ (u'' * v'') over the nonempty side."""
    acc: Dict[Hashable, Fraction] = {}
    whole = dend_left(context, u, v) if left_nonempty else dend_right(context, u, v)
    add_into(acc, tensor(_basis(Word(())), whole))
    for a in range(len(u) + 1):
        for b in range(len(v) + 1):
            if (left_nonempty and a == 0) or (not left_nonempty and b == 0):
                continue
            left = half(context, u[:a], v[:b])
            right = star_tensor(context, u[a:], v[b:])
            add_into(acc, tensor(left, right))
    return Element(acc)


def suite_dendriform(params: SuiteParams, recorder: CaseRecorder) -> None:
    """Dendriform axioms of < and > on T+(V) and their compatibility with deconcatenation."""
    descriptor = _descriptor(params)
    context = OperadBraceContext(descriptor)
    keys = _by_arity(descriptor, min(params.bound, 2))
    for u, v, w in _triples(keys, params.max_letters, params.bound):
        uv_star = star_tensor(context, u, v)
        recorder.check('split', [u, v], uv_star, dend_left(context, u, v) + dend_right(context, u, v))
        recorder.check('left-left', [u, v, w],
                       dend_left(context, dend_left(context, u, v), w),
                       dend_left(context, u, star_tensor(context, v, w)))
        recorder.check('right-left', [u, v, w],
                       dend_left(context, dend_right(context, u, v), w),
                       dend_right(context, u, dend_left(context, v, w)))
        recorder.check('right-right', [u, v, w],
                       dend_right(context, u, dend_right(context, v, w)),
                       dend_right(context, uv_star, w))
        recorder.check('left coproduct', [u, v],
                       dend_left(context, u, v).map(deconcatenation),
                       _dend_coproduct(context, u, v, _prec, True))
        recorder.check('right coproduct', [u, v],
                       dend_right(context, u, v).map(deconcatenation),
                       _dend_coproduct(context, u, v, _succ, False))


def suite_qshuffle(params: SuiteParams, recorder: CaseRecorder) -> None:
    """Quasi-shuffle from the associative context: oracle, associativity, bialgebra with deconcatenation."""
    context = quasi_shuffle_context()
    letters = [(Exponent((1, 0)), 1), (Exponent((0, 1)), 1)]
    words = [Word(w) for w, _ in _words(letters, params.max_letters, params.max_letters)]
    for u, v in itertools.product(words, repeat=2):
        if len(u) + len(v) > params.max_letters + 1:
            continue
        product = star_tensor(context, u, v)
        recorder.check('oracle', [u, v], product, quasi_shuffle(u, v))
        lhs = product.map(deconcatenation)
        rhs = _qsh_coproduct(context, u, v)
        recorder.check('bialgebra', [u, v], lhs, rhs)
    for u, v, w in itertools.product(words, repeat=3):
        if not (u.letters and v.letters and w.letters) or len(u) + len(v) + len(w) > params.max_letters + 1:
            continue
        recorder.check('associativity', [u, v, w],
                       star_tensor(context, star_tensor(context, u, v), w),
                       star_tensor(context, u, star_tensor(context, v, w)))


def _qsh_coproduct(context, u: Word, v: Word) -> Element:
    """Delta(u) Delta(v) in T(V) ⊗ T(V) with the quasi-shuffle on both sides."""
    acc: Dict[Hashable, Fraction] = {}
    for (u1, u2), c in deconcatenation(u).items():
        for (v1, v2), d in deconcatenation(v).items():
            add_into(acc, tensor(star_tensor(context, u1, v1), star_tensor(context, u2, v2)), c * d)
    return Element(acc)


# ========== BIALGEBRA SUITES ==========

def _handles(params: SuiteParams, allowed: Sequence[str]) -> List[BialgebraHandle]:
    names = [params.handle] if params.handle else list(allowed)
    handles = []
    for name in names:
        if name not in HANDLE_NAMES:
            raise UnknownSuiteError(f"Unknown algebra: {name} (expected one of {HANDLE_NAMES})")
        base = get_handle(name, params.operad, params.colors, params.mode)
        handles.append(_mutated_handle(base, params.mutation))
    return handles


def _coassociativity(handle: BialgebraHandle, x: Element, kind: str) -> Tuple[Element, Element]:
    delta = handle.coproduct(x, kind)
    on = lambda key: handle.coproduct(_basis(key), kind)
    same = lambda key: key
    lhs = flatten_tensor(tensor_map(delta, on, same))
    rhs = flatten_tensor(tensor_map(delta, same, on))
    return lhs, rhs


def suite_bialgebra(params: SuiteParams, recorder: CaseRecorder) -> None:
    """
    Coassociativity of every coproduct kind, counit laws and multiplicativity of the default one.

    Dual handles are also paired against their primal product: the opposite
    coproduct passes every axiom above, only the transpose fixes the tensor order.
    """
    for handle in _handles(params, HANDLE_NAMES):
        logger.debug(f"bialgebra checks on {handle.name}")
        by_size = {s: handle.basis(s) for s in range(0, params.bound + 1)}
        for s, keys in by_size.items():
            for key in keys:
                x = _basis(key)
                for kind in handle.coproducts:
                    lhs, rhs = _coassociativity(handle, x, kind)
                    recorder.check(f"{handle.name} coassociativity[{kind}]", [key], lhs, rhs)
                delta = handle.coproduct(x)
                recorder.check(f"{handle.name} left counit", [key], _counit_side(handle, delta, 0), x)
                recorder.check(f"{handle.name} right counit", [key], _counit_side(handle, delta, 1), x)
        for s1 in range(1, params.bound):
            for s2 in range(1, params.bound - s1 + 1):
                for a, b in itertools.product(by_size[s1], by_size[s2]):
                    lhs = handle.coproduct(handle.product(_basis(a), _basis(b)))
                    rhs = handle.tensor_product(handle.coproduct(_basis(a)), handle.coproduct(_basis(b)))
                    recorder.check(f"{handle.name} multiplicativity", [a, b], lhs, rhs)
    names = [params.handle] if params.handle else list(HANDLE_NAMES)
    for pairing, (dual_name, _, _) in TRANSPOSE_PAIRINGS.items():
        if dual_name in names:
            _transpose_pairing(pairing, params, recorder, f"{dual_name} transpose")


def suite_antipode(params: SuiteParams, recorder: CaseRecorder) -> None:
    """m (S ⊗ Id) Delta = u eps on the connected handles."""
    for handle in _handles(params, CONNECTED_HANDLES):
        for s in range(0, params.bound + 1):
            for key in handle.basis(s):
                x = _basis(key)
                recorder.check(f"{handle.name} S*Id", [key], convolve_antipode_identity(handle, x),
                               handle.unit() * handle.counit(x))


def _pair_sides(dual_handle: BialgebraHandle, primal_handle: BialgebraHandle, kind: Optional[str],
                bound: int, weight, recorder: CaseRecorder, label: str) -> None:
    """pair(Delta F, X ⊗ Y) = pair(F, X Y) for sizes of F, X, Y within bound."""
    primal = {s: primal_handle.basis(s) for s in range(0, bound + 1)}
    for s in range(0, bound + 1):
        for f in dual_handle.basis(s):
            delta = dual_coordinates(dual_handle.coproduct(_basis(f), kind))
            coordinate = dual_coordinates(_basis(f))
            for s1 in range(0, bound + 1):
                for s2 in range(0, bound - s1 + 1):
                    for x, y in itertools.product(primal[s1], primal[s2]):
                        lhs = pair(delta, _basis((x, y)), weight)
                        rhs = pair(coordinate, primal_handle.product(_basis(x), _basis(y)), weight)
                        recorder.check(label, [f, x, y], lhs, rhs)


def _transpose_pairing(name: str, params: SuiteParams, recorder: CaseRecorder, label: str) -> None:
    """Pair a (mutated) dual handle against its primal handle."""
    dual_name, primal_name, kind = TRANSPOSE_PAIRINGS[name]
    if dual_name == 'a*':
        dual = get_handle(dual_name, colors=params.colors)
        primal = get_handle(primal_name, colors=params.colors)
    else:
        dual = get_handle(dual_name, params.operad, mode=params.mode)
        primal = get_handle(primal_name, params.operad, mode=params.mode)
    dual = _mutated_handle(dual, params.mutation)
    weight = None if kind == 'dual_star_prime' else dual.weight
    _pair_sides(dual, primal, kind, params.bound, weight, recorder, label)


def _pair_ec_insert(params: SuiteParams, recorder: CaseRecorder) -> None:
    dual = _mutated_handle(get_handle('dpl*', colors=params.colors), params.mutation)
    pairs_by_size = {s: enumerate_decorated_pairs(s, params.colors) for s in range(1, params.bound + 1)}
    pool = [p for s in range(1, params.bound + 1) for p in pairs_by_size[s]]
    weight = lambda letter: letter.symmetry_factor()
    for s in range(1, params.bound + 1):
        for f in pairs_by_size[s]:
            forest = Monomial((f,))
            delta = dual.coproduct(_basis(forest))
            for k in range(1, s + 1):
                for x in pairs_by_size[k]:
                    for ys in itertools.combinations_with_replacement(pool, k):
                        if sum(y.size for y in ys) != s:
                            continue
                        factors = Monomial(ys)
                        lhs = pair(delta, _basis((Monomial((x,)), factors)), weight)
                        product = insertion_product(x, factors).map(lambda p: Monomial((p,)))
                        rhs = pair(_basis(forest), product, weight)
                        recorder.check('ec-insert', [f, x, factors], lhs, rhs)


def _relational_family(family: str):
    if family == 'qo':
        return enumerate_quasi_orders, QuasiOrder.on(0)
    if family == 'dg':
        return enumerate_digraphs, SimpleDigraph.on(0)
    raise UnsupportedOperationError(f"Ideal coproducts are defined on 'qo' and 'dg', got {family}")


def _relational_basis(family: str, n: int):
    enumerate_fn, empty = _relational_family(family)
    return [empty] if n == 0 else enumerate_fn(n)


def _pair_ideal(params: SuiteParams, recorder: CaseRecorder) -> None:
    for n in range(0, params.bound + 1):
        for gamma in _relational_basis(params.family, n):
            delta = _mutate_coproduct(ideal_coproduct(gamma), params.mutation)
            for k in range(0, n + 1):
                for g1, g2 in itertools.product(_relational_basis(params.family, k),
                                                _relational_basis(params.family, n - k)):
                    lhs = delta.coefficient((g1, g2))
                    rhs = ideal_product(g1, g2, shuffle=True).coefficient(gamma)
                    recorder.check('ideal transpose', [gamma, g1, g2], lhs, rhs)


def suite_pairing(params: SuiteParams, recorder: CaseRecorder) -> None:
    """Each dual coproduct is the transpose of its product."""
    names = [params.handle] if params.handle else list(PAIRINGS)
    for name in names:
        if name in TRANSPOSE_PAIRINGS:
            _transpose_pairing(name, params, recorder, name)
        elif name == 'ec-insert':
            _pair_ec_insert(params, recorder)
        elif name == 'ideal':
            _pair_ideal(params, recorder)
        else:
            raise UnknownSuiteError(f"Unknown pairing: {name} (expected one of {PAIRINGS})")


def suite_ideal(params: SuiteParams, recorder: CaseRecorder) -> None:
    """Transpose of the ideal product, plus coassociativity of the ideal coproduct."""
    _pair_ideal(params, recorder)
    coproduct = lambda g: _mutate_coproduct(ideal_coproduct(g), params.mutation)
    same = lambda key: key
    for n in range(0, params.bound + 1):
        for gamma in _relational_basis(params.family, n):
            delta = coproduct(gamma)
            lhs = flatten_tensor(tensor_map(delta, coproduct, same))
            rhs = flatten_tensor(tensor_map(delta, same, coproduct))
            recorder.check('ideal coassociativity', [gamma], lhs, rhs)


def suite_cointeraction(params: SuiteParams, recorder: CaseRecorder) -> None:
    """A*_PreLie(V) is a bialgebra in the category of D*_PreLie(V)-comodules."""
    colors = params.colors
    ck = _mutated_handle(get_handle('a*', colors=colors), params.mutation)
    ec = _mutated_handle(get_handle('dpl*', colors=colors), params.mutation)
    rho = lambda forest: coaction_rho(forest, colors)
    same = lambda key: key
    empty = Monomial(())
    forests = {s: ck.basis(s) for s in range(0, params.bound + 1)}

    recorder.check('rho(1)', [empty], rho(empty), _basis((empty, empty)))
    for s in range(0, params.bound + 1):
        for forest in forests[s]:
            x = _basis(forest)
            coaction = rho(forest)
            lhs = flatten_tensor(tensor_map(coaction, lambda k: ck.coproduct(_basis(k)), same))
            rhs = merge_middle(flatten_tensor(tensor_map(ck.coproduct(x), rho, rho)))
            recorder.check('coproduct is a comodule map', [forest], lhs, rhs)

            counit_left: Dict[Hashable, Fraction] = {}
            counit_right: Dict[Hashable, Fraction] = {}
            for (left, right), c in coaction.items():
                add_into(counit_left, _basis(right), c * ck.counit(_basis(left)))
                add_into(counit_right, _basis(left), c * counit_pairs(right))
            recorder.check('counit is a comodule map', [forest], Element(counit_left),
                           _basis(empty) * ck.counit(x))
            recorder.check('rho counit', [forest], Element(counit_right), x)

            lhs = flatten_tensor(tensor_map(coaction, rho, same))
            rhs = flatten_tensor(tensor_map(coaction, same, lambda k: ec.coproduct(_basis(k))))
            recorder.check('rho coassociativity', [forest], lhs, rhs)

    for s1 in range(1, params.bound):
        for s2 in range(1, params.bound - s1 + 1):
            for f1, f2 in itertools.product(forests[s1], forests[s2]):
                lhs = rho(f1 * f2)
                rhs = ck.tensor_product(rho(f1), rho(f2))
                recorder.check('rho multiplicative', [f1, f2], lhs, rhs)


# ========== MONOID SUITE ==========

def _com_oracle(x: TruncatedSeries, y: TruncatedSeries, bound: int) -> Dict[int, Fraction]:
    """Coefficients of X(Y(t)) up to t^bound."""
    t = sympy.Symbol('t')
    as_poly = lambda s: sum((sympy.Rational(c.numerator, c.denominator) * t ** d
                             for key, c, d in s.terms()), sympy.Integer(0))
    composed = sympy.expand(as_poly(x).subs(t, as_poly(y)))
    return {d: _to_fraction(composed.coeff(t, d)) for d in range(1, bound + 1)}


def _lagrange_inverse(x: TruncatedSeries, bound: int) -> Dict[int, Fraction]:
    """Coefficients of the compositional inverse of t + X(t) by Lagrange inversion."""
    t = sympy.Symbol('t')
    f = t + sum((sympy.Rational(c.numerator, c.denominator) * t ** d for _, c, d in x.terms()), sympy.Integer(0))
    ratio = sympy.series(t / f, t, 0, bound + 1).removeO()
    out = {}
    for n in range(1, bound + 1):
        power = sympy.expand(ratio ** n)
        out[n] = _to_fraction(power.coeff(t, n - 1) / n)
    return out


def _to_fraction(value) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def _coefficients_by_degree(series: TruncatedSeries) -> Dict[int, Fraction]:
    return {d: sum((c for _, c in series.component(d).items()), Fraction(0)) for d in range(1, series.bound + 1)}


def suite_monoid(params: SuiteParams, recorder: CaseRecorder) -> None:
    """
    Character monoids: associativity of both products on basis seeds and
    random series, the shift identity, b-infinity exponentials, inverses,
    power-series oracles for Com and the anti-homomorphism of the action.
    """
    if params.mutation is not None:
        raise UnsupportedOperationError("The monoid suite has no mutation hooks")
    rng = random.Random(params.seed)
    bound = params.bound
    descriptor = get_operad(params.operad, params.mode)
    carrier = OperadCoinvariants(descriptor)
    unit = TruncatedSeries.from_element(carrier.unit(), bound)
    classes = {d: descriptor.orbit_basis(d) for d in range(1, bound + 1)}
    seeds = [TruncatedSeries.from_element(_basis(omega), bound) for d in classes for omega in classes[d]]
    randoms = [_random_series(rng, classes, bound) for _ in range(params.samples)]

    for x, y, z in itertools.chain(itertools.product(seeds, repeat=3), itertools.product(randoms, repeat=3)):
        recorder.check('diamond associativity', [x, y, z],
                       diamond(carrier, diamond(carrier, x, y), z), diamond(carrier, x, diamond(carrier, y, z)))
        recorder.check('diamond-prime associativity', [x, y, z],
                       diamond_prime(carrier, diamond_prime(carrier, x, y), z),
                       diamond_prime(carrier, x, diamond_prime(carrier, y, z)))

    for x, y in itertools.chain(itertools.product(seeds, repeat=2), itertools.product(randoms, repeat=2)):
        recorder.check('shift', [x, y], diamond_prime(carrier, x, y) + unit,
                       diamond(carrier, x + unit, y + unit))
        recorder.check('exponential brackets', [x, y], exp_bracket_diamond(carrier, x, y),
                       diamond_prime(carrier, x, y))

    for x in randoms:
        recorder.check('right unit', [x], diamond(carrier, x, unit), x)
        recorder.check('left unit', [x], diamond(carrier, unit, x), x)
        candidate = x - TruncatedSeries(bound, {1: x.component(1)})
        inverse = group_inverse(carrier, candidate)
        zero = TruncatedSeries.zero(bound)
        recorder.check('right inverse', [candidate], diamond_prime(carrier, candidate, inverse), zero)
        recorder.check('left inverse', [candidate], diamond_prime(carrier, inverse, candidate), zero)
        recorder.check('double inverse', [candidate], group_inverse(carrier, inverse), candidate)
        if descriptor.name == 'com':
            recorder.check('Lagrange inversion', [candidate],
                           _coefficients_by_degree(inverse + unit), _lagrange_inverse(candidate, bound))

    if descriptor.name == 'com':
        for x, y in itertools.product(randoms, repeat=2):
            recorder.check('power-series substitution', [x, y],
                           _coefficients_by_degree(diamond(carrier, x, y)), _com_oracle(x, y, bound))

    _monoid_trees(params, rng, recorder)


def _monoid_trees(params: SuiteParams, rng: random.Random, recorder: CaseRecorder) -> None:
    bound = min(params.bound, 3)
    colors = params.colors
    trees = DecoratedTrees(colors)
    pairs = DecoratedPairs(colors)
    tree_keys = {d: enumerate_decorated_trees(d, colors) for d in range(1, bound + 1)}
    pair_keys = {d: enumerate_decorated_pairs(d, colors) for d in range(1, bound + 1)}
    pair_unit = TruncatedSeries.from_element(pairs.unit(), bound)

    xs = [_random_series(rng, tree_keys, bound) for _ in range(params.samples)]
    ys = [_random_series(rng, pair_keys, bound) for _ in range(params.samples)]
    for x, y in itertools.product(xs, repeat=2):
        recorder.check('tree exponential brackets', [x, y],
                       exp_bracket_diamond(trees, x, y), diamond_prime(trees, x, y))
    for x in xs:
        inverse = group_inverse(trees, x)
        recorder.check('tree inverse', [x], diamond_prime(trees, x, inverse), TruncatedSeries.zero(bound))
        recorder.check('identity action', [x], endo_action(x, pair_unit, colors=colors), x)
        for z, y in itertools.product(ys, repeat=2):
            recorder.check('action anti-homomorphism', [x, z, y],
                           endo_action(endo_action(x, z, colors=colors), y, colors=colors),
                           endo_action(x, diamond(pairs, z, y), colors=colors))
            recorder.check('shifted action anti-homomorphism', [x, z, y],
                           endo_action(endo_action(x, z, prime=True, colors=colors), y, prime=True, colors=colors),
                           endo_action(x, diamond_prime(pairs, z, y), prime=True, colors=colors))
    for z, y, w in itertools.product(ys, repeat=3):
        recorder.check('pair diamond associativity', [z, y, w],
                       diamond(pairs, diamond(pairs, z, y), w), diamond(pairs, z, diamond(pairs, y, w)))


# ========== REGISTRY ==========

@dataclass(frozen=True)
class SuiteSpec:
    runner: Callable[[SuiteParams, CaseRecorder], None]
    defaults: Mapping[str, Any]
    description: str


SUITES: Dict[str, SuiteSpec] = {
    'operad-assoc': SuiteSpec(suite_operad_assoc, {'operad': 'prelie', 'bound': 4},
                              'operad unit, associativity and equivariance'),
    'prelie': SuiteSpec(suite_prelie, {'operad': 'prelie', 'bound': 4},
                        'pre-Lie identity of p . q = sum_i p o_i q'),
    'brace': SuiteSpec(suite_brace, {'operad': 'prelie', 'bound': 3, 'max_letters': 3},
                       'nested brace relation'),
    'binf': SuiteSpec(suite_binf, {'operad': 'prelie', 'bound': 4, 'max_letters': 3},
                      'associativity of the B-infinity and b-infinity products'),
    'dendriform': SuiteSpec(suite_dendriform, {'operad': 'prelie', 'bound': 4, 'max_letters': 3},
                            'dendriform axioms and dendriform Hopf compatibility'),
    'bialgebra': SuiteSpec(suite_bialgebra, {'operad': 'prelie', 'bound': 3},
                           'coassociativity, counit and multiplicativity for every handle'),
    'pairing': SuiteSpec(suite_pairing, {'operad': 'prelie', 'bound': 3},
                         'dual coproducts are transposes of products'),
    'cointeraction': SuiteSpec(suite_cointeraction, {'bound': 3, 'colors': 1},
                               'comodule-bialgebra axioms of the tree pair'),
    'monoid': SuiteSpec(suite_monoid, {'operad': 'com', 'bound': 4},
                        'character monoids, inverses and the endomorphism action'),
    'antipode': SuiteSpec(suite_antipode, {'operad': 'prelie', 'bound': 3},
                          'S * Id = u eps on connected handles'),
    'qshuffle': SuiteSpec(suite_qshuffle, {'max_letters': 3},
                          'quasi-shuffle bialgebra from the associative context'),
    'ideal': SuiteSpec(suite_ideal, {'bound': 3, 'family': 'qo'},
                       'ideal coproduct of quasi-orders and digraphs'),
}


def run_suite(suite_id: str, params: Optional[Mapping[str, Any]] = None, keep: int = 20) -> SuiteReport:
    """
    Run one property suite.

    Args:
        suite_id: Key of SUITES
        params: Parameter overrides (strings are coerced)
        keep: Maximum number of counterexamples kept in the report

    Returns:
        SuiteReport; deterministic for fixed parameters

    Raises:
        UnknownSuiteError: unknown suite id
        CapacityError: a bound above the configured guard

    Examples:
        >>> run_suite('prelie', {'bound': 3}).passed
        True
    """
    spec = SUITES.get(suite_id)
    if spec is None:
        raise UnknownSuiteError(f"Unknown suite: {suite_id} (expected one of {sorted(SUITES)})")
    resolved = SuiteParams.from_mapping(params, spec.defaults)
    report = SuiteReport(suite_id, resolved)
    recorder = CaseRecorder(report, keep)

    logger.info(f"🚀 Running suite {suite_id} with {resolved.to_json()}")
    started = time.perf_counter()
    spec.runner(resolved, recorder)
    report.seconds = time.perf_counter() - started

    if report.passed:
        logger.info(f"✅ {suite_id}: {report.cases} cases passed in {report.seconds:.2f}s")
    else:
        logger.warning(f"⚠️  {suite_id}: {report.failed}/{report.cases} cases failed")
    return report
