"""
Golden tables: worked composition and coproduct tables regenerated from scratch.

Each table is a list of (label, value) rows plus the carrier the values live in
('word', 'monomial' or None for bare operad elements), so that every printed
value can be read back with expression_parser.evaluate. Output is deterministic:
rows come in a fixed order and Elements print their terms canonically.

Tables:
1. as-composition          partial compositions of As in arity 2
2. qo-composition          the 32 compositions of qO on two-element quasi-orders
3. faa-di-bruno            Com duals: dual_star, dual_star_prime and the Psi intertwiner
4. permutation-coproduct   dual_star on the six permutations of S3
5. connes-kreimer          admissible cuts on small decorated trees
6. extraction-contraction  ec on pairs, undecorated and with two colors
7. theta                   connected ideal products in O
8. com-brace               braces and pre-Lie products of Com
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .algebra_core import Element, Monomial, Word, tensor_map
from .combinatorics import ComGenerator, DecoratedPair, DecoratedTree
from .errors import UnknownSuiteError
from .expression_parser import evaluate
from .hopf import connes_kreimer, coproduct, extraction_contraction, get_handle, psi_isomorphism
from .induced_structures import theta_image
from .operads import get_operad
from .relations import QuasiOrder

logger = logging.getLogger(__name__)


@dataclass
class GoldenRow:
    label: str
    value: Element

    def to_json(self) -> Dict:
        return {'label': self.label, 'value': self.value.to_json()}


@dataclass
class GoldenTable:
    """One regenerated table."""

    table_id: str
    title: str
    carrier: Optional[str] = None
    rows: List[GoldenRow] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, label: str, value: Element) -> None:
        self.rows.append(GoldenRow(label, value))

    def to_text(self) -> str:
        lines = [f"# {self.table_id}: {self.title}"]
        if self.carrier:
            lines.append(f"# carrier: {self.carrier}")
        lines.extend(f"# {note}" for note in self.notes)
        lines.extend(f"{row.label} = {row.value}" for row in self.rows)
        return '\n'.join(lines) + '\n'

    def to_json(self) -> Dict:
        return {
            'id': self.table_id,
            'title': self.title,
            'carrier': self.carrier,
            'notes': list(self.notes),
            'rows': [row.to_json() for row in self.rows],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2, sort_keys=True) + '\n'


def _dtree(text: str) -> DecoratedTree:
    return evaluate(text).keys()[0]


def _psi(key) -> Element:
    return psi_isomorphism(Element.basis(key))


# ========== TABLES ==========

def _as_composition() -> GoldenTable:
    table = GoldenTable('as-composition', 'Partial compositions in As, arity 2 into arity 2')
    descriptor = get_operad('as')
    for p in descriptor.basis(2):
        for i in (1, 2):
            for q in descriptor.basis(2):
                label = f"{p.notation()} o_{i} {q.notation()}"
                table.add(label, descriptor.compose_keys(p, i, q))
    return table


def _qo_composition() -> GoldenTable:
    table = GoldenTable('qo-composition', 'Compositions in qO of the quasi-orders on two elements')
    table.notes.append('An equivalence class in the outer operand gives 0; its image in O vanishes too.')
    table.notes.append('Inserting the unit qo{1} gives the outer operand back, classes included.')
    operands = [
        QuasiOrder.from_pairs((1, 2), [(1, 2)]),
        QuasiOrder.from_pairs((1, 2), [(2, 1)]),
        QuasiOrder.on(2),
        QuasiOrder.from_pairs((1, 2), [(1, 2), (2, 1)]),
    ]
    descriptor = get_operad('qo')
    for p in operands:
        for q in operands:
            for i in (1, 2):
                table.add(f"{p.notation()} o_{i} {q.notation()}", descriptor.compose_keys(p, i, q))
    unit = QuasiOrder.on(1)
    for p in operands:
        for i in (1, 2):
            table.add(f"{p.notation()} o_{i} {unit.notation()}", descriptor.compose_keys(p, i, unit))
    return table


def _faa_di_bruno() -> GoldenTable:
    table = GoldenTable('faa-di-bruno', 'Com duals: composition and bracket transposes', carrier='word')
    table.notes.append("Psi(f) = f - eps0(f) 1 satisfies Delta_*(Psi(f)) = (Psi ⊗ Psi) Delta'_*(f).")
    handle = get_handle('dt*', operad='com')
    letters = {n: Element.basis(Word((ComGenerator(n),))) for n in (1, 2, 3)}
    for n in (1, 2):
        table.add(f"Delta_*(e{n}*)", coproduct(handle, letters[n], 'dual_star'))
    for n in (1, 2):
        table.add(f"Delta'_*(e{n}*)", coproduct(handle, letters[n], 'dual_star_prime'))
    for n in (1, 2, 3):
        table.add(f"Delta_*(Psi(e{n}*))", coproduct(handle, psi_isomorphism(letters[n]), 'dual_star'))
        primed = coproduct(handle, letters[n], 'dual_star_prime')
        table.add(f"(Psi ⊗ Psi) Delta'_*(e{n}*)", tensor_map(primed, _psi, _psi))
    return table


def _permutation_coproduct() -> GoldenTable:
    table = GoldenTable('permutation-coproduct', 'dual_star on the permutations of S3', carrier='word')
    handle = get_handle('dt*', operad='as')
    for sigma in get_operad('as').basis(3):
        table.add(f"Delta_*({sigma.notation()}*)",
                  coproduct(handle, Element.basis(Word((sigma,))), 'dual_star'))
    return table


CK_TREES = ('dtree[a]', 'dtree[a[b]]', 'dtree[a[b,c]]', 'dtree[a[b[c]]]')


def _connes_kreimer() -> GoldenTable:
    table = GoldenTable('connes-kreimer', 'Admissible cuts, trunk on the left', carrier='monomial')
    for text in CK_TREES:
        table.add(f"Delta_ck({text})", connes_kreimer(Monomial((_dtree(text),))))
    return table


EC_SHAPES = ('dtree[a]', 'dtree[a[a]]', 'dtree[a[a,a]]', 'dtree[a[a[a]]]')


def _extraction_contraction() -> GoldenTable:
    table = GoldenTable('extraction-contraction', 'Extraction-contraction, pattern on the left',
                        carrier='monomial')
    table.notes.append('Equal symmetric terms are merged, giving coefficient 2 on the corolla.')
    for text in EC_SHAPES:
        pair = DecoratedPair(_dtree(text), 1)
        table.add(f"Delta_ec({pair.notation()})", extraction_contraction(Monomial((pair,)), 1))
    for root, child, color in itertools.product('ab', 'ab', (1, 2)):
        pair = DecoratedPair(_dtree(f"dtree[{root}[{child}]]"), color)
        table.add(f"Delta_ec[N=2]({pair.notation()})", extraction_contraction(Monomial((pair,)), 2))
    return table


def _theta() -> GoldenTable:
    table = GoldenTable('theta', 'Images of the b-infinity generators in O')
    table.notes.append('theta(k, l) sums the connected bipartite posets with blocks [k] and k+[l].')
    descriptor = get_operad('o')
    for k, l in ((1, 1), (1, 2), (2, 1), (2, 2)):
        table.add(f"theta({k},{l})", theta_image(descriptor, k, l))
    return table


def _com_brace() -> GoldenTable:
    table = GoldenTable('com-brace', 'Braces in Com: <e_n; e_j1..e_jk> = C(n,k) e_(n-k+sum j)')
    table.notes.append('In degree indexing (e_i of degree i-1) the pre-Lie product reads '
                       'e_(i+1) bullet e_(j+1) = (i+1) e_(i+j+1).')
    for n in range(1, 6):
        for k in range(1, min(3, n) + 1):
            for js in itertools.combinations_with_replacement((1, 2, 3), k):
                args = ' '.join(f"e{j}" for j in js)
                table.add(f"brace(e{n}; {args})", evaluate(f"brace(e{n}; {args})"))
    for i in range(1, 4):
        for j in range(1, 4):
            label = f"e{i + 1} bullet e{j + 1}"
            table.add(label, evaluate(label))
    return table


def com_brace_closed_form(n: int, js: Tuple[int, ...]) -> Element:
    """C(n, k) e_(n - k + sum js)."""
    k = len(js)
    return Element.basis(ComGenerator(n - k + sum(js)), math.comb(n, k))


# ========== REGISTRY ==========

GOLDEN_TABLES: Dict[str, Callable[[], GoldenTable]] = {
    'as-composition': _as_composition,
    'qo-composition': _qo_composition,
    'faa-di-bruno': _faa_di_bruno,
    'permutation-coproduct': _permutation_coproduct,
    'connes-kreimer': _connes_kreimer,
    'extraction-contraction': _extraction_contraction,
    'theta': _theta,
    'com-brace': _com_brace,
}


def list_tables() -> List[str]:
    return list(GOLDEN_TABLES)


def build_table(table_id: str) -> GoldenTable:
    """
    Regenerate one golden table.

    Raises:
        UnknownSuiteError: unknown table id

    Examples:
        >>> build_table('as-composition').rows[1].label
        'perm[12] o_1 perm[21]'
    """
    builder = GOLDEN_TABLES.get(table_id)
    if builder is None:
        raise UnknownSuiteError(f"Unknown golden table: {table_id} (expected one of {list_tables()})")
    logger.info(f"📋 Building golden table {table_id}")
    table = builder()
    logger.debug(f"{table_id}: {len(table.rows)} rows")
    return table
