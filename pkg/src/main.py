"""
opforge - command-line entry point.

Commands:
1. compose     evaluate an operad expression (compositions, braces, products)
2. product     product of two elements of a named bialgebra
3. coproduct   coproduct of an element of a named bialgebra
4. monoid      character-monoid operations on truncated series
5. verify      run property suites (exit code 1 when a suite fails)
6. table       regenerate golden tables
7. enumerate   list the canonical objects of a family

Output goes to stdout (text or JSON), logs to stderr. Library errors and
unexpected exceptions exit with code 2, so 1 always means a failing suite.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence

from .tools.algebra_core import Element
from .tools.characters import (
    DecoratedPairs,
    DecoratedTrees,
    OperadCoinvariants,
    SeriesCarrier,
    TruncatedSeries,
    diamond,
    diamond_prime,
    endo_action,
    exp_bracket_diamond,
    group_inverse,
)
from .tools.combinatorics import FAMILIES, DecoratedPair, DecoratedTree, OrbitClass, enumerate_objects, orbit_canonical
from .tools.config import guard
from .tools.errors import OpforgeError, UnsupportedOperationError
from .tools.expression_parser import EvalContext, evaluate, mentions_dual, parse
from .tools.golden_tables import build_table, list_tables
from .tools.hopf import COPRODUCT_KINDS, HANDLE_NAMES, coproduct, get_handle
from .tools.operads import MODES, OPERAD_NAMES, get_operad
from .tools.verify import SUITES, run_suite

logger = logging.getLogger('opforge')

ORBIT_HANDLES = ('d', 'b', 'd*', 'b*')
MONOID_OPS = ('diamond', 'diamond-prime', 'exp-bracket', 'inverse', 'act', 'act-prime')
LABELLED_FAMILIES = ('perm', 'tree', 'qo', 'order', 'dg', 'ncdg')


# ========== HELPERS ==========

def _emit(args: argparse.Namespace, payload: Dict[str, Any], text: str) -> None:
    if args.format == 'json':
        print(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True))
    else:
        print(text)


def _parse_params(pairs: Sequence[str]) -> Dict[str, str]:
    params: Dict[str, str] = {}
    for pair in pairs:
        if '=' not in pair:
            raise UnsupportedOperationError(f"Suite parameters are written key=value, got '{pair}'")
        key, value = pair.split('=', 1)
        params[key.strip()] = value.strip()
    return params


def _orbit_lift(element: Element, operad: str, mode: str) -> Element:
    """Bare operad keys inside words/monomials become their orbit classes."""
    descriptor = get_operad(operad, mode)

    def lift_letter(letter):
        return letter if isinstance(letter, OrbitClass) else descriptor.orbit(letter)

    def lift(key):
        if isinstance(key, tuple):
            return tuple(lift(k) for k in key)
        if hasattr(key, 'letters'):
            return type(key)(tuple(lift_letter(x) for x in key.letters))
        return lift_letter(key)

    return element.map(lift)


def _series_carrier(element: Element, args: argparse.Namespace) -> SeriesCarrier:
    keys = element.keys()
    if keys and isinstance(keys[0], DecoratedTree):
        return DecoratedTrees(args.colors)
    if keys and isinstance(keys[0], DecoratedPair):
        return DecoratedPairs(args.colors)
    return OperadCoinvariants(get_operad(args.operad or 'com', args.mode))


def _series(text: str, args: argparse.Namespace) -> TruncatedSeries:
    element = evaluate(text, EvalContext(args.operad, args.mode, args.colors))
    if element.keys() and not isinstance(element.keys()[0], (DecoratedTree, DecoratedPair, OrbitClass)):
        element = _orbit_lift(element, args.operad or 'com', args.mode)
    return TruncatedSeries.from_element(element, args.bound)


# ========== COMMANDS ==========

def cmd_compose(args: argparse.Namespace) -> int:
    context = EvalContext(args.operad, args.mode, args.colors)
    result = evaluate(args.expression, context)
    _emit(args, {'command': 'compose', 'input': args.expression, 'result': result.to_json()}, str(result))
    return 0


def _handle_operand(text: str, args: argparse.Namespace, handle) -> Element:
    expr = parse(text)
    if mentions_dual(expr) and not args.algebra.endswith('*'):
        logger.warning(f"⚠️ Dual markers in '{text}' mark a primal algebra {args.algebra}; coordinates are used as given")
    element = evaluate(expr, EvalContext(args.operad, args.mode, args.colors, carrier=handle.carrier))
    if args.algebra in ORBIT_HANDLES:
        element = _orbit_lift(element, args.operad or 'prelie', args.mode)
    return element


def cmd_product(args: argparse.Namespace) -> int:
    handle = get_handle(args.algebra, args.operad or 'prelie', args.colors, args.mode)
    left, right = (_handle_operand(t, args, handle) for t in (args.left, args.right))
    result = handle.product(left, right)
    _emit(args, {'command': 'product', 'algebra': handle.name, 'result': result.to_json()}, str(result))
    return 0


def cmd_coproduct(args: argparse.Namespace) -> int:
    handle = get_handle(args.algebra, args.operad or 'prelie', args.colors, args.mode)
    element = _handle_operand(args.element, args, handle)
    result = coproduct(handle, element, args.kind)
    payload = {'command': 'coproduct', 'algebra': handle.name, 'kind': args.kind or handle.default_kind,
               'result': result.to_json()}
    _emit(args, payload, str(result))
    return 0


def cmd_monoid(args: argparse.Namespace) -> int:
    x = _series(args.x, args)
    y = _series(args.y, args) if args.y is not None else None
    if args.op != 'inverse' and y is None:
        raise UnsupportedOperationError(f"monoid --op {args.op} needs two operands")

    if args.op in ('act', 'act-prime'):
        result = endo_action(x, y, prime=(args.op == 'act-prime'), colors=args.colors)
    else:
        carrier = _series_carrier(x.total(), args)
        carrier.check(x, *([y] if y is not None else []))
        if args.op == 'diamond':
            result = diamond(carrier, x, y)
        elif args.op == 'diamond-prime':
            result = diamond_prime(carrier, x, y)
        elif args.op == 'exp-bracket':
            result = exp_bracket_diamond(carrier, x, y)
        else:
            result = group_inverse(carrier, x)

    _emit(args, {'command': 'monoid', 'op': args.op, 'result': result.to_json()}, str(result))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    suites: List[str] = list(SUITES) if args.suite == ['all'] else args.suite
    params = _parse_params(args.params)
    for name in ('operad', 'mode', 'bound', 'colors', 'seed'):
        value = getattr(args, name)
        if value is not None and name not in params:
            params[name] = value

    reports = [run_suite(suite, params) for suite in suites]
    passed = all(report.passed for report in reports)
    payload = {'command': 'verify', 'passed': passed, 'reports': [r.to_json() for r in reports]}
    _emit(args, payload, '\n'.join(r.to_text() for r in reports))
    return 0 if passed else 1


def cmd_table(args: argparse.Namespace) -> int:
    if args.list or not args.golden:
        ids = list_tables()
        _emit(args, {'command': 'table', 'tables': ids}, '\n'.join(ids))
        return 0
    table = build_table(args.golden)
    if args.format == 'json':
        sys.stdout.write(table.to_json_text())
    else:
        sys.stdout.write(table.to_text())
    return 0


def cmd_enumerate(args: argparse.Namespace) -> int:
    objects = enumerate_objects(args.family, args.size, args.colors)
    notations = [obj.notation() for obj in objects]
    orbits: Optional[int] = None
    if args.family in LABELLED_FAMILIES:
        orbits = len({orbit_canonical(obj) for obj in objects})
    payload = {'command': 'enumerate', 'family': args.family, 'size': args.size,
               'count': len(objects), 'orbits': orbits, 'objects': notations}
    summary = f"# {args.family} size {args.size}: {len(objects)} objects"
    if orbits is not None:
        summary += f", {orbits} orbits"
    _emit(args, payload, '\n'.join([summary] + notations))
    return 0


# ========== PARSER ==========

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--operad', choices=OPERAD_NAMES, default=None,
                        help='Operad (inferred from the operands when omitted)')
    common.add_argument('--mode', choices=MODES, default='circ', help='Composition mode')
    common.add_argument('--bound', type=int, default=None, help='Size or truncation bound')
    common.add_argument('--colors', type=int, default=1, help='Number of decoration colors N')
    common.add_argument('--seed', type=int, default=None, help='Seed of sampled checks')
    common.add_argument('--format', choices=('text', 'json'), default='text', help='Output format')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging on stderr')

    parser = argparse.ArgumentParser(
        prog='opforge',
        description='Exact computations with operads, pre-Lie and brace structures, '
                    'combinatorial Hopf algebras and character monoids.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('compose', parents=[common], help='Evaluate an operad expression')
    p.add_argument('expression', help='e.g. "perm[12] o_1 perm[21]"')
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser('product', parents=[common], help='Product in a bialgebra')
    p.add_argument('--algebra', choices=HANDLE_NAMES, required=True)
    p.add_argument('left')
    p.add_argument('right')
    p.set_defaults(func=cmd_product)

    p = sub.add_parser('coproduct', parents=[common], help='Coproduct in a bialgebra')
    p.add_argument('--algebra', choices=HANDLE_NAMES, required=True)
    p.add_argument('--kind', choices=COPRODUCT_KINDS, default=None)
    p.add_argument('element')
    p.set_defaults(func=cmd_coproduct)

    p = sub.add_parser('monoid', parents=[common], help='Character-monoid operations')
    p.add_argument('--op', choices=MONOID_OPS, required=True)
    p.add_argument('x')
    p.add_argument('y', nargs='?', default=None)
    p.set_defaults(func=cmd_monoid)

    p = sub.add_parser('verify', parents=[common], help='Run property suites')
    p.add_argument('--suite', action='append', required=True, choices=sorted(SUITES) + ['all'])
    p.add_argument('--params', nargs='*', default=[], metavar='KEY=VALUE')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('table', parents=[common], help='Regenerate a golden table')
    p.add_argument('--golden', choices=list_tables(), default=None)
    p.add_argument('--list', action='store_true')
    p.set_defaults(func=cmd_table)

    p = sub.add_parser('enumerate', parents=[common], help='List canonical objects of a family')
    p.add_argument('--family', choices=FAMILIES, required=True)
    p.add_argument('--size', type=int, required=True)
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    if args.command == 'monoid' and args.bound is None:
        args.bound = 4
    logger.debug(f"🚀 opforge {args.command} (guards: tree={guard('tree')}, qo={guard('qo')})")

    try:
        return args.func(args)
    except OpforgeError as exc:
        logger.error(f"❌ {type(exc).__name__}: {exc}")
        return 2
    except Exception as exc:
        logger.exception(f"❌ Unexpected {type(exc).__name__}: {exc}")
        return 2
