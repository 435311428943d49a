"""
Size guards for exhaustive enumeration.

Every enumerator checks its size against a per-family guard before doing any
work. Defaults keep a full test run at laptop scale; OPFORGE_GUARD raises
or lowers them, clamped at hard maxima.

OPFORGE_GUARD formats:
- "6"                  -> every family limited to 6 (clamped per family)
- "perm=9,tree=8"      -> per-family overrides
"""

import logging
import os
from typing import Dict, Optional

from .errors import CapacityError

logger = logging.getLogger(__name__)


# ========== GUARD TABLES ==========

DEFAULT_GUARDS: Dict[str, int] = {
    'perm': 8,
    'tree': 7,
    'qo': 5,
    'digraph': 4,
}

HARD_MAXIMA: Dict[str, int] = {
    'perm': 9,
    'tree': 8,
    'qo': 6,
    'digraph': 5,
}

GUARD_ENV_VAR = 'OPFORGE_GUARD'


# ========== PARSING ==========

def parse_guard_override(raw: Optional[str]) -> Dict[str, int]:
    """
    Parse an OPFORGE_GUARD value into per-family limits.

    Args:
        raw: Environment value, or None

    Returns:
        Mapping family -> requested limit (not yet clamped). Malformed input
        yields an empty mapping and a warning.

    Examples:
        >>> parse_guard_override("6")
        {'perm': 6, 'tree': 6, 'qo': 6, 'digraph': 6}
        >>> parse_guard_override("tree=5")
        {'tree': 5}
    """
    if raw is None or not raw.strip():
        return {}

    raw = raw.strip()
    if raw.isdigit():
        return {family: int(raw) for family in DEFAULT_GUARDS}

    overrides: Dict[str, int] = {}
    for part in raw.split(','):
        name, sep, value = part.partition('=')
        name = name.strip()
        value = value.strip()
        if not sep or name not in DEFAULT_GUARDS or not value.isdigit():
            logger.warning(f"⚠️  Ignoring malformed {GUARD_ENV_VAR} value: {raw!r}")
            return {}
        overrides[name] = int(value)
    return overrides


def guard(family: str) -> int:
    """
    Effective size limit for an object family.

    Reads OPFORGE_GUARD on every call so tests can monkeypatch the environment.
    """
    if family not in DEFAULT_GUARDS:
        raise KeyError(f"Unknown guard family: {family}")

    overrides = parse_guard_override(os.environ.get(GUARD_ENV_VAR))
    requested = overrides.get(family, DEFAULT_GUARDS[family])
    limit = min(requested, HARD_MAXIMA[family])
    if requested > limit:
        logger.debug(f"Clamped {family} guard {requested} -> {limit}")
    return limit


def check_guard(family: str, size: int) -> None:
    """Raise CapacityError when size exceeds the family guard."""
    limit = guard(family)
    if size > limit:
        raise CapacityError(family, size, limit)
