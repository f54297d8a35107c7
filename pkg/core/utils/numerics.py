"""
Access to the ZETALAB_NUMERICS settings block
"""
from contextlib import contextmanager
from typing import Any, Dict, Iterator

from django.conf import settings

_overrides: Dict[str, Any] = {}


def setting(key: str, value: Any = None) -> Any:
    """
    Resolve a numerical default.

    Args:
        key: Dotted key, e.g. "contour.boundary_threshold"
        value: Explicit value supplied by the caller; returned unchanged if not None

    Returns:
        The explicit value, a run override, or the settings default
    """
    if value is not None:
        return value
    if key in _overrides:
        return _overrides[key]
    try:
        return settings.ZETALAB_NUMERICS[key]
    except KeyError:
        raise KeyError(f"Unknown numerical setting: {key}") from None


def all_settings() -> Dict[str, Any]:
    merged = dict(settings.ZETALAB_NUMERICS)
    merged.update(_overrides)
    return merged


@contextmanager
def numerics_override(values: Dict[str, Any]) -> Iterator[None]:
    """Temporarily override numerical defaults (used by run configs and tests)"""
    unknown = [k for k in values if k not in settings.ZETALAB_NUMERICS]
    if unknown:
        raise KeyError(f"Unknown numerical setting(s): {', '.join(sorted(unknown))}")
    saved = dict(_overrides)
    _overrides.update(values)
    try:
        yield
    finally:
        _overrides.clear()
        _overrides.update(saved)
