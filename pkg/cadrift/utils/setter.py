import json
from typing import Any, Dict, Iterable, MutableSequence, Tuple

from .getter import safe_getter


def set_key(data, key: str, val: Any):
    if isinstance(data, MutableSequence):
        index = int(key)
        if not 0 <= index <= len(data):
            raise ValueError(f"Index {index} is outside a list of {len(data)} items")
        if index < len(data):
            data[index] = val
        else:
            data.append(val)
    elif isinstance(data, dict):
        data[key] = val
    else:
        setattr(data, key, val)
    return data


def pointed_setter(data, path: str, value: Any):
    """
    Set ``value`` at a dotted ``path``, creating intermediate dicts (or lists
    when the next segment is an index) as needed.
    """
    keys = path.split(".")
    key = keys.pop(0)
    if not keys:
        return set_key(data, key, value)
    default = [] if keys[0].isdigit() else {}
    child = safe_getter(data, key, None)
    if child is None:
        child = default
    return set_key(data, key, pointed_setter(child, ".".join(keys), value))


def parse_assignment(expression: str) -> Tuple[str, Any]:
    """``a.b=3`` -> ``("a.b", 3)``; values are read as JSON, falling back to text."""
    path, sep, raw = expression.partition("=")
    if not sep or not path.strip():
        raise ValueError(f"Expected PATH=VALUE, got '{expression}'")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return path.strip(), value


def apply_overrides(data: Dict[str, Any], overrides: Iterable[Tuple[str, Any]]) -> Dict[str, Any]:
    for path, value in overrides:
        pointed_setter(data, path, value)
    return data
